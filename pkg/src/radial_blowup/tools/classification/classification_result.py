# Copyright 2021 IRT Saint Exupéry, https://www.irt-saintexupery.com
#
# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU Lesser General Public
# License version 3 as published by the Free Software Foundation.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this program; if not, write to the Free Software Foundation,
# Inc., 51 Franklin Street, Fifth Floor, Boston, MA  02110-1301, USA.

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from radial_blowup.tools.base_result import BaseResult

if TYPE_CHECKING:
    from pandas import DataFrame


@dataclass
class ClassificationResult(BaseResult):
    """The classification of a grid of problems."""

    table: DataFrame | None = None
    """One row per (p, q) with the verdict, its region letter and the integral tests,
    and the solver outcome when it is cross-checked."""

    n_disagreements: int = 0
    """The number of rows where the solver outcome differs from the verdict."""

    def __str__(self):
        from gemseo.utils.string_tools import MultiLineString

        text = MultiLineString()
        text.add("Classification:")
        text.indent()
        text.add(self.table.to_string(index=False))
        text.dedent()
        if "solver" in self.table:
            text.add(f"Disagreements with the solver: {self.n_disagreements}")
        return str(text)
