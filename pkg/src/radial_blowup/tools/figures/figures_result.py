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
from dataclasses import field
from typing import TYPE_CHECKING

from radial_blowup.tools.base_result import BaseResult

if TYPE_CHECKING:
    from pandas import DataFrame

    from radial_blowup.core.ko_criteria import Verdict
    from radial_blowup.tools.figures.figures_tool import Ordering
    from radial_blowup.utilities.curves import Curve


@dataclass
class FiguresResult(BaseResult):
    """The normalized profiles of solutions blowing up at radius 1."""

    figure: str = ""

    curves: dict[str, Curve] = field(default_factory=dict)
    """The curves named ``{quantity}_N{dimension}``, v being clipped."""

    outcomes: dict[int, Verdict] = field(default_factory=dict)
    """The observed behaviour per dimension."""

    expected_outcome: Verdict | None = None

    probes: DataFrame | None = None
    """The normalized u and v at interior radii per dimension."""

    v_ordering: Ordering | None = None
    """The ordering of the normalized v in N at the probes, if several N."""

    expected_v_ordering: Ordering | None = None

    @property
    def matches_expected(self) -> bool:
        return all(outcome == self.expected_outcome for outcome in self.outcomes.values())

    @property
    def ordering_matches_expected(self) -> bool:
        """Whether the normalized v is ordered in N as expected."""
        return self.v_ordering == self.expected_v_ordering

    def __str__(self):
        from gemseo.utils.string_tools import MultiLineString

        text = MultiLineString()
        text.add(f"Figure {self.figure}:")
        text.indent()
        for dimension, outcome in self.outcomes.items():
            text.add(f"N={dimension}: {outcome}")
        text.dedent()
        text.add(f"Expected outcome: {self.expected_outcome}")
        text.add(
            f"Ordering of v in N: {self.v_ordering} "
            f"(expected {self.expected_v_ordering})"
        )
        text.add(self.probes.to_string(index=False))
        return str(text)
