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
    from radial_blowup.core.asymptotics import RateCheck
    from radial_blowup.core.asymptotics import WholeSpaceRates
    from radial_blowup.core.dynsys import BoxReport
    from radial_blowup.core.dynsys import Trajectory


@dataclass
class WholeSpaceResult(BaseResult):
    """The asymptotics of a global solution in the whole space."""

    rates: WholeSpaceRates | None = None

    check: RateCheck | None = None

    exact_residual: float | None = None
    """The largest finite-difference residual of the exact solution."""

    trajectory: Trajectory | None = None
    """The variables (X, Y, Z, W) along the solution."""

    boxes: BoxReport | None = None

    tolerance: float = 0.02

    def __str__(self):
        from gemseo.utils.string_tools import MultiLineString

        text = MultiLineString()
        text.add(
            f"Growth: u ~ {self.rates.u_constant:.6g} r^{self.rates.u_exponent:.6g}, "
            f"v ~ {self.rates.v_constant:.6g} r^{self.rates.v_exponent:.6g}"
        )
        text.add(f"Attracting equilibrium (Y, Z, W): {self.rates.zeta2}")
        text.add("Limits:")
        text.indent()
        for entry in self.check.entries:
            text.add(
                f"{entry.quantity}: {entry.empirical:.6g} "
                f"(expected {entry.theoretical:.6g}, relative error {entry.rel_err:.2e})"
            )
        text.dedent()
        text.add(f"Exact solution residual: {self.exact_residual:.3e}")
        text.add(f"Bounds along the trajectory hold: {self.boxes.holds}")
        return str(text)
