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
    from radial_blowup.core.asymptotics import BallRates
    from radial_blowup.core.asymptotics import RateCheck
    from radial_blowup.core.radial_ode import RadialSolution


@dataclass
class RateVerificationResult(BaseResult):
    """The comparison of a blowing-up solution with the explicit rates."""

    rates: BallRates | None = None

    check: RateCheck | None = None

    solution: RadialSolution | None = None

    tolerance: float = 0.05

    def __str__(self):
        from gemseo.utils.string_tools import MultiLineString

        text = MultiLineString()
        text.add(
            f"Exponents: alpha={self.rates.alpha:.6g}, beta={self.rates.beta:.6g}, "
            f"gamma={self.rates.gamma:.6g}; u case {self.rates.u_case}"
        )
        if not self.rates.within_hypotheses:
            text.add("The exponents are outside of the range where the rates hold.")
        text.add(f"Blow-up radius: {self.solution.R_max:.12g}")
        text.add("Empirical limits:")
        text.indent()
        for entry in self.check.entries:
            text.add(
                f"{entry.quantity}: {entry.empirical:.6g} "
                f"(expected {entry.theoretical:.6g}, relative error {entry.rel_err:.2e}, "
                f"sensitivity {entry.sensitivity:.2e})"
            )
        text.dedent()
        status = "passed" if self.check.passed(self.tolerance) else "failed"
        text.add(f"Check {status} with tolerance {self.tolerance:g}")
        return str(text)
