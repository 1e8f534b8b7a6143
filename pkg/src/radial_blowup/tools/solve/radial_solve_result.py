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
    from radial_blowup.core.ko_criteria import Verdict
    from radial_blowup.core.radial_ode import RadialSolution
    from radial_blowup.core.radial_ode import SandwichReport


@dataclass
class RadialSolveResult(BaseResult):
    """A radial solution and the checks performed on it."""

    solution: RadialSolution | None = None

    outcome: Verdict | None = None
    """The behaviour observed at the end of the integration."""

    sandwich: SandwichReport | None = None
    """The two-sided bounds of the derivatives of w and psi."""

    def __str__(self):
        from gemseo.utils.string_tools import MultiLineString

        text = MultiLineString()
        text.add(f"Problem: {self.solution.params.to_dict()}")
        text.add(f"Termination: {self.solution.termination}")
        text.indent()
        text.add(f"Number of samples: {self.solution.n_samples}")
        text.add(f"Last radius: {self.solution.r_end:.12g}")
        if self.solution.R_max is not None:
            text.add(f"Blow-up radius: {self.solution.R_max:.12g}")
            text.add(f"Fitted exponent of v: {self.solution.fit_beta}")
        text.dedent()
        if self.outcome is not None:
            text.add(f"Outcome: {self.outcome}")
        if self.sandwich is not None:
            text.add(
                f"Derivative bounds with constant {self.sandwich.constant:g}: "
                f"lower {self.sandwich.max_lower_violation:.3g}, "
                f"upper {self.sandwich.max_upper_violation:.3g}"
            )
        return str(text)
