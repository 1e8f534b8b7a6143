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
    from radial_blowup.core.dynsys import DivergenceReport
    from radial_blowup.core.dynsys import EquilibriumReport
    from radial_blowup.core.dynsys import StabilityTrace
    from radial_blowup.core.dynsys import Trajectory


@dataclass
class DynamicalSystemResult(BaseResult):
    """The equilibria of a reduced field and an optional trajectory."""

    field_name: str = ""

    equilibria: list[EquilibriumReport] = field(default_factory=list)

    divergence: DivergenceReport | None = None

    stability_trace: StabilityTrace | None = None
    """The stability argument of the whole-space equilibrium with Y > 0."""

    critical_m_over_B: float | None = None  # noqa: N815
    """The shooting value, relative to B, of the solution blowing up at radius 1."""

    trajectory: Trajectory | None = None

    def __str__(self):
        from gemseo.utils.string_tools import MultiLineString

        text = MultiLineString()
        text.add(f"Equilibria of {self.field_name}:")
        text.indent()
        for report in self.equilibria:
            text.add(
                f"{report.point}: {report.stability} "
                f"(stable dimension {report.stable_dim}, "
                f"eigenvalues {report.eigenvalues})"
            )
        text.dedent()
        if self.divergence is not None:
            text.add(f"Maximum divergence: {self.divergence.max_divergence:.6g}")
        if self.stability_trace is not None:
            text.add(f"Stability argument holds: {self.stability_trace.passed}")
        if self.critical_m_over_B is not None:
            text.add(f"Critical m/B: {self.critical_m_over_B:.12g}")
        if self.trajectory is not None:
            text.add(f"Final state: {self.trajectory.final}")
        return str(text)

    def to_dict(self) -> dict:
        return {
            "field": self.field_name,
            "equilibria": [report.to_dict() for report in self.equilibria],
            "divergence": None
            if self.divergence is None
            else self.divergence.to_dict(),
            "stability_trace": None
            if self.stability_trace is None
            else self.stability_trace.to_dict(),
            "critical_m_over_B": self.critical_m_over_B,
        }
