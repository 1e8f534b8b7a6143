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

"""Equilibria and trajectories of the reduced autonomous fields."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from pydantic import Field
from pydantic import PositiveFloat
from strenum import StrEnum

from radial_blowup.core.dynsys import BallField
from radial_blowup.core.dynsys import WholeSpaceField
from radial_blowup.core.dynsys import bisect_shooting_value
from radial_blowup.core.dynsys import check_divergence
from radial_blowup.core.dynsys import check_stability_zeta2
from radial_blowup.core.dynsys import equilibria
from radial_blowup.core.dynsys import integrate_transformed_ball
from radial_blowup.tools.base_settings import BaseSettings
from radial_blowup.tools.base_tool import BaseTool
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.dynsys.dynamical_system_result import DynamicalSystemResult
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_json_dict

if TYPE_CHECKING:
    from pathlib import Path

LOGGER = logging.getLogger(__name__)

SUBCRITICAL_MARGIN = 1e-9
"""The relative margin below the bisected m/B of the transformed trajectory."""


class FieldKind(StrEnum):
    BALL = "ball"
    WHOLE_SPACE = "whole_space"


class DynamicalSystemSettings(BaseSettings):
    field: FieldKind = Field(default=FieldKind.BALL, description="The reduced field.")
    p: PositiveFloat = Field(default=2.0)
    q: PositiveFloat = Field(default=3.0)
    N: int = Field(default=2, ge=2)
    m_over_B: PositiveFloat | None = Field(  # noqa: N815
        default=None,
        description="The shooting value relative to B of the transformed ball "
        "trajectory. If None, it is obtained by bisection.",
    )
    bracket: tuple[PositiveFloat, PositiveFloat] = Field(
        default=(1e-3, 1e3), description="The bracket of the bisection of m/B."
    )
    t_end: PositiveFloat = Field(
        default=12.0, description="The final time of the transformed trajectory."
    )


class DynamicalSystemTool(BaseTool):
    """Analyse the reduced autonomous field of a ball or of the whole space.

    For a ball, the transformed trajectory of the solution blowing up at radius 1
    is also computed.
    """

    result: DynamicalSystemResult

    _SETTINGS = DynamicalSystemSettings

    @BaseTool.validate
    def execute(
        self,
        settings: DynamicalSystemSettings | None = None,
        **options,
    ) -> DynamicalSystemResult:
        p, q, n = options["p"], options["q"], options["N"]
        self.result = DynamicalSystemResult()
        if options["field"] == FieldKind.BALL:
            field = BallField(p, q)
            self.result.divergence = check_divergence(field)
            m_over_b = options["m_over_B"]
            if m_over_b is None:
                m_over_b = bisect_shooting_value(
                    p, q, n, *options["bracket"], t_end=options["t_end"]
                )
                self.result.critical_m_over_B = m_over_b
                # Stay on the side of the solutions reaching radius 1.
                m_over_b *= 1 - SUBCRITICAL_MARGIN
            self.result.trajectory = integrate_transformed_ball(
                p, q, n, m_over_b, options["t_end"]
            )
        else:
            field = WholeSpaceField(p, q, n)
            if p * q < 1:
                self.result.divergence = check_divergence(field)
                self.result.stability_trace = check_stability_zeta2(p, q, n)
            else:
                LOGGER.info("The equilibrium with Y > 0 is outside of the cone.")
        self.result.field_name = repr(field)
        self.result.equilibria = equilibria(field)
        self.result.metadata.parameters = {"p": p, "q": q, "N": n}

    def export(
        self,
        prefix: str | Path,
        file_format: FileFormat = FileFormat.CSV,
        digits: int = FULL_PRECISION,
    ) -> list[Path]:
        paths = [
            write_json_dict(f"{prefix}_equilibria.json", self.result.to_dict(), digits)
        ]
        if self.result.trajectory is not None:
            paths.append(
                self.result.trajectory.to_csv(f"{prefix}_trajectory.csv", digits)
            )
        return paths
