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

"""Asymptotics of global solutions in the whole space."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

from pydantic import Field
from pydantic import PositiveFloat

from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.asymptotics import exact_solution_residual
from radial_blowup.core.asymptotics import verify_whole_space
from radial_blowup.core.asymptotics import whole_space_rates
from radial_blowup.core.dynsys import check_phase_bounds
from radial_blowup.core.dynsys import phase_trajectory
from radial_blowup.core.nonlinearity import PowerNonlinearity
from radial_blowup.core.radial_ode import Params
from radial_blowup.core.radial_ode import StepControls
from radial_blowup.core.radial_ode import integrate
from radial_blowup.tools.base_settings import BaseSettings
from radial_blowup.tools.base_tool import BaseTool
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.whole_space.whole_space_result import WholeSpaceResult
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_csv
from radial_blowup.utilities.json_utils import write_json_dict

if TYPE_CHECKING:
    from pathlib import Path

LOGGER = logging.getLogger(__name__)


class WholeSpaceSettings(BaseSettings):
    p: PositiveFloat = Field(default=0.5, description="The exponent of v^p.")
    q: PositiveFloat = Field(default=1.0, description="The exponent of |grad u|^q.")
    N: int = Field(default=3, ge=2, description="The space dimension.")
    m: PositiveFloat = Field(default=1.0, description="The shooting value v(0).")
    r_eval: PositiveFloat = Field(
        default=1e5, description="The radius where the limits are evaluated."
    )
    r_min: PositiveFloat = Field(
        default=0.1, description="The smallest radius of the phase trajectory."
    )
    exact_radii: list[PositiveFloat] = Field(
        default=[1.0, 10.0, 100.0],
        description="The radii where the exact solution is checked.",
    )
    rtol: PositiveFloat = Field(default=config.solver.rtol)
    tolerance: PositiveFloat = Field(
        default=0.02, description="The relative tolerance of the limits."
    )


class WholeSpaceTool(BaseTool):
    """Compare a global solution with the growth of the exact solution."""

    result: WholeSpaceResult

    _SETTINGS = WholeSpaceSettings

    @BaseTool.validate
    def execute(
        self,
        settings: WholeSpaceSettings | None = None,
        **options,
    ) -> WholeSpaceResult:
        p, q, n = options["p"], options["q"], options["N"]
        self.result = WholeSpaceResult(tolerance=options["tolerance"])
        rates = whole_space_rates(p, q, n)
        params = Params(p, PowerNonlinearity(q), n, options["m"])
        solution = integrate(params, StepControls(rtol=options["rtol"]))
        self.result.rates = rates
        self.result.check = verify_whole_space(solution, rates, options["r_eval"])
        self.result.exact_residual = exact_solution_residual(
            p, q, n, options["exact_radii"]
        )
        self.result.trajectory = phase_trajectory(
            solution, (math.log(options["r_min"]), math.log(options["r_eval"]))
        )
        self.result.boxes = check_phase_bounds(self.result.trajectory, p, q, n)
        self.result.metadata.parameters = params.to_dict()
        self.result.metadata.report = {
            "max_rel_err": f"{self.result.check.max_rel_err:.3e}",
            "exact_residual": f"{self.result.exact_residual:.3e}",
        }

    def export(
        self,
        prefix: str | Path,
        file_format: FileFormat = FileFormat.CSV,
        digits: int = FULL_PRECISION,
    ) -> list[Path]:
        paths = [
            self.result.trajectory.to_csv(f"{prefix}_trajectory.csv", digits),
        ]
        if file_format == FileFormat.CSV:
            paths.append(
                write_csv(
                    f"{prefix}_whole_space.csv",
                    self.result.check.to_dataframe(),
                    digits,
                )
            )
        else:
            paths.append(
                write_json_dict(
                    f"{prefix}_whole_space.json",
                    {
                        "rates": self.result.rates.to_dict(),
                        "checks": self.result.check.to_dicts(),
                        "exact_residual": self.result.exact_residual,
                        "boxes": self.result.boxes.to_dict(),
                    },
                    digits,
                )
            )
        return paths
