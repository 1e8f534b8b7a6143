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

"""Integration of a single radial problem."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from pydantic import Field

from radial_blowup.core.errors import FitError
from radial_blowup.core.errors import InsufficientDataError
from radial_blowup.core.radial_ode import Termination
from radial_blowup.core.radial_ode import biharmonic_sandwich_check
from radial_blowup.core.radial_ode import check_sandwich
from radial_blowup.core.radial_ode import integrate
from radial_blowup.core.radial_ode import solver_outcome
from radial_blowup.tools.base_tool import BaseTool
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.problem_settings import ProblemSettings
from radial_blowup.tools.problem_settings import build_controls
from radial_blowup.tools.problem_settings import build_params
from radial_blowup.tools.solve.radial_solve_result import RadialSolveResult
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_json_dict

if TYPE_CHECKING:
    from pathlib import Path

LOGGER = logging.getLogger(__name__)


class RadialSolveSettings(ProblemSettings):
    biharmonic: bool = Field(
        default=False,
        description="Whether to solve the case p = 1 with a v(0) of any sign.",
    )


class RadialSolveTool(BaseTool):
    """Integrate a radial problem from the origin."""

    result: RadialSolveResult

    _SETTINGS = RadialSolveSettings

    @BaseTool.validate
    def execute(
        self,
        settings: RadialSolveSettings | None = None,
        **options,
    ) -> RadialSolveResult:
        self.result = RadialSolveResult()
        params = build_params(options, sign_changing=options["biharmonic"])
        solution = integrate(params, build_controls(options))
        self.result.solution = solution
        self.result.metadata.parameters = params.to_dict()

        if options["biharmonic"]:
            if solution.termination == Termination.BLOW_UP:
                self.result.sandwich = biharmonic_sandwich_check(solution)
        else:
            self.result.sandwich = check_sandwich(solution)
            if solution.termination == Termination.REACHED_RADIUS:
                LOGGER.info(
                    f"The solution reaches the radius {params.R} without blowing up."
                )
            try:
                self.result.outcome = solver_outcome(solution)
            except (FitError, InsufficientDataError) as error:
                LOGGER.warning(f"The outcome cannot be determined: {error}")
        self.result.metadata.report = {"termination": str(solution.termination)}

    def export(
        self,
        prefix: str | Path,
        file_format: FileFormat = FileFormat.CSV,
        digits: int = FULL_PRECISION,
    ) -> list[Path]:
        solution = self.result.solution
        if file_format == FileFormat.CSV:
            return solution.export(f"{prefix}_solution", digits)
        data = solution.sidecar()
        data["samples"] = solution.as_dataframe()
        data["outcome"] = self.result.outcome
        return [write_json_dict(f"{prefix}_solution.json", data, digits)]
