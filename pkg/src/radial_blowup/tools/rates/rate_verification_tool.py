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

"""Verification of the blow-up rates of a solution."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from pydantic import Field
from pydantic import PositiveFloat

from radial_blowup.core.asymptotics import DEFAULT_RATE_TOLERANCE
from radial_blowup.core.asymptotics import ball_rates
from radial_blowup.core.asymptotics import verify_ball_rates
from radial_blowup.core.errors import ParameterError
from radial_blowup.core.nonlinearity import NonlinearityKind
from radial_blowup.core.radial_ode import integrate
from radial_blowup.tools.base_tool import BaseTool
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.problem_settings import ProblemSettings
from radial_blowup.tools.problem_settings import build_controls
from radial_blowup.tools.problem_settings import build_params
from radial_blowup.tools.rates.rate_verification_result import (
    RateVerificationResult,
)
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_csv
from radial_blowup.utilities.json_utils import write_json_dict

if TYPE_CHECKING:
    from pathlib import Path

LOGGER = logging.getLogger(__name__)


class RateVerificationSettings(ProblemSettings):
    decades: PositiveFloat = Field(
        default=1.0, description="The number of decades of v in the fitting window."
    )
    tolerance: PositiveFloat = Field(
        default=DEFAULT_RATE_TOLERANCE,
        description="The relative tolerance of the comparisons.",
    )


class RateVerificationTool(BaseTool):
    """Compare the behaviour of a blowing-up solution with the explicit rates."""

    result: RateVerificationResult

    _SETTINGS = RateVerificationSettings

    @BaseTool.validate
    def execute(
        self,
        settings: RateVerificationSettings | None = None,
        **options,
    ) -> RateVerificationResult:
        if options["f"] != NonlinearityKind.POWER:
            msg = "The blow-up rates are only known for the power nonlinearity."
            raise ParameterError(msg)
        self.result = RateVerificationResult(tolerance=options["tolerance"])
        rates = ball_rates(options["p"], options["q"])
        params = build_params(options)
        solution = integrate(params, build_controls(options))
        check = verify_ball_rates(solution, rates, decades=options["decades"])
        self.result.rates = rates
        self.result.check = check
        self.result.solution = solution
        self.result.metadata.parameters = params.to_dict()
        self.result.metadata.report = {
            "max_rel_err": f"{check.max_rel_err:.3e}",
            "passed": str(check.passed(options["tolerance"])),
        }
        if not check.passed(options["tolerance"]):
            LOGGER.warning(
                f"The largest relative error {check.max_rel_err:.3e} exceeds "
                f"{options['tolerance']}."
            )

    def export(
        self,
        prefix: str | Path,
        file_format: FileFormat = FileFormat.CSV,
        digits: int = FULL_PRECISION,
    ) -> list[Path]:
        if file_format == FileFormat.CSV:
            frame = self.result.check.to_dataframe()
            return [write_csv(f"{prefix}_rates.csv", frame, digits)]
        return [
            write_json_dict(
                f"{prefix}_rates.json",
                {
                    "rates": self.result.rates.to_dict(),
                    "checks": self.result.check.to_dicts(),
                    "R_max": self.result.solution.R_max,
                },
                digits,
            )
        ]
