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

"""A consolidated report of a problem."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING
from typing import Any

from pydantic import Field
from pydantic import PositiveFloat
from pydantic import field_validator

from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.asymptotics import ball_rates
from radial_blowup.core.asymptotics import exact_solution_residual
from radial_blowup.core.asymptotics import verify_ball_rates
from radial_blowup.core.asymptotics import verify_whole_space
from radial_blowup.core.asymptotics import whole_space_rates
from radial_blowup.core.dynsys import BallField
from radial_blowup.core.dynsys import WholeSpaceField
from radial_blowup.core.dynsys import check_stability_zeta2
from radial_blowup.core.dynsys import equilibria
from radial_blowup.core.errors import FitError
from radial_blowup.core.errors import InsufficientDataError
from radial_blowup.core.errors import IntegrationError
from radial_blowup.core.errors import ParameterError
from radial_blowup.core.ko_criteria import classify_ball
from radial_blowup.core.ko_criteria import classify_whole_space
from radial_blowup.core.nonlinearity import NonlinearityKind
from radial_blowup.core.nonlinearity import create_nonlinearity
from radial_blowup.core.radial_ode import Params
from radial_blowup.core.radial_ode import StepControls
from radial_blowup.core.radial_ode import Termination
from radial_blowup.core.radial_ode import integrate
from radial_blowup.core.radial_ode import solver_outcome
from radial_blowup.tools.base_settings import BaseSettings
from radial_blowup.tools.base_tool import BaseTool
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.problem_settings import check_nonlinearity_description
from radial_blowup.tools.report.report_result import REPORT_SCHEMA_VERSION
from radial_blowup.tools.report.report_result import ReportResult
from radial_blowup.tools.report.report_result import SectionStatus
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_json_dict

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from radial_blowup.core.radial_ode import RadialSolution

LOGGER = logging.getLogger(__name__)

COMPUTATION_ERRORS = (
    IntegrationError,
    FitError,
    InsufficientDataError,
    ParameterError,
)

EXP_NOTE = (
    "The verdict states which boundary behaviour is achievable; "
    "the solutions with small initial data stay bounded."
)


class ReportSettings(BaseSettings):
    p: PositiveFloat = Field(default=2.0)
    q: PositiveFloat = Field(default=3.0)
    f: str = Field(default="power", description="power, exp or custom:FILE.")
    N: int = Field(default=2, ge=2)
    m: PositiveFloat = Field(default=1.0)
    r_eval: PositiveFloat = Field(
        default=1e5, description="The radius of the whole-space limits."
    )
    rtol: PositiveFloat = Field(default=config.solver.rtol)

    @field_validator("f")
    @classmethod
    def __validate_f(cls, v: str) -> str:
        return check_nonlinearity_description(v)


def _run_section(
    name: str, compute: Callable[[], dict[str, Any] | None]
) -> dict[str, Any]:
    """Run the computation of a section and record its status."""
    try:
        content = compute()
    except COMPUTATION_ERRORS as error:
        LOGGER.warning(f"The section {name} failed: {error}")
        return {"status": SectionStatus.FAILED, "error": str(error)}
    if content is None:
        return {"status": SectionStatus.SKIPPED}
    content["status"] = SectionStatus.OK
    return content


class ReportTool(BaseTool):
    """Gather the classification, a whole-space solve, the rates and the equilibria
    of a problem in a single document.

    A failing section is recorded with its error and does not prevent the others.
    """

    result: ReportResult

    _SETTINGS = ReportSettings

    @BaseTool.validate
    def execute(
        self,
        settings: ReportSettings | None = None,
        **options,
    ) -> ReportResult:
        p, q, n, m = options["p"], options["q"], options["N"], options["m"]
        is_power = options["f"] == NonlinearityKind.POWER
        nl = create_nonlinearity(options["f"], q)
        params = Params(p, nl, n, m)
        controls = StepControls(rtol=options["rtol"])
        solutions: list[RadialSolution] = []

        def classification() -> dict[str, Any]:
            content = {
                "ball": classify_ball(nl, p).to_dict(nl.q),
                "whole_space": classify_whole_space(nl, p).to_dict(nl.q),
            }
            if nl.kind == NonlinearityKind.EXP:
                content["note"] = EXP_NOTE
            return content

        def solve() -> dict[str, Any]:
            solution = integrate(params, controls)
            solutions.append(solution)
            summary = solution.sidecar()
            outcome = solver_outcome(solution)
            summary["outcome"] = None if outcome is None else str(outcome)
            return summary

        def rates() -> dict[str, Any] | None:
            if not (is_power and p * q > 1 and solutions):
                return None
            if solutions[0].termination != Termination.BLOW_UP:
                return None
            ball = ball_rates(p, q)
            return {
                "rates": ball.to_dict(),
                "checks": verify_ball_rates(solutions[0], ball).to_dicts(),
            }

        def whole_space() -> dict[str, Any] | None:
            if not (is_power and q >= 1 > p and p * q < 1):
                return None
            growth = whole_space_rates(p, q, n)
            content = {
                "rates": growth.to_dict(),
                "exact_residual": exact_solution_residual(p, q, n, [1.0, 10.0, 100.0]),
            }
            if solutions:
                content["checks"] = verify_whole_space(
                    solutions[0], growth, options["r_eval"]
                ).to_dicts()
            return content

        def dynamical_system() -> dict[str, Any] | None:
            if not is_power or p * q == 1:
                return None
            if p * q > 1:
                return {
                    "field": repr(BallField(p, q)),
                    "equilibria": [e.to_dict() for e in equilibria(BallField(p, q))],
                }
            field = WholeSpaceField(p, q, n)
            return {
                "field": repr(field),
                "equilibria": [e.to_dict() for e in equilibria(field)],
                "stability_trace": check_stability_zeta2(p, q, n).to_dict(),
            }

        sections = {
            name: _run_section(name, compute)
            for name, compute in (
                ("classification", classification),
                ("solve", solve),
                ("rates", rates),
                ("whole_space", whole_space),
                ("equilibria", dynamical_system),
            )
        }
        failed = [
            name
            for name, section in sections.items()
            if section["status"] == SectionStatus.FAILED
        ]
        self.result = ReportResult(
            document={
                "schema_version": REPORT_SCHEMA_VERSION,
                "params": params.to_dict(),
                "sections": sections,
                "failed_sections": failed,
            }
        )
        self.result.metadata.parameters = params.to_dict()
        if failed:
            LOGGER.warning(f"Failed sections: {failed}")

    def export(
        self,
        prefix: str | Path,
        file_format: FileFormat = FileFormat.JSON,
        digits: int = FULL_PRECISION,
    ) -> list[Path]:
        return [write_json_dict(f"{prefix}_report.json", self.result.document, digits)]
