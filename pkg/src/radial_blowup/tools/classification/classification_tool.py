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

"""Classification of the radial solutions from the integral tests."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from pandas import DataFrame
from pandas import isna
from pydantic import Field
from pydantic import PositiveFloat
from pydantic import PositiveInt
from pydantic import field_validator

from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.errors import FitError
from radial_blowup.core.errors import InsufficientDataError
from radial_blowup.core.errors import IntegrationError
from radial_blowup.core.ko_criteria import REGION_LETTERS
from radial_blowup.core.ko_criteria import classify_ball
from radial_blowup.core.ko_criteria import region_table
from radial_blowup.core.nonlinearity import NonlinearityKind
from radial_blowup.core.nonlinearity import create_nonlinearity
from radial_blowup.core.radial_ode import Params
from radial_blowup.core.radial_ode import StepControls
from radial_blowup.core.radial_ode import integrate
from radial_blowup.core.radial_ode import solver_outcome
from radial_blowup.tools.base_settings import BaseSettings
from radial_blowup.tools.base_tool import BaseTool
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.classification.classification_result import (
    ClassificationResult,
)
from radial_blowup.tools.problem_settings import check_nonlinearity_description
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_csv
from radial_blowup.utilities.json_utils import write_json_dict

LOGGER = logging.getLogger(__name__)

SOLVER_FAILURE = "Failed"


class ClassificationSettings(BaseSettings):
    p_values: list[PositiveFloat] = Field(
        default=[2.0], description="The values of p.", min_length=1
    )
    q_values: list[PositiveFloat] = Field(
        default=[3.0],
        description="The values of q, ignored for a non-power nonlinearity.",
        min_length=1,
    )
    f: str = Field(default="power", description="power, exp or custom:FILE.")
    cross_check: bool = Field(
        default=False,
        description="Whether to compare each verdict with the outcome of a "
        "whole-space solve.",
    )
    N: int = Field(default=2, ge=2, description="The dimension of the solves.")
    m: PositiveFloat = Field(default=1.0, description="The shooting value.")
    rtol: PositiveFloat = Field(default=config.solver.rtol)
    threads: PositiveInt = Field(
        default=config.threads, description="The number of concurrent solves."
    )

    @field_validator("f")
    @classmethod
    def __validate_f(cls, v: str) -> str:
        return check_nonlinearity_description(v)


class ClassificationTool(BaseTool):
    """Classify the radial solutions of a grid of problems in a ball.

    For a power nonlinearity, the grid is the product of the values of p and q.
    Otherwise, the grid is the values of p.
    """

    result: ClassificationResult

    _SETTINGS = ClassificationSettings

    @BaseTool.validate
    def execute(
        self,
        settings: ClassificationSettings | None = None,
        **options,
    ) -> ClassificationResult:
        self.result = ClassificationResult()
        if options["f"] == NonlinearityKind.POWER:
            table = region_table(options["p_values"], options["q_values"])
        else:
            nl = create_nonlinearity(options["f"])
            rows = []
            for p in options["p_values"]:
                classification = classify_ball(nl, p)
                row = classification.to_dict()
                row["region"] = REGION_LETTERS[classification.verdict]
                rows.append(row)
            table = DataFrame(rows, columns=list(region_table([], []).columns))
        LOGGER.info(f"Classified {len(table)} problems.")

        if options["cross_check"]:
            controls = StepControls(rtol=options["rtol"])
            problems = [
                Params(
                    row["p"],
                    create_nonlinearity(
                        options["f"], None if isna(row["q"]) else row["q"]
                    ),
                    options["N"],
                    options["m"],
                )
                for row in table.to_dict(orient="records")
            ]
            with ThreadPoolExecutor(max_workers=options["threads"]) as executor:
                outcomes = list(
                    executor.map(lambda params: _outcome(params, controls), problems)
                )
            table["solver"] = outcomes
            table["agree"] = table["solver"] == table["verdict"]
            self.result.n_disagreements = int((~table["agree"]).sum())
            if self.result.n_disagreements:
                LOGGER.warning(
                    f"{self.result.n_disagreements} verdicts differ from the solver."
                )

        self.result.table = table
        self.result.metadata.report = {"n_problems": str(len(table))}

    def export(
        self,
        prefix: str | Path,
        file_format: FileFormat = FileFormat.CSV,
        digits: int = FULL_PRECISION,
    ) -> list[Path]:
        if file_format == FileFormat.CSV:
            return [write_csv(f"{prefix}_regions.csv", self.result.table, digits)]
        return [
            write_json_dict(
                f"{prefix}_regions.json",
                {"rows": self.result.table.to_dict(orient="records")},
                digits,
            )
        ]


def _outcome(params: Params, controls: StepControls) -> str:
    try:
        return str(solver_outcome(integrate(params, controls)))
    except (IntegrationError, FitError, InsufficientDataError) as error:
        LOGGER.warning(f"The solve of p={params.p}, f={params.nl} failed: {error}")
        return SOLVER_FAILURE

