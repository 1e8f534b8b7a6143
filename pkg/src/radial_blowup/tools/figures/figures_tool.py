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

"""Profiles of solutions blowing up at the boundary of the unit ball.

For f(t) = t^q with p = 4, q = 3, u stays bounded while v blows up. For p = 2,
q = 3, both blow up. Each solution is computed in the whole space from m and
rescaled so that it blows up at radius 1.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np
from numpy import linspace
from pandas import DataFrame
from pydantic import Field
from pydantic import PositiveFloat
from pydantic import PositiveInt
from strenum import StrEnum

from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.ko_criteria import Verdict
from radial_blowup.core.nonlinearity import PowerNonlinearity
from radial_blowup.core.radial_ode import Params
from radial_blowup.core.radial_ode import StepControls
from radial_blowup.core.radial_ode import integrate
from radial_blowup.core.radial_ode import normalize_to_unit_ball
from radial_blowup.core.radial_ode import solver_outcome
from radial_blowup.tools.base_settings import BaseSettings
from radial_blowup.tools.base_tool import BaseTool
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.figures.figures_result import FiguresResult
from radial_blowup.utilities.curves import Curve
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_json_dict

if TYPE_CHECKING:
    from pathlib import Path

LOGGER = logging.getLogger(__name__)


class Figure(StrEnum):
    FIG2 = "fig2"
    FIG3 = "fig3"


FIGURE_EXPONENTS = {Figure.FIG2: (4.0, 3.0), Figure.FIG3: (2.0, 3.0)}
"""The exponents (p, q) of the figures."""

EXPECTED_OUTCOMES = {Figure.FIG2: Verdict.V_BLOWS_UP, Figure.FIG3: Verdict.BOTH_BLOW_UP}

PROBE_RADII = (0.3, 0.5, 0.7)


class Ordering(StrEnum):
    """The ordering of a normalized profile across the dimensions."""

    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    MIXED = "Mixed"


EXPECTED_V_ORDERING = Ordering.INCREASING
"""The ordering of the normalized v in N at every probe radius.

A larger dimension slows the growth of v, so the solution blowing up at radius 1
starts from a larger v(0) and stays above the lower dimensional ones inside the
ball.
"""


def ordering_in_dimension(probes: DataFrame, column: str) -> Ordering | None:
    """Return the ordering of a probed quantity in N at every probe radius.

    Args:
        probes: The probes with columns ``x``, ``N`` and ``column``.
        column: The probed quantity.

    Returns:
        The ordering, or ``None`` when fewer than two dimensions are probed.
    """
    if probes["N"].nunique() < 2:
        return None
    steps = np.concatenate([
        np.diff(group.sort_values("N")[column].to_numpy())
        for _, group in probes.groupby("x")
    ])
    if np.all(steps > 0):
        return Ordering.INCREASING
    if np.all(steps < 0):
        return Ordering.DECREASING
    return Ordering.MIXED


class FiguresSettings(BaseSettings):
    figure: Figure = Field(default=Figure.FIG2)
    N_values: list[int] = Field(  # noqa: N815
        default=[2, 20, 40], description="The space dimensions.", min_length=1
    )
    m: PositiveFloat = Field(default=1.0, description="The shooting value v(0).")
    clip: PositiveFloat = Field(
        default=50.0, description="The upper bound of the exported v."
    )
    n_points: PositiveInt = Field(default=400, description="The number of radii.")
    rtol: PositiveFloat = Field(default=config.solver.rtol)


class FiguresTool(BaseTool):
    """Compute the normalized profiles u(x), v(x) on the unit ball."""

    result: FiguresResult

    _SETTINGS = FiguresSettings

    @BaseTool.validate
    def execute(
        self,
        settings: FiguresSettings | None = None,
        **options,
    ) -> FiguresResult:
        figure = Figure(options["figure"])
        p, q = FIGURE_EXPONENTS[figure]
        self.result = FiguresResult(
            figure=str(figure),
            expected_outcome=EXPECTED_OUTCOMES[figure],
            expected_v_ordering=EXPECTED_V_ORDERING,
        )
        controls = StepControls(rtol=options["rtol"])
        probes = []
        for dimension in options["N_values"]:
            params = Params(p, PowerNonlinearity(q), dimension, options["m"])
            solution = integrate(params, controls)
            self.result.outcomes[dimension] = solver_outcome(solution)
            normalized = normalize_to_unit_ball(solution)
            radii = linspace(normalized.r[0], normalized.r_end, options["n_points"])
            u, _, v, _ = normalized.evaluate(radii)
            self.result.curves[f"u_N{dimension}"] = Curve({"x": radii, "u": u})
            self.result.curves[f"v_N{dimension}"] = Curve({"x": radii, "v": v}).clipped(
                options["clip"]
            )
            u_probe, _, v_probe, _ = normalized.evaluate(np.array(PROBE_RADII))
            probes.extend(
                {"x": x, "N": dimension, "u": u_x, "v": v_x}
                for x, u_x, v_x in zip(PROBE_RADII, u_probe, v_probe)
            )
            LOGGER.info(
                f"N={dimension}: {self.result.outcomes[dimension]}, "
                f"R_max={solution.R_max:.12g}."
            )

        self.result.probes = DataFrame(probes)
        self.result.v_ordering = ordering_in_dimension(self.result.probes, "v")
        if self.result.v_ordering not in {None, EXPECTED_V_ORDERING}:
            LOGGER.warning(
                f"The normalized v is {self.result.v_ordering} in N, "
                f"expected {EXPECTED_V_ORDERING}."
            )
        if not self.result.matches_expected:
            LOGGER.warning(
                f"The outcomes {self.result.outcomes} differ from "
                f"{self.result.expected_outcome}."
            )
        self.result.metadata.parameters = {"p": p, "q": q, "m": options["m"]}

    def export(
        self,
        prefix: str | Path,
        file_format: FileFormat = FileFormat.CSV,
        digits: int = FULL_PRECISION,
    ) -> list[Path]:
        figure = self.result.figure
        paths = []
        for name, curve in self.result.curves.items():
            if file_format == FileFormat.CSV:
                paths.append(curve.to_csv(f"{prefix}_{figure}_{name}.csv", digits))
            else:
                paths.append(
                    write_json_dict(
                        f"{prefix}_{figure}_{name}.json", curve.as_dict(), digits
                    )
                )
        paths.append(
            write_json_dict(
                f"{prefix}_{figure}_summary.json",
                {
                    "figure": figure,
                    "outcomes": {
                        str(dimension): str(outcome)
                        for dimension, outcome in self.result.outcomes.items()
                    },
                    "expected_outcome": str(self.result.expected_outcome),
                    "v_ordering": None
                    if self.result.v_ordering is None
                    else str(self.result.v_ordering),
                    "expected_v_ordering": str(EXPECTED_V_ORDERING),
                    "probes": self.result.probes.to_dict(orient="records"),
                },
                digits,
            )
        )
        return paths
