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

"""The settings describing a radial problem, shared by the tools."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING
from typing import Any

from pydantic import Field
from pydantic import PositiveFloat
from pydantic import field_validator

from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.nonlinearity import NonlinearityKind
from radial_blowup.core.nonlinearity import create_nonlinearity
from radial_blowup.core.radial_ode import Params
from radial_blowup.core.radial_ode import StepControls
from radial_blowup.tools.base_settings import BaseSettings

if TYPE_CHECKING:
    from collections.abc import Mapping


def check_nonlinearity_description(value: str) -> str:
    """Check a nonlinearity given as ``power``, ``exp`` or ``custom:FILE``."""
    if value in (NonlinearityKind.POWER, NonlinearityKind.EXP):
        return value
    prefix = f"{NonlinearityKind.CUSTOM}:"
    if value.startswith(prefix):
        if not Path(value[len(prefix) :]).is_file():
            msg = f"The nonlinearity file {value[len(prefix) :]} does not exist."
            raise ValueError(msg)
        return value
    msg = f"Unknown nonlinearity {value!r}; expected power, exp or custom:FILE."
    raise ValueError(msg)


class ProblemSettings(BaseSettings):
    """A radial problem and the main step controls."""

    p: PositiveFloat = Field(default=2.0, description="The exponent of v^p.")
    q: PositiveFloat = Field(
        default=3.0, description="The exponent of the power nonlinearity."
    )
    f: str = Field(default="power", description="power, exp or custom:FILE.")
    N: int = Field(default=2, ge=2, description="The space dimension.")
    m: float = Field(default=1.0, description="The shooting value v(0).")
    R: PositiveFloat | None = Field(
        default=None, description="The radius of the ball, None for the whole space."
    )
    u0: float = Field(default=config.solver.u0)
    rtol: PositiveFloat = Field(default=config.solver.rtol)
    v_ceiling: PositiveFloat = Field(default=config.solver.v_ceiling)

    @field_validator("f")
    @classmethod
    def __validate_f(cls, v: str) -> str:
        return check_nonlinearity_description(v)


def build_params(options: Mapping[str, Any], sign_changing: bool = False) -> Params:
    """Create the radial problem from tool options.

    Raises:
        ParameterError: If the problem is invalid.
    """
    return Params(
        options["p"],
        create_nonlinearity(options["f"], options["q"]),
        options["N"],
        options["m"],
        R=options["R"],
        u0=options["u0"],
        sign_changing=sign_changing,
    )


def build_controls(options: Mapping[str, Any]) -> StepControls:
    return StepControls(rtol=options["rtol"], v_ceiling=options["v_ceiling"])
