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

"""Components of the global configuration."""

from __future__ import annotations

from pydantic import BaseModel
from pydantic import Field
from pydantic import PositiveFloat
from pydantic import field_validator

SOLVE_IVP_METHODS = ("RK45", "DOP853", "Radau", "BDF", "LSODA")


class SolverDefaults(BaseModel):
    """The default step controls of the radial solver."""

    r0: PositiveFloat = Field(
        default=1e-6, description="The radius where the series start is evaluated."
    )
    rtol: PositiveFloat = Field(default=1e-9, description="The relative tolerance.")
    atol: PositiveFloat = Field(default=1e-12, description="The absolute tolerance.")
    v_ceiling: PositiveFloat = Field(
        default=1e8,
        description="The value of v at which a blow-up check is performed.",
    )
    r_horizon: PositiveFloat = Field(
        default=1e6, description="The radius where whole-space solves stop."
    )
    u0: float = Field(default=1.0, description="The value u(0).")
    method: str = Field(default="RK45", description="The solve_ivp method.")

    @field_validator("method")
    @classmethod
    def __validate_method(cls, v: str) -> str:
        if v not in SOLVE_IVP_METHODS:
            msg = f"{v} is not a supported method. Available methods {SOLVE_IVP_METHODS}."
            raise ValueError(msg)
        return v
