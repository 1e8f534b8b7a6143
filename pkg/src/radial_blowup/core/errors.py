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

"""The errors raised by the numerical modules."""

from __future__ import annotations

from typing import Any


class ParameterError(ValueError):
    """A parameter is invalid or violates a hypothesis."""


class NonlinearityDomainError(ValueError):
    """A nonlinearity is evaluated outside of ``[0, inf)``."""


class InsufficientDataError(ValueError):
    """There are not enough samples to perform a fit."""


class FitError(ValueError):
    """A fit could not be performed on the provided samples."""


class IntegrationError(RuntimeError):
    """An integration failed.

    The samples computed before the failure are attached to the error.
    """

    partial_solution: Any
    """The solution computed up to the failure, if any."""

    def __init__(self, msg: str, partial_solution: Any = None) -> None:
        super().__init__(msg)
        self.partial_solution = partial_solution
