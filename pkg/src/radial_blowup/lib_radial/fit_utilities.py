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

"""Slope regressions on sampled curves."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import statsmodels.api as sm
from numpy import asarray
from numpy import log
from strenum import StrEnum

from radial_blowup.core.errors import InsufficientDataError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

LOGGER = logging.getLogger(__name__)


class SlopeMethod(StrEnum):
    """The methods to compute a slope."""

    REGRESSION = "regression"
    AVERAGE = "average"


@dataclass(frozen=True)
class SlopeFit:
    """A straight line fitted on a window of a curve."""

    slope: float

    intercept: float

    slope_stderr: float
    """The standard error of the slope, ``nan`` if it cannot be estimated."""

    n_points: int
    """The number of points in the window."""


def local_slope_computation(
    x_curve: ArrayLike,
    y_curve: ArrayLike,
    x_min: float | None = None,
    x_max: float | None = None,
    y_min: float | None = None,
    y_max: float | None = None,
    method: SlopeMethod = SlopeMethod.REGRESSION,
) -> SlopeFit:
    """Compute the slope of the curve (x_curve; y_curve) in [x_min; x_max] or [y_min;
    y_max].

    Args:
        x_curve: The abscissae.
        y_curve: The ordinates.
        x_min: The lower bound of the x-window.
        x_max: The upper bound of the x-window.
        y_min: The lower bound of the y-window.
        y_max: The upper bound of the y-window.
        method: The method to compute the slope,
            either an ordinary least squares regression
            or the slope between the extreme points of the window.

    Returns:
        The fitted line.

    Raises:
        ValueError: If neither or both windows are defined.
        InsufficientDataError: If the window contains fewer than two points.

    Examples:
        >>> fit = local_slope_computation(log(s), log(integrand), x_min=log(1e3),
        ...     x_max=log(1e6))
    """
    x_curve = asarray(x_curve, dtype=float)
    y_curve = asarray(y_curve, dtype=float)
    if x_min is not None and x_max is not None and y_min is None and y_max is None:
        z_curve, z_min, z_max = x_curve, x_min, x_max
    elif x_min is None and x_max is None and y_min is not None and y_max is not None:
        z_curve, z_min, z_max = y_curve, y_min, y_max
    else:
        msg = "Either (x_min and x_max) or (y_min and y_max) should not be None"
        raise ValueError(msg)

    indices = np.nonzero((z_curve >= z_min) & (z_curve <= z_max))[0]
    if len(indices) < 2:
        msg = (
            f"At least two points are required in the window [{z_min}, {z_max}]; "
            f"got {len(indices)}."
        )
        raise InsufficientDataError(msg)

    x = x_curve[indices]
    y = y_curve[indices]
    if method == SlopeMethod.REGRESSION:
        if len(indices) == 2:
            slope = (y[1] - y[0]) / (x[1] - x[0])
            return SlopeFit(slope, y[0] - slope * x[0], np.nan, 2)
        result = sm.OLS(y, sm.add_constant(x, has_constant="add")).fit()
        intercept, slope = result.params
        return SlopeFit(
            float(slope), float(intercept), float(result.bse[1]), len(indices)
        )

    if method == SlopeMethod.AVERAGE:
        slope = (y[-1] - y[0]) / (x[-1] - x[0])
        return SlopeFit(float(slope), float(y[0] - slope * x[0]), np.nan, len(x))

    msg = f"Unexpected value for the slope method: {method}"
    raise ValueError(msg)


def loglog_slope(
    x_curve: ArrayLike,
    y_curve: ArrayLike,
    x_min: float,
    x_max: float,
    method: SlopeMethod = SlopeMethod.REGRESSION,
) -> SlopeFit:
    """Compute the slope of log(y) versus log(x) for x in [x_min, x_max].

    The abscissae and ordinates must be positive.
    """
    return local_slope_computation(
        log(asarray(x_curve, dtype=float)),
        log(asarray(y_curve, dtype=float)),
        x_min=float(log(x_min)),
        x_max=float(log(x_max)),
        method=method,
    )
