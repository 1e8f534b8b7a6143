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

from __future__ import annotations

from re import escape

import pytest
from numpy import geomspace
from numpy import linspace

from radial_blowup.core.errors import InsufficientDataError
from radial_blowup.lib_radial.fit_utilities import SlopeMethod
from radial_blowup.lib_radial.fit_utilities import local_slope_computation
from radial_blowup.lib_radial.fit_utilities import loglog_slope


@pytest.mark.parametrize("method", [SlopeMethod.REGRESSION, SlopeMethod.AVERAGE])
def test_local_slope_x_window(method):
    """Check the slope of a straight line on an x-window."""
    x = linspace(0.0, 10.0, 101)
    fit = local_slope_computation(x, 2.0 * x + 1.0, x_min=2.0, x_max=5.0, method=method)
    assert fit.slope == pytest.approx(2.0)
    assert fit.intercept == pytest.approx(1.0)
    assert fit.n_points == 31


def test_local_slope_y_window():
    """Check the slope on a window of ordinates."""
    x = linspace(0.0, 10.0, 101)
    fit = local_slope_computation(x, -3.0 * x, y_min=-9.0, y_max=0.0)
    assert fit.slope == pytest.approx(-3.0)
    assert fit.slope_stderr == pytest.approx(0.0, abs=1e-10)


def test_local_slope_two_points():
    """Check that two points give the secant without standard error."""
    fit = local_slope_computation([0.0, 1.0, 2.0], [0.0, 1.0, 4.0], x_min=1, x_max=2)
    assert fit.slope == 3.0
    assert fit.n_points == 2


def test_local_slope_errors():
    """Check the validation of the windows."""
    msg = "Either (x_min and x_max) or (y_min and y_max) should not be None"
    with pytest.raises(ValueError, match=escape(msg)):
        local_slope_computation([0.0, 1.0], [0.0, 1.0], x_min=0.0)
    msg = "At least two points are required in the window [5.0, 6.0]; got 0."
    with pytest.raises(InsufficientDataError, match=escape(msg)):
        local_slope_computation([0.0, 1.0], [0.0, 1.0], x_min=5.0, x_max=6.0)


def test_loglog_slope():
    """Check the exponent of a power law."""
    x = geomspace(1.0, 1e6, 61)
    fit = loglog_slope(x, 4.0 * x**-1.5, 5e2, 2e6)
    assert fit.slope == pytest.approx(-1.5)
    assert fit.n_points == 34
