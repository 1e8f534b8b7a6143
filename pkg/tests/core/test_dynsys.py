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

import math
from re import escape

import numpy as np
import pytest
from numpy import array
from numpy import ones
from numpy import zeros
from numpy.random import default_rng
from numpy.testing import assert_allclose

from radial_blowup.core.asymptotics import ball_rates
from radial_blowup.core.dynsys import BallField
from radial_blowup.core.dynsys import StabilityClass
from radial_blowup.core.dynsys import WholeSpaceField
from radial_blowup.core.dynsys import bisect_shooting_value
from radial_blowup.core.dynsys import check_divergence
from radial_blowup.core.dynsys import check_phase_bounds
from radial_blowup.core.dynsys import check_stability_zeta2
from radial_blowup.core.dynsys import classify_eigenvalues
from radial_blowup.core.dynsys import converged_equilibrium
from radial_blowup.core.dynsys import equilibria
from radial_blowup.core.dynsys import integrate_autonomous
from radial_blowup.core.dynsys import integrate_transformed_ball
from radial_blowup.core.dynsys import integrate_transformed_whole_space
from radial_blowup.core.dynsys import phase_trajectory
from radial_blowup.core.errors import IntegrationError
from radial_blowup.core.errors import ParameterError
from radial_blowup.core.nonlinearity import PowerNonlinearity
from radial_blowup.core.radial_ode import Params
from radial_blowup.core.radial_ode import critical_shooting_value
from radial_blowup.core.radial_ode import integrate


def random_ball_exponents(n: int) -> list[tuple[float, float]]:
    rng = default_rng(1)
    return [tuple(rng.uniform(1.2, 5.0, 2)) for _ in range(n)]


def random_whole_space_exponents(n: int) -> list[tuple[float, float, int]]:
    rng = default_rng(2)
    triples = []
    for _ in range(n):
        p = rng.uniform(0.05, 0.95)
        q = rng.uniform(1.0, 0.99 / p)
        triples.append((p, q, int(rng.integers(2, 11))))
    return triples


@pytest.mark.parametrize(("p", "q"), random_ball_exponents(50))
def test_ball_equilibrium_one(p, q):
    """Check that 1 is an eigenvalue of the linearization at (1, 1, 1)."""
    zero, one, minus_one = equilibria(BallField(p, q))
    assert_allclose(one.point, ones(3))
    scale = np.prod(1 + np.abs(np.diag(one.jacobian)))
    assert abs(np.polyval(one.char_poly_coeffs, 1.0)) <= 1e-12 * scale
    assert one.stability == StabilityClass.SADDLE
    assert one.stable_dim == 2
    assert zero.stability == StabilityClass.ASYMPTOTICALLY_STABLE
    assert minus_one.converged


@pytest.mark.parametrize(("p", "q", "N"), random_whole_space_exponents(50))
def test_zeta2_stability(p, q, N):  # noqa: N803
    """Check that the whole-space equilibrium with Y > 0 is asymptotically stable."""
    trace = check_stability_zeta2(p, q, N)
    assert trace.passed
    assert trace.constant_term == pytest.approx((1 - p * q) * trace.c)
    report = equilibria(WholeSpaceField(p, q, N))[1]
    assert report.stability == StabilityClass.ASYMPTOTICALLY_STABLE
    assert_allclose(
        report.char_poly_coeffs,
        [1.0, trace.a, trace.b, trace.constant_term],
        rtol=1e-9,
    )


def test_zeta2_outside_cone():
    """Check that pq >= 1 is rejected."""
    msg = "The equilibrium lies in the cone only for pq < 1; got pq = 2.0."
    with pytest.raises(ParameterError, match=escape(msg)):
        check_stability_zeta2(2.0, 1.0, 3)


def test_whole_space_equilibria():
    """Check the equilibria of the whole-space field."""
    field = WholeSpaceField(0.5, 1.0, 3)
    zeta1, zeta2 = equilibria(field)
    assert_allclose(zeta1.point, [0.0, 3.0, 4.0])
    assert_allclose(zeta2.point, [6.0, 6.0, 7.0])
    assert zeta1.stability == StabilityClass.SADDLE
    assert zeta1.residual == 0.0
    assert len(equilibria(WholeSpaceField(2.0, 3.0, 2))) == 1


def test_non_smooth_equilibrium():
    """Check that the origin of a field with p < 1 is not linearized."""
    report = equilibria(BallField(0.5, 4.0))[0]
    assert report.stability == StabilityClass.NON_SMOOTH
    assert np.all(np.isnan(report.eigenvalues))
    assert report.to_dict()["stability"] == "NonSmooth"


@pytest.mark.parametrize(
    ("eigenvalues", "expected"),
    [
        ([-1.0, -2.0, -3.0], (StabilityClass.ASYMPTOTICALLY_STABLE, 3)),
        ([-1.0, 2.0, -3.0], (StabilityClass.SADDLE, 2)),
        ([1.0, 2.0, 3.0], (StabilityClass.UNSTABLE, 0)),
        ([-1.0, 1e-10, 3.0], (StabilityClass.MARGINAL, 1)),
        ([-1.0 + 2j, -1.0 - 2j, -3.0], (StabilityClass.ASYMPTOTICALLY_STABLE, 3)),
    ],
)
def test_classify_eigenvalues(eigenvalues, expected):
    """Check the classification from the real parts of the eigenvalues."""
    assert classify_eigenvalues(eigenvalues) == expected


@pytest.mark.parametrize(
    "field", [BallField(2.0, 3.0), BallField(4.0, 3.0), WholeSpaceField(0.5, 1.0, 3)]
)
def test_cooperative(field):
    """Check that the off-diagonal entries of the Jacobian are nonnegative."""
    rng = default_rng(3)
    for point in rng.uniform(0.1, 10.0, (20, 3)):
        jacobian = field.jacobian(point)
        assert np.all(jacobian[~np.eye(3, dtype=bool)] >= 0)


def test_divergence():
    """Check that the divergence is negative on the default boxes."""
    field = BallField(2.0, 3.0)
    report = check_divergence(field)
    assert report.negative
    assert report.max_divergence == pytest.approx(-4.0)
    assert check_divergence(WholeSpaceField(0.5, 1.0, 3)).negative
    assert field.divergence(zeros(3)) == pytest.approx(
        np.trace(field.jacobian(ones(3)))
    )


def test_divergence_box_requires_cone():
    """Check that the whole-space box requires pq < 1."""
    with pytest.raises(ParameterError, match=escape("requires pq < 1")):
        check_divergence(WholeSpaceField(2.0, 3.0, 2))


def test_orthant_invariance():
    """Check that the positive orthant is invariant."""
    trajectory = integrate_autonomous(BallField(2.0, 3.0), [0.1, 0.2, 0.3], 20.0)
    assert np.all(trajectory.values >= -1e-12)
    assert trajectory.variables == ["X", "Y", "Z"]


def test_convergence_to_origin():
    """Check that trajectories starting below (1, 1, 1) converge to the origin."""
    field = BallField(2.0, 3.0)
    reports = equilibria(field)
    rng = default_rng(4)
    for zeta0 in rng.uniform(0.0, 0.9, (10, 3)):
        trajectory = integrate_autonomous(field, zeta0, 30.0)
        report = converged_equilibrium(trajectory, reports)
        assert report is not None
        assert_allclose(report.point, zeros(3))


def test_escape():
    """Check that trajectories starting above (1, 1, 1) escape."""
    field = BallField(2.0, 3.0)
    trajectory = integrate_autonomous(field, [1.5, 1.5, 1.5], 30.0)
    assert trajectory.escaped
    assert converged_equilibrium(trajectory, equilibria(field)) is None


def test_phase_bounds():
    """Check the a priori bounds of Y, Z and W along a whole-space solution."""
    solution = integrate(Params(0.5, PowerNonlinearity(1.0), 3, 1.0))
    trajectory = phase_trajectory(solution, (math.log(0.1), math.log(1e5)))
    report = check_phase_bounds(trajectory, 0.5, 1.0, 3)
    assert report.holds
    assert report.bounds["W"] == (4.0, 7.0)
    assert_allclose(trajectory.final, [5.0, 6.0, 6.0, 7.0], rtol=0.02)


def test_phase_bounds_violation():
    """Check that a trajectory outside of the bounds is detected."""
    solution = integrate(Params(0.5, PowerNonlinearity(1.0), 3, 1.0))
    trajectory = phase_trajectory(solution, (math.log(0.1), math.log(1e5)))
    trajectory.frame["Y"] = trajectory.frame["Y"] * 2
    report = check_phase_bounds(trajectory, 0.5, 1.0, 3)
    assert not report.holds
    assert report.violations["Y"] > 0.5


def test_transformed_whole_space_errors():
    """Check the hypotheses of the whole-space reduction."""
    msg = "The whole-space reduction requires q >= 1 > p and pq < 1; got p=1.5, q=1.0."
    with pytest.raises(ParameterError, match=escape(msg)):
        integrate_transformed_whole_space(1.5, 1.0, 3, 1.0)


def test_transformed_ball_too_large():
    """Check that a supercritical shooting value is diagnosed."""
    with pytest.raises(IntegrationError, match="exceeds the critical shooting value"):
        integrate_transformed_ball(2.0, 3.0, 2, 1e3, 12.0)


def test_transformed_ball_subcritical():
    """Check that a subcritical trajectory decays."""
    trajectory = integrate_transformed_ball(2.0, 3.0, 2, 1e-3, 12.0)
    assert np.all(trajectory.final < 1e-2)
    assert trajectory.t[0] == pytest.approx(1e-6)


def test_bisect_bracket():
    """Check that an invalid bracket is rejected."""
    with pytest.raises(ParameterError, match="does not bracket"):
        bisect_shooting_value(2.0, 3.0, 2, 1e-3, 2e-3)


@pytest.mark.medium_slow
def test_critical_transformed_ball():
    """Check that the critical trajectory approaches (1, 1, 1)."""
    m_over_b = bisect_shooting_value(2.0, 3.0, 2, 1e-3, 1e3)
    trajectory = integrate_transformed_ball(2.0, 3.0, 2, m_over_b * (1 - 1e-9), 12.0)
    assert_allclose(trajectory.final, ones(3), atol=1e-2)
    m_star = critical_shooting_value(Params(2.0, PowerNonlinearity(3.0), 2, 1.0))
    assert m_over_b * ball_rates(2.0, 3.0).B == pytest.approx(m_star, rel=1e-3)


def test_trajectory_csv(tmp_wd):
    """Check the export of a trajectory."""
    trajectory = integrate_autonomous(BallField(2.0, 3.0), array([0.5] * 3), 1.0, 11)
    path = trajectory.to_csv("trajectory.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "t,X,Y,Z"
    assert len(lines) == 12
