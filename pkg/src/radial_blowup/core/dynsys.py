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

"""The autonomous cooperative reductions of the radial system.

In a ball where the solution blows up at radius 1, the variables
``X = u' d^alpha / A``, ``Y = v d^beta / B`` and ``Z = v' d^gamma / C`` with
``d = 1 - r = e^(-t)`` solve a system whose autonomous part is

    g(X, Y, Z) = (alpha (Y|Y|^(p-1) - X), beta (Z - Y), gamma (X|X|^(q-1) - Z)).

In the whole space, the variables ``Y = r v'/v``, ``Z = r v^p/u'`` and
``W = r u'^q/v'`` with ``t = ln r`` solve an autonomous system exactly.
"""

from __future__ import annotations

import logging
import math
from abc import abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING
from typing import Any

import numpy as np
from docstring_inheritance import GoogleDocstringInheritanceMeta
from numpy import abs as np_abs
from numpy import array
from numpy import exp
from numpy import geomspace
from numpy import linspace
from numpy import log
from numpy import sign
from numpy.linalg import eigvals
from numpy.linalg import norm
from pandas import DataFrame
from scipy.integrate import solve_ivp
from scipy.optimize import fsolve
from strenum import StrEnum

from radial_blowup.core.asymptotics import ball_rates
from radial_blowup.core.errors import IntegrationError
from radial_blowup.core.errors import ParameterError
from radial_blowup.core.nonlinearity import PowerNonlinearity
from radial_blowup.core.radial_ode import Params
from radial_blowup.core.radial_ode import integrate
from radial_blowup.core.radial_ode import series_start
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_csv

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import ArrayLike

    from radial_blowup.core.radial_ode import RadialSolution
    from radial_blowup.core.radial_ode import StepControls

LOGGER = logging.getLogger(__name__)

STABILITY_DEAD_BAND = 1e-8

EQUILIBRIUM_TOLERANCE = 1e-12


class StabilityClass(StrEnum):
    """The classes of equilibria from the real parts of the eigenvalues."""

    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    SADDLE = "Saddle"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"
    NON_SMOOTH = "NonSmooth"


class VectorField3(metaclass=GoogleDocstringInheritanceMeta):
    """An autonomous vector field of dimension 3."""

    variables: tuple[str, str, str]
    """The names of the variables."""

    @abstractmethod
    def __call__(self, zeta: ArrayLike) -> np.ndarray:
        """Evaluate the field."""

    @abstractmethod
    def jacobian(self, zeta: ArrayLike) -> np.ndarray:
        """Evaluate the Jacobian matrix."""

    def divergence(self, zeta: ArrayLike) -> float:
        """Evaluate the divergence."""
        return float(np.trace(self.jacobian(zeta)))

    @abstractmethod
    def seeds(self) -> list[np.ndarray]:
        """Return the analytic equilibria used as starting points."""

    def is_smooth_at(self, zeta: ArrayLike) -> bool:
        """Whether the field is differentiable at a point."""
        return True

    def rhs(self, t: float, zeta: ArrayLike) -> np.ndarray:
        return self(zeta)


class BallField(VectorField3):
    """The autonomous field of the transformed ball system."""

    variables = ("X", "Y", "Z")

    def __init__(self, p: float, q: float) -> None:
        """
        Args:
            p: The exponent of the first equation.
            q: The exponent of the nonlinearity.

        Raises:
            ParameterError: If ``pq <= 1``.
        """
        rates = ball_rates(p, q)
        self.p = p
        self.q = q
        self.alpha = rates.alpha
        self.beta = rates.beta
        self.gamma = rates.gamma

    def __call__(self, zeta: ArrayLike) -> np.ndarray:
        x, y, z = zeta
        return array([
            self.alpha * (sign(y) * np_abs(y) ** self.p - x),
            self.beta * (z - y),
            self.gamma * (sign(x) * np_abs(x) ** self.q - z),
        ])

    def jacobian(self, zeta: ArrayLike) -> np.ndarray:
        x, y, _ = zeta
        with np.errstate(divide="ignore"):
            dy = self.alpha * self.p * np_abs(y) ** (self.p - 1)
            dx = self.gamma * self.q * np_abs(x) ** (self.q - 1)
        return array([
            [-self.alpha, dy, 0.0],
            [0.0, -self.beta, self.beta],
            [dx, 0.0, -self.gamma],
        ])

    def divergence(self, zeta: ArrayLike) -> float:
        return -(self.alpha + self.beta + self.gamma)

    def seeds(self) -> list[np.ndarray]:
        return [np.zeros(3), np.ones(3), -np.ones(3)]

    def is_smooth_at(self, zeta: ArrayLike) -> bool:
        x, y, _ = zeta
        return not ((self.p < 1 and y == 0) or (self.q < 1 and x == 0))

    def __repr__(self) -> str:
        return f"BallField(p={self.p}, q={self.q})"


class WholeSpaceField(VectorField3):
    """The autonomous field of the whole-space system in (Y, Z, W)."""

    variables = ("Y", "Z", "W")

    def __init__(self, p: float, q: float, N: int) -> None:  # noqa: N803
        if not (p > 0 and q > 0 and N >= 2):
            msg = f"Invalid whole-space field parameters: p={p}, q={q}, N={N}."
            raise ParameterError(msg)
        self.p = p
        self.q = q
        self.N = N

    @property
    def zeta1(self) -> np.ndarray:
        return array([0.0, self.N, self.N + self.q])

    @property
    def zeta2(self) -> np.ndarray:
        """The equilibrium with positive Y, only in the cone when pq < 1."""
        y2 = (self.q + 2) / (1 - self.p * self.q)
        return array([y2, self.N + self.p * y2, self.N - 2 + y2])

    def __call__(self, zeta: ArrayLike) -> np.ndarray:
        y, z, w = zeta
        n, p, q = self.N, self.p, self.q
        return array([
            y * (w - (n - 2) - y),
            z * (n + p * y - z),
            w * (q * z - q * n + q + n - w),
        ])

    def jacobian(self, zeta: ArrayLike) -> np.ndarray:
        y, z, w = zeta
        n, p, q = self.N, self.p, self.q
        return array([
            [w - (n - 2) - 2 * y, 0.0, y],
            [p * z, n + p * y - 2 * z, 0.0],
            [0.0, q * w, q * z - q * n + q + n - 2 * w],
        ])

    def divergence(self, zeta: ArrayLike) -> float:
        y, z, w = zeta
        n, p, q = self.N, self.p, self.q
        return float(-w + (q - 2) * z + (p - 2) * y + n + 2 - q * n + q)

    def seeds(self) -> list[np.ndarray]:
        seeds = [self.zeta1]
        if self.p * self.q < 1:
            seeds.append(self.zeta2)
        return seeds

    def __repr__(self) -> str:
        return f"WholeSpaceField(p={self.p}, q={self.q}, N={self.N})"


@dataclass(frozen=True)
class EquilibriumReport:
    """An equilibrium with its linearization."""

    point: np.ndarray

    jacobian: np.ndarray

    eigenvalues: np.ndarray

    stability: StabilityClass

    stable_dim: int
    """The number of eigenvalues with a negative real part."""

    char_poly_coeffs: np.ndarray
    """The coefficients of det(lambda I - J), highest degree first."""

    residual: float

    converged: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "point": self.point.tolist(),
            "eigenvalues": [[float(e.real), float(e.imag)] for e in self.eigenvalues],
            "stability": str(self.stability),
            "stable_dim": self.stable_dim,
            "char_poly_coeffs": np.real(self.char_poly_coeffs).tolist(),
            "residual": self.residual,
            "converged": self.converged,
        }


def classify_eigenvalues(
    eigenvalues: ArrayLike, dead_band: float = STABILITY_DEAD_BAND
) -> tuple[StabilityClass, int]:
    """Classify an equilibrium from the real parts of its eigenvalues.

    Returns:
        The class and the number of eigenvalues with a negative real part.
    """
    real_parts = np.real(np.asarray(eigenvalues))
    n_stable = int(np.sum(real_parts < -dead_band))
    if np.any(np_abs(real_parts) <= dead_band):
        return StabilityClass.MARGINAL, n_stable
    if n_stable == len(real_parts):
        return StabilityClass.ASYMPTOTICALLY_STABLE, n_stable
    if n_stable == 0:
        return StabilityClass.UNSTABLE, n_stable
    return StabilityClass.SADDLE, n_stable


def equilibria(
    field: VectorField3, tol: float = EQUILIBRIUM_TOLERANCE
) -> list[EquilibriumReport]:
    """Compute and classify the equilibria of a field.

    The analytic equilibria are refined by Newton iterations when their residual
    exceeds ``tol``.

    Args:
        field: The vector field.
        tol: The largest norm of the field at an equilibrium.

    Returns:
        The reports of the equilibria.
    """
    reports = []
    for seed in field.seeds():
        point = seed
        residual = float(norm(field(point)))
        if residual > tol:
            point = fsolve(field, seed, fprime=field.jacobian, xtol=1e-14)
            residual = float(norm(field(point)))
        converged = residual <= tol
        if not converged:
            LOGGER.warning(
                f"The equilibrium of {field} near {seed} has residual {residual:.3g}."
            )

        jacobian = field.jacobian(point)
        if field.is_smooth_at(point):
            eigenvalues = eigvals(jacobian)
            stability, stable_dim = classify_eigenvalues(eigenvalues)
            coefficients = np.poly(jacobian)
        else:
            eigenvalues = np.full(3, np.nan + 0j)
            stability, stable_dim = StabilityClass.NON_SMOOTH, 0
            coefficients = np.full(4, np.nan)
        reports.append(
            EquilibriumReport(
                point,
                jacobian,
                eigenvalues,
                stability,
                stable_dim,
                coefficients,
                residual,
                converged,
            )
        )
    return reports


@dataclass(frozen=True)
class StabilityTrace:
    """The steps showing that the whole-space equilibrium with Y > 0 is stable.

    The characteristic polynomial is ``lambda^3 + a lambda^2 + b lambda + (1-pq) c``.
    """

    a: float

    b: float

    c: float

    constant_term: float

    min_on_grid: float
    """The minimum of the polynomial over the nonnegative grid."""

    am_gm: bool
    """Whether ``a >= 3 c^(1/3)``."""

    hurwitz: bool
    """Whether ``a b > (1-pq) c``."""

    eigenvalues: np.ndarray

    @property
    def all_negative(self) -> bool:
        return bool(np.all(np.real(self.eigenvalues) < 0))

    @property
    def passed(self) -> bool:
        return (
            self.constant_term > 0
            and self.min_on_grid > 0
            and self.am_gm
            and self.hurwitz
            and self.all_negative
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "constant_term": self.constant_term,
            "min_on_grid": self.min_on_grid,
            "am_gm": self.am_gm,
            "hurwitz": self.hurwitz,
            "eigenvalues": [[float(e.real), float(e.imag)] for e in self.eigenvalues],
            "all_negative": self.all_negative,
        }


def check_stability_zeta2(
    p: float,
    q: float,
    N: int,  # noqa: N803
    n_grid: int = 201,
) -> StabilityTrace:
    """Check the stability of the whole-space equilibrium with positive Y.

    Raises:
        ParameterError: If ``pq >= 1``.
    """
    if not p * q < 1:
        msg = f"The equilibrium lies in the cone only for pq < 1; got pq = {p * q}."
        raise ParameterError(msg)
    y2, z2, w2 = WholeSpaceField(p, q, N).zeta2
    a = y2 + z2 + w2
    b = y2 * z2 + y2 * w2 + z2 * w2
    c = y2 * z2 * w2
    coefficients = [1.0, a, b, (1 - p * q) * c]
    grid = linspace(0.0, 10 * a, n_grid)
    return StabilityTrace(
        a,
        b,
        c,
        (1 - p * q) * c,
        float(np.min(np.polyval(coefficients, grid))),
        a >= 3 * c ** (1 / 3),
        a * b > (1 - p * q) * c,
        np.roots(coefficients),
    )


@dataclass(frozen=True)
class DivergenceReport:
    """The sign of the divergence over a box."""

    max_divergence: float

    argmax: np.ndarray

    box: tuple[np.ndarray, np.ndarray]

    @property
    def negative(self) -> bool:
        return self.max_divergence < 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_divergence": self.max_divergence,
            "argmax": self.argmax.tolist(),
            "box": [bound.tolist() for bound in self.box],
            "negative": self.negative,
        }


def default_box(field: VectorField3) -> tuple[np.ndarray, np.ndarray]:
    """Return the box between the two equilibria or the cube [-1, 1]^3."""
    if isinstance(field, WholeSpaceField):
        if not field.p * field.q < 1:
            msg = "The whole-space box requires pq < 1."
            raise ParameterError(msg)
        return field.zeta1, field.zeta2
    return -np.ones(3), np.ones(3)


def check_divergence(
    field: VectorField3,
    box: tuple[ArrayLike, ArrayLike] | None = None,
    n: int = 11,
) -> DivergenceReport:
    """Evaluate the divergence of a field on a grid of a box, corners included."""
    lower, upper = default_box(field) if box is None else box
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    axes = [linspace(lo, hi, n) for lo, hi in zip(lower, upper)]
    points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    values = np.array([field.divergence(point) for point in points])
    index = int(np.argmax(values))
    return DivergenceReport(float(values[index]), points[index], (lower, upper))


@dataclass
class Trajectory:
    """A trajectory sampled in time."""

    frame: DataFrame
    """The columns ``t`` and the variables."""

    escaped: bool = False
    """Whether the integration stopped because the trajectory left a bounded set."""

    @property
    def t(self) -> np.ndarray:
        return self.frame["t"].to_numpy()

    @property
    def variables(self) -> list[str]:
        return [name for name in self.frame.columns if name != "t"]

    @property
    def values(self) -> np.ndarray:
        """The samples of shape (n_times, n_variables)."""
        return self.frame[self.variables].to_numpy()

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]

    def to_csv(self, file_path: str | Path, digits: int = FULL_PRECISION) -> Path:
        return write_csv(file_path, self.frame, digits)


def _trajectory(times: np.ndarray, values: np.ndarray, names, escaped=False):
    frame = DataFrame({"t": times})
    for name, column in zip(names, values):
        frame[name] = column
    return Trajectory(frame, escaped)


def integrate_autonomous(
    field: VectorField3,
    zeta0: ArrayLike,
    t_end: float,
    n_points: int = 2001,
    max_norm: float = 1e6,
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> Trajectory:
    """Integrate an autonomous field from ``t = 0``.

    The integration stops when the norm of the state exceeds ``max_norm``.
    """

    def escape(t, zeta):
        return norm(zeta) - max_norm

    escape.terminal = True
    escape.direction = 1

    solution = solve_ivp(
        field.rhs,
        (0.0, t_end),
        np.asarray(zeta0, dtype=float),
        dense_output=True,
        events=escape,
        rtol=rtol,
        atol=atol,
    )
    if solution.status == -1:
        msg = f"The integration of {field} failed: {solution.message}"
        raise IntegrationError(msg)
    times = linspace(0.0, solution.t[-1], n_points)
    return _trajectory(
        times, solution.sol(times), field.variables, escaped=solution.status == 1
    )


def converged_equilibrium(
    trajectory: Trajectory,
    reports: list[EquilibriumReport],
    eps: float = 1e-3,
    dwell: float = 1.0,
) -> EquilibriumReport | None:
    """Return the equilibrium where a trajectory stays during its last ``dwell``.

    Returns:
        The equilibrium within ``eps`` of the trajectory over its final time
        interval of length ``dwell``, ``None`` if there is none.
    """
    t = trajectory.t
    if trajectory.escaped or t[-1] - t[0] < dwell:
        return None
    tail = trajectory.values[t >= t[-1] - dwell]
    for report in reports:
        if np.all(norm(tail - report.point, axis=1) < eps):
            return report
    return None


@dataclass(frozen=True)
class BoxReport:
    """The a priori bounds of Y, Z and W along a whole-space trajectory."""

    bounds: dict[str, tuple[float, float]]

    violations: dict[str, float]
    """The largest relative excursion of each variable outside its bounds."""

    tol: float

    @property
    def holds(self) -> bool:
        return all(value <= self.tol for value in self.violations.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "bounds": {name: list(bound) for name, bound in self.bounds.items()},
            "violations": self.violations,
            "holds": self.holds,
        }


def check_phase_bounds(
    trajectory: Trajectory,
    p: float,
    q: float,
    N: int,  # noqa: N803
    tol: float = 1e-6,
) -> BoxReport:
    """Check ``0 <= Y <= Y2``, ``N <= Z <= Z2`` and ``N+q <= W <= W2``."""
    y2, z2, w2 = WholeSpaceField(p, q, N).zeta2
    bounds = {"Y": (0.0, y2), "Z": (float(N), z2), "W": (float(N + q), w2)}
    violations = {}
    for name, (lower, upper) in bounds.items():
        values = trajectory.frame[name].to_numpy()
        scale = max(abs(lower), abs(upper))
        violations[name] = float(
            max(np.max(lower - values), np.max(values - upper), 0.0) / scale
        )
    return BoxReport(bounds, violations, tol)


def integrate_transformed_ball(
    p: float,
    q: float,
    N: int,  # noqa: N803
    m_over_B: float,  # noqa: N803
    t_end: float,
    t0: float = 1e-6,
    y_cap: float = 1e3,
    n_points: int = 2001,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> Trajectory:
    """Integrate the transformed system of a solution in the unit ball.

    With ``r = 1 - e^(-t)``, the system reads

        X' = alpha (Y^p - X) - (N-1) X / (e^t - 1),
        Y' = beta (Z - Y),
        Z' = gamma (X^q - Z) - (N-1) Z / (e^t - 1),

    with ``X(0) = Z(0) = 0`` and ``Y(0) = m/B``. The integration starts at ``t0``
    from the series expansion of the radial solution at ``r = 1 - e^(-t0)``.

    Raises:
        IntegrationError: If Y exceeds ``y_cap``, meaning that the radial solution
            blows up before radius 1.
    """
    rates = ball_rates(p, q)
    alpha, beta, gamma = rates.alpha, rates.beta, rates.gamma
    nm1 = N - 1
    params = Params(p, PowerNonlinearity(q), N, m_over_B * rates.B, R=1.0)
    _, w, v, psi = series_start(params, -math.expm1(-t0))
    zeta0 = [
        w * exp(-alpha * t0) / rates.A,
        v * exp(-beta * t0) / rates.B,
        psi * exp(-gamma * t0) / rates.C,
    ]

    def rhs(t, zeta):
        x, y, z = zeta
        singular = nm1 / math.expm1(t)
        return [
            alpha * (sign(y) * abs(y) ** p - x) - singular * x,
            beta * (z - y),
            gamma * (sign(x) * abs(x) ** q - z) - singular * z,
        ]

    def cap(t, zeta):
        return zeta[1] - y_cap

    cap.terminal = True
    cap.direction = 1

    solution = solve_ivp(
        rhs,
        (t0, t_end),
        zeta0,
        dense_output=True,
        events=cap,
        rtol=rtol,
        atol=atol,
    )
    if solution.status == 1:
        msg = (
            f"Y exceeds {y_cap} at t={solution.t_events[0][0]:.6g}: "
            f"m/B={m_over_B} exceeds the critical shooting value; "
            "the blow-up radius is below 1 and decreases with m."
        )
        raise IntegrationError(msg)
    if solution.status == -1:
        msg = f"The transformed integration failed: {solution.message}"
        raise IntegrationError(msg)
    times = linspace(t0, t_end, n_points)
    return _trajectory(times, solution.sol(times), ("X", "Y", "Z"))


def bisect_shooting_value(
    p: float,
    q: float,
    N: int,  # noqa: N803
    lo: float,
    hi: float,
    t_end: float = 12.0,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> float:
    """Bisect the value of m/B whose solution blows up exactly at radius 1.

    A value is too large when Y exceeds 1 at ``t_end`` or when the trajectory blows
    up before, too small otherwise.

    Raises:
        ParameterError: If ``lo`` is not too small or ``hi`` is not too large.
    """

    def too_large(m_over_B: float) -> bool:  # noqa: N803
        try:
            trajectory = integrate_transformed_ball(p, q, N, m_over_B, t_end)
        except IntegrationError:
            return True
        return bool(trajectory.final[1] > 1.0)

    if too_large(lo) or not too_large(hi):
        msg = f"The interval [{lo}, {hi}] does not bracket the critical value."
        raise ParameterError(msg)
    for _ in range(max_iter):
        if hi - lo <= tol * hi:
            break
        middle = 0.5 * (lo + hi)
        if too_large(middle):
            hi = middle
        else:
            lo = middle
    LOGGER.info(f"Critical m/B in [{lo:.12g}, {hi:.12g}].")
    return 0.5 * (lo + hi)


def integrate_transformed_whole_space(
    p: float,
    q: float,
    N: int,  # noqa: N803
    m: float,
    t_range: tuple[float, float] = (math.log(1e-4), math.log(1e5)),
    n_points: int = 2001,
    controls: StepControls | None = None,
) -> Trajectory:
    """Compute ``X = r u'/u``, ``Y = r v'/v``, ``Z = r v^p/u'``, ``W = r u'^q/v'``.

    The variables are evaluated on ``t = ln r`` along a whole-space radial solve.

    Raises:
        ParameterError: If ``q >= 1 > p`` or ``pq < 1`` fails.
    """
    if not (q >= 1 > p and p * q < 1):
        msg = (
            "The whole-space reduction requires q >= 1 > p and pq < 1; "
            f"got p={p}, q={q}."
        )
        raise ParameterError(msg)
    solution = integrate(Params(p, PowerNonlinearity(q), N, m), controls)
    return phase_trajectory(solution, t_range, n_points)


def phase_trajectory(
    solution: RadialSolution,
    t_range: tuple[float, float] = (math.log(1e-4), math.log(1e5)),
    n_points: int = 2001,
) -> Trajectory:
    """Evaluate the whole-space variables along a radial solution.

    The range of ``t = ln r`` is restricted to the sampled radii.
    """
    p, q = solution.params.p, solution.params.nl.q
    t_min = max(t_range[0], math.log(solution.r[0]))
    t_max = min(t_range[1], math.log(solution.r_end))
    radii = geomspace(math.exp(t_min), math.exp(t_max), n_points)
    u, w, v, psi = solution.evaluate(radii)
    return _trajectory(
        log(radii),
        (
            radii * w / u,
            radii * psi / v,
            radii * v**p / w,
            radii * w**q / psi,
        ),
        ("X", "Y", "Z", "W"),
    )
