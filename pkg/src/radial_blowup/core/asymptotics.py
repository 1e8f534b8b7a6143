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

"""Explicit blow-up rates and whole-space asymptotics for f(t) = t^q.

In a ball of radius R where the solution blows up, with ``d = R - r``,

    v ~ B d^(-beta),  u' ~ A d^(-alpha),  v' ~ C d^(-gamma),

and u behaves as ``L - A/(1-alpha) d^(1-alpha)``, ``A ln(1/d)`` or
``A/(alpha-1) d^(1-alpha)`` whether alpha is below, equal to or above 1.

In the whole space with ``q >= 1 > p``, the solution grows like the exact solution
``(J r^a, K r^b)`` which vanishes at the origin.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict
from dataclasses import dataclass
from typing import TYPE_CHECKING
from typing import Any

import numpy as np
from numpy import asarray
from numpy import log
from pandas import DataFrame
from strenum import StrEnum

from radial_blowup.core.errors import InsufficientDataError
from radial_blowup.core.errors import ParameterError
from radial_blowup.core.nonlinearity import NonlinearityKind
from radial_blowup.core.radial_ode import Termination
from radial_blowup.core.radial_ode import terminal_window
from radial_blowup.lib_radial.fit_utilities import local_slope_computation

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from radial_blowup.core.radial_ode import RadialSolution

LOGGER = logging.getLogger(__name__)

DEFAULT_RATE_TOLERANCE = 0.05


class UCase(StrEnum):
    """The behaviour of u at the blow-up radius."""

    FINITE_LIMIT = "FiniteLimit"
    LOG_RATE = "LogRate"
    POWER_RATE = "PowerRate"


@dataclass(frozen=True)
class BallRates:
    """The exponents and constants of the blow-up rates in a ball."""

    p: float

    q: float

    alpha: float

    beta: float

    gamma: float

    A: float
    """The constant of u'."""

    B: float
    """The constant of v."""

    C: float
    """The constant of v'."""

    u_case: UCase

    u_rate_constant: float
    """The constant of the leading term of u."""

    within_hypotheses: bool
    """Whether p, q >= 1 and (p, q) != (1, 1), where the rates are proved."""

    @property
    def u_exponent(self) -> float:
        """The exponent of d in the leading term of u, zero for the log rate."""
        return 0.0 if self.u_case == UCase.LOG_RATE else 1.0 - self.alpha

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["u_case"] = str(self.u_case)
        data["u_exponent"] = self.u_exponent
        return data


def ball_rates(p: float, q: float) -> BallRates:
    """Compute the blow-up exponents and constants.

    Args:
        p: The exponent of the first equation.
        q: The exponent of the nonlinearity.

    Returns:
        The rates.

    Raises:
        ParameterError: If ``pq <= 1``.
    """
    if not (p > 0 and q > 0):
        msg = f"The exponents must be positive; got p={p}, q={q}."
        raise ParameterError(msg)
    pq1 = p * q - 1
    if not pq1 > 0:
        msg = f"The blow-up rates require pq > 1; got pq = {p * q}."
        raise ParameterError(msg)
    alpha = (1 + 2 * p) / pq1
    beta = (q + 2) / pq1
    gamma = (q + p * q + 1) / pq1
    a_const = (
        (1 + 2 * p) * (q + 2) ** p * (q + p * q + 1) ** p / pq1 ** (2 * p + 1)
    ) ** (1 / pq1)
    b_const = ((1 + 2 * p) ** q * (q + 2) * (q + p * q + 1) / pq1 ** (2 + q)) ** (
        1 / pq1
    )
    c_const = (
        (1 + 2 * p) ** q * (q + 2) ** (p * q) * (q + p * q + 1) / pq1 ** (q + p * q + 1)
    ) ** (1 / pq1)

    if math.isclose(alpha, 1.0, rel_tol=1e-12):
        u_case, u_constant = UCase.LOG_RATE, a_const
    elif alpha < 1:
        u_case, u_constant = UCase.FINITE_LIMIT, a_const / (1 - alpha)
    else:
        u_case, u_constant = UCase.POWER_RATE, a_const / (alpha - 1)

    within_hypotheses = p >= 1 and q >= 1 and not (p == 1 and q == 1)
    if not within_hypotheses:
        LOGGER.warning(
            f"The blow-up rates are only established for p, q >= 1; got p={p}, q={q}."
        )
    return BallRates(
        p,
        q,
        alpha,
        beta,
        gamma,
        a_const,
        b_const,
        c_const,
        u_case,
        u_constant,
        within_hypotheses,
    )


@dataclass(frozen=True)
class RateEntry:
    """The comparison of an empirical limit with its theoretical value."""

    quantity: str

    empirical: float

    theoretical: float

    rel_err: float

    window: tuple[float, float]
    """The radii bounding the fitting window."""

    sensitivity: float
    """The relative change of the empirical limit on the last half of the window."""

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["window"] = list(self.window)
        return data


@dataclass(frozen=True)
class RateCheck:
    """A set of rate comparisons."""

    entries: tuple[RateEntry, ...]

    @property
    def max_rel_err(self) -> float:
        return max(entry.rel_err for entry in self.entries)

    def passed(self, tol: float = DEFAULT_RATE_TOLERANCE) -> bool:
        return self.max_rel_err <= tol

    def __getitem__(self, quantity: str) -> RateEntry:
        for entry in self.entries:
            if entry.quantity == quantity:
                return entry
        msg = f"No rate entry for {quantity}."
        raise KeyError(msg)

    def to_dicts(self) -> list[dict[str, Any]]:
        return [entry.to_dict() for entry in self.entries]

    def to_dataframe(self) -> DataFrame:
        """The comparisons with the window split in two columns."""
        frame = DataFrame(self.to_dicts())
        windows = frame.pop("window")
        frame["window_start"] = [window[0] for window in windows]
        frame["window_end"] = [window[1] for window in windows]
        return frame


def _relative_error(empirical: float, theoretical: float) -> float:
    return abs(empirical - theoretical) / abs(theoretical)


def _regression_slope(shape: np.ndarray, values: np.ndarray) -> float:
    return local_slope_computation(
        shape, values, x_min=float(shape.min()), x_max=float(shape.max())
    ).slope


def verify_ball_rates(
    solution: RadialSolution,
    rates: BallRates | None = None,
    decades: float = 1.0,
    n_points: int = 400,
) -> RateCheck:
    """Compare the behaviour of a blowing-up solution with the explicit rates.

    Each quantity is regressed against its theoretical shape in ``d = R_max - r``
    over the window where v spans its last ``decades`` decades, with the fitted
    blow-up radius ``R_max``. The slope of the regression is the empirical constant.

    Args:
        solution: A solution terminated by blow-up.
        rates: The rates. If ``None``, compute them from the problem.
        decades: The number of decades of v in the window.
        n_points: The number of radii of the window.

    Returns:
        The comparisons for v, w, psi and u.

    Raises:
        ParameterError: If the solution did not blow up.
        InsufficientDataError: If the window has too few samples.
    """
    if solution.termination != Termination.BLOW_UP or solution.R_max is None:
        msg = f"The solution did not blow up; termination is {solution.termination}."
        raise ParameterError(msg)
    if rates is None:
        nl = solution.params.nl
        if nl.kind != NonlinearityKind.POWER:
            msg = f"The blow-up rates require a power nonlinearity; got {nl}."
            raise ParameterError(msg)
        rates = ball_rates(solution.params.p, nl.q)

    radii, states = terminal_window(solution, decades, n_points, R=solution.R_max)
    u, w, v, psi = states
    distances = solution.R_max - radii
    half = v >= v[-1] * 10.0 ** (-decades / 2)
    if np.sum(half) < 2:
        msg = "The last half of the window has fewer than two samples."
        raise InsufficientDataError(msg)
    window = (float(radii[0]), float(radii[-1]))

    if rates.u_case == UCase.LOG_RATE:
        u_shape, u_sign = -log(distances), 1.0
    elif rates.u_case == UCase.FINITE_LIMIT:
        u_shape, u_sign = distances ** (1 - rates.alpha), -1.0
    else:
        u_shape, u_sign = distances ** (1 - rates.alpha), 1.0

    entries = []
    for quantity, shape, values, sign, theoretical in (
        ("v", distances ** (-rates.beta), v, 1.0, rates.B),
        ("w", distances ** (-rates.alpha), w, 1.0, rates.A),
        ("psi", distances ** (-rates.gamma), psi, 1.0, rates.C),
        ("u", u_shape, u, u_sign, rates.u_rate_constant),
    ):
        empirical = sign * _regression_slope(shape, values)
        on_half = sign * _regression_slope(shape[half], values[half])
        entry = RateEntry(
            quantity,
            empirical,
            theoretical,
            _relative_error(empirical, theoretical),
            window,
            _relative_error(on_half, empirical),
        )
        LOGGER.info(
            f"{quantity}: empirical {empirical:.6g}, theoretical {theoretical:.6g}, "
            f"relative error {entry.rel_err:.3g}."
        )
        entries.append(entry)
    return RateCheck(tuple(entries))


@dataclass(frozen=True)
class WholeSpaceRates:
    """The growth of global solutions in the whole space."""

    p: float

    q: float

    N: int

    u_exponent: float

    v_exponent: float

    u_constant: float
    """The limit of u / r^u_exponent."""

    v_constant: float
    """The limit of v / r^v_exponent."""

    zeta2: tuple[float, float, float]
    """The attracting equilibrium (Y, Z, W)."""

    X_limit: float

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["zeta2"] = list(self.zeta2)
        return data


def _exact_constants(p: float, q: float, N: int) -> tuple[float, ...]:  # noqa: N803
    """Return (a, b, J, K, Y2, Z2, W2) of the exact solution (J r^a, K r^b)."""
    if not p * q < 1:
        msg = f"The exact solution requires pq < 1; got pq = {p * q}."
        raise ParameterError(msg)
    y2 = (q + 2) / (1 - p * q)
    z2 = N + p * y2
    w2 = N - 2 + y2
    a = 2 + p * y2
    k_const = (y2 * z2**q * w2) ** (1 / (p * q - 1))
    j_const = k_const**p / (a * z2)
    return a, y2, j_const, k_const, y2, z2, w2


def whole_space_rates(p: float, q: float, N: int) -> WholeSpaceRates:  # noqa: N803
    """Compute the growth of global solutions in the whole space.

    Raises:
        ParameterError: If one of ``q >= 1``, ``p < 1``, ``pq < 1`` or
            ``p(q^2-4)/(1-pq) <= 2(N-1)`` fails.
    """
    for holds, inequality in (
        (q >= 1, "q >= 1"),
        (0 < p < 1, "0 < p < 1"),
        (p * q < 1, "pq < 1"),
    ):
        if not holds:
            msg = f"The whole-space rates require {inequality}; got p={p}, q={q}."
            raise ParameterError(msg)
    if not p * (q**2 - 4) / (1 - p * q) <= 2 * (N - 1):
        msg = (
            f"The whole-space rates require p(q^2-4)/(1-pq) <= 2(N-1); "
            f"got {p * (q**2 - 4) / (1 - p * q)} > {2 * (N - 1)}."
        )
        raise ParameterError(msg)
    a, b, j_const, k_const, y2, z2, w2 = _exact_constants(p, q, N)
    return WholeSpaceRates(p, q, N, a, b, j_const, k_const, (y2, z2, w2), a)


def exact_solution(
    p: float,
    q: float,
    N: int,  # noqa: N803
    r: float | ArrayLike,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate the exact whole-space solution vanishing at the origin.

    Returns:
        The values of u, v, u' and v' at ``r``.
    """
    a, b, j_const, k_const, *_ = _exact_constants(p, q, N)
    r = asarray(r, dtype=float)
    return (
        j_const * r**a,
        k_const * r**b,
        j_const * a * r ** (a - 1),
        k_const * b * r ** (b - 1),
    )


def _five_point_derivatives(
    function, r: float, h: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    values = [asarray(function(r + k * h)) for k in (-2, -1, 0, 1, 2)]
    first = (-values[4] + 8 * values[3] - 8 * values[1] + values[0]) / (12 * h)
    second = (
        -values[4] + 16 * values[3] - 30 * values[2] + 16 * values[1] - values[0]
    ) / (12 * h**2)
    return values[2], first, second


def exact_solution_residual(
    p: float,
    q: float,
    N: int,  # noqa: N803
    radii: ArrayLike,
    relative_step: float = 1e-3,
) -> float:
    """Check the exact solution against the system by finite differences.

    The Laplacians of u and v are approximated with five-point stencils of step
    ``relative_step * r``. The origin is skipped.

    Returns:
        The largest residual relative to the right-hand sides.
    """
    residual = 0.0
    for r in asarray(radii, dtype=float).ravel():
        if r <= 0:
            LOGGER.warning(f"Skipping the radius {r} where the stencil is undefined.")
            continue
        (u, v), (du, dv), (d2u, d2v) = _five_point_derivatives(
            lambda x: exact_solution(p, q, N, x)[:2], r, relative_step * r
        )
        laplacian_u = d2u + (N - 1) * du / r
        laplacian_v = d2v + (N - 1) * dv / r
        residual = max(
            residual,
            abs(laplacian_u - v**p) / v**p,
            abs(laplacian_v - abs(du) ** q) / abs(du) ** q,
        )
    return float(residual)


def _phase_variables(
    r: float, state: np.ndarray, p: float, q: float
) -> dict[str, float]:
    u, w, v, psi = state
    return {
        "X": r * w / u,
        "Y": r * psi / v,
        "Z": r * v**p / w,
        "W": r * w**q / psi,
    }


def verify_whole_space(
    solution: RadialSolution,
    rates: WholeSpaceRates,
    r_eval: float = 1e5,
) -> RateCheck:
    """Compare a global whole-space solution with its predicted growth.

    The quantities ``u/r^a``, ``v/r^b`` and the variables
    ``X = r u'/u``, ``Y = r v'/v``, ``Z = r v^p/u'``, ``W = r u'^q/v'``
    are evaluated at ``r_eval``. The sensitivity compares with ``r_eval / 10``.

    Raises:
        ParameterError: If the solution is not global.
        InsufficientDataError: If the solution does not span three decades above 1
            or does not reach ``r_eval``.
    """
    if solution.termination != Termination.GLOBAL_HORIZON:
        msg = f"The solution is not global; termination is {solution.termination}."
        raise ParameterError(msg)
    r_end = solution.r_end
    if r_end < 1e3 or r_eval > r_end or r_eval / 10 < solution.r[0]:
        msg = (
            f"The samples must span three decades above r=1 and include "
            f"[{r_eval / 10}, {r_eval}]; they end at r={r_end}."
        )
        raise InsufficientDataError(msg)

    def limits(r: float) -> dict[str, float]:
        state = solution.evaluate(r)
        values = _phase_variables(r, state, rates.p, rates.q)
        values["u"] = state[0] / r**rates.u_exponent
        values["v"] = state[2] / r**rates.v_exponent
        return values

    at_eval = limits(r_eval)
    before = limits(r_eval / 10)
    y2, z2, w2 = rates.zeta2
    entries = []
    for quantity, theoretical in (
        ("X", rates.X_limit),
        ("Y", y2),
        ("Z", z2),
        ("W", w2),
        ("u", rates.u_constant),
        ("v", rates.v_constant),
    ):
        empirical = float(at_eval[quantity])
        entries.append(
            RateEntry(
                quantity,
                empirical,
                theoretical,
                _relative_error(empirical, theoretical),
                (r_eval / 10, r_eval),
                _relative_error(float(before[quantity]), empirical),
            )
        )
    return RateCheck(tuple(entries))
