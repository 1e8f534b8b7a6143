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

"""Radial solutions of the system integrated from the origin.

With ``w = u'`` and ``psi = v'``, positive radial solutions satisfy

    u' = w,  w' = v^p - (N-1) w / r,  v' = psi,  psi' = f(w) - (N-1) psi / r,

with ``w(0) = psi(0) = 0`` and ``v(0) = m > 0``. The integration starts at a small
radius from a series expansion and stops at the radius of a ball, at the horizon of
a whole-space solve or when v blows up.

Blow-up is recognised from the quantity ``D = d(v/psi)/dr = 1 - v psi' / psi^2``:
if v behaves like ``B (R - r)^(-beta)``, then ``D`` tends to ``-1/beta``, whereas a
polynomial growth ``v ~ r^k`` gives ``D = 1/k > 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from typing import TYPE_CHECKING
from typing import Any

import numpy as np
from numpy import asarray
from numpy import concatenate
from numpy import copysign
from numpy import diff
from numpy import exp
from numpy import geomspace
from numpy import linspace
from numpy import log
from numpy import searchsorted
from numpy import vstack
from pandas import DataFrame
from pydantic import Field
from pydantic import PositiveFloat
from pydantic import PositiveInt
from scipy.integrate import cumulative_trapezoid
from scipy.integrate import quad
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.optimize import curve_fit
from strenum import StrEnum

from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.errors import FitError
from radial_blowup.core.errors import InsufficientDataError
from radial_blowup.core.errors import IntegrationError
from radial_blowup.core.errors import ParameterError
from radial_blowup.core.ko_criteria import Verdict
from radial_blowup.core.nonlinearity import NonlinearityKind
from radial_blowup.lib_radial.fit_utilities import local_slope_computation
from radial_blowup.tools.base_settings import BaseSettings
from radial_blowup.utilities.json_utils import FULL_PRECISION
from radial_blowup.utilities.json_utils import write_csv
from radial_blowup.utilities.json_utils import write_json_dict

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from numpy.typing import ArrayLike
    from scipy.integrate import OdeSolution

    from radial_blowup.core.nonlinearity import Nonlinearity

LOGGER = logging.getLogger(__name__)

STATE_NAMES = ("u", "w", "v", "psi")

MIN_TERMINAL_SAMPLES = 20
"""The minimum number of samples in the terminal window of a blow-up fit."""


class Termination(StrEnum):
    """The causes of termination of a radial integration."""

    REACHED_RADIUS = "ReachedRadius"
    BLOW_UP = "BlowUp"
    GLOBAL_HORIZON = "GlobalHorizon"


@dataclass(frozen=True)
class Params:
    """The data of a radial problem."""

    p: float
    """The exponent of the first equation."""

    nl: Nonlinearity
    """The nonlinearity of the second equation."""

    N: int
    """The space dimension."""

    m: float
    """The shooting value v(0)."""

    R: float | None = None
    """The radius of the ball, ``None`` for the whole space."""

    u0: float = 1.0
    """The value u(0), which only shifts u."""

    sign_changing: bool = False
    """Whether v(0) may be nonpositive, only allowed for p = 1."""

    def __post_init__(self) -> None:
        if not self.p > 0:
            msg = f"The exponent p must be positive; got {self.p}."
            raise ParameterError(msg)
        if int(self.N) != self.N or self.N < 2:
            msg = f"The dimension N must be an integer >= 2; got {self.N}."
            raise ParameterError(msg)
        if self.sign_changing:
            if self.p != 1:
                msg = f"A sign-changing v(0) requires p = 1; got p = {self.p}."
                raise ParameterError(msg)
        elif not self.m > 0:
            msg = f"The shooting value m must be positive; got {self.m}."
            raise ParameterError(msg)
        if self.R is not None and not self.R > 0:
            msg = f"The radius R must be positive; got {self.R}."
            raise ParameterError(msg)

    @property
    def whole_space(self) -> bool:
        """Whether the domain is the whole space."""
        return self.R is None

    def with_m(self, m: float) -> Params:
        """Return the same problem with another shooting value."""
        return replace(self, m=m)

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "q": self.nl.q,
            "f": str(self.nl),
            "N": self.N,
            "m": self.m,
            "R": self.R,
            "u0": self.u0,
        }


class StepControls(BaseSettings):
    """The controls of the radial integration."""

    r0: PositiveFloat = Field(
        default=config.solver.r0,
        description="The radius where the series start is evaluated.",
    )
    rtol: PositiveFloat = Field(default=config.solver.rtol)
    atol: PositiveFloat = Field(default=config.solver.atol)
    method: str = Field(default=config.solver.method)
    v_ceiling: PositiveFloat = Field(
        default=config.solver.v_ceiling,
        description="The first value of v where the growth of v is examined.",
    )
    ceiling_growth: float = Field(
        default=1e4,
        gt=1.0,
        description="The factor applied to the ceiling when the growth is "
        "polynomial.",
    )
    max_ceiling: PositiveFloat = Field(
        default=1e200,
        description="The ceiling above which a polynomial growth is reported as "
        "global.",
    )
    resolution: PositiveFloat = Field(
        default=1e-10,
        description="The relative distance to the blow-up radius "
        "below which the integration stops.",
    )
    blowup_slope: float = Field(
        default=-0.1,
        lt=0.0,
        description="The log-log slope of v versus the distance to the blow-up "
        "radius below which blow-up is declared.",
    )
    blowup_agreement: PositiveFloat = Field(
        default=1e-3,
        description="The relative difference between the blow-up radii "
        "extrapolated at two successive ceilings below which blow-up is declared.",
    )
    r_horizon: PositiveFloat = Field(default=config.solver.r_horizon)
    n_samples: PositiveInt = Field(
        default=2000, description="The number of log-spaced whole-space samples."
    )


class SegmentedDenseOutput:
    """The continuous extension of a solution integrated in several segments."""

    def __init__(self, segments: list[OdeSolution]) -> None:
        self.__segments = segments
        self.__ends = np.array([segment.t_max for segment in segments])

    @property
    def t_min(self) -> float:
        return self.__segments[0].t_min

    @property
    def t_max(self) -> float:
        return self.__segments[-1].t_max

    def __call__(self, r: float | ArrayLike) -> np.ndarray:
        r = asarray(r, dtype=float)
        if r.ndim == 0:
            index = min(searchsorted(self.__ends, r), len(self.__segments) - 1)
            return self.__segments[index](r)
        indices = np.minimum(searchsorted(self.__ends, r), len(self.__segments) - 1)
        values = np.empty((4, len(r)))
        for index in np.unique(indices):
            mask = indices == index
            values[:, mask] = self.__segments[index](r[mask])
        return values


class RescaledDenseOutput:
    """The continuous extension of a rescaled solution."""

    def __init__(
        self, base: Callable[[ArrayLike], np.ndarray], sigma: float, factors: ArrayLike
    ) -> None:
        self.__base = base
        self.__sigma = sigma
        self.__factors = asarray(factors, dtype=float)

    def __call__(self, r: float | ArrayLike) -> np.ndarray:
        values = self.__base(self.__sigma * asarray(r, dtype=float))
        if values.ndim == 1:
            return self.__factors * values
        return self.__factors[:, None] * values


@dataclass
class RadialSolution:
    """A sampled radial solution."""

    params: Params

    r: np.ndarray
    """The strictly increasing radii."""

    u: np.ndarray

    w: np.ndarray
    """The derivative of u."""

    v: np.ndarray

    psi: np.ndarray
    """The derivative of v."""

    termination: Termination

    R_max: float | None = None
    """The estimated blow-up radius."""

    r_stop: float | None = None
    """The radius where a whole-space integration stopped."""

    fit_beta: float | None = None
    """The fitted exponent of v at the blow-up radius."""

    fit_B: float | None = None
    """The fitted constant of v at the blow-up radius."""

    truncated: bool = False
    """Whether the samples do not cover the requested radii."""

    dense: Callable[[ArrayLike], np.ndarray] | None = field(default=None, repr=False)
    """The continuous extension returning the state (u, w, v, psi)."""

    @property
    def u0(self) -> float:
        return self.params.u0

    @property
    def n_samples(self) -> int:
        return len(self.r)

    @property
    def states(self) -> np.ndarray:
        """The samples as an array of shape (4, n_samples)."""
        return vstack([self.u, self.w, self.v, self.psi])

    @property
    def r_end(self) -> float:
        return float(self.r[-1])

    def evaluate(self, radii: float | ArrayLike) -> np.ndarray:
        """Evaluate the state (u, w, v, psi) at radii inside the sampled range.

        The continuous extension of the integrator is used when available,
        otherwise a monotone interpolation of the samples.
        """
        if self.dense is not None:
            return self.dense(radii)
        return PchipInterpolator(self.r, self.states, axis=1)(radii)

    def derivatives(self) -> tuple[np.ndarray, np.ndarray]:
        """The derivatives of w and psi at the samples, from the system."""
        rhs = make_rhs(self.params)
        values = np.array([rhs(r, y) for r, y in zip(self.r, self.states.T)])
        return values[:, 1], values[:, 3]

    def as_dataframe(self) -> DataFrame:
        return DataFrame({
            "r": self.r,
            "u": self.u,
            "w": self.w,
            "v": self.v,
            "psi": self.psi,
        })

    def sidecar(self) -> dict[str, Any]:
        """The termination metadata."""
        return {
            "termination": str(self.termination),
            "R_max": self.R_max,
            "fit_beta": self.fit_beta,
            "fit_B": self.fit_B,
            "r_stop": self.r_stop,
            "truncated": self.truncated,
            "params": self.params.to_dict(),
        }

    def export(self, prefix: str | Path, digits: int = FULL_PRECISION) -> list[Path]:
        """Write the samples to ``{prefix}.csv`` and the metadata to
        ``{prefix}.json``."""
        return [
            write_csv(f"{prefix}.csv", self.as_dataframe(), digits),
            write_json_dict(f"{prefix}.json", self.sidecar(), digits),
        ]


@dataclass(frozen=True)
class BlowUpFit:
    """The power law ``v = B (R_max - r)^(-beta)`` fitted on a terminal window."""

    R_max: float

    beta: float

    B: float

    n_points: int

    window: tuple[float, float]
    """The radii bounding the window."""


def _signed_power(value: float, exponent: float) -> float:
    """The odd extension of the power function."""
    return math.copysign(abs(value) ** exponent, value)


def make_rhs(params: Params) -> Callable[[float, ArrayLike], list[float]]:
    """Create the right-hand side of the first-order radial system.

    The state is (u, w, v, psi). The nonlinearity is evaluated at ``|w|``
    and the power of v is extended as an odd function.
    """
    p = params.p
    f = params.nl.f
    nm1 = params.N - 1

    def rhs(r: float, y: ArrayLike) -> list[float]:
        _, w, v, psi = y
        return [
            w,
            _signed_power(v, p) - nm1 * w / r,
            psi,
            f(abs(w)) - nm1 * psi / r,
        ]

    return rhs


def series_start(params: Params, r0: float) -> tuple[float, float, float, float]:
    """Evaluate the leading-order expansion of the solution at a small radius.

    With ``w ~ m^p r / N``, the value of psi is the radial average
    ``r^(1-N) int_0^r t^(N-1) f(m^p t / N) dt``, in closed form for a power
    nonlinearity and by quadrature otherwise.

    Args:
        params: The problem.
        r0: The positive radius.

    Returns:
        The values of (u, w, v, psi) at ``r0``.

    Raises:
        ParameterError: If ``r0`` is not positive.
    """
    if not r0 > 0:
        msg = f"The starting radius must be positive; got {r0}."
        raise ParameterError(msg)
    n = params.N
    vp = _signed_power(params.m, params.p)
    u = params.u0 + vp * r0**2 / (2 * n)
    w = vp * r0 / n
    nl = params.nl
    if nl.kind == NonlinearityKind.POWER:
        q = nl.q
        c = (abs(vp) / n) ** q
        psi = c * r0 ** (q + 1) / (n + q)
        v = params.m + c * r0 ** (q + 2) / ((n + q) * (q + 2))
        return u, w, v, psi

    slope = abs(vp) / n

    def radial_average(r: float) -> float:
        if r == 0.0:
            return 0.0
        integral, _ = quad(lambda t: t ** (n - 1) * nl.f(slope * t), 0.0, r)
        return integral / r ** (n - 1)

    psi = radial_average(r0)
    correction, _ = quad(radial_average, 0.0, r0)
    return u, w, params.m + correction, psi


def _ratio_derivative(rhs: Callable, r: float, y: ArrayLike) -> float:
    """Compute d(v/psi)/dr."""
    _, _, v, psi = y
    return 1.0 - v * rhs(r, y)[3] / psi**2


def _assemble(
    params: Params,
    radii: list[np.ndarray],
    states: list[np.ndarray],
    termination: Termination,
    segments: list[OdeSolution],
) -> RadialSolution:
    r = concatenate(radii)
    y = np.hstack(states)
    keep = concatenate(([True], diff(r) > 0))
    r = r[keep]
    y = y[:, keep]
    return RadialSolution(
        params,
        r,
        *y,
        termination=termination,
        dense=SegmentedDenseOutput(segments) if segments else None,
    )


def integrate(params: Params, controls: StepControls | None = None) -> RadialSolution:
    """Integrate the radial system from the origin.

    The integration is split in segments ending when v reaches a ceiling. At the end
    of a segment, the growth of v is examined: a log-log slope of v versus the
    distance to the extrapolated blow-up radius below ``controls.blowup_slope``
    declares blow-up once the extrapolated radius agrees with the one of the
    previous ceiling, otherwise the ceiling is raised. Reaching the resolution
    limit with such a slope declares blow-up at once. A whole-space solve whose
    ceiling exceeds ``controls.max_ceiling`` stops with a global termination.

    Args:
        params: The problem.
        controls: The step controls. If ``None``, use the defaults.

    Returns:
        The sampled solution.

    Raises:
        IntegrationError: If the step size underflows, if the solution is not
            finite or if the distance to the blow-up radius cannot be resolved.
            The solution computed so far is attached.
    """
    controls = StepControls() if controls is None else controls
    rhs = make_rhs(params)
    r0 = controls.r0
    r_end = controls.r_horizon if params.whole_space else params.R
    if r_end <= r0:
        msg = f"The final radius {r_end} must exceed the starting radius {r0}."
        raise ParameterError(msg)

    y_start = np.array(series_start(params, r0))
    r_start = r0
    all_t_eval = geomspace(r0, r_end, controls.n_samples) if params.whole_space else None
    ceiling = controls.v_ceiling
    while ceiling <= y_start[2]:
        ceiling *= controls.ceiling_growth

    radii = [np.array([r0])]
    states = [y_start[:, None]]
    segments = []
    previous_estimate = None
    while True:

        def ceiling_event(r, y, ceiling=ceiling):
            return y[2] - ceiling

        ceiling_event.terminal = True
        ceiling_event.direction = 1

        def resolution_event(r, y):
            return y[2] - controls.resolution * r * y[3]

        resolution_event.terminal = True
        resolution_event.direction = -1

        t_eval = None
        if all_t_eval is not None:
            t_eval = all_t_eval[(all_t_eval > r_start) & (all_t_eval <= r_end)]
            if len(t_eval) == 0:
                t_eval = None

        LOGGER.debug(f"Integrating from r={r_start:.6g} with ceiling {ceiling:.3g}.")
        solution = solve_ivp(
            rhs,
            (r_start, r_end),
            y_start,
            method=controls.method,
            t_eval=t_eval,
            dense_output=True,
            events=[ceiling_event, resolution_event],
            rtol=controls.rtol,
            atol=controls.atol,
        )
        t, y = solution.t, solution.y
        if t_eval is None and len(t) > 0 and t[0] == r_start:
            t, y = t[1:], y[:, 1:]

        finite = np.all(np.isfinite(y), axis=0)
        if not np.all(finite):
            n_valid = int(np.argmin(finite))
            radii.append(t[:n_valid])
            states.append(y[:, :n_valid])
            partial = _assemble(
                params, radii, states, Termination.REACHED_RADIUS, segments
            )
            msg = (
                f"The solution is not finite at r={t[n_valid]:.17g}; "
                f"last valid state at r={partial.r_end:.17g}."
            )
            raise IntegrationError(msg, partial)

        if solution.sol is not None:
            segments.append(solution.sol)
        radii.append(t)
        states.append(y)

        if solution.status == -1:
            partial = _assemble(
                params, radii, states, Termination.REACHED_RADIUS, segments
            )
            msg = f"The integration failed at r={partial.r_end:.17g}: {solution.message}"
            raise IntegrationError(msg, partial)

        if solution.status == 0:
            termination = (
                Termination.GLOBAL_HORIZON
                if params.whole_space
                else Termination.REACHED_RADIUS
            )
            result = _assemble(params, radii, states, termination, segments)
            if params.whole_space:
                result.r_stop = r_end
            LOGGER.info(f"{termination} at r={r_end:.6g}.")
            return result

        event_index = 0 if len(solution.t_events[0]) else 1
        r_event = float(solution.t_events[event_index][0])
        y_event = solution.y_events[event_index][0]
        if t_eval is not None:
            radii.append(np.array([r_event]))
            states.append(y_event[:, None])

        ratio_derivative = _ratio_derivative(rhs, r_event, y_event)
        slope = 1.0 / ratio_derivative if ratio_derivative != 0 else math.inf
        blowup_growth = slope < controls.blowup_slope
        estimate = (
            r_event + (y_event[2] / y_event[3]) / (-ratio_derivative)
            if blowup_growth
            else None
        )
        # The extrapolated radius must be stable across two successive ceilings.
        confirmed = event_index == 1 or (
            previous_estimate is not None
            and estimate is not None
            and abs(estimate - previous_estimate)
            <= controls.blowup_agreement * estimate
        )
        if blowup_growth and confirmed:
            result = _assemble(params, radii, states, Termination.BLOW_UP, segments)
            result.R_max = estimate
            _refine_blowup_radius(result)
            LOGGER.info(
                f"BlowUp with R_max={result.R_max:.12g} "
                f"(v={y_event[2]:.3g} at r={r_event:.12g})."
            )
            return result

        if event_index == 1:
            partial = _assemble(
                params, radii, states, Termination.REACHED_RADIUS, segments
            )
            msg = (
                f"The distance to the blow-up radius cannot be resolved at "
                f"r={r_event:.17g} while the growth of v is not a blow-up "
                f"(log-log slope {slope:.4g})."
            )
            raise IntegrationError(msg, partial)

        if ceiling * controls.ceiling_growth > controls.max_ceiling:
            result = _assemble(
                params, radii, states, Termination.GLOBAL_HORIZON, segments
            )
            result.r_stop = r_event
            LOGGER.info(
                f"GlobalHorizon at r={r_event:.6g}: v={y_event[2]:.3g} grows with "
                f"log-log slope {slope:.4g}."
            )
            return result

        previous_estimate = estimate
        ceiling *= controls.ceiling_growth
        r_start, y_start = r_event, y_event


def _refine_blowup_radius(solution: RadialSolution) -> None:
    """Replace the extrapolated blow-up radius by the fitted one."""
    try:
        blowup_fit = fit_blowup_law(solution)
    except (FitError, InsufficientDataError) as error:
        LOGGER.warning(f"Keeping the extrapolated blow-up radius: {error}")
        return
    solution.R_max = blowup_fit.R_max
    solution.fit_beta = blowup_fit.beta
    solution.fit_B = blowup_fit.B


def blowup_radius_guess(solution: RadialSolution) -> float:
    """Extrapolate the blow-up radius from the last samples."""
    if solution.R_max is not None and solution.R_max > solution.r_end:
        return solution.R_max
    ratio = solution.v[-2:] / solution.psi[-2:]
    ratio_derivative = (ratio[1] - ratio[0]) / (solution.r[-1] - solution.r[-2])
    if not ratio_derivative < 0:
        msg = "The last samples do not approach a blow-up radius."
        raise FitError(msg)
    return solution.r_end + ratio[1] / (-ratio_derivative)


def terminal_window(
    solution: RadialSolution,
    decades: float = 1.0,
    n_points: int = 200,
    R: float | None = None,  # noqa: N803
) -> tuple[np.ndarray, np.ndarray]:
    """Return the samples where v lies in its last ``decades`` decades.

    With a continuous extension, the window is resampled with radii accumulating
    geometrically toward the blow-up radius; otherwise the raw samples are used.

    Args:
        solution: The solution.
        decades: The number of decades of v.
        n_points: The number of resampled radii.
        R: The radius toward which the resampled radii accumulate.
            If ``None``, use an extrapolation of the blow-up radius.

    Returns:
        The radii and the states of shape (4, n).

    Raises:
        FitError: If v is not increasing on the window.
        InsufficientDataError: If there are fewer than 20 raw samples in the
            window and no continuous extension.
    """
    r, v = solution.r, solution.v
    v_start = v[-1] * 10.0 ** (-decades)
    below = np.nonzero(v < v_start)[0]
    first = int(below[-1]) + 1 if len(below) else 0
    if np.any(diff(v[first:]) <= 0):
        msg = "The solution is not increasing on the terminal window."
        raise FitError(msg)

    if solution.dense is None:
        if len(r) - first < MIN_TERMINAL_SAMPLES:
            msg = (
                f"At least {MIN_TERMINAL_SAMPLES} samples are required in the "
                f"terminal window; got {len(r) - first}."
            )
            raise InsufficientDataError(msg)
        return r[first:], solution.states[:, first:]

    if first == 0:
        r_start = r[0]
    else:
        r_start = brentq(
            lambda x: solution.evaluate(x)[2] - v_start, r[first - 1], r[first]
        )
    R = blowup_radius_guess(solution) if R is None else R  # noqa: N806
    r_end = solution.r_end
    if not R > r_end:
        msg = f"The radius {R} must exceed the last sampled radius {r_end}."
        raise FitError(msg)
    radii = R - geomspace(R - r_start, R - r_end, n_points)
    radii = np.clip(radii, r_start, r_end)
    radii[-1] = r_end
    return radii, solution.evaluate(radii)


def fit_blowup_law(
    solution: RadialSolution,
    beta_hint: float | None = None,
    decades: float = 1.0,
    n_points: int = 200,
) -> BlowUpFit:
    """Fit ``v = B (R_max - r)^(-beta)`` on the terminal decade of v.

    Args:
        solution: A solution terminated by blow-up.
        beta_hint: The exponent beta if known, then only B and R_max are fitted.
        decades: The number of decades of v in the window.
        n_points: The number of resampled radii.

    Returns:
        The fitted law.

    Raises:
        FitError: If the solution did not blow up, if v is not increasing on the
            window or if the least squares do not converge.
        InsufficientDataError: If the window has too few samples.
    """
    if solution.termination != Termination.BLOW_UP:
        msg = f"The solution did not blow up; termination is {solution.termination}."
        raise FitError(msg)
    guess = blowup_radius_guess(solution)
    radii, states = terminal_window(solution, decades, n_points, guess)
    r_end = radii[-1]
    offsets = r_end - radii
    log_v = log(states[2])
    theta0 = math.log(guess - r_end)
    if beta_hint is None:
        ratio = states[2, -1] / states[3, -1]
        beta0 = (guess - r_end) / ratio
    else:
        beta0 = beta_hint
    log_b0 = log_v[-1] + beta0 * theta0

    try:
        if beta_hint is None:
            values, _ = curve_fit(
                lambda x, log_b, theta, beta: log_b - beta * log(x + exp(theta)),
                offsets,
                log_v,
                p0=(log_b0, theta0, beta0),
                maxfev=20000,
            )
            log_b, theta, beta = values
        else:
            values, _ = curve_fit(
                lambda x, log_b, theta: log_b - beta_hint * log(x + exp(theta)),
                offsets,
                log_v,
                p0=(log_b0, theta0),
                maxfev=20000,
            )
            (log_b, theta), beta = values, beta_hint
    except (RuntimeError, ValueError) as error:
        msg = f"The blow-up law could not be fitted: {error}"
        raise FitError(msg) from error

    if not (math.isfinite(theta) and math.isfinite(beta) and beta > 0):
        msg = f"The fitted blow-up law is invalid: beta={beta}, log(d)={theta}."
        raise FitError(msg)
    return BlowUpFit(
        float(r_end + math.exp(theta)),
        float(beta),
        float(math.exp(log_b)),
        len(radii),
        (float(radii[0]), float(r_end)),
    )


def fit_blowup_radius(
    solution: RadialSolution, beta_hint: float | None = None
) -> float:
    """Fit the blow-up radius on the terminal decade of v.

    Args:
        solution: A solution terminated by blow-up.
        beta_hint: The exponent of v if known, ``(q+2)/(pq-1)`` for a power f.

    Returns:
        The blow-up radius.
    """
    return fit_blowup_law(solution, beta_hint).R_max


def _problem_key(params: Params) -> tuple:
    return (
        params.p,
        str(params.nl),
        params.N,
        params.R,
        params.u0,
        params.sign_changing,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """The ordering of two solutions differing by their shooting values."""

    ordered: bool
    """Whether w, v and psi of the first solution exceed those of the second."""

    identical: bool
    """Whether the two solutions coincide."""

    first_violation: tuple[float, str] | None
    """The first radius and quantity where the ordering fails."""

    r_common: float
    """The end of the common interval of existence."""

    R_max: tuple[float | None, float | None]
    """The blow-up radii of both solutions."""


def check_comparison(
    params1: Params,
    params2: Params,
    horizon: float | None = None,
    controls: StepControls | None = None,
    n_points: int = 2000,
) -> ComparisonReport:
    """Check the ordering of two solutions with ``m1 >= m2``.

    Args:
        params1: The problem with the larger shooting value.
        params2: The problem with the smaller shooting value.
        horizon: The largest radius of the comparison.
        controls: The step controls.
        n_points: The number of radii of the comparison.

    Returns:
        The ordering report.

    Raises:
        ParameterError: If the problems differ by more than the shooting value
            or if ``m1 < m2``.
    """
    if _problem_key(params1) != _problem_key(params2):
        msg = "The problems must only differ by their shooting value."
        raise ParameterError(msg)
    if params1.m < params2.m:
        msg = f"The first shooting value must be the largest; got {params1.m} < {params2.m}."
        raise ParameterError(msg)

    solution1 = integrate(params1, controls)
    solution2 = integrate(params2, controls)
    r_common = min(solution1.r_end, solution2.r_end)
    if horizon is not None:
        r_common = min(r_common, horizon)
    radii = geomspace(max(solution1.r[0], solution2.r[0]), r_common, n_points)
    states1 = solution1.evaluate(radii)
    states2 = solution2.evaluate(radii)
    blowup_radii = (solution1.R_max, solution2.R_max)

    if params1.m == params2.m:
        identical = bool(np.allclose(states1, states2, rtol=1e-12, atol=0.0))
        return ComparisonReport(True, identical, None, r_common, blowup_radii)

    first_violation = None
    for index, name in ((1, "w"), (2, "v"), (3, "psi")):
        violations = np.nonzero(states1[index] <= states2[index])[0]
        if len(violations) and (
            first_violation is None or radii[violations[0]] < first_violation[0]
        ):
            first_violation = (float(radii[violations[0]]), name)
    if first_violation is not None:
        LOGGER.warning(
            f"The ordering fails for {first_violation[1]} at r={first_violation[0]}."
        )
    return ComparisonReport(
        first_violation is None, False, first_violation, r_common, blowup_radii
    )


def scaling_exponents(p: float, q: float) -> np.ndarray:
    """The exponents of the scaling of (u, w, v, psi) for f(t) = t^q.

    Raises:
        ParameterError: If ``pq <= 1``.
    """
    if not p * q > 1:
        msg = f"The scaling requires pq > 1; got pq = {p * q}."
        raise ParameterError(msg)
    alpha = (2 * p + 1) / (p * q - 1)
    return np.array([
        alpha - 1,
        alpha,
        (q + 2) / (p * q - 1),
        (p * q + q + 1) / (p * q - 1),
    ])


def _rescale(
    solution: RadialSolution,
    sigma: float,
    p: float,
    q: float,
    radii: ArrayLike | None = None,
) -> RadialSolution:
    """Apply the scaling of factor ``sigma`` to a solution."""
    factors = sigma ** scaling_exponents(p, q)
    params = replace(
        solution.params,
        m=factors[2] * solution.params.m,
        u0=factors[0] * solution.params.u0,
        R=None if solution.params.R is None else solution.params.R / sigma,
    )
    dense = (
        None
        if solution.dense is None
        else RescaledDenseOutput(solution.dense, sigma, factors)
    )
    if radii is None:
        r = solution.r / sigma
        states = factors[:, None] * solution.states
        truncated = False
    else:
        radii = asarray(radii, dtype=float)
        valid = (sigma * radii >= solution.r[0]) & (sigma * radii <= solution.r_end)
        truncated = not bool(np.all(valid))
        if truncated:
            LOGGER.warning(
                f"{int(np.sum(~valid))} radii are outside of the rescaled samples."
            )
        r = radii[valid]
        states = factors[:, None] * solution.evaluate(sigma * r)
    return RadialSolution(
        params,
        r,
        *states,
        termination=solution.termination,
        R_max=None if solution.R_max is None else solution.R_max / sigma,
        r_stop=None if solution.r_stop is None else solution.r_stop / sigma,
        fit_beta=solution.fit_beta,
        fit_B=solution.fit_B,
        truncated=truncated,
        dense=dense,
    )


def _check_power(solution: RadialSolution, q: float) -> None:
    nl = solution.params.nl
    if nl.kind != NonlinearityKind.POWER or not math.isclose(nl.q, q):
        msg = f"The scaling requires the nonlinearity t^{q}; got {nl}."
        raise ParameterError(msg)


def rescale_solution(
    solution: RadialSolution,
    sigma: float,
    p: float,
    q: float,
    radii: ArrayLike | None = None,
) -> RadialSolution:
    """Rescale a solution for f(t) = t^q.

    The rescaled components are ``sigma^a u(sigma r)`` with the exponents
    ``a = (2+2p-pq)/(pq-1)``, ``(2p+1)/(pq-1)``, ``(q+2)/(pq-1)`` and
    ``(pq+q+1)/(pq-1)`` for u, w, v and psi. They solve the same system.

    Args:
        solution: The solution.
        sigma: The scaling factor in (0, 1].
        p: The exponent of the first equation.
        q: The exponent of the nonlinearity.
        radii: The radii where the rescaled solution is evaluated.
            If ``None``, the samples are mapped to ``r / sigma``.
            Otherwise, radii whose image is not sampled are dropped
            and the result is flagged as truncated.

    Returns:
        The rescaled solution.

    Raises:
        ParameterError: If ``sigma`` is not in (0, 1], if ``pq <= 1``
            or if the nonlinearity is not t^q.
    """
    if not 0 < sigma <= 1:
        msg = f"The scaling factor must be in (0, 1]; got {sigma}."
        raise ParameterError(msg)
    _check_power(solution, q)
    return _rescale(solution, sigma, p, q, radii)


def normalize_to_unit_ball(solution: RadialSolution) -> RadialSolution:
    """Rescale a blowing-up solution so that it blows up at radius 1.

    Raises:
        ParameterError: If the solution did not blow up or f is not a power.
    """
    if solution.termination != Termination.BLOW_UP:
        msg = f"The solution did not blow up; termination is {solution.termination}."
        raise ParameterError(msg)
    p, q = solution.params.p, solution.params.nl.q
    _check_power(solution, q)
    return _rescale(solution, solution.R_max, p, q)


def critical_shooting_value(
    params: Params, R: float = 1.0, controls: StepControls | None = None  # noqa: N803
) -> float:
    """Compute the shooting value whose solution blows up at radius ``R``.

    A single whole-space solve gives the blow-up radius ``R_max`` of ``params``;
    the scaling then gives ``m* = m (R_max / R)^beta`` with
    ``beta = (q+2)/(pq-1)``.

    Raises:
        ParameterError: If f is not a power, if ``pq <= 1`` or if the solution does
            not blow up.
    """
    nl = params.nl
    if nl.kind != NonlinearityKind.POWER:
        msg = f"The critical shooting value requires a power nonlinearity; got {nl}."
        raise ParameterError(msg)
    beta = scaling_exponents(params.p, nl.q)[2]
    solution = integrate(replace(params, R=None), controls)
    if solution.termination != Termination.BLOW_UP:
        msg = f"The solution does not blow up; termination is {solution.termination}."
        raise ParameterError(msg)
    return params.m * (solution.R_max / R) ** beta


def ode_residual(
    solution: RadialSolution,
    r_min: float,
    r_max: float,
    n_points: int = 4001,
) -> float:
    """Compute the residual of the system by finite differences.

    The solution is evaluated on a uniform grid of [r_min, r_max] and the
    derivatives of w, v and psi are approximated by second-order differences.

    Returns:
        The largest residual relative to the magnitude of the terms of each
        equation.
    """
    radii = linspace(r_min, r_max, n_points)
    _, w, v, psi = solution.evaluate(radii)
    p = solution.params.p
    nm1 = solution.params.N - 1
    f_w = solution.params.nl.f(np.abs(w))
    v_p = copysign(np.abs(v) ** p, v)
    dw = np.gradient(w, radii, edge_order=2)
    dv = np.gradient(v, radii, edge_order=2)
    dpsi = np.gradient(psi, radii, edge_order=2)
    residuals = (
        np.abs(dw - v_p + nm1 * w / radii) / (np.abs(v_p) + nm1 * np.abs(w) / radii),
        np.abs(dv - psi) / np.abs(psi),
        np.abs(dpsi - f_w + nm1 * psi / radii) / (f_w + nm1 * np.abs(psi) / radii),
    )
    return float(max(np.max(residual) for residual in residuals))


def picard_local_solution(
    params: Params, r_max: float, n_points: int = 2001, n_iter: int = 30
) -> RadialSolution:
    """Solve the integral formulation by fixed-point iteration on [0, r_max].

    The iteration maps v to
    ``m + int_0^r psi`` with ``psi = r^(1-N) int_0^r t^(N-1) f(w)`` and
    ``w = r^(1-N) int_0^r t^(N-1) v^p``, the integrals being computed with the
    cumulative trapezoidal rule. It contracts for small ``r_max``.

    Returns:
        The solution on the grid without the origin.
    """
    radii = linspace(0.0, r_max, n_points)
    n = params.N
    weight = radii ** (n - 1)

    def radial_average(values: np.ndarray) -> np.ndarray:
        integral = cumulative_trapezoid(weight * values, radii, initial=0.0)
        average = np.zeros_like(integral)
        average[1:] = integral[1:] / weight[1:]
        return average

    v = np.full(n_points, float(params.m))
    w = np.zeros(n_points)
    psi = np.zeros(n_points)
    for _ in range(n_iter):
        w = radial_average(copysign(np.abs(v) ** params.p, v))
        psi = radial_average(params.nl.f(np.abs(w)))
        v = params.m + cumulative_trapezoid(psi, radii, initial=0.0)
    u = params.u0 + cumulative_trapezoid(w, radii, initial=0.0)
    return RadialSolution(
        params,
        radii[1:],
        u[1:],
        w[1:],
        v[1:],
        psi[1:],
        termination=Termination.REACHED_RADIUS,
    )


def integrate_biharmonic(
    nl: Nonlinearity,
    N: int,  # noqa: N803
    u0: float,
    v0: float,
    R: float | None = None,  # noqa: N803
    controls: StepControls | None = None,
) -> RadialSolution:
    """Integrate the case p = 1, where ``Delta^2 u = f(|grad u|)``.

    The values u(0) and v(0) = Delta u(0) are free and may have any sign.
    """
    params = Params(1.0, nl, N, v0, R=R, u0=u0, sign_changing=True)
    return integrate(params, controls)


@dataclass(frozen=True)
class SandwichReport:
    """The two-sided bounds of the derivatives of w and psi.

    The bounds are ``v^p / c <= w' <= v^p`` and ``f(w) / c <= psi' <= f(w)``.
    Violations are relative to the bounds and positive when a bound fails.
    """

    constant: float
    """The constant c of the lower bounds."""

    max_lower_violation: float

    max_upper_violation: float

    n_samples: int

    def holds(self, tol: float = 1e-9) -> bool:
        return max(self.max_lower_violation, self.max_upper_violation) <= tol


def check_sandwich(
    solution: RadialSolution,
    constant: float | None = None,
    decades: float | None = None,
) -> SandwichReport:
    """Check the two-sided bounds of w' and psi' at the samples.

    Args:
        solution: The solution.
        constant: The constant of the lower bounds. If ``None``, use N.
        decades: If given, only check the samples where v lies in its last
            decades and v, w are positive.

    Returns:
        The bounds report.
    """
    constant = solution.params.N if constant is None else constant
    dw, dpsi = solution.derivatives()
    v_p = copysign(np.abs(solution.v) ** solution.params.p, solution.v)
    f_w = solution.params.nl.f(np.abs(solution.w))
    mask = solution.r > 0
    if decades is not None:
        mask &= (solution.v >= solution.v[-1] * 10.0 ** (-decades)) & (
            solution.w > 0
        )
        mask &= solution.v > 0
    tiny = np.finfo(float).tiny

    def violation(bound: np.ndarray, value: np.ndarray) -> float:
        excess = (bound - value)[mask] / np.maximum(np.abs(bound[mask]), tiny)
        return float(np.max(excess)) if len(excess) else 0.0

    lower = max(violation(v_p / constant, dw), violation(f_w / constant, dpsi))
    upper = max(violation(dw, v_p), violation(dpsi, f_w))
    return SandwichReport(float(constant), lower, upper, int(np.sum(mask)))


def biharmonic_sandwich_check(
    solution: RadialSolution, decades: float = 1.0
) -> SandwichReport:
    """Check the bounds with the constant 2N on the terminal region of v."""
    return check_sandwich(solution, 2 * solution.params.N, decades)


def local_u_exponent(solution: RadialSolution, decades: float = 1.0) -> float:
    """Fit the exponent a of ``w ~ (R_max - r)^(-a)`` on the terminal window.

    u stays bounded at the blow-up radius if and only if a < 1.

    Raises:
        FitError: If the solution did not blow up.
    """
    if solution.termination != Termination.BLOW_UP:
        msg = f"The solution did not blow up; termination is {solution.termination}."
        raise FitError(msg)
    radii, states = terminal_window(solution, decades, R=solution.R_max)
    distances = solution.R_max - radii
    x = -log(distances)
    fit = local_slope_computation(
        x, log(states[1]), x_min=float(x.min()), x_max=float(x.max())
    )
    return fit.slope


def solver_outcome(solution: RadialSolution) -> Verdict | None:
    """Map a solve to the observed behaviour at the blow-up radius.

    Returns:
        ``None`` when the ball radius is reached without blow-up, Bounded when
        the solution is global, VBlowsUp when u stays bounded at the blow-up
        radius and BothBlowUp when both blow up.
    """
    if solution.termination == Termination.REACHED_RADIUS:
        return None
    if solution.termination != Termination.BLOW_UP:
        return Verdict.BOUNDED
    if local_u_exponent(solution) < 1.0:
        return Verdict.V_BLOWS_UP
    return Verdict.BOTH_BLOW_UP
