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

"""The nonlinearity f of the second equation and its integral hierarchy.

For a nonlinearity f, the module provides f, its antiderivative
``F(s) = int_0^s f`` and the iterated integral ``FF(s) = int_0^s F``.
They are exact for the power and exponential families and computed from a
monotone piecewise cubic interpolant for sampled nonlinearities.
"""

from __future__ import annotations

import logging
import math
from abc import abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from docstring_inheritance import GoogleDocstringInheritanceMeta
from numpy import asarray
from numpy import diff
from numpy import expm1
from numpy import log
from numpy import log1p
from numpy import sqrt
from pandas import read_csv
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from strenum import StrEnum

from radial_blowup.core.errors import NonlinearityDomainError
from radial_blowup.core.errors import ParameterError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

LOGGER = logging.getLogger(__name__)

QUADRATURE_EPSABS = 1e-12
"""The absolute tolerance of the adaptive quadratures."""

QUADRATURE_EPSREL = 1e-12
"""The relative tolerance of the adaptive quadratures."""

QUADRATURE_LIMIT = 500
"""The maximum number of subintervals of the adaptive quadratures."""


class NonlinearityKind(StrEnum):
    """The families of nonlinearities."""

    POWER = "power"
    EXP = "exp"
    CUSTOM = "custom"
    SCALED = "scaled"


def _as_output(values, argument):
    """Return a float if ``argument`` is a scalar, the array otherwise."""
    if np.ndim(argument) == 0:
        return float(values)
    return values


class Nonlinearity(metaclass=GoogleDocstringInheritanceMeta):
    """A nondecreasing nonlinearity f with f(t) > 0 for t > 0.

    Instances are immutable after construction.
    """

    kind: NonlinearityKind
    """The family of the nonlinearity."""

    @abstractmethod
    def f(self, t: float | ArrayLike) -> float | np.ndarray:
        """Evaluate f.

        Args:
            t: The nonnegative argument.

        Returns:
            The value of f.
        """

    @abstractmethod
    def F(self, s: float | ArrayLike) -> float | np.ndarray:  # noqa: N802
        """Evaluate F(s), the integral of f on [0, s]."""

    @abstractmethod
    def FF(self, s: float | ArrayLike) -> float | np.ndarray:  # noqa: N802
        """Evaluate the integral of F on [0, s]."""

    @property
    @abstractmethod
    def tail_exponent(self) -> float:
        """The exponent k such that f(t) behaves like t^k at infinity.

        It is ``inf`` for a nonlinearity growing faster than any power.
        """

    @property
    def q(self) -> float | None:
        """The exponent of a power nonlinearity, ``None`` otherwise."""
        return None

    @property
    def t_max(self) -> float:
        """The largest abscissa where f is known, ``inf`` for a closed form."""
        return math.inf

    def log_FF(self, s: float) -> float:  # noqa: N802
        """Evaluate log(FF(s)) for s > 0."""
        return float(log(self.FF(s)))

    def sqrt_f(self, t: float) -> float:
        """Evaluate sqrt(f(t))."""
        return math.sqrt(self.f(t))

    def sqrt_f_integral(self, s: float) -> float:
        """Compute the integral of sqrt(f) on [0, s] by adaptive quadrature."""
        if s == 0.0:
            return 0.0
        value, _ = quad(
            self.sqrt_f,
            0.0,
            s,
            epsabs=QUADRATURE_EPSABS,
            epsrel=QUADRATURE_EPSREL,
            limit=QUADRATURE_LIMIT,
            points=self._quadrature_points(s),
        )
        return value

    def log_sqrt_f_integral(self, s: float) -> float:
        """Evaluate the logarithm of the integral of sqrt(f) on [0, s] for s > 0."""
        return math.log(self.sqrt_f_integral(s))

    def rescaled(self, lam: float, p: float) -> ScaledNonlinearity:
        """Return the nonlinearity lam^(2(1+1/p)) f(t/lam).

        If (u, v) solves the system with f in a ball of radius R,
        then (u(lam x), lam^(2/p) v(lam x)) solves it with the rescaled
        nonlinearity in the ball of radius R/lam.

        Args:
            lam: The positive scaling factor.
            p: The exponent of the first equation.
        """
        return ScaledNonlinearity(self, lam, p)

    def _quadrature_points(self, s: float) -> list[float] | None:
        """The breakpoints of f in (0, s) passed to the quadrature."""
        return None

    def __repr__(self) -> str:
        return str(self)


class PowerNonlinearity(Nonlinearity):
    """The nonlinearity f(t) = t^q."""

    kind = NonlinearityKind.POWER

    def __init__(self, q: float) -> None:
        """
        Args:
            q: The positive exponent.

        Raises:
            ParameterError: If ``q`` is not positive.
        """
        if not q > 0:
            msg = f"The exponent q must be positive; got {q}."
            raise ParameterError(msg)
        self.__q = float(q)

    @property
    def q(self) -> float:
        return self.__q

    @property
    def tail_exponent(self) -> float:
        return self.__q

    def f(self, t):
        return t**self.__q

    def F(self, s):  # noqa: N802
        q = self.__q
        return s ** (q + 1) / (q + 1)

    def FF(self, s):  # noqa: N802
        q = self.__q
        return s ** (q + 2) / ((q + 1) * (q + 2))

    def log_FF(self, s: float) -> float:  # noqa: N802
        q = self.__q
        return (q + 2) * math.log(s) - math.log((q + 1) * (q + 2))

    def __str__(self) -> str:
        return f"Power(q={self.__q:g})"


class ExpNonlinearity(Nonlinearity):
    """The nonlinearity f(t) = exp(t)."""

    kind = NonlinearityKind.EXP

    __LARGE_ARGUMENT = 700.0
    """The argument above which exp(s) is not representable."""

    @property
    def tail_exponent(self) -> float:
        return math.inf

    def f(self, t):
        if np.ndim(t):
            with np.errstate(over="ignore"):
                return np.exp(t)
        try:
            return math.exp(t)
        except OverflowError:
            return math.inf

    def sqrt_f(self, t: float) -> float:
        return math.exp(0.5 * t)

    def F(self, s):  # noqa: N802
        return _as_output(expm1(s), s)

    def FF(self, s):  # noqa: N802
        return _as_output(expm1(s) - s, s)

    def log_FF(self, s: float) -> float:  # noqa: N802
        if s < 1.0:
            return math.log(math.expm1(s) - s)
        # exp(s) - 1 - s = exp(s) (1 - (1 + s) exp(-s))
        return s + math.log1p(-(1.0 + s) * math.exp(-s))

    def log_sqrt_f_integral(self, s: float) -> float:
        if s < self.__LARGE_ARGUMENT:
            return super().log_sqrt_f_integral(s)
        # 2 (exp(s/2) - 1) = 2 exp(s/2) (1 - exp(-s/2))
        return math.log(2.0) + 0.5 * s + float(log1p(-math.exp(-0.5 * s)))

    def __str__(self) -> str:
        return "Exp"


class CustomNonlinearity(Nonlinearity):
    """A nonlinearity sampled on [0, T_max].

    Inside the sampled range, f is a monotone piecewise cubic interpolant and F, FF
    are its exact antiderivatives. Beyond T_max, f is extended by the power law
    matching the log-log slope of the last two samples.
    """

    kind = NonlinearityKind.CUSTOM

    def __init__(self, t: ArrayLike, f: ArrayLike, name: str = "") -> None:
        """
        Args:
            t: The abscissae, strictly increasing from 0.
            f: The nondecreasing values, positive for t > 0.
            name: A name used in reports.

        Raises:
            ParameterError: If the samples do not define a valid nonlinearity.
        """
        t = asarray(t, dtype=float)
        f = asarray(f, dtype=float)
        if t.ndim != 1 or t.shape != f.shape or len(t) < 2:
            msg = (
                "The samples must be two 1D arrays of the same length with at least "
                f"two items; got shapes {t.shape} and {f.shape}."
            )
            raise ParameterError(msg)
        if t[0] != 0.0:
            msg = f"The abscissae must start at 0; got {t[0]}."
            raise ParameterError(msg)
        if np.any(diff(t) <= 0.0):
            msg = "The abscissae must be strictly increasing."
            raise ParameterError(msg)
        if np.any(diff(f) < 0.0):
            msg = "The nonlinearity must be nondecreasing."
            raise ParameterError(msg)
        if np.any(f[1:] <= 0.0) or f[0] < 0.0:
            msg = "The nonlinearity must be positive for t > 0."
            raise ParameterError(msg)

        self.__name = name
        self.__t = t
        self.__t_max = float(t[-1])
        self.__f_interpolant = PchipInterpolator(t, f, extrapolate=False)
        self.__F_interpolant = self.__f_interpolant.antiderivative(1)
        self.__FF_interpolant = self.__f_interpolant.antiderivative(2)
        self.__f_max = float(f[-1])
        self.__F_max = float(self.__F_interpolant(self.__t_max))
        self.__FF_max = float(self.__FF_interpolant(self.__t_max))
        if f[-2] > 0.0:
            self.__slope = float(log(f[-1] / f[-2]) / log(t[-1] / t[-2]))
        else:
            self.__slope = float(
                self.__t_max * self.__f_interpolant.derivative()(self.__t_max) / f[-1]
            )

    @classmethod
    def from_csv(cls, file_path: str | Path) -> CustomNonlinearity:
        """Create a nonlinearity from a CSV file with the header ``t,f``.

        Args:
            file_path: The path to the file.

        Raises:
            ParameterError: If the file does not have the columns ``t`` and ``f``.
        """
        frame = read_csv(file_path)
        if not {"t", "f"}.issubset(frame.columns):
            msg = (
                f"The file {file_path} must have a header with columns 't,f'; "
                f"got {list(frame.columns)}."
            )
            raise ParameterError(msg)
        return cls(frame["t"].to_numpy(), frame["f"].to_numpy(), Path(file_path).name)

    @property
    def t_max(self) -> float:
        """The largest sampled abscissa."""
        return self.__t_max

    @property
    def tail_exponent(self) -> float:
        return self.__slope

    def f(self, t):
        t = asarray(t, dtype=float)
        inside = self.__f_interpolant(np.minimum(t, self.__t_max))
        outside = self.__f_max * (np.maximum(t, self.__t_max) / self.__t_max) ** (
            self.__slope
        )
        return _as_output(np.where(t <= self.__t_max, inside, outside), t)

    def F(self, s):  # noqa: N802
        s = asarray(s, dtype=float)
        k = self.__slope
        ratio = np.maximum(s, self.__t_max) / self.__t_max
        outside = self.__F_max + self.__f_max * self.__t_max / (k + 1) * (
            ratio ** (k + 1) - 1
        )
        inside = self.__F_interpolant(np.minimum(s, self.__t_max))
        return _as_output(np.where(s <= self.__t_max, inside, outside), s)

    def FF(self, s):  # noqa: N802
        s = asarray(s, dtype=float)
        k = self.__slope
        t_max = self.__t_max
        clipped = np.maximum(s, t_max)
        ratio = clipped / t_max
        outside = (
            self.__FF_max
            + self.__F_max * (clipped - t_max)
            + self.__f_max
            * t_max
            / (k + 1)
            * (t_max / (k + 2) * (ratio ** (k + 2) - 1) - (clipped - t_max))
        )
        inside = self.__FF_interpolant(np.minimum(s, t_max))
        return _as_output(np.where(s <= t_max, inside, outside), s)

    def _quadrature_points(self, s: float) -> list[float] | None:
        knots = self.__t[(self.__t > 0.0) & (self.__t < s)]
        if 0 < len(knots) < QUADRATURE_LIMIT // 2:
            return knots.tolist()
        return None

    def __str__(self) -> str:
        return f"Custom({self.__name})" if self.__name else "Custom"


class ScaledNonlinearity(Nonlinearity):
    """The nonlinearity c f(t/lam) with c = lam^(2(1+1/p))."""

    kind = NonlinearityKind.SCALED

    def __init__(self, base: Nonlinearity, lam: float, p: float) -> None:
        """
        Args:
            base: The nonlinearity to rescale.
            lam: The positive scaling factor.
            p: The positive exponent of the first equation.

        Raises:
            ParameterError: If ``lam`` or ``p`` is not positive.
        """
        if not lam > 0 or not p > 0:
            msg = f"The scaling factor and p must be positive; got {lam} and {p}."
            raise ParameterError(msg)
        self.__base = base
        self.__lam = float(lam)
        self.__log_factor = 2 * (1 + 1 / p) * math.log(lam)
        self.__factor = math.exp(self.__log_factor)

    @property
    def base(self) -> Nonlinearity:
        """The nonlinearity before scaling."""
        return self.__base

    @property
    def t_max(self) -> float:
        return self.__lam * self.__base.t_max

    @property
    def tail_exponent(self) -> float:
        return self.__base.tail_exponent

    def f(self, t):
        return self.__factor * self.__base.f(t / self.__lam)

    def F(self, s):  # noqa: N802
        return self.__factor * self.__lam * self.__base.F(s / self.__lam)

    def FF(self, s):  # noqa: N802
        return self.__factor * self.__lam**2 * self.__base.FF(s / self.__lam)

    def log_FF(self, s: float) -> float:  # noqa: N802
        return (
            self.__log_factor
            + 2 * math.log(self.__lam)
            + self.__base.log_FF(s / self.__lam)
        )

    def sqrt_f_integral(self, s: float) -> float:
        return (
            math.sqrt(self.__factor)
            * self.__lam
            * self.__base.sqrt_f_integral(s / self.__lam)
        )

    def __str__(self) -> str:
        return f"Scaled({self.__base}, lam={self.__lam:g})"


def create_nonlinearity(kind: str, q: float | None = None) -> Nonlinearity:
    """Create a nonlinearity from its command line description.

    Args:
        kind: Either ``power``, ``exp`` or ``custom:FILE``.
        q: The exponent of the power nonlinearity.

    Returns:
        The nonlinearity.

    Raises:
        ParameterError: If the description is invalid.
    """
    if kind == NonlinearityKind.POWER:
        if q is None:
            msg = "The exponent q is required for a power nonlinearity."
            raise ParameterError(msg)
        return PowerNonlinearity(q)
    if kind == NonlinearityKind.EXP:
        return ExpNonlinearity()
    if kind.startswith(f"{NonlinearityKind.CUSTOM}:"):
        file_path = Path(kind.split(":", 1)[1])
        if not file_path.is_file():
            msg = f"The nonlinearity file {file_path} does not exist."
            raise ParameterError(msg)
        return CustomNonlinearity.from_csv(file_path)
    msg = f"Unknown nonlinearity {kind!r}; expected power, exp or custom:FILE."
    raise ParameterError(msg)


def _check_argument(value: float, name: str) -> None:
    if value < 0:
        msg = f"The nonlinearity is defined on [0, inf); got {name}={value}."
        raise NonlinearityDomainError(msg)


def eval_f(nl: Nonlinearity, t: float) -> float:
    """Evaluate f at a nonnegative argument.

    Raises:
        NonlinearityDomainError: If ``t`` is negative.
    """
    _check_argument(t, "t")
    return nl.f(t)


def eval_F(nl: Nonlinearity, s: float) -> float:  # noqa: N802
    """Evaluate F(s), the integral of f on [0, s].

    Raises:
        NonlinearityDomainError: If ``s`` is negative.
    """
    _check_argument(s, "s")
    return nl.F(s)


def eval_FF(nl: Nonlinearity, s: float) -> float:  # noqa: N802
    """Evaluate the integral of F on [0, s].

    Raises:
        NonlinearityDomainError: If ``s`` is negative.
    """
    _check_argument(s, "s")
    return nl.FF(s)


def eval_sqrt_f_integral(nl: Nonlinearity, s: float) -> float:
    """Evaluate the integral of sqrt(f) on [0, s].

    Raises:
        NonlinearityDomainError: If ``s`` is negative.
    """
    _check_argument(s, "s")
    return nl.sqrt_f_integral(s)


def _signed_difference(log_a: float, log_b: float) -> float:
    """Return exp(log_a) - exp(log_b) without intermediate overflow.

    The result is a signed infinity when its magnitude exceeds the float range.
    """
    top = max(log_a, log_b)
    if top == -math.inf:
        return 0.0
    gap = -math.expm1(min(log_a, log_b) - top)
    with np.errstate(over="ignore"):
        magnitude = float(np.exp(top)) * gap
    return magnitude if log_a >= log_b else -magnitude


def gap_functions(nl: Nonlinearity, s: float) -> tuple[float, float]:
    """Compute the gap functions comparing the integrals of F and sqrt(f).

    With S(s) the integral of sqrt(f) on [0, s] computed by quadrature,
    the functions are ``H(s) = 2 FF(s) - S(s)^2`` and ``h(s) = FF(2s) - S(s)^2``.
    H is nonincreasing and h nondecreasing, so H <= 0 <= h.
    Values beyond the float range are returned as signed infinities.

    Args:
        nl: The nonlinearity.
        s: The nonnegative argument.

    Returns:
        The values of H and h.

    Raises:
        NonlinearityDomainError: If ``s`` is negative.
    """
    _check_argument(s, "s")
    if s == 0.0:
        return 0.0, 0.0
    log_square = 2 * math.log(nl.sqrt_f_integral(s))
    big_h = _signed_difference(math.log(2.0) + nl.log_FF(s), log_square)
    small_h = _signed_difference(nl.log_FF(2 * s), log_square)
    return big_h, small_h


def gap_functions_hold(nl: Nonlinearity, s: float, rtol: float = 1e-8) -> bool:
    """Whether H(s) <= tol and h(s) >= -tol with tol = rtol (1 + |h(s)|)."""
    big_h, small_h = gap_functions(nl, s)
    tol = rtol * (1 + abs(small_h))
    return big_h <= tol and small_h >= -tol
