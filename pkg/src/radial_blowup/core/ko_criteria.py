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

"""Integral tests deciding which boundary behaviours radial solutions can have.

The plain test is the convergence of the integral of
``(FF(s))^(-p/(2p+1))`` on [1, inf), the weighted test the same integral with the
integrand multiplied by s. Their verdicts are combined into the classification of
positive radial solutions on balls and on the whole space.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy import geomspace
from numpy import log
from pandas import DataFrame
from strenum import StrEnum

from radial_blowup.core.errors import ParameterError
from radial_blowup.core.nonlinearity import NonlinearityKind
from radial_blowup.core.nonlinearity import PowerNonlinearity
from radial_blowup.lib_radial.fit_utilities import local_slope_computation

if TYPE_CHECKING:
    from collections.abc import Callable
    from collections.abc import Iterable

    from radial_blowup.core.nonlinearity import Nonlinearity

LOGGER = logging.getLogger(__name__)

TAIL_WINDOW = (1e3, 1e6)
"""The window in s where the tail exponent of an integrand is fitted."""

USABLE_RANGE = (1.0, 1e8)
"""The range in s where a sampled nonlinearity must give a finite integrand."""

TAIL_MARGIN = 0.05
"""The margin around the critical exponent below which a fit is inconclusive."""

N_TAIL_POINTS = 40

BORDERLINE_RTOL = 1e-12


class ConvergenceVerdict(StrEnum):
    """The verdict of an integral test."""

    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    INDETERMINATE = "indeterminate"


class KOMethod(StrEnum):
    """The method used to decide an integral test."""

    CLOSED_FORM = "closed_form"
    TAIL_EXPONENT = "tail_exponent"


class Verdict(StrEnum):
    """The classification of positive radial solutions."""

    BOUNDED = "Bounded"
    """All solutions are bounded."""

    V_BLOWS_UP = "VBlowsUp"
    """There are solutions with v blowing up at the boundary and u bounded."""

    BOTH_BLOW_UP = "BothBlowUp"
    """There are solutions with u and v blowing up at the boundary."""

    GLOBAL_ON_RN = "GlobalOnRN"
    """The solutions are defined on the whole space."""

    NOT_GLOBAL = "NotGlobal"
    """Every solution blows up at a finite radius."""

    INDETERMINATE = "Indeterminate"


class BiharmonicVerdict(StrEnum):
    """The existence of boundary blow-up solutions for p = 1."""

    BLOW_UP_EXISTS = "BlowUpExists"
    NO_BLOW_UP = "NoBlowUp"
    INDETERMINATE = "Indeterminate"


REGION_LETTERS = {
    Verdict.BOUNDED: "A",
    Verdict.V_BLOWS_UP: "B",
    Verdict.BOTH_BLOW_UP: "C",
    Verdict.INDETERMINATE: "?",
}
"""The letters of the regions of the (p, q) plane."""


@dataclass(frozen=True)
class KOReport:
    """The evidence of the two integral tests."""

    p: float

    plain_integral: ConvergenceVerdict

    weighted_integral: ConvergenceVerdict

    method: KOMethod

    tail_exponent_estimate: float
    """The decay exponent of the plain integrand, ``inf`` for exponential decay."""

    def to_dict(self, q: float | None = None) -> dict:
        """The report with the keys of the JSON schema."""
        return {
            "p": self.p,
            "q": q,
            "plain": str(self.plain_integral),
            "weighted": str(self.weighted_integral),
            "method": str(self.method),
            "tail_exponent": self.tail_exponent_estimate,
        }


@dataclass(frozen=True)
class Classification:
    """A verdict and the integral tests behind it."""

    verdict: Verdict

    evidence: KOReport

    def to_dict(self, q: float | None = None) -> dict:
        data = self.evidence.to_dict(q)
        data["verdict"] = str(self.verdict)
        return data


def _check_p(p: float) -> None:
    if not p > 0:
        msg = f"The exponent p must be positive; got {p}."
        raise ParameterError(msg)


def _exceeds(value: float, threshold: float) -> bool:
    """Whether value > threshold, equality up to rounding counting as not."""
    if math.isclose(value, threshold, rel_tol=BORDERLINE_RTOL):
        return False
    return value > threshold


def _samples_cover_tail(nl: Nonlinearity) -> bool:
    """Whether f is known up to the end of the tail window."""
    if nl.t_max >= TAIL_WINDOW[1]:
        return True
    LOGGER.warning(
        f"The nonlinearity is known up to t={nl.t_max:g}, short of the tail "
        f"window ending at {TAIL_WINDOW[1]:g}; the verdict is indeterminate."
    )
    return False


def _closed_form_exponent(nl: Nonlinearity, p: float) -> float:
    """The decay exponent of the plain integrand for a built-in nonlinearity."""
    if nl.kind == NonlinearityKind.EXP:
        return math.inf
    return (nl.q + 2) * p / (2 * p + 1)


def _tail_fit(
    log_integrand: Callable[[float], float], shift: float = 0.0
) -> tuple[ConvergenceVerdict, float]:
    """Decide the convergence of an integral from the log-log slope of its integrand.

    Args:
        log_integrand: The logarithm of the integrand as a function of s.
        shift: The exponent added to the fitted slope,
            1 for an integrand multiplied by s.

    Returns:
        The verdict and the fitted decay exponent.
    """
    usable = geomspace(*USABLE_RANGE, N_TAIL_POINTS)
    values = np.array([log_integrand(s) for s in usable])
    if not np.all(np.isfinite(values)):
        LOGGER.warning(
            "The integrand is not finite on the usable range "
            f"[{USABLE_RANGE[0]:g}, {USABLE_RANGE[1]:g}]."
        )
        return ConvergenceVerdict.INDETERMINATE, math.nan

    s_values = geomspace(*TAIL_WINDOW, N_TAIL_POINTS)
    fit = local_slope_computation(
        log(s_values),
        np.array([log_integrand(s) for s in s_values]),
        x_min=math.log(TAIL_WINDOW[0]) * (1 - 1e-12),
        x_max=math.log(TAIL_WINDOW[1]) * (1 + 1e-12),
    )
    slope = fit.slope + shift
    if slope < -(1 + TAIL_MARGIN):
        verdict = ConvergenceVerdict.CONVERGENT
    elif slope > -(1 - TAIL_MARGIN):
        verdict = ConvergenceVerdict.DIVERGENT
    else:
        verdict = ConvergenceVerdict.INDETERMINATE
        LOGGER.warning(
            f"The fitted tail slope {slope:.4f} is within {TAIL_MARGIN} of -1."
        )
    return verdict, -fit.slope


def _report(nl: Nonlinearity, p: float) -> KOReport:
    """Run both integral tests."""
    _check_p(p)
    if nl.kind in (NonlinearityKind.POWER, NonlinearityKind.EXP):
        sigma = _closed_form_exponent(nl, p)
        plain = (
            ConvergenceVerdict.CONVERGENT
            if _exceeds(sigma, 1.0)
            else ConvergenceVerdict.DIVERGENT
        )
        weighted = (
            ConvergenceVerdict.CONVERGENT
            if _exceeds(sigma, 2.0)
            else ConvergenceVerdict.DIVERGENT
        )
        return KOReport(p, plain, weighted, KOMethod.CLOSED_FORM, sigma)

    if not _samples_cover_tail(nl):
        indeterminate = ConvergenceVerdict.INDETERMINATE
        return KOReport(
            p, indeterminate, indeterminate, KOMethod.TAIL_EXPONENT, math.nan
        )

    theta = p / (2 * p + 1)

    def log_integrand(s: float) -> float:
        return -theta * nl.log_FF(s)

    plain, sigma = _tail_fit(log_integrand)
    weighted, _ = _tail_fit(log_integrand, shift=1.0)
    return KOReport(p, plain, weighted, KOMethod.TAIL_EXPONENT, sigma)


def ko_plain(nl: Nonlinearity, p: float) -> ConvergenceVerdict:
    """Decide the convergence of the plain integral test.

    Args:
        nl: The nonlinearity.
        p: The positive exponent of the first equation.

    Returns:
        Whether the integral of ``FF(s)^(-p/(2p+1))`` on [1, inf) converges.

    Raises:
        ParameterError: If ``p`` is not positive.
    """
    return _report(nl, p).plain_integral


def ko_weighted(nl: Nonlinearity, p: float) -> ConvergenceVerdict:
    """Decide the convergence of the weighted integral test.

    Args:
        nl: The nonlinearity.
        p: The positive exponent of the first equation.

    Returns:
        Whether the integral of ``s FF(s)^(-p/(2p+1))`` on [1, inf) converges.

    Raises:
        ParameterError: If ``p`` is not positive.
    """
    return _report(nl, p).weighted_integral


def ko_report(nl: Nonlinearity, p: float) -> KOReport:
    """Run both integral tests and return the evidence."""
    return _report(nl, p)


def _ball_verdict(report: KOReport) -> Verdict:
    if report.plain_integral == ConvergenceVerdict.DIVERGENT:
        return Verdict.BOUNDED
    if report.weighted_integral == ConvergenceVerdict.CONVERGENT:
        return Verdict.V_BLOWS_UP
    if (
        report.plain_integral == ConvergenceVerdict.CONVERGENT
        and report.weighted_integral == ConvergenceVerdict.DIVERGENT
    ):
        return Verdict.BOTH_BLOW_UP
    return Verdict.INDETERMINATE


def classify_ball(nl: Nonlinearity, p: float) -> Classification:
    """Classify the positive radial solutions in a ball.

    A divergent plain integral gives bounded solutions only, a convergent weighted
    integral gives solutions with v blowing up and u bounded at the boundary, and a
    convergent plain integral with a divergent weighted one gives solutions with
    both components blowing up.

    Raises:
        ParameterError: If ``p`` is not positive.
    """
    report = _report(nl, p)
    return Classification(_ball_verdict(report), report)


def classify_whole_space(nl: Nonlinearity, p: float) -> Classification:
    """Classify the positive radial solutions on the whole space.

    Raises:
        ParameterError: If ``p`` is not positive.
    """
    report = _report(nl, p)
    verdict = {
        ConvergenceVerdict.DIVERGENT: Verdict.GLOBAL_ON_RN,
        ConvergenceVerdict.CONVERGENT: Verdict.NOT_GLOBAL,
        ConvergenceVerdict.INDETERMINATE: Verdict.INDETERMINATE,
    }[report.plain_integral]
    return Classification(verdict, report)


def classify_biharmonic(nl: Nonlinearity) -> BiharmonicVerdict:
    """Decide the existence of boundary blow-up solutions of the biharmonic problem.

    They exist if and only if the plain test with p = 1 converges and the weighted
    one diverges.
    """
    verdict = classify_ball(nl, 1.0).verdict
    if verdict == Verdict.BOTH_BLOW_UP:
        return BiharmonicVerdict.BLOW_UP_EXISTS
    if verdict == Verdict.INDETERMINATE:
        return BiharmonicVerdict.INDETERMINATE
    return BiharmonicVerdict.NO_BLOW_UP


def ko_sqrt_f_plain(nl: Nonlinearity, p: float) -> ConvergenceVerdict:
    """Decide the plain test written with the integral of sqrt(f).

    The integrand is ``S(s)^(-2p/(2p+1))`` with S the integral of sqrt(f) on
    [0, s]. The verdict is always obtained from the fitted tail exponent, so that it
    can be compared with :func:`ko_plain`.

    Raises:
        ParameterError: If ``p`` is not positive.
    """
    _check_p(p)
    theta = 2 * p / (2 * p + 1)
    if not _samples_cover_tail(nl):
        return ConvergenceVerdict.INDETERMINATE
    verdict, _ = _tail_fit(lambda s: -theta * nl.log_sqrt_f_integral(s))
    return verdict


def ko_single(nl: Nonlinearity) -> ConvergenceVerdict:
    """Decide the single-equation test, the convergence of the integral of F^(-1/2).

    The single equation ``Delta v = f(v)`` has solutions blowing up at the boundary
    of a ball if and only if this integral converges on [1, inf).
    """
    if nl.kind == NonlinearityKind.EXP:
        return ConvergenceVerdict.CONVERGENT
    if nl.kind == NonlinearityKind.POWER:
        if _exceeds(nl.q, 1.0):
            return ConvergenceVerdict.CONVERGENT
        return ConvergenceVerdict.DIVERGENT
    if not _samples_cover_tail(nl):
        return ConvergenceVerdict.INDETERMINATE
    verdict, _ = _tail_fit(lambda s: -0.5 * math.log(nl.F(s)))
    return verdict


def region_table(
    p_values: Iterable[float],
    q_values: Iterable[float],
) -> DataFrame:
    """Classify a grid of power nonlinearities.

    Args:
        p_values: The values of p.
        q_values: The values of q.

    Returns:
        One row per (p, q) with the verdict, its region letter and both tests.
    """
    rows = []
    for p in p_values:
        for q in q_values:
            classification = classify_ball(PowerNonlinearity(q), p)
            row = classification.to_dict(q)
            row["region"] = REGION_LETTERS[classification.verdict]
            rows.append(row)
    return DataFrame(
        rows,
        columns=[
            "p",
            "q",
            "verdict",
            "region",
            "plain",
            "weighted",
            "method",
            "tail_exponent",
        ],
    )
