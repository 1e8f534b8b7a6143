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

import pytest
from numpy import concatenate
from numpy import geomspace
from numpy import linspace

from radial_blowup.core.errors import ParameterError
from radial_blowup.core.ko_criteria import BiharmonicVerdict
from radial_blowup.core.ko_criteria import ConvergenceVerdict
from radial_blowup.core.ko_criteria import KOMethod
from radial_blowup.core.ko_criteria import Verdict
from radial_blowup.core.ko_criteria import classify_ball
from radial_blowup.core.ko_criteria import classify_biharmonic
from radial_blowup.core.ko_criteria import classify_whole_space
from radial_blowup.core.ko_criteria import ko_plain
from radial_blowup.core.ko_criteria import ko_single
from radial_blowup.core.ko_criteria import ko_sqrt_f_plain
from radial_blowup.core.ko_criteria import ko_weighted
from radial_blowup.core.ko_criteria import region_table
from radial_blowup.core.nonlinearity import CustomNonlinearity
from radial_blowup.core.nonlinearity import ExpNonlinearity
from radial_blowup.core.nonlinearity import PowerNonlinearity


@pytest.mark.parametrize(
    ("p", "q", "expected"),
    [
        (4.0, 3.0, Verdict.V_BLOWS_UP),
        (2.0, 3.0, Verdict.BOTH_BLOW_UP),
        (2.0, 2.0, Verdict.BOTH_BLOW_UP),
        (1.0, 0.5, Verdict.BOUNDED),
        (0.5, 2.0, Verdict.BOUNDED),
        (1.0, 5.0, Verdict.V_BLOWS_UP),
    ],
)
def test_classify_ball_power(p, q, expected):
    """Check the regions of the (p, q) plane for power nonlinearities."""
    classification = classify_ball(PowerNonlinearity(q), p)
    assert classification.verdict == expected
    assert classification.evidence.method == KOMethod.CLOSED_FORM


def test_borderlines():
    """Check that the borderlines pq = 1 and q = 2(1 + 1/p) count as divergent."""
    assert ko_plain(PowerNonlinearity(0.5), 2.0) == ConvergenceVerdict.DIVERGENT
    assert ko_weighted(PowerNonlinearity(3.0), 2.0) == ConvergenceVerdict.DIVERGENT
    assert ko_plain(PowerNonlinearity(3.0), 2.0) == ConvergenceVerdict.CONVERGENT


def test_exp():
    """Check that the exponential nonlinearity lets v blow up with u bounded."""
    classification = classify_ball(ExpNonlinearity(), 1.0)
    assert classification.verdict == Verdict.V_BLOWS_UP
    assert classify_whole_space(ExpNonlinearity(), 1.0).verdict == Verdict.NOT_GLOBAL


@pytest.mark.parametrize(
    ("p", "q", "expected"),
    [
        (0.5, 1.0, Verdict.GLOBAL_ON_RN),
        (1.0, 1.0, Verdict.GLOBAL_ON_RN),
        (2.0, 3.0, Verdict.NOT_GLOBAL),
    ],
)
def test_classify_whole_space(p, q, expected):
    """Check that the solutions are global if and only if pq <= 1."""
    assert classify_whole_space(PowerNonlinearity(q), p).verdict == expected


@pytest.mark.parametrize(
    ("q", "expected"),
    [
        (2.0, BiharmonicVerdict.BLOW_UP_EXISTS),
        (3.0, BiharmonicVerdict.BLOW_UP_EXISTS),
        (5.0, BiharmonicVerdict.NO_BLOW_UP),
        (1.0, BiharmonicVerdict.NO_BLOW_UP),
    ],
)
def test_classify_biharmonic(q, expected):
    """Check the existence of blow-up solutions of the biharmonic problem."""
    assert classify_biharmonic(PowerNonlinearity(q)) == expected


def test_sampled_nonlinearity():
    """Check that a sampled cubic is classified like t^3 from its fitted tail."""
    t = concatenate(([0.0], geomspace(1e-3, 1e6, 1000)))
    classification = classify_ball(CustomNonlinearity(t, t**3), 4.0)
    assert classification.evidence.method == KOMethod.TAIL_EXPONENT
    assert classification.evidence.tail_exponent_estimate == pytest.approx(
        20 / 9, rel=1e-2
    )
    assert classification.verdict == Verdict.V_BLOWS_UP


def test_short_sampled_nonlinearity(caplog):
    """Check that a nonlinearity sampled short of the tail window is not
    classified."""
    t = linspace(0.0, 10.0, 1001)
    nl = CustomNonlinearity(t, t**3)
    classification = classify_ball(nl, 4.0)
    assert classification.verdict == Verdict.INDETERMINATE
    assert classification.evidence.plain_integral == ConvergenceVerdict.INDETERMINATE
    assert (
        classification.evidence.weighted_integral == ConvergenceVerdict.INDETERMINATE
    )
    assert "known up to t=10, short of the tail window ending at 1e+06" in caplog.text
    assert classify_whole_space(nl, 4.0).verdict == Verdict.INDETERMINATE
    assert ko_single(nl) == ConvergenceVerdict.INDETERMINATE
    assert ko_sqrt_f_plain(nl, 4.0) == ConvergenceVerdict.INDETERMINATE
    assert nl.rescaled(1e5, 4.0).t_max == pytest.approx(1e6)
    assert PowerNonlinearity(3.0).t_max == math.inf


def test_sqrt_f_plain_agrees():
    """Check that the test written with sqrt(f) agrees with the plain test."""
    for p, q in [(2.0, 3.0), (0.5, 1.0), (4.0, 3.0)]:
        nl = PowerNonlinearity(q)
        assert ko_sqrt_f_plain(nl, p) == ko_plain(nl, p)


def test_ko_single():
    """Check the single-equation test."""
    assert ko_single(PowerNonlinearity(2.0)) == ConvergenceVerdict.CONVERGENT
    assert ko_single(PowerNonlinearity(1.0)) == ConvergenceVerdict.DIVERGENT
    assert ko_single(ExpNonlinearity()) == ConvergenceVerdict.CONVERGENT


def test_invalid_p():
    """Check that a non-positive p is rejected."""
    msg = "The exponent p must be positive; got -1."
    with pytest.raises(ParameterError, match=escape(msg)):
        classify_ball(PowerNonlinearity(2.0), -1)


def test_region_table():
    """Check the region table of a small grid."""
    table = region_table([2.0, 4.0], [0.25, 2.0, 3.0])
    assert list(table["region"]) == ["A", "C", "C", "A", "C", "B"]
    assert list(table.columns[:4]) == ["p", "q", "verdict", "region"]
    row = table.iloc[-1].to_dict()
    assert row["verdict"] == "VBlowsUp"
    assert row["tail_exponent"] == pytest.approx(20 / 9)
