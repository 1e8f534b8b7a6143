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

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from radial_blowup.core.ko_criteria import Verdict
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.figures.figures_tool import PROBE_RADII
from radial_blowup.tools.figures.figures_tool import FiguresTool
from radial_blowup.tools.figures.figures_tool import Ordering
from radial_blowup.tools.figures.figures_tool import ordering_in_dimension


@pytest.fixture(scope="module")
def fig2(tmp_path_factory) -> FiguresTool:
    tool = FiguresTool(working_directory=tmp_path_factory.mktemp("fig2"))
    tool.execute(figure="fig2", N_values=[2, 20], n_points=50)
    return tool


def test_fig2_outcomes(fig2):
    """Check that v blows up at radius 1 while u stays bounded."""
    result = fig2.result
    assert result.outcomes == {2: Verdict.V_BLOWS_UP, 20: Verdict.V_BLOWS_UP}
    assert result.matches_expected
    assert sorted(result.curves) == ["u_N2", "u_N20", "v_N2", "v_N20"]
    assert result.metadata.parameters == {"p": 4.0, "q": 3.0, "m": 1.0}


def test_fig2_curves(fig2):
    """Check that the curves span the unit ball and that v is clipped."""
    u = fig2.result.curves["u_N2"]
    v = fig2.result.curves["v_N2"]
    assert u.x[-1] == pytest.approx(1.0, rel=1e-6)
    assert len(u.x) == 50
    assert v.y.max() <= 50.0
    assert np.all(np.diff(v.y) >= 0)


def test_fig2_ordering(fig2):
    """Check that the normalized v increases with N at every probe radius."""
    probes = fig2.result.probes
    assert len(probes) == 6
    assert set(probes["x"]) == {0.3, 0.5, 0.7}
    for x in PROBE_RADII:
        v = probes[probes["x"] == x].set_index("N")["v"]
        assert v[20] > v[2]
    assert fig2.result.v_ordering == Ordering.INCREASING
    assert fig2.result.ordering_matches_expected
    assert "Ordering of v in N: Increasing (expected Increasing)" in str(fig2.result)


@pytest.mark.parametrize(
    ("values", "expected"),
    [
        ([1.0, 2.0, 3.0, 4.0], Ordering.INCREASING),
        ([4.0, 3.0, 2.0, 1.0], Ordering.DECREASING),
        ([1.0, 2.0, 4.0, 3.0], Ordering.MIXED),
    ],
)
def test_ordering_in_dimension(values, expected):
    """Check the ordering of probed values over two radii and two dimensions."""
    probes = pd.DataFrame({"x": [0.3, 0.3, 0.5, 0.5], "N": [2, 20, 2, 20], "v": values})
    assert ordering_in_dimension(probes, "v") == expected


def test_ordering_in_dimension_single():
    """Check that no ordering is reported for a single dimension."""
    probes = pd.DataFrame({"x": [0.3, 0.5], "N": [2, 2], "v": [1.0, 2.0]})
    assert ordering_in_dimension(probes, "v") is None


def test_fig2_export(fig2, tmp_wd):
    """Check the names of the exported files."""
    paths = fig2.export("run")
    assert [path.name for path in paths] == [
        "run_fig2_u_N2.csv",
        "run_fig2_v_N2.csv",
        "run_fig2_u_N20.csv",
        "run_fig2_v_N20.csv",
        "run_fig2_summary.json",
    ]
    assert list(pd.read_csv("run_fig2_u_N2.csv").columns) == ["x", "u"]
    summary = json.loads(Path("run_fig2_summary.json").read_text())
    assert summary["outcomes"] == {"2": "VBlowsUp", "20": "VBlowsUp"}
    assert summary["expected_outcome"] == "VBlowsUp"
    assert summary["v_ordering"] == summary["expected_v_ordering"] == "Increasing"

    paths = fig2.export("run", FileFormat.JSON)
    assert paths[0].name == "run_fig2_u_N2.json"


@pytest.mark.medium_slow
def test_fig3(tmp_wd):
    """Check that u and v blow up at radius 1 for the default dimensions."""
    tool = FiguresTool()
    result = tool.execute(figure="fig3")
    assert set(result.outcomes) == {2, 20, 40}
    assert result.matches_expected
    assert len(result.curves) == 6
    for x in PROBE_RADII:
        v = result.probes[result.probes["x"] == x].set_index("N")["v"]
        assert v[2] < v[20] < v[40]
    assert result.v_ordering == Ordering.INCREASING
    assert result.ordering_matches_expected
    assert len(tool.export("fig")) == 7
