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
from argparse import ArgumentTypeError
from pathlib import Path
from re import escape

import pandas as pd
import pytest

from radial_blowup.cli.entry_point import EXIT_FAILURE
from radial_blowup.cli.entry_point import EXIT_SUCCESS
from radial_blowup.cli.entry_point import EXIT_USAGE
from radial_blowup.cli.entry_point import main
from radial_blowup.cli.entry_point import parse_values
from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.errors import IntegrationError
from radial_blowup.core.errors import ParameterError
from radial_blowup.tools.solve import radial_solve_tool


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("2", [2.0]),
        ("0.5,1,4", [0.5, 1.0, 4.0]),
        ("1:2:3", [1.0, 1.5, 2.0]),
    ],
)
def test_parse_values(text, expected):
    """Check the parsing of a single value, a list and a range."""
    assert parse_values(text) == pytest.approx(expected)


@pytest.mark.parametrize(
    ("text", "msg"),
    [
        ("a,b", "Invalid values 'a,b'"),
        ("1:2", "Invalid values '1:2'"),
        ("1:2:0", "The number of values must be positive in '1:2:0'."),
    ],
)
def test_parse_values_errors(text, msg):
    """Check that invalid values are rejected."""
    with pytest.raises(ArgumentTypeError, match=escape(msg)):
        parse_values(text)


def test_classify(tmp_wd):
    """Check the classification of a single point."""
    assert main(["classify", "--p", "4", "--q", "3", "--out", "out/grid"]) == (
        EXIT_SUCCESS
    )
    frame = pd.read_csv("out/grid_regions.csv")
    assert frame["region"].tolist() == ["B"]


def test_classify_grid_json(tmp_wd):
    """Check the json output of a classification grid."""
    argv = ["classify", "--p", "2,4", "--q", "0.25:3:2", "--format", "json"]
    assert main([*argv, "--out", "grid"]) == EXIT_SUCCESS
    rows = json.loads(Path("grid_regions.json").read_text())["rows"]
    assert [row["region"] for row in rows] == ["A", "C", "A", "B"]


def test_deterministic_output(tmp_wd):
    """Check that two identical runs write identical files."""
    argv = ["solve", "--p", "2", "--q", "3", "--round", "10"]
    assert main([*argv, "--out", "first"]) == EXIT_SUCCESS
    assert main([*argv, "--out", "second"]) == EXIT_SUCCESS
    for suffix in ("_solution.csv", "_solution.json"):
        first = Path(f"first{suffix}").read_text()
        assert first == Path(f"second{suffix}").read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--p", "-1"],
        ["solve", "--N", "1"],
        ["solve", "--m", "-1"],
        ["solve", "--f", "cosh"],
        ["solve", "--R", "1", "--whole-space"],
        ["classify", "--p", "a"],
        ["rates", "--f", "exp"],
        ["rates", "--p", "0.5", "--q", "1"],
        ["whole-space", "--p", "2", "--q", "3"],
        ["dynsys", "--p", "0.5", "--q", "1"],
        ["figures", "fig4"],
        ["bar"],
    ],
)
def test_usage_errors(tmp_wd, argv):
    """Check that invalid arguments exit with the usage code without writing any
    file."""
    assert main([*argv, "--out", "out/run"]) == EXIT_USAGE
    assert not Path("out").exists()


@pytest.mark.parametrize(
    ("error", "msg"),
    [
        (IntegrationError, "The solution is not finite."),
        (ParameterError, "The problem is invalid for the integration."),
    ],
)
def test_computation_failure(tmp_wd, monkeypatch, error, msg):
    """Check that an error raised by the computation exits with the failure code."""

    def fail(*args, **kwargs):
        raise error(msg)

    monkeypatch.setattr(radial_solve_tool, "integrate", fail)
    assert main(["solve", "--out", "run"]) == EXIT_FAILURE
    assert not Path("run_solution.csv").exists()


def test_threads(tmp_wd, monkeypatch):
    """Check that the number of threads is taken from the command line."""
    monkeypatch.setattr(config, "threads", config.threads)
    argv = ["classify", "--p", "4", "--q", "3", "--threads", "2", "--out", "grid"]
    assert main(argv) == EXIT_SUCCESS
    assert config.threads == 2


def test_dynsys(tmp_wd):
    """Check the files written by the analysis of the whole-space field."""
    argv = ["dynsys", "--field", "whole_space", "--p", "0.5", "--q", "1", "--N", "3"]
    assert main([*argv, "--out", "ws"]) == EXIT_SUCCESS
    data = json.loads(Path("ws_equilibria.json").read_text())
    assert data["stability_trace"]["constant_term"] > 0


@pytest.mark.medium_slow
def test_figures(tmp_wd):
    """Check that the figure command writes one file per curve and a summary."""
    assert main(["figures", "fig2", "--out", "fig"]) == EXIT_SUCCESS
    curves = sorted(path.name for path in Path().glob("fig_fig2_*_N*.csv"))
    assert curves == [
        "fig_fig2_u_N2.csv",
        "fig_fig2_u_N20.csv",
        "fig_fig2_u_N40.csv",
        "fig_fig2_v_N2.csv",
        "fig_fig2_v_N20.csv",
        "fig_fig2_v_N40.csv",
    ]
    assert Path("fig_fig2_summary.json").is_file()
