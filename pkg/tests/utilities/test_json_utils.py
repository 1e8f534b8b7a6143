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
import math
from dataclasses import dataclass

import pytest
from numpy import array
from numpy import float64
from pandas import DataFrame

from radial_blowup.utilities.json_utils import dumps_json
from radial_blowup.utilities.json_utils import round_significant
from radial_blowup.utilities.json_utils import write_csv
from radial_blowup.utilities.json_utils import write_json_dict


@dataclass
class _Point:
    x: float
    y: float


@pytest.mark.parametrize(
    ("value", "digits", "expected"),
    [
        (1.23456789, 3, 1.23),
        (123456.789, 2, 120000.0),
        (0.0, 3, 0.0),
        (math.inf, 3, math.inf),
    ],
)
def test_round_significant(value, digits, expected):
    """Check the rounding to significant digits."""
    assert round_significant(value, digits) == expected


def test_dumps_json():
    """Check that keys are sorted, floats rounded and non-finite floats written."""
    text = dumps_json(
        {"b": float64(1.23456), "a": [math.nan, -math.inf], "c": _Point(1, 2.5)},
        digits=3,
    )
    data = json.loads(text)
    assert list(data) == ["a", "b", "c"]
    assert data["a"] == ["nan", "-inf"]
    assert data["b"] == 1.23
    assert data["c"] == {"x": 1, "y": 2.5}
    assert text.endswith("}\n")


def test_dumps_json_arrays():
    """Check the serialization of arrays, complex numbers and data frames."""
    data = json.loads(
        dumps_json({
            "array": array([1.0, 2.0]),
            "complex": 1 + 2j,
            "frame": DataFrame({"r": [0.5]}),
            "flag": True,
        })
    )
    assert data == {
        "array": [1.0, 2.0],
        "complex": [1.0, 2.0],
        "flag": True,
        "frame": {"r": [0.5]},
    }


def test_dumps_json_deterministic():
    """Check that the serialization does not depend on the insertion order."""
    assert dumps_json({"a": 1.0, "b": 2.0}) == dumps_json({"b": 2.0, "a": 1.0})


def test_write_json_dict(tmp_wd):
    """Check the writing of a JSON file in a new directory."""
    path = write_json_dict(tmp_wd / "out" / "data.json", {"R_max": 1.0 / 3.0}, 5)
    assert json.loads(path.read_text()) == {"R_max": 0.33333}


def test_write_csv(tmp_wd):
    """Check the float format and the absence of index of CSV files."""
    path = write_csv("data.csv", DataFrame({"r": [1.0 / 3.0], "v": [2.0]}), 4)
    assert path.read_text() == "r,v\n0.3333,2\n"
