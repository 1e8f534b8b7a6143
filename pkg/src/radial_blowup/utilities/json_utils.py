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

"""JSON and CSV writers producing deterministic data files."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict
from dataclasses import is_dataclass
from pathlib import Path
from typing import TYPE_CHECKING
from typing import Any

import numpy as np
from numpy import ndarray
from pandas import DataFrame
from pydantic import BaseModel

if TYPE_CHECKING:
    from collections.abc import Mapping

LOGGER = logging.getLogger(__name__)

FULL_PRECISION = 17
"""The number of significant digits of the data files."""


class EnhancedJSONEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, (int, np.integer)):
            return int(o)
        if isinstance(o, (float, np.floating)):
            return float(o)
        if isinstance(o, (complex, np.complexfloating)):
            return [float(o.real), float(o.imag)]
        if is_dataclass(o):
            return asdict(o)
        if isinstance(o, ndarray):
            return o.tolist()
        if isinstance(o, BaseModel):
            return dict(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, DataFrame):
            return o.to_dict(orient="list")
        if isinstance(o, Path):
            return str(o)

        return super().default(o)


def round_significant(value: float, digits: int = FULL_PRECISION) -> float:
    """Round a float to a number of significant digits."""
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(f"{value:.{digits}g}")


def _to_serializable(data: Any, digits: int) -> Any:
    """Convert ``data`` to plain Python containers with rounded floats."""
    if isinstance(data, BaseModel):
        data = data.model_dump()
    elif is_dataclass(data) and not isinstance(data, type):
        data = asdict(data)
    elif isinstance(data, DataFrame):
        data = data.to_dict(orient="list")
    elif isinstance(data, ndarray):
        data = data.tolist()

    if isinstance(data, dict):
        return {str(k): _to_serializable(v, digits) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_to_serializable(v, digits) for v in data]
    if isinstance(data, (complex, np.complexfloating)):
        return [
            _to_serializable(float(data.real), digits),
            _to_serializable(float(data.imag), digits),
        ]
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        value = float(data)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return round_significant(value, digits)
    return data


def dumps_json(data: Any, digits: int = FULL_PRECISION) -> str:
    """Serialize data to a deterministic JSON string.

    Keys are sorted, floats are rounded to ``digits`` significant digits
    and non-finite floats are written as strings.

    Args:
        data: The data to serialize.
        digits: The number of significant digits.

    Returns:
        The JSON string.
    """
    return (
        json.dumps(
            _to_serializable(data, digits),
            sort_keys=True,
            indent=2,
            cls=EnhancedJSONEncoder,
        )
        + "\n"
    )


def write_json_dict(
    file_path: str | Path, data: Mapping[str, Any], digits: int = FULL_PRECISION
) -> Path:
    """Write a dictionary to a JSON file.

    Args:
        file_path: The path to the file.
        data: The data to write.
        digits: The number of significant digits.

    Returns:
        The path to the written file.
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(dumps_json(data, digits), encoding="utf-8")
    LOGGER.debug(f"Wrote {file_path}")
    return file_path


def write_csv(
    file_path: str | Path, frame: DataFrame, digits: int = FULL_PRECISION
) -> Path:
    """Write a ``DataFrame`` to a CSV file with a fixed float format.

    Args:
        file_path: The path to the file.
        frame: The data to write.
        digits: The number of significant digits.

    Returns:
        The path to the written file.
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        file_path, index=False, float_format=f"%.{digits}g", lineterminator="\n"
    )
    LOGGER.debug(f"Wrote {file_path}")
    return file_path
