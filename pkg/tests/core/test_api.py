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

import logging

import pytest

from radial_blowup.api import activate_logger
from radial_blowup.api import create_tool
from radial_blowup.api import get_available_tools
from radial_blowup.tools.classification.classification_tool import (
    ClassificationTool,
)


def test_available_tools():
    """Check that the tools are found by the factory."""
    assert sorted(get_available_tools()) == [
        "ClassificationTool",
        "DynamicalSystemTool",
        "FiguresTool",
        "RadialSolveTool",
        "RateVerificationTool",
        "ReportTool",
        "WholeSpaceTool",
    ]


def test_create_tool(tmp_wd):
    """Check that a tool is created from its class name with constructor options."""
    tool = create_tool("ClassificationTool", working_directory="out", name="grid")
    assert isinstance(tool, ClassificationTool)
    assert tool.name == "grid"
    tool.execute(p_values=[4.0], q_values=[3.0])
    assert tool.working_directory.name == "out"


def test_unknown_tool():
    """Check that an unknown tool name raises an error."""
    with pytest.raises(ImportError):
        create_tool("FooTool")


def test_activate_logger():
    """Check that the logging level can be changed."""
    activate_logger(logging.DEBUG)
    assert logging.getLogger("radial_blowup").getEffectiveLevel() <= logging.DEBUG
    activate_logger()
