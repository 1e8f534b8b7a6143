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

from dataclasses import dataclass
from dataclasses import field
from typing import Any

from strenum import StrEnum

from radial_blowup.tools.base_result import BaseResult

REPORT_SCHEMA_VERSION = 1


class SectionStatus(StrEnum):
    """The status of a report section."""

    OK = "ok"
    FAILED = "failed"
    SKIPPED = "skipped"


@dataclass
class ReportResult(BaseResult):
    """A consolidated report of a problem, one section per analysis."""

    document: dict[str, Any] = field(default_factory=dict)

    @property
    def failed_sections(self) -> list[str]:
        return self.document.get("failed_sections", [])

    @property
    def failed(self) -> bool:
        return bool(self.failed_sections)

    def __str__(self):
        from gemseo.utils.string_tools import MultiLineString

        text = MultiLineString()
        text.add(f"Report of {self.document['params']}:")
        text.indent()
        for name, section in self.document["sections"].items():
            line = f"{name}: {section['status']}"
            if "error" in section:
                line = f"{line} ({section['error']})"
            text.add(line)
        text.dedent()
        return str(text)
