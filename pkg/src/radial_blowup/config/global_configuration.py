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

"""Global radial_blowup configuration."""

from __future__ import annotations

import logging
from pathlib import Path

import yaml

from radial_blowup.config.configuration_settings import RadialBlowupSettings

LOGGER = logging.getLogger(__name__)

CONFIG_FILE_NAME = "radial_blowup.yml"


def load_user_settings(directory: str | Path = "") -> dict:
    """Load the user settings from a YAML file.

    Args:
        directory: The directory containing the file.
            If empty, use the current working directory.

    Returns:
        The settings read from the file, empty if there is no valid file.
    """
    directory = Path.cwd() if directory == "" else Path(directory)
    local_path = directory / CONFIG_FILE_NAME
    if not local_path.is_file():
        LOGGER.debug(f"No user config file {local_path}: default settings are loaded.")
        return {}
    with local_path.open(encoding="utf-8") as f:
        try:
            settings = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            LOGGER.warning(f"Ignoring invalid config file {local_path}: {exc}")
            return {}
    return settings or {}


_configuration = RadialBlowupSettings(**load_user_settings())
"""The global radial_blowup configuration."""
