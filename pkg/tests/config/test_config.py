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

import pytest
from pydantic import ValidationError

from radial_blowup.config.config_components import SolverDefaults
from radial_blowup.config.configuration_settings import RadialBlowupSettings
from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.config.global_configuration import load_user_settings


def test_config_defaults():
    """Check the default solver controls."""
    solver = SolverDefaults()
    assert solver.r0 == 1e-6
    assert solver.rtol == 1e-9
    assert solver.atol == 1e-12
    assert solver.v_ceiling == 1e8
    assert solver.r_horizon == 1e6
    assert solver.u0 == 1.0
    assert solver.method == "RK45"


def test_config_from_env_var(monkeypatch):
    """Check that configuration can be set from environment variables."""
    monkeypatch.setenv("RADIAL_BLOWUP_THREADS", "3")
    monkeypatch.setenv("RADIAL_BLOWUP_SOLVER__RTOL", "1e-7")
    config_ = RadialBlowupSettings()
    assert config_.threads == 3
    assert config_.model_dump()["solver"]["rtol"] == 1e-7


def test_config_set_attr():
    """Check that configuration can be set from attribute assignment."""
    threads = config.threads
    config.threads = 4
    assert config.model_dump()["threads"] == 4
    config.threads = threads


def test_config_set_attr_validated():
    """Check that an assignment is validated."""
    with pytest.raises(ValidationError):
        config.threads = 0


def test_config_with_config_file(tmp_wd):
    """Check that configuration can be set from a .env file."""
    with (tmp_wd / ".env").open("w") as f:
        f.write(
            'RADIAL_BLOWUP_THREADS="2"\n'
            'RADIAL_BLOWUP_SOLVER__METHOD="DOP853"\n'
            'RADIAL_BLOWUP_LOGGING="debug"\n'
        )

    config_ = RadialBlowupSettings()
    assert config_.threads == 2
    assert config_.solver.method == "DOP853"
    assert config_.logging == "debug"


def test_config_bad_method(tmp_wd):
    """Check that configuration raises error for an unknown integration method."""
    with (tmp_wd / ".env").open("w") as f:
        f.write('RADIAL_BLOWUP_SOLVER__METHOD="Euler"\n')

    with pytest.raises(ValidationError) as excinfo:
        RadialBlowupSettings()
    assert "Value error, Euler is not a supported method." in str(excinfo.value)


def test_config_extra_field():
    """Check that unknown settings are forbidden."""
    with pytest.raises(ValidationError):
        RadialBlowupSettings(tolerance=1.0)


def test_user_settings_file(tmp_wd):
    """Check the loading of the YAML settings file."""
    (tmp_wd / "radial_blowup.yml").write_text(
        "threads: 5\nsolver:\n  v_ceiling: 1.0e+6\n"
    )
    settings = load_user_settings()
    assert settings == {"threads": 5, "solver": {"v_ceiling": 1e6}}
    config_ = RadialBlowupSettings(**settings)
    assert config_.solver.v_ceiling == 1e6


def test_user_settings_missing_or_invalid(tmp_wd):
    """Check that a missing or invalid YAML file gives empty settings."""
    assert load_user_settings(tmp_wd) == {}
    (tmp_wd / "radial_blowup.yml").write_text("threads: [5\n")
    assert load_user_settings(tmp_wd) == {}
