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

"""The command line interface.

Each command validates its flags before computing anything and writes data files
named after the ``--out`` prefix. The exit code is 0 on success, 1 when a
computation fails and 2 on a usage error.
"""

from __future__ import annotations

import logging
import sys
from argparse import ArgumentParser
from argparse import ArgumentTypeError
from pathlib import Path
from typing import TYPE_CHECKING

from numpy import linspace
from pydantic import ValidationError

from radial_blowup.api import create_tool
from radial_blowup.config.global_configuration import _configuration as config
from radial_blowup.core.asymptotics import ball_rates
from radial_blowup.core.asymptotics import whole_space_rates
from radial_blowup.core.dynsys import BallField
from radial_blowup.core.errors import FitError
from radial_blowup.core.errors import InsufficientDataError
from radial_blowup.core.errors import IntegrationError
from radial_blowup.core.errors import ParameterError
from radial_blowup.tools.base_tool import FileFormat
from radial_blowup.tools.classification.classification_tool import (
    ClassificationSettings,
)
from radial_blowup.tools.dynsys.dynamical_system_tool import DynamicalSystemSettings
from radial_blowup.tools.dynsys.dynamical_system_tool import FieldKind
from radial_blowup.tools.figures.figures_tool import Figure
from radial_blowup.tools.figures.figures_tool import FiguresSettings
from radial_blowup.tools.problem_settings import build_params
from radial_blowup.tools.rates.rate_verification_tool import RateVerificationSettings
from radial_blowup.tools.report.report_tool import ReportSettings
from radial_blowup.tools.solve.radial_solve_tool import RadialSolveSettings
from radial_blowup.tools.whole_space.whole_space_tool import WholeSpaceSettings
from radial_blowup.utilities.json_utils import FULL_PRECISION

if TYPE_CHECKING:
    from argparse import Namespace
    from collections.abc import Sequence

    from radial_blowup.tools.base_settings import BaseSettings

LOGGER = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

COMPUTATION_ERRORS = (
    IntegrationError,
    FitError,
    InsufficientDataError,
    ParameterError,
)


def parse_values(text: str) -> list[float]:
    """Parse a single value, a comma-separated list or a range ``start:stop:num``."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            if int(num) < 1:
                msg = f"The number of values must be positive in {text!r}."
                raise ArgumentTypeError(msg)
            return linspace(float(start), float(stop), int(num)).tolist()
        return [float(value) for value in text.split(",")]
    except ValueError as error:
        msg = f"Invalid values {text!r}: expected x, x1,x2,... or start:stop:num."
        raise ArgumentTypeError(msg) from error


def _add_problem_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("--p", type=float, default=2.0, help="The exponent of v^p.")
    parser.add_argument(
        "--q", type=float, default=3.0, help="The exponent of |grad u|^q."
    )
    parser.add_argument(
        "--f", default="power", help="The nonlinearity: power, exp or custom:FILE."
    )
    parser.add_argument("--N", type=int, default=2, help="The space dimension.")
    parser.add_argument("--m", type=float, default=1.0, help="The value v(0).")
    parser.add_argument("--rtol", type=float, default=config.solver.rtol)


def _build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument(
        "--out", default="radial_blowup", help="The prefix of the output files."
    )
    common.add_argument(
        "--format",
        choices=[str(file_format) for file_format in FileFormat],
        default=FileFormat.CSV,
        help="The format of the tabular data.",
    )
    common.add_argument(
        "--round",
        type=int,
        default=None,
        metavar="DIGITS",
        help="The number of significant digits of the floats.",
    )
    common.add_argument(
        "--threads", type=int, default=None, help="The number of concurrent solves."
    )

    parser = ArgumentParser(
        prog="radial_blowup",
        description="Existence, blow-up and asymptotics of radial solutions of "
        "Delta u = v^p, Delta v = f(|grad u|).",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    classify = commands.add_parser(
        "classify", parents=[common], help="Classify a grid of (p, q)."
    )
    classify.add_argument("--p", type=parse_values, default=[2.0])
    classify.add_argument("--q", type=parse_values, default=[3.0])
    classify.add_argument("--f", default="power")
    classify.add_argument("--N", type=int, default=2)
    classify.add_argument("--m", type=float, default=1.0)
    classify.add_argument("--rtol", type=float, default=config.solver.rtol)
    classify.add_argument(
        "--cross-check",
        action="store_true",
        help="Compare the verdicts with whole-space solves.",
    )

    solve = commands.add_parser(
        "solve", parents=[common], help="Integrate a radial problem."
    )
    _add_problem_arguments(solve)
    domain = solve.add_mutually_exclusive_group()
    domain.add_argument("--R", type=float, default=None, help="The ball radius.")
    domain.add_argument("--whole-space", action="store_true")
    solve.add_argument("--v-ceiling", type=float, default=config.solver.v_ceiling)
    solve.add_argument(
        "--biharmonic", action="store_true", help="Allow a v(0) of any sign, p = 1."
    )

    rates = commands.add_parser(
        "rates", parents=[common], help="Verify the blow-up rates."
    )
    _add_problem_arguments(rates)
    rates.add_argument("--v-ceiling", type=float, default=config.solver.v_ceiling)
    rates.add_argument("--decades", type=float, default=1.0)

    whole_space = commands.add_parser(
        "whole-space", parents=[common], help="Verify the whole-space asymptotics."
    )
    whole_space.add_argument("--p", type=float, default=0.5)
    whole_space.add_argument("--q", type=float, default=1.0)
    whole_space.add_argument("--N", type=int, default=3)
    whole_space.add_argument("--m", type=float, default=1.0)
    whole_space.add_argument("--r-eval", type=float, default=1e5)
    whole_space.add_argument("--rtol", type=float, default=config.solver.rtol)

    dynsys = commands.add_parser(
        "dynsys", parents=[common], help="Analyse a reduced autonomous field."
    )
    dynsys.add_argument(
        "--field", choices=[str(kind) for kind in FieldKind], default=FieldKind.BALL
    )
    dynsys.add_argument("--p", type=float, default=2.0)
    dynsys.add_argument("--q", type=float, default=3.0)
    dynsys.add_argument("--N", type=int, default=2)
    dynsys.add_argument("--m-over-B", type=float, default=None)
    dynsys.add_argument("--t-end", type=float, default=12.0)

    figures = commands.add_parser(
        "figures", parents=[common], help="Compute the normalized profiles."
    )
    figures.add_argument("which", choices=[str(figure) for figure in Figure])
    figures.add_argument("--N", type=int, nargs="+", default=[2, 20, 40])
    figures.add_argument("--m", type=float, default=1.0)
    figures.add_argument("--rtol", type=float, default=config.solver.rtol)

    report = commands.add_parser(
        "report", parents=[common], help="Write a consolidated report."
    )
    _add_problem_arguments(report)
    report.add_argument("--r-eval", type=float, default=1e5)
    return parser


def _settings(args: Namespace) -> tuple[str, BaseSettings]:
    """Create and validate the tool settings of a command.

    Raises:
        ValidationError: If a flag is invalid.
        ParameterError: If the problem is invalid.
    """
    if args.command == "classify":
        return "ClassificationTool", ClassificationSettings(
            p_values=args.p,
            q_values=args.q,
            f=args.f,
            N=args.N,
            m=args.m,
            rtol=args.rtol,
            cross_check=args.cross_check,
            threads=config.threads,
        )
    if args.command in ("solve", "rates"):
        options = {
            "p": args.p,
            "q": args.q,
            "f": args.f,
            "N": args.N,
            "m": args.m,
            "R": getattr(args, "R", None),
            "rtol": args.rtol,
            "v_ceiling": args.v_ceiling,
        }
        if args.command == "solve":
            settings = RadialSolveSettings(**options, biharmonic=args.biharmonic)
            build_params(settings.model_dump(), sign_changing=args.biharmonic)
            return "RadialSolveTool", settings
        settings = RateVerificationSettings(**options, decades=args.decades)
        if settings.f != "power":
            msg = "The blow-up rates are only known for the power nonlinearity."
            raise ParameterError(msg)
        build_params(settings.model_dump())
        ball_rates(args.p, args.q)
        return "RateVerificationTool", settings
    if args.command == "whole-space":
        settings = WholeSpaceSettings(
            p=args.p, q=args.q, N=args.N, m=args.m, r_eval=args.r_eval, rtol=args.rtol
        )
        whole_space_rates(args.p, args.q, args.N)
        return "WholeSpaceTool", settings
    if args.command == "dynsys":
        settings = DynamicalSystemSettings(
            field=args.field,
            p=args.p,
            q=args.q,
            N=args.N,
            m_over_B=args.m_over_B,
            t_end=args.t_end,
        )
        if settings.field == FieldKind.BALL:
            BallField(args.p, args.q)
        return "DynamicalSystemTool", settings
    if args.command == "figures":
        return "FiguresTool", FiguresSettings(
            figure=args.which, N_values=args.N, m=args.m, rtol=args.rtol
        )
    return "ReportTool", ReportSettings(
        p=args.p,
        q=args.q,
        f=args.f,
        N=args.N,
        m=args.m,
        r_eval=args.r_eval,
        rtol=args.rtol,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run a command.

    Args:
        argv: The command line arguments. If ``None``, use ``sys.argv``.

    Returns:
        The exit code.
    """
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as error:
        return error.code

    try:
        if args.threads is not None:
            config.threads = args.threads
        tool_name, settings = _settings(args)
    except (ValidationError, ParameterError) as error:
        LOGGER.error(f"Invalid arguments: {error}")
        return EXIT_USAGE

    prefix = Path(args.out)
    tool = create_tool(tool_name, working_directory=str(prefix.parent))
    try:
        tool.execute(settings=settings)
    except COMPUTATION_ERRORS as error:
        LOGGER.error(f"The computation failed: {error}")
        return EXIT_FAILURE

    digits = FULL_PRECISION if args.round is None else args.round
    for path in tool.export(prefix, FileFormat(args.format), digits):
        LOGGER.info(f"Wrote {path}")
    LOGGER.info(tool.result)
    if getattr(tool.result, "failed", False):
        return EXIT_FAILURE
    return EXIT_SUCCESS


if __name__ == "__main__":
    sys.exit(main())
