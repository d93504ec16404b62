"""
Command-line front end

    sitemix sweep --preset fig1 --output fig1.csv
    sitemix sweep bcs-concurrence --n 1 --omega-ef 0.5 --delta-min 0 --delta-max 1 --steps 201
    sitemix validate --max-L 8 --seed 7
    sitemix eval bcs-concurrence n=1 omega_ef=0.5 delta_ratio=1
"""

# Standard Library
import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence

# sitemix
from sitemix import __version__, constants
from sitemix.fockspace import FockSpaceError
from sitemix.models import ParameterDomainError, SweepSpec
from sitemix.services.sweeps import eval_point, preset_spec, render_point, run_sweep, write_atomic
from sitemix.services.validation import ValidationFailure, run_validate

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class SitemixArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the domain-error code; 2 is kept for failed validation"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(constants.EXIT_DOMAIN_ERROR, f"{self.prog}: error: {message}\n")


def _choices(pairs) -> List[str]:
    return [value for value, _ in pairs]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", default=constants.FORMAT_CSV, choices=_choices(constants.FORMAT_CHOICES))
    parser.add_argument("--output", default=None, help="file to write (default: standard output)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug")


def build_parser() -> argparse.ArgumentParser:
    parser = SitemixArgumentParser(
        prog="sitemix",
        description="Single-site entanglement of many-electron lattice states",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="tabulate a closed form over a 1-D grid")
    sweep.add_argument("family", nargs="?", choices=_choices(constants.SWEEP_FAMILY_CHOICES))
    sweep.add_argument("--preset", choices=_choices(constants.PRESET_CHOICES))
    sweep.add_argument("--n", type=float, nargs="+", help="electron density per curve")
    sweep.add_argument("--omega-ef", type=float, nargs="+", help="hbar omega_D / E_F per curve")
    sweep.add_argument("--N", type=int, nargs="+", help="Nagaoka ring length per curve")
    sweep.add_argument("--min", "--g-min", "--delta-min", "--l-min", dest="grid_min", type=float)
    sweep.add_argument("--max", "--g-max", "--delta-max", "--l-max", dest="grid_max", type=float)
    sweep.add_argument("--steps", "--g-steps", "--delta-steps", "--l-steps", dest="grid_steps", type=int)
    _add_common(sweep)

    validate = commands.add_parser("validate", help="run the invariant suite against the exact oracle")
    validate.add_argument("--max-L", dest="max_L", type=int, default=4)
    validate.add_argument("--seed", type=int, default=0)
    _add_common(validate)

    evaluate = commands.add_parser("eval", help="evaluate one closed form at one point")
    evaluate.add_argument("family", choices=_choices(constants.EVAL_FAMILY_CHOICES))
    evaluate.add_argument("params", nargs="*", metavar="name=value")
    _add_common(evaluate)

    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def _sweep_spec(args: argparse.Namespace) -> SweepSpec:
    if args.preset:
        if args.family:
            raise ParameterDomainError("Give either a sweep family or --preset, not both")
        return preset_spec(args.preset, output=args.output, fmt=args.format)
    if not args.family:
        raise ParameterDomainError("Give a sweep family or --preset")

    fixed: Dict[str, Sequence[float]] = {}
    if args.n:
        fixed["n"] = args.n
    if args.omega_ef:
        fixed["omega_ef"] = args.omega_ef
    if args.N:
        fixed["N"] = args.N

    if args.family == constants.FAMILY_NAGAOKA:
        top = max(args.N) - 1 if args.N else 1
        default_grid = (0.0, float(top), top + 1)
    else:
        default_grid = (0.0, 1.0, 101)
    grid = (
        default_grid[0] if args.grid_min is None else args.grid_min,
        default_grid[1] if args.grid_max is None else args.grid_max,
        default_grid[2] if args.grid_steps is None else args.grid_steps,
    )
    return SweepSpec(family=args.family, grid=grid, fixed=fixed, output=args.output, format=args.format)


def _parse_params(tokens: Sequence[str]) -> Dict[str, str]:
    params = {}
    for token in tokens:
        name, separator, value = token.partition("=")
        if not separator or not name:
            raise ParameterDomainError(f"Expected name=value, got {token!r}")
        if name in params:
            raise ParameterDomainError(f"Parameter {name!r} given twice")
        params[name] = value
    return params


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


def handle_sweep(args: argparse.Namespace) -> int:
    spec = _sweep_spec(args)
    text = run_sweep(spec)
    if not spec.output:
        sys.stdout.write(text)
    return constants.EXIT_OK


def handle_validate(args: argparse.Namespace) -> int:
    report = run_validate(max_L=args.max_L, seed=args.seed)
    _emit(report.render(args.format), args.output)
    report.raise_for_failures()
    return constants.EXIT_OK


def handle_eval(args: argparse.Namespace) -> int:
    values = eval_point(args.family, _parse_params(args.params))
    _emit("".join(line + "\n" for line in render_point(values, args.format)), args.output)
    return constants.EXIT_OK


HANDLERS = {
    "sweep": handle_sweep,
    "validate": handle_validate,
    "eval": handle_eval,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return HANDLERS[args.command](args)
    except ValidationFailure as e:
        logger.error(f"[CLI] {e}")
        return constants.EXIT_VALIDATION_FAILURE
    except (ParameterDomainError, FockSpaceError) as e:
        logger.error(f"[CLI] {e}")
        return constants.EXIT_DOMAIN_ERROR
    except OSError as e:
        logger.error(f"[CLI] I/O error: {e}")
        return constants.EXIT_IO_ERROR
