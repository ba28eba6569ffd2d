"""
Command-Line Entry Point

    python -m rmt_lab <command> [flags]

Flags override values loaded with --config FILE.yaml. Without --out, files
go to RMT_LAB_OUTPUT_DIR/rmt_lab_run. Exit codes: 0 success, 2 validation
error (including invalid settings), 3 numerical failure; errors are reported
as JSON on stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml
from pydantic import ValidationError

from .. import __version__
from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError
from ..utils.helpers import configure_logging
from .commands import report_error, run
from .schema import RunConfig

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ("seed", "trials", "out", "format", "threads")
DEFAULT_RUN_NAME = "rmt_lab_run"


def _complex_point(text: str) -> List[float]:
    try:
        value = complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a complex number (e.g. 1+2j)")
    return [value.real, value.imag]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="64-bit run seed")
    parser.add_argument("--trials", type=int, help="Number of independent trials")
    parser.add_argument("--out", help="Output path without extension")
    parser.add_argument("--format", choices=["csv", "json"], help="Table format")
    parser.add_argument("--threads", type=int, help="Worker threads (default: RMT_LAB_THREADS or CPU count)")
    parser.add_argument("--config", help="YAML file with default values")
    parser.add_argument("--log-level", dest="log_level", help="Logging level")


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subcommand per experiment."""
    parser = argparse.ArgumentParser(
        prog="rmt_lab",
        description="Random matrix theory lab: samplers, spectral measures, particle dynamics and energies.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, argument_default=argparse.SUPPRESS)
        _add_common(p)
        return p

    p = command("sample", "Sample matrices and write their eigenvalues")
    p.add_argument("--ensemble", choices=["gue", "goe", "ginibre", "wishart", "haar"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--no-rescale", dest="rescale", action="store_false")

    p = command("esd", "Compare empirical spectral distributions with a reference law")
    p.add_argument("--ensemble", choices=["gue", "goe", "ginibre", "wishart"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--ref", choices=["semicircle", "marchenko_pastur", "circular"])
    p.add_argument("--radius", type=float)
    p.add_argument("--bins", type=int)

    p = command("kernel", "Evaluate a determinantal kernel on a point set")
    p.add_argument("--family", choices=["gue_hermite", "ginibre_finite", "ginibre_infinite"])
    p.add_argument("--n", type=int)
    p.add_argument("--point", dest="points", type=_complex_point, action="append")

    p = command("dyson", "Simulate interacting-particle trajectories")
    p.add_argument("--family", choices=["dyson", "generalized", "ou", "wishart"])
    p.add_argument("--n", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta-n", dest="beta_n", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--dt-max", dest="dt_max", type=float)
    p.add_argument("--records", "--record", dest="records", type=int, help="Number of equally spaced recording times")

    p = command("burgers", "Solve the mean-field Stieltjes equation by characteristics")
    p.add_argument("--flow", choices=["dyson", "ou"])
    p.add_argument("--theta", type=float)
    p.add_argument("--initial", choices=["dirac", "semicircle"])
    p.add_argument("--t", type=float, action="append")
    p.add_argument("--z", type=_complex_point, action="append")
    p.add_argument("--h", type=float)

    p = command("ldp", "Solve for the equilibrium measure and report its energy")
    p.add_argument("--beta", type=float)
    p.add_argument("--grid-cells", dest="grid_cells", type=int)
    p.add_argument("--iters", type=int)

    p = command("holeprob", "Ginibre hole probabilities")
    p.add_argument("--r", type=float, action="append")
    p.add_argument("--truncation", type=int)

    p = command("gumbel", "Rescaled Ginibre spectral radius against the Gumbel law")
    p.add_argument("--n", type=int)

    return parser


def _load_yaml(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
    except (OSError, yaml.YAMLError) as e:
        raise InvalidArgumentError(f"Cannot read config file {path}: {e}")
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"Config file {path} must hold a mapping")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge YAML defaults and explicit flags into a RunConfig.

    YAML may hold top-level keys and a `params` mapping, or flat keys.
    """
    explicit = {k: v for k, v in vars(args).items() if k not in ("command", "config", "log_level")}
    merged: Dict[str, Any] = {}
    params: Dict[str, Any] = {}
    if getattr(args, "config", None):
        data = _load_yaml(args.config)
        params.update(data.pop("params", {}) or {})
        for key, value in data.items():
            (merged if key in TOP_LEVEL_KEYS else params)[key] = value
    for key, value in explicit.items():
        (merged if key in TOP_LEVEL_KEYS else params)[key] = value
    settings = get_settings()
    if merged.get("threads") is None:
        merged["threads"] = settings.run.threads
    if merged.get("out") is None:
        merged["out"] = str(Path(settings.run.output_dir) / DEFAULT_RUN_NAME)
    return RunConfig(command=args.command, params=params, **merged)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the command and return the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(getattr(args, "log_level", None))

    validation = get_settings().validate()
    for warning in validation["warnings"]:
        logger.warning(warning)
    if not validation["valid"]:
        return report_error(InvalidArgumentError("Invalid settings: " + "; ".join(validation["errors"])))

    try:
        config = build_config(args)
    except ValidationError as e:
        sys.stderr.write(json.dumps({
            "error": "ValidationError",
            "message": str(e),
            "exit_code": 2,
        }, sort_keys=True) + "\n")
        return 2
    except InvalidArgumentError as e:
        return report_error(e)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
