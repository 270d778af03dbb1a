"""
Command line for hyperbolic Napoleon triangles.

Examples
--------
# Napoleonize a congruence class (closed form) or a triangle file (points)
python -m src.application.interfaces.cli napoleonize --class 2,2,2 --epsilon -1
python -m src.application.interfaces.cli napoleonize --triangle tri.json --epsilon +1

# Iterate and write the trajectory as CSV
python -m src.application.interfaces.cli iterate --class 2.5,2.1,1.9 --epsilon +1 \
  --steps 100 --out runs/traj.csv

# Certify the non-existence identity on a grid, four worker processes
python -m src.application.interfaces.cli certify --grid-min 1.75 --grid-max 6 \
  --grid-step 0.05 --threads 4

# Poincaré-disk coordinates of a triangle, its apexes and its centroids
python -m src.application.interfaces.cli project --triangle tri.json --epsilon -1

Exit status: 0 success, 1 internal consistency failure, 2 invalid input,
3 certification or sweep violation.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Union

from dotenv import load_dotenv
from pydantic import ValidationError

from src.application.services import CertificationService, NapoleonService, SweepService
from src.application.services.napoleon_service import PROJECTION_HEADER, TRAJECTORY_HEADER
from src.domain.exceptions import HypNapError, InvalidInput
from src.domain.geometry.triangle import congruence_of, realize
from src.domain.schemas import (
    CongruenceClass,
    Epsilon,
    RunConfig,
    StopCriterion,
    Triangle,
    TrianglePayload,
)
from src.domain.utils import dumps_json
from src.infrastructure.files import ArtifactUnitOfWork

VIOLATION_EXIT = 3
JSON_ONLY = ("napoleonize", "realize", "sample", "certify", "sweep")

logger = logging.getLogger(__name__)


# -----------------------------
# Utilities
# -----------------------------


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise SystemExit(f"{name} must be an integer, got {raw!r}") from e


def _parse_class(text: str) -> CongruenceClass:
    """Parse 'd0,d1,d2' into a congruence class."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise InvalidInput(f"--class expects three comma-separated numbers, got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise InvalidInput(f"--class has a non-numeric entry: {text!r}") from e
    return CongruenceClass.from_values(values)


def _parse_epsilon(text: str) -> Epsilon:
    return -1 if text.strip() == "-1" else 1


def _build_config(args: argparse.Namespace) -> RunConfig:
    """Validate the parsed flags into a RunConfig; unset flags keep the model defaults."""
    fields: Dict[str, Any] = {
        "command": args.cmd,
        "epsilon": _parse_epsilon(args.epsilon),
        "steps": args.steps,
        "tol": args.tol,
        "grid_min": args.grid_min,
        "grid_max": args.grid_max,
        "grid_step": args.grid_step,
        "seed": args.seed,
        "threads": args.threads,
        "samples": args.samples,
        "radius": args.radius,
        "output_format": args.format,
        "out": args.out,
    }
    config = RunConfig.model_validate({k: v for k, v in fields.items() if v is not None})
    if config.command in JSON_ONLY and config.output_format == "csv":
        raise InvalidInput(f"'{config.command}' emits JSON only")
    return config


def _load_input(
    args: argparse.Namespace, config: RunConfig, uow: ArtifactUnitOfWork
) -> Optional[Union[CongruenceClass, Triangle]]:
    if args.triangle and args.class_spec:
        raise InvalidInput("--class and --triangle are mutually exclusive")
    if args.triangle:
        return uow.read_triangle(args.triangle, config.tolerances)
    if args.class_spec:
        if args.class_spec.endswith(".json"):
            return uow.read_class(args.class_spec)
        return _parse_class(args.class_spec)
    return None


def _writer(config: RunConfig) -> ArtifactUnitOfWork:
    return ArtifactUnitOfWork(out=config.out, stream=sys.stdout)


def _report_error(error: HypNapError) -> int:
    print(dumps_json(error.to_dict()), end="", file=sys.stderr)
    return error.exit_code


# -----------------------------
# Subcommand implementations
# -----------------------------


def cmd_napoleonize(args: argparse.Namespace) -> int:
    """Napoleonize a class (closed form) or a triangle file (points and closed form)."""
    config = _build_config(args)
    uow = _writer(config)
    source = _load_input(args, config, uow)
    service = NapoleonService(config.tolerances)
    if source is None:
        raise InvalidInput("napoleonize needs --class or --triangle")
    if isinstance(source, Triangle):
        payload = service.describe_triangle(source, config.epsilon, config.tol)
    else:
        payload = service.describe_class(source, config.epsilon, config.tol)
    uow.write_json(payload)
    return 0


def cmd_realize(args: argparse.Namespace) -> int:
    """Build the canonical-gauge triangle of a class."""
    config = _build_config(args)
    uow = _writer(config)
    source = _load_input(args, config, uow)
    if not isinstance(source, CongruenceClass):
        raise InvalidInput("realize needs --class")
    uow.write_json(NapoleonService(config.tolerances).realize(source))
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    """Seeded random triangle within --radius of the base point."""
    config = _build_config(args)
    T = NapoleonService(config.tolerances).sample(config.seed, config.radius)
    payload = {"seed": config.seed, "radius": config.radius, **TrianglePayload.of(T)}
    payload["d"] = congruence_of(T).d
    _writer(config).write_json(payload)
    return 0


def cmd_iterate(args: argparse.Namespace) -> int:
    """Iterate in class space; writes the trajectory and prints the contraction summary."""
    config = _build_config(args)
    uow = _writer(config)
    service = NapoleonService(config.tolerances)
    source = _load_input(args, config, uow)
    if source is None:
        start = service.random_class(config.seed, config.radius)
    elif isinstance(source, Triangle):
        start = congruence_of(source)
    else:
        start = source

    stop = StopCriterion(max_steps=config.steps, tol_point_limit=config.tol or 1e-6)
    records, report = service.iterate(start, config.epsilon, stop)

    if (config.output_format or "csv") == "csv":
        uow.write_csv(TRAJECTORY_HEADER, service.trajectory_rows(records))
    else:
        uow.write_json({"trajectory": records, "report": report})

    summary = {
        "start": start.d,
        "epsilon": config.epsilon,
        "steps": len(records) - 1,
        "terminal_status": records[-1].status,
        "passed": report.passed if report else None,
        "max_ratio_mu": report.max_ratio_mu if report else None,
        "max_ratio_gap": report.max_ratio_gap if report else None,
        "last_ratio_mu": report.last_ratio_mu if report else None,
    }
    stream = sys.stdout if config.out else sys.stderr
    print(dumps_json(summary), end="", file=stream)
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    """Sweep the non-existence certificate over the wedge d0 ≥ d1 ≥ d2."""
    config = _build_config(args)
    service = CertificationService(config.threads, config.tolerances)
    report = service.certify(config.grid_min, config.grid_max, config.grid_step)
    _writer(config).write_json({**report.model_dump(), "passed": report.passed})
    return 0 if report.passed else VIOLATION_EXIT


def cmd_sweep(args: argparse.Namespace) -> int:
    """Seeded random-class experiment over the contraction and non-existence bounds."""
    config = _build_config(args)
    service = SweepService(config.threads, config.tolerances)
    report = service.sweep(config.seed, config.samples, config.radius)
    _writer(config).write_json({**report.model_dump(), "passed": report.passed})
    return 0 if report.passed else VIOLATION_EXIT


def cmd_project(args: argparse.Namespace) -> int:
    """Poincaré-disk coordinates of P, Q and R points (a class is realized first)."""
    config = _build_config(args)
    uow = _writer(config)
    service = NapoleonService(config.tolerances)
    source = _load_input(args, config, uow)
    if source is None:
        raise InvalidInput("project needs --class or --triangle")
    if isinstance(source, CongruenceClass):
        source = realize(source, config.tolerances)
    points = service.project(source, config.epsilon)

    if (config.output_format or "csv") == "csv":
        uow.write_csv(PROJECTION_HEADER, [(p.label, p.u, p.v) for p in points])
    else:
        uow.write_json({"points": points})
    return 0


# -----------------------------
# CLI wiring
# -----------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group("input")
    source.add_argument(
        "--class",
        dest="class_spec",
        help='Congruence class "d0,d1,d2", or a JSON file {"d": [d0, d1, d2]}.',
    )
    source.add_argument(
        "--triangle",
        help='JSON file {"vertices": [[x0,x1,x2], ...]} with time coordinate first.',
    )
    common.add_argument(
        "--epsilon",
        choices=["+1", "-1", "1"],
        default="+1",
        help="Orientation of the equilateral flanks (default: +1).",
    )
    common.add_argument("--steps", type=int, help="Maximum iteration steps (default: 10000).")
    common.add_argument(
        "--tol",
        type=float,
        help="Point-limit tolerance for iterate, classification tolerance for napoleonize.",
    )
    common.add_argument("--grid-min", type=float, help="Lower grid bound (default: sqrt(3)+0.01).")
    common.add_argument("--grid-max", type=float, help="Upper grid bound (default: 6).")
    common.add_argument("--grid-step", type=float, help="Grid spacing (default: 0.05).")
    common.add_argument("--seed", type=int, help="Random seed (default: 0).")
    common.add_argument(
        "--threads",
        type=int,
        default=_env_int("HYPNAP_THREADS", 1),
        help="Worker processes for certify and sweep (default: $HYPNAP_THREADS or 1).",
    )
    common.add_argument("--samples", type=int, help="Random samples for sweep (default: 1000).")
    common.add_argument(
        "--radius", type=float, help="Radius bound of random vertices (default: 2.2)."
    )
    common.add_argument("--format", choices=["json", "csv"], help="Output format.")
    common.add_argument("--out", help="Output path (default: stdout).")
    common.add_argument(
        "--log-level",
        default=os.getenv("HYPNAP_LOG_LEVEL", "WARNING"),
        help="Logging level on stderr (default: $HYPNAP_LOG_LEVEL or WARNING).",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypnap",
        description="Napoleon triangles on the hyperboloid model of the hyperbolic plane.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    common = _common_parser()

    commands = (
        ("napoleonize", cmd_napoleonize, "Napoleonize a class or a triangle (JSON)."),
        ("realize", cmd_realize, "Canonical-gauge triangle of a class (JSON)."),
        ("sample", cmd_sample, "Seeded random triangle (JSON)."),
        ("iterate", cmd_iterate, "Iterated Napoleonization trajectory (CSV or JSON)."),
        ("certify", cmd_certify, "Grid certification of the non-existence identity (JSON)."),
        ("sweep", cmd_sweep, "Seeded random experiment over the proven bounds (JSON)."),
        ("project", cmd_project, "Poincaré-disk coordinates for plotting (CSV or JSON)."),
    )
    for name, func, help_text in commands:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)

    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    logger.debug("running command", extra={"command": args.cmd})
    try:
        return args.func(args)
    except HypNapError as e:
        return _report_error(e)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "input"
        return _report_error(InvalidInput(f"{where}: {first['msg']}"))


if __name__ == "__main__":
    raise SystemExit(main())
