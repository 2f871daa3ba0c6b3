"""Command-line driver: simulate, verify, cardinal.

Exit codes: 0 success, 1 verification failure, 2 I/O or configuration error,
3 runtime invariant breach during a simulation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import checks, figures
from .config import ConfigError, RunConfig, parse_run_config
from .dynamics import Trajectory, bloch_trajectory
from .states import BLOCH_NORM_SQ, CARDINAL_LABELS, bloch_from_amplitudes, cardinal_state

__all__ = ["main", "run_cardinal", "run_simulate", "run_verify", "simulation_grid"]

CSV_HEADER = (
    "t,n1,n2,n3,n4,n5,n6,n7,n8,"
    "dn1,dn2,dn3,dn4,dn5,dn6,dn7,dn8,s4,s2,norm2"
)

#: Norm-conservation breach that aborts a run with exit code 3.
RUNTIME_NORM_TOL = 1e-6


def _fmt(x: float) -> str:
    return format(x, ".17g")


def simulation_grid(cfg: RunConfig) -> np.ndarray:
    """Uniform grid 0, dt, 2 dt, ... up to (and including) t_max."""
    count = int(np.floor(cfg.t_max / cfg.dt + 1e-9))
    return np.arange(count + 1) * cfg.dt


def _records(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    norm2 = np.einsum("ij,ij->i", traj.bloch, traj.bloch)
    table = np.column_stack(
        [traj.times, traj.bloch, traj.bloch_dot, traj.sector4, traj.sector2, norm2]
    )
    return table, norm2


def _write_csv(path: Path, table: np.ndarray) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in table:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _meta(cfg: RunConfig) -> dict:
    return {
        "config": cfg.config.value,
        "kappa_a": cfg.kappa_a,
        "kappa_b": cfg.kappa_b,
        "delta": cfg.delta,
        "c0_re": [x.real for x in cfg.c0],
        "c0_im": [x.imag for x in cfg.c0],
        "convention": cfg.convention,
        "t_max": cfg.t_max,
        "dt": cfg.dt,
        "emit": cfg.emit,
        "format": cfg.output_format,
        "output": str(cfg.output_path),
    }


def _write_json(path: Path, cfg: RunConfig, table: np.ndarray) -> None:
    fields = CSV_HEADER.split(",")
    rows = [dict(zip(fields, map(float, row))) for row in table]
    with open(path, "w", newline="\n") as fh:
        json.dump({"meta": _meta(cfg), "rows": rows}, fh, indent=1)
        fh.write("\n")


def run_simulate(cfg: RunConfig) -> int:
    """Run one trajectory and write it out; see module docstring for codes."""
    times = simulation_grid(cfg)
    traj = bloch_trajectory(cfg.to_sim_params(), times)
    table, norm2 = _records(traj)
    drift = np.abs(norm2 - BLOCH_NORM_SQ).max()
    if drift > RUNTIME_NORM_TOL:
        print(
            f"error: Bloch norm drifted by {drift:.3e} (tolerance {RUNTIME_NORM_TOL:g});"
            " aborting without output",
            file=sys.stderr,
        )
        return 3
    try:
        if cfg.output_format == "csv":
            _write_csv(cfg.output_path, table)
        else:
            _write_json(cfg.output_path, cfg, table)
    except OSError as exc:
        print(f"error: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {table.shape[0]} records to {cfg.output_path}")
    return 0


def run_verify(scope: str = "all") -> int:
    """Run the named invariant suite(s); exit 0 only if every check passes."""
    report = checks.run_suites(scope)
    for result in report.results:
        print(result.line())
    for note in report.notes:
        print(f"INFO {note}")
    failed = [r for r in report.results if not r.passed]
    print(f"{len(report.results) - len(failed)}/{len(report.results)} checks passed")
    return 1 if failed else 0


def run_cardinal(label: str) -> int:
    """Print angles, amplitudes, and Bloch vector of a cardinal state."""
    angles, amps = cardinal_state(label)
    bloch = bloch_from_amplitudes(amps)
    print(f"cardinal state {label!r}")
    print(
        f"  angles: theta1={angles.theta1:.12g} theta2={angles.theta2:.12g}"
        f" phi1={angles.phi1:.12g} phi2={angles.phi2:.12g}"
    )
    amp_text = "  ".join(
        f"c{i + 1}={c.real:.12g}{c.imag:+.12g}j" for i, c in enumerate(amps)
    )
    print(f"  amplitudes: {amp_text}")
    print("  bloch: " + "  ".join(f"n{k + 1}={v:.12g}" for k, v in enumerate(bloch)))
    print(f"  norm^2: {float(bloch @ bloch):.12g}")
    return 0


def _load_simulate_config(args: argparse.Namespace) -> RunConfig:
    if (args.config is None) == (args.figure is None):
        raise ConfigError("exactly one of --config or --figure is required")
    if args.config is not None:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from None
    else:
        try:
            text = figures.figure_config_text(args.figure)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    overrides: dict[str, str] = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.output is not None:
        overrides["output"] = args.output
    if args.format is not None:
        overrides["format"] = args.format
    return parse_run_config(text, overrides)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-bloch",
        description="SU(3) Bloch vectors of three-level systems: "
        "simulation, invariant verification, cardinal states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one trajectory and export it")
    sim.add_argument("--config", help="path to a key=value run configuration")
    sim.add_argument(
        "--figure", choices=figures.FIGURE_NAMES, help="bundled figure configuration"
    )
    sim.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override a configuration key (repeatable)",
    )
    sim.add_argument("--output", help="override the output path")
    sim.add_argument("--format", choices=("csv", "json"), help="override the output format")

    ver = sub.add_parser("verify", help="run invariant suites")
    ver.add_argument(
        "scope", nargs="?", default="all",
        choices=("algebra", "state", "dynamics", "all"),
    )

    card = sub.add_parser("cardinal", help="print a cardinal state and its Bloch vector")
    card.add_argument("label", choices=CARDINAL_LABELS)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        try:
            cfg = _load_simulate_config(args)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return run_simulate(cfg)
    if args.command == "verify":
        return run_verify(args.scope)
    return run_cardinal(args.label)


if __name__ == "__main__":
    sys.exit(main())
