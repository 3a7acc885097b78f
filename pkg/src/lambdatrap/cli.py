"""Command-line front end.

Subcommands: ``simulate``, ``windows``, ``sweep``, ``validate``.
Exit codes: 0 success, 1 usage or config error, 2 numerical abort.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Optional, Sequence

from .config import ConfigError, RunSpec, parse_config
from .dynamics import IntegrationAbort, StepSizeError, Trajectory, integrate
from .model import ParamError
from .report import build_report, render_text
from .trapping import ContinuousWindow, case_windows, first_window, solve_windows

log = logging.getLogger("lambdatrap")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2

TRAJECTORY_HEADER = "t,J11,J22,J33,ReJ13,ImJ13,ReJ23,ImJ23,ReJ12,ImJ12,a1x,a1y,a2x,a2y"
WINDOWS_HEADER = "n,t_seconds,Delta_t_rad,residual,branch"
RESONANCE_LINE = "window: continuous (resonance)"


def fmt(x: float) -> str:
    """12 significant digits, scientific, locale independent."""
    return "%.11e" % x


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".part")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        tmp.replace(path)
    finally:
        if tmp.exists():
            tmp.unlink()


def trajectory_csv(traj: Trajectory) -> str:
    lines = [TRAJECTORY_HEADER]
    for t, row, frow in zip(traj.times, traj.data, traj.field_data):
        lines.append(",".join(fmt(v) for v in (t, *row, *frow)))
    return "\n".join(lines) + "\n"


def trajectory_json(traj: Trajectory, spec: RunSpec) -> str:
    meta = {
        "model": traj.model,
        "dt": traj.dt,
        "t0": spec.t0,
        "t1": spec.t1,
        "init": spec.init,
        "params": {k: getattr(spec.params, k) for k in spec.params.__dataclass_fields__},
        "a1_amp": spec.a1_amp,
        "a2_amp": spec.a2_amp,
        "pulse_center": spec.pulse_center,
        "pulse_width": spec.pulse_width,
    }
    rows = [[float(t), *map(float, row), *map(float, frow)]
            for t, row, frow in zip(traj.times, traj.data, traj.field_data)]
    doc = {"metadata": meta, "columns": TRAJECTORY_HEADER.split(","), "rows": rows}
    return json.dumps(doc, sort_keys=True) + "\n"


def run_simulate(spec: RunSpec, out_dir: Path, fmt_: str = "csv") -> list[Path]:
    """Integrate ``spec`` and write the trajectory; nothing is written on failure."""
    traj = integrate(spec.model, spec.initial_state(), spec.params, spec.schedule(), spec.t0, spec.t1, spec.dt)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt_ in ("csv", "both"):
        path = out_dir / "trajectory.csv"
        _write_atomic(path, trajectory_csv(traj))
        written.append(path)
    if fmt_ in ("json", "both"):
        path = out_dir / "trajectory.json"
        _write_atomic(path, trajectory_json(traj, spec))
        written.append(path)
    return written


def compute_windows(g1: float, g2: float, Delta: float, n_max: int, case: str = "general"):
    if case == "general":
        return solve_windows(g1, g2, Delta, n_max)
    return case_windows(case, g1, g2, Delta / (2.0 * math.pi), n_max)


def windows_csv(windows) -> str:
    lines = [WINDOWS_HEADER]
    if not isinstance(windows, ContinuousWindow):
        for w in windows:
            lines.append(f"{w.n},{fmt(w.t)},{fmt(w.phase)},{fmt(w.residual)},{w.branch}")
    return "\n".join(lines) + "\n"


def windows_text(windows, g1: float, g2: float, Delta: float, case: str) -> str:
    head = f"trapping windows ({case}): g1={g1!r} g2={g2!r} Delta={Delta!r} rad/s"
    if isinstance(windows, ContinuousWindow):
        return f"{head}\n{RESONANCE_LINE}\n"
    lines = [head, f"{'n':>4}  {'t [s]':>20}  {'Delta t [rad]':>20}  {'residual':>12}  branch"]
    for w in windows:
        lines.append(f"{w.n:>4}  {w.t:>20.12g}  {w.phase:>20.12g}  {w.residual:>12.3e}  {w.branch}")
    return "\n".join(lines) + "\n"


def run_windows(g1: float, g2: float, Delta: float, n_max: int, case: str, out_dir: Path, fmt_: str = "csv"):
    windows = compute_windows(g1, g2, Delta, n_max, case)
    out_dir.mkdir(parents=True, exist_ok=True)
    text = windows_text(windows, g1, g2, Delta, case)
    if fmt_ in ("csv", "both"):
        _write_atomic(out_dir / "windows.csv", windows_csv(windows))
        _write_atomic(out_dir / "windows.txt", text)
    if fmt_ in ("json", "both"):
        if isinstance(windows, ContinuousWindow):
            doc = {"continuous": True, "message": windows.message, "windows": []}
        else:
            doc = {"continuous": False, "windows": [w.__dict__ for w in windows]}
        doc.update({"g1": g1, "g2": g2, "Delta": Delta, "case": case})
        _write_atomic(out_dir / "windows.json", json.dumps(doc, sort_keys=True) + "\n")
    return windows, text


def _sweep_point(axis: str, value: float, g1: float, ratio: float, Delta: float):
    if axis == "ratio":
        return first_window(g1, value * g1, Delta)
    return first_window(g1, ratio * g1, value)


def run_sweep(
    axis: str,
    grid: Sequence[float],
    g1: float = 1.0,
    ratio: float = 1.0,
    Delta: float = 1.0,
    workers: int = 1,
) -> str:
    """First trapping window across a grid; rows follow grid order whatever the completion order."""
    if axis not in ("ratio", "Delta"):
        raise ValueError(f"unknown sweep axis {axis!r}")
    if not grid:
        raise ValueError("sweep grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("sweep grid must be strictly increasing")

    results: dict[int, object] = {}
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_sweep_point, axis, v, g1, ratio, Delta): i for i, v in enumerate(grid)}
            for fut in as_completed(futures):
                results[futures[fut]] = fut.result()
    else:
        for i, v in enumerate(grid):
            results[i] = _sweep_point(axis, v, g1, ratio, Delta)

    lines = [f"{axis},t_first,Delta_t_first,residual,branch"]
    for i, v in enumerate(grid):
        w = results[i]
        if isinstance(w, ContinuousWindow):
            lines.append(f"{fmt(v)},continuous,,,")
        else:
            lines.append(f"{fmt(v)},{fmt(w.t)},{fmt(w.phase)},{fmt(w.residual)},{w.branch}")
    return "\n".join(lines) + "\n"


def run_validate(out_dir: Path, seed: int = 0, n_states: int = 1000) -> dict:
    """Write validation.json and validation.txt; both are deterministic for a seed."""
    report = build_report(seed, n_states)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_atomic(out_dir / "validation.json", json.dumps(report, sort_keys=True, indent=2) + "\n")
    _write_atomic(out_dir / "validation.txt", render_text(report))
    return report


# -- argument handling -------------------------------------------------------


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, default=default, help="run configuration file")
    p.add_argument("--out", type=Path, default=argparse.SUPPRESS if suppress else Path("."),
                   help="output directory")
    p.add_argument("--format", choices=("csv", "json", "both"),
                   default=argparse.SUPPRESS if suppress else "csv")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambdatrap",
        description="Lambda-atom Maxwell-Bloch simulator and trapping-window solver",
        parents=[_global_flags(False)],
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    flags = _global_flags(True)

    sub.add_parser("simulate", parents=[flags], help="integrate the equations of motion")

    w = sub.add_parser("windows", parents=[flags], help="list trapping windows")
    w.add_argument("--g1", type=float)
    w.add_argument("--g2", type=float)
    det = w.add_mutually_exclusive_group()
    det.add_argument("--delta-nu", type=float, help="field detuning in Hz")
    det.add_argument("--Delta", type=float, help="field detuning in rad/s")
    w.add_argument("--n-max", type=int, default=5)
    w.add_argument("--case", choices=("general", "case1", "case2"), default="general")

    s = sub.add_parser("sweep", parents=[flags], help="first window across a parameter grid")
    s.add_argument("--axis", choices=("ratio", "Delta"), required=True)
    grid = s.add_mutually_exclusive_group(required=True)
    grid.add_argument("--grid", type=_float_list, help="comma separated, strictly increasing")
    grid.add_argument("--linspace", nargs=3, metavar=("START", "STOP", "NUM"))
    s.add_argument("--g1", type=float, default=1.0)
    s.add_argument("--ratio", type=float, default=1.0, help="g2/g1 when sweeping Delta")
    sdet = s.add_mutually_exclusive_group()
    sdet.add_argument("--delta-nu", type=float)
    sdet.add_argument("--Delta", type=float)
    s.add_argument("--workers", type=int, default=1)

    sub.add_parser("validate", parents=[flags], help="write the equation validation report")
    return parser


def _load_spec(path: Optional[Path]) -> Optional[RunSpec]:
    if path is None:
        return None
    return parse_config(path.read_text(encoding="utf-8"))


def _detuning(args, spec: Optional[RunSpec], default: float) -> float:
    if getattr(args, "delta_nu", None) is not None:
        return 2.0 * math.pi * args.delta_nu
    if getattr(args, "Delta", None) is not None:
        return args.Delta
    return spec.params.Delta if spec is not None else default


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")

    try:
        spec = _load_spec(args.config)
        if args.command == "simulate":
            if spec is None:
                sys.stderr.write("error: simulate needs --config\n")
                return EXIT_USAGE
            for path in run_simulate(spec, args.out, args.format):
                log.info("wrote %s", path)
        elif args.command == "windows":
            g1 = args.g1 if args.g1 is not None else (spec.params.g1 if spec else 1.0)
            g2 = args.g2 if args.g2 is not None else (spec.params.g2 if spec else 0.0)
            Delta = _detuning(args, spec, 0.0)
            _, text = run_windows(g1, g2, Delta, args.n_max, args.case, args.out, args.format)
            sys.stdout.write(text)
        elif args.command == "sweep":
            if args.linspace:
                start, stop, num = float(args.linspace[0]), float(args.linspace[1]), int(args.linspace[2])
                grid = [start + (stop - start) * i / (num - 1) for i in range(num)] if num > 1 else [start]
            else:
                grid = args.grid
            Delta = _detuning(args, spec, 1.0)
            text = run_sweep(args.axis, grid, args.g1, args.ratio, Delta, args.workers)
            args.out.mkdir(parents=True, exist_ok=True)
            _write_atomic(args.out / "sweep.csv", text)
        elif args.command == "validate":
            report = run_validate(args.out, args.seed)
            dev = report["sections"]["component-census"]["derived_vs_complex_max_deviation"]
            sys.stdout.write(f"validation report written to {args.out} (derived vs complex max dev {dev:.3e})\n")
    except ConfigError as exc:
        for line in exc.errors:
            sys.stderr.write(f"config error: {line}\n")
        return EXIT_USAGE
    except (StepSizeError, IntegrationAbort) as exc:
        sys.stderr.write(f"numerical abort: {exc}\n")
        return EXIT_NUMERICAL
    except (ParamError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
