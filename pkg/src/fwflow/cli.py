"""Command-line experiment runner.

Subcommands: run, sweep, certify, bound, zigzag, preset. Every output is a
CSV (one series per file); no plotting. The FWFLOW_OUTPUT_DIR environment
variable overrides any output directory given on the command line, so
batch jobs can be redirected without editing configs.

Exit codes: 0 success, 2 invalid configuration, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import diagnostics, problems, tableau as tableau_mod
from .solvers import StepSchedule, run as run_solver

PRESET_NAMES = ("fig1", "fig2-top", "fig2-bottom", "fig3", "lower-bound", "sensing")


class ConfigError(Exception):
    """Invalid experiment configuration (maps to exit code 2)."""


def _out_dir(path_arg: str) -> Path:
    override = os.environ.get("FWFLOW_OUTPUT_DIR")
    d = Path(override) if override else Path(path_arg)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _build_problem(name: str, seed: int):
    if name not in problems.BUILDERS:
        raise ConfigError(f"unknown problem {name!r}; choose from {sorted(problems.BUILDERS)}")
    builder = problems.BUILDERS[name]
    if name in ("sensing", "logistic", "lowrank"):
        return builder(seed=seed)
    return builder()


def _load_tableau(name: str | None, path: str | None):
    if path is not None:
        text = Path(path).read_text()
        t = tableau_mod.Tableau.from_json(text, name=Path(path).stem)
        tableau_mod.validate(t)
        return t
    if name is None:
        return None
    if name not in tableau_mod.builtin_names():
        raise ConfigError(
            f"unknown tableau {name!r}; choose from {sorted(tableau_mod.builtin_names())}"
        )
    return tableau_mod.builtin(name)


def _run_config(cfg: dict, out_dir: Path) -> list:
    """Execute one run configuration, returning the written file paths."""
    problem = _build_problem(cfg.get("problem", "triangle"), int(cfg.get("seed", 0)))
    method = cfg.get("method", "fw")
    sched = StepSchedule(c=float(cfg.get("c", 2.0)), delta=float(cfg.get("delta", 1.0)))
    tab = _load_tableau(cfg.get("tableau"), cfg.get("tableau_file"))
    max_iter = int(cfg.get("max_iter", 1000))
    stop_gap = float(cfg.get("stop_gap", 0.0))
    try:
        traj = run_solver(
            problem.objective,
            problem.feasible_set,
            problem.x0,
            method,
            sched,
            max_iter,
            stop_gap=stop_gap,
            tableau=tab,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None
    stem = cfg.get("output") or f"{problem.name}_{method.replace('+', '_')}"
    written = []
    traj_path = out_dir / f"{stem}.csv"
    traj.to_csv(traj_path)
    written.append(traj_path)

    diag = cfg.get("diagnostics", {})
    if "zigzag" in diag:
        zcfg = diag["zigzag"]
        rows = ["method,delta,W,energy"]
        for W in zcfg.get("W", [5]):
            rep = diagnostics.zigzag_protocol(traj, int(W), float(zcfg.get("T", 100.0)))
            rows.append(rep.to_csv_row(method))
        p = out_dir / f"{stem}_zigzag.csv"
        p.write_text("\n".join(rows) + "\n")
        written.append(p)
    if "slope" in diag:
        if problem.f_star is None:
            raise ConfigError("slope diagnostic needs a problem with known optimum")
        s = diagnostics.slope_fit(traj, problem.f_star, int(diag["slope"].get("k_min", 100)))
        p = out_dir / f"{stem}_slope.csv"
        p.write_text(f"k_min,slope\n{diag['slope'].get('k_min', 100)},{s:.17g}\n")
        written.append(p)
    if "lower_bound" in diag:
        anchors = [int(a) for a in diag["lower_bound"].get("anchors", [10, 100, 1000])]
        vals = diagnostics.lower_bound_probe(traj, anchors)
        lines = ["anchor,probe"] + [f"{a},{v:.17g}" for a, v in zip(anchors, vals)]
        p = out_dir / f"{stem}_lower_bound.csv"
        p.write_text("\n".join(lines) + "\n")
        written.append(p)
    if "bound_compare" in diag:
        if problem.f_star is None:
            raise ConfigError("bound comparison needs a problem with known optimum")
        h0 = problem.objective.value(problem.x0) - problem.f_star
        lines = ["t,normalized_error,bound"]
        for r in traj:
            norm_err = (r.f_value - problem.f_star) / h0
            lines.append(
                f"{r.t:.17g},{norm_err:.17g},{diagnostics.continuous_bound(sched.c, r.t):.17g}"
            )
        p = out_dir / f"{stem}_bound.csv"
        p.write_text("\n".join(lines) + "\n")
        written.append(p)
    return written


def _cmd_run(args) -> int:
    cfg = {
        "problem": args.problem,
        "method": args.method,
        "c": args.c,
        "delta": args.delta,
        "max_iter": args.max_iter,
        "stop_gap": args.stop_gap,
        "seed": args.seed,
        "tableau": args.tableau,
        "tableau_file": args.tableau_file,
        "output": args.output,
        "diagnostics": {},
    }
    written = _run_config(cfg, _out_dir(args.output_dir))
    for p in written:
        print(p)
    return 0


def _cmd_sweep(args) -> int:
    doc = json.loads(Path(args.config).read_text())
    if not isinstance(doc, list):
        raise ConfigError("sweep config must be a JSON list of run configurations")
    out_dir = _out_dir(args.output_dir)
    for cfg in doc:
        for p in _run_config(cfg, out_dir):
            print(p)
    return 0


def _cmd_certify(args) -> int:
    t = _load_tableau(args.tableau, args.tableau_file)
    if t is None:
        raise ConfigError("certify needs a tableau name or --tableau-file")
    print("k," + ",".join(f"z{i + 1}" for i in range(t.q)) + ",z_inf")
    for k in range(1, args.k_max + 1):
        cert = tableau_mod.certificate(t, args.c, k)
        zs = ",".join(f"{v:.4f}" for v in cert.z)
        print(f"{k},{zs},{np.max(np.abs(cert.z)):.4f}")
    return 0


def _cmd_bound(args) -> int:
    c = args.c
    sched_gamma = lambda tau: c / (c + tau)  # noqa: E731
    lines = ["t,continuous_bound,schedule_bound"]
    for i in range(args.points + 1):
        t = args.t_max * i / args.points
        cb = diagnostics.continuous_bound(c, t)
        sb = diagnostics.schedule_bound(sched_gamma, t)
        lines.append(f"{t:.17g},{cb:.17g},{sb:.17g}")
    out = "\n".join(lines) + "\n"
    if args.output:
        path = _out_dir(args.output_dir) / args.output
        path.write_text(out)
        print(path)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_zigzag(args) -> int:
    out_dir = _out_dir(args.output_dir)
    deltas = [float(d) for d in args.deltas.split(",")]
    windows = [int(w) for w in args.windows.split(",")]
    rows = ["method,delta,W,energy"]
    for delta in deltas:
        problem = _build_problem(args.problem, args.seed)
        sched = StepSchedule(c=args.c, delta=delta)
        max_iter = int(round(args.T / delta))
        traj = run_solver(
            problem.objective, problem.feasible_set, problem.x0, "flow", sched, max_iter
        )
        for W in windows:
            rep = diagnostics.zigzag_protocol(traj, W, args.T)
            rows.append(rep.to_csv_row(args.method))
    path = out_dir / (args.output or "zigzag.csv")
    path.write_text("\n".join(rows) + "\n")
    print(path)
    return 0


# ---------------------------------------------------------------------------
# presets


def _preset_fig1(out_dir: Path) -> None:
    """Continuous flow vs discrete FW on the triangle, several c and delta."""
    for c in (1.0, 2.0, 4.0):
        _run_config(
            {
                "problem": "triangle",
                "method": "fw",
                "c": c,
                "max_iter": 500,
                "output": f"fig1_fw_c{c:g}",
                "diagnostics": {"bound_compare": {}},
            },
            out_dir,
        )
        for delta in (0.1, 0.01, 0.001):
            _run_config(
                {
                    "problem": "triangle",
                    "method": "flow",
                    "c": c,
                    "delta": delta,
                    "max_iter": int(round(50.0 / delta)),
                    "output": f"fig1_flow_c{c:g}_d{delta:g}",
                    "diagnostics": {"bound_compare": {}},
                },
                out_dir,
            )


def _preset_fig2_top(out_dir: Path) -> None:
    """Zig-zag energy of the flow at delta in {1, 0.1, 0.01}, W in {5, 20}."""
    rows = ["method,delta,W,energy"]
    problem = problems.sensing_logistic(seed=0)
    for delta in (1.0, 0.1, 0.01):
        sched = StepSchedule(c=2.0, delta=delta)
        traj = run_solver(
            problem.objective,
            problem.feasible_set,
            problem.x0,
            "flow",
            sched,
            int(round(100.0 / delta)),
        )
        for W in (5, 20):
            rows.append(diagnostics.zigzag_protocol(traj, W, 100.0).to_csv_row("fw"))
    (out_dir / "fig2_top_zigzag.csv").write_text("\n".join(rows) + "\n")


def _preset_fig2_bottom(out_dir: Path) -> None:
    """Zig-zag energy of fw vs midpoint vs rk4 at delta = 1, W = 5."""
    rows = ["method,delta,W,energy"]
    problem = problems.sensing_logistic(seed=0)
    sched = StepSchedule(c=2.0, delta=1.0)
    for method, tab in (("fw", None), ("midpoint", "midpoint"), ("rk4", "rk4")):
        traj = run_solver(
            problem.objective,
            problem.feasible_set,
            problem.x0,
            "fw" if tab is None else "rk",
            sched,
            100,
            tableau=None if tab is None else tableau_mod.builtin(tab),
        )
        rows.append(diagnostics.zigzag_protocol(traj, 5, 100.0).to_csv_row(method))
    (out_dir / "fig2_bottom_zigzag.csv").write_text("\n".join(rows) + "\n")


def _preset_fig3(out_dir: Path) -> None:
    """Triangle problem: plain, line-search, and momentum variants."""
    for method, tab in (
        ("fw", None),
        ("fw+linesearch", None),
        ("rk+linesearch", "rk4"),
        ("fw+momentum", None),
    ):
        _run_config(
            {
                "problem": "triangle",
                "method": method,
                "c": 2.0,
                "max_iter": 1000,
                "tableau": tab,
                "output": f"fig3_{method.replace('+', '_')}",
            },
            out_dir,
        )


def _preset_lower_bound(out_dir: Path) -> None:
    """Tail-suprema probe on the scalar box problem, FW and every builtin tableau."""
    configs = [("fw", None)] + [("rk", name) for name in tableau_mod.builtin_names()]
    for method, tab in configs:
        if tab == "euler":
            continue  # identical to fw
        _run_config(
            {
                "problem": "scalar_box",
                "method": method,
                "c": 2.0,
                "max_iter": 10000,
                "tableau": tab,
                "output": f"lower_bound_{tab or 'fw'}",
                "diagnostics": {"lower_bound": {"anchors": [10, 100, 1000]}},
            },
            out_dir,
        )


def _preset_sensing(out_dir: Path) -> None:
    """Convergence of fw / midpoint / rk4 on the l1 least-squares sensing problem."""
    for method, tab in (("fw", None), ("rk", "midpoint"), ("rk", "rk4")):
        _run_config(
            {
                "problem": "sensing",
                "method": method,
                "c": 2.0,
                "max_iter": 500,
                "seed": 0,
                "tableau": tab,
                "output": f"sensing_{tab or 'fw'}",
            },
            out_dir,
        )


_PRESETS = {
    "fig1": _preset_fig1,
    "fig2-top": _preset_fig2_top,
    "fig2-bottom": _preset_fig2_bottom,
    "fig3": _preset_fig3,
    "lower-bound": _preset_lower_bound,
    "sensing": _preset_sensing,
}


def _cmd_preset(args) -> int:
    if args.name not in _PRESETS:
        raise ConfigError(f"unknown preset {args.name!r}; choose from {sorted(_PRESETS)}")
    out_dir = _out_dir(args.output_dir)
    _PRESETS[args.name](out_dir)
    print(out_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fwflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output-dir", default=".", help="directory for CSV outputs")

    p = sub.add_parser("run", help="run one solver configuration")
    p.add_argument("--problem", default="triangle")
    p.add_argument("--method", default="fw")
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--stop-gap", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tableau", default=None)
    p.add_argument("--tableau-file", default=None)
    p.add_argument("--output", default=None, help="output file stem")
    common(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="run a JSON list of configurations")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("certify", help="print feasibility certificates z^(k)")
    p.add_argument("tableau", nargs="?", default=None)
    p.add_argument("--tableau-file", default=None)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--k-max", type=int, default=10)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("bound", help="tabulate the continuous-rate bound")
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--output", default=None)
    common(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("zigzag", help="windowed zig-zag energy over deltas")
    p.add_argument("--problem", default="logistic")
    p.add_argument("--method", default="fw")
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--deltas", default="1,0.1,0.01")
    p.add_argument("--windows", default="5,20")
    p.add_argument("--T", type=float, default=100.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    common(p)
    p.set_defaults(func=_cmd_zigzag)

    p = sub.add_parser("preset", help=f"run a named preset: {', '.join(PRESET_NAMES)}")
    p.add_argument("name")
    common(p)
    p.set_defaults(func=_cmd_preset)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, json.JSONDecodeError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # runtime failure
        print(f"runtime error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
