"""Command-line interface.

Subcommands:
    solve       closed-form schedule for one instance (table/csv/json-lines)
    verify      randomized agreement check of solver vs numerical oracle
    sweep       distortion-budget sweep: beta -> c_min -> schedule rows
    trajectory  sawtooth age curve of the solved instance (csv/svg)

Exit codes: 0 success, 1 invalid input, 2 infeasible instance,
3 verification failure.  AOI_SCHED_SEED supplies a default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import closed_form, oracle, trajectory
from .distortion import PRESETS, DistortionKind, DistortionSpec, min_processing_for, evaluate
from .errors import DomainError, Infeasible, NonConvergence, ShapeError
from .model import (
    Constant,
    InverseAge,
    ProblemInstance,
    ProportionalAge,
    Schedule,
    average_age,
    request_gaps,
    total_age,
)

_MODES = ("constant", "inverse-age", "proportional")


class _CliError(Exception):
    """Bad flags or input files; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; this CLI reserves 2 for
    # infeasible instances, so flag errors are rerouted to exit code 1
    def error(self, message):
        raise _CliError(message)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _env_seed() -> int:
    raw = os.environ.get("AOI_SCHED_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"AOI_SCHED_SEED must be an integer, got {raw!r}")


def _mode_from_json(data: dict) -> ProblemInstance:
    try:
        T = float(data["T"])
        N = int(data["N"])
        m = data["mode"]
        kind = m["type"]
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"malformed instance JSON: {e}")
    if kind == "constant":
        if "beta" in m:
            d = m.get("distortion")
            if not isinstance(d, dict):
                raise DomainError("constant mode with beta needs a distortion object")
            spec = DistortionSpec(
                kind=DistortionKind(d["kind"]),
                a=float(d["a"]),
                b=float(d["b"]),
                d=float(d["d"]),
                c_max=float(d["c_max"]),
            )
            c_min = min_processing_for(spec, float(m["beta"]))
        else:
            c_min = float(m["c"])
        mode: object = Constant(c_min=c_min)
    elif kind == "inverse-age":
        mode = InverseAge(alpha=float(m["alpha"]))
    elif kind == "proportional":
        mode = ProportionalAge(c=float(m["c"]), alpha=float(m["alpha"]))
    else:
        raise DomainError(f"unrecognized mode type {kind!r}")
    return ProblemInstance(T=T, N=N, mode=mode)


def _load_instance(args) -> ProblemInstance:
    if args.input is not None:
        if args.mode is not None or args.T is not None or args.N is not None:
            raise DomainError("give either --input or inline instance flags, not both")
        try:
            with open(args.input) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise DomainError(f"cannot read instance file: {e}")
        return _mode_from_json(data)
    if args.mode is None or args.T is None or args.N is None:
        raise DomainError("need --mode, --T and --N (or --input FILE)")
    if args.mode == "constant":
        if args.c is None:
            raise DomainError("constant mode needs --c (the processing floor)")
        mode: object = Constant(c_min=args.c)
    elif args.mode == "inverse-age":
        if args.alpha is None:
            raise DomainError("inverse-age mode needs --alpha")
        mode = InverseAge(alpha=args.alpha)
    else:
        if args.c is None or args.alpha is None:
            raise DomainError("proportional mode needs --c and --alpha")
        mode = ProportionalAge(c=args.c, alpha=args.alpha)
    return ProblemInstance(T=args.T, N=args.N, mode=mode)


def _mode_label(mode) -> str:
    if isinstance(mode, Constant):
        return f"constant (c_min={_fmt(mode.c_min)})"
    if isinstance(mode, InverseAge):
        return f"inverse-age (alpha={_fmt(mode.alpha)})"
    return f"proportional (c={_fmt(mode.c)}, alpha={_fmt(mode.alpha)})"


def _mode_json(mode) -> dict:
    if isinstance(mode, Constant):
        return {"type": "constant", "c": mode.c_min}
    if isinstance(mode, InverseAge):
        return {"type": "inverse-age", "alpha": mode.alpha}
    return {"type": "proportional", "c": mode.c, "alpha": mode.alpha}


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _solve_payload(instance: ProblemInstance):
    sched, report = closed_form.solve(instance)
    return sched, report, total_age(sched), request_gaps(sched)


def cmd_solve(args) -> int:
    instance = _load_instance(args)
    sched, report, obj, gaps = _solve_payload(instance)
    avg = average_age(sched, instance.T)
    if args.format == "table":
        lines = [
            f"mode       {_mode_label(instance.mode)}",
            f"T          {_fmt(instance.T)}",
            f"N          {instance.N}",
            f"branch     {report.branch}",
            f"condition  {report.condition}",
            "y          " + " ".join(_fmt(v) for v in sched.y),
            "c          " + " ".join(_fmt(v) for v in sched.c),
            "s          " + " ".join(_fmt(v) for v in gaps),
            f"total_age  {_fmt(obj)}",
            f"avg_age    {_fmt(avg)}",
        ]
        _emit("\n".join(lines) + "\n", args.output)
    elif args.format == "csv":
        rows = ["i,y,c,s"]
        for i in range(instance.N + 1):
            c_cell = _fmt(sched.c[i]) if i < instance.N else ""
            rows.append(f"{i + 1},{_fmt(sched.y[i])},{c_cell},{_fmt(gaps[i])}")
        _emit("\n".join(rows) + "\n", args.output)
    else:  # json-lines
        payload = {
            "T": instance.T,
            "N": instance.N,
            "mode": _mode_json(instance.mode),
            "branch": report.branch,
            "condition": report.condition,
            "y": list(sched.y),
            "c": list(sched.c),
            "s": gaps,
            "total_age": obj,
            "avg_age": avg,
        }
        _emit(json.dumps(payload) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise DomainError(f"--trials must be >= 1, got {args.trials}")
    seed = args.seed if args.seed is not None else _env_seed()
    kinds = (args.mode,) if args.mode else _MODES
    rng = np.random.default_rng(seed)
    ok = True
    for kind in kinds:
        gaps = []
        for t in range(args.trials):
            instance = oracle.random_instance(kind, rng)
            cfg = oracle.OracleConfig(restarts=args.restarts, seed=seed + t)
            try:
                gaps.append(oracle.compare(instance, cfg))
            except NonConvergence:
                gaps.append(float("inf"))
        worst = max(gaps, key=abs)
        mean = sum(gaps) / len(gaps)
        line_ok = all(oracle.GAP_LOWER <= g <= oracle.GAP_UPPER for g in gaps)
        ok = ok and line_ok
        print(
            f"{kind}: trials={args.trials} max_gap={worst:.3e} "
            f"mean_gap={mean:.3e} {'ok' if line_ok else 'FAIL'}"
        )
    return 0 if ok else 3


def _sweep_spec(args) -> DistortionSpec:
    explicit = [args.a, args.b, args.d, args.c_max]
    if args.kind is not None or any(v is not None for v in explicit):
        if args.kind is None or any(v is None for v in explicit):
            raise DomainError("an explicit curve needs --kind, --a, --b, --d and --c-max")
        return DistortionSpec(
            kind=DistortionKind(args.kind), a=args.a, b=args.b, d=args.d, c_max=args.c_max
        )
    return PRESETS[args.preset]


def cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    if args.steps < 2:
        raise DomainError(f"--steps must be >= 2, got {args.steps}")
    beta_lo = args.beta_min if args.beta_min is not None else evaluate(spec, spec.c_max)
    beta_hi = args.beta_max if args.beta_max is not None else evaluate(spec, 0.0)
    if not (beta_hi >= beta_lo):
        raise DomainError(f"empty budget range [{beta_lo}, {beta_hi}]")

    rows = []
    feasible_avgs = []
    for beta in np.linspace(beta_lo, beta_hi, args.steps):
        beta = float(beta)
        try:
            c_min = min_processing_for(spec, beta)
        except Infeasible:
            rows.append((beta, None, None, None, "infeasible"))
            continue
        try:
            sched, report = closed_form.solve_constant(args.T, args.N, c_min)
        except Infeasible:
            rows.append((beta, c_min, None, None, "infeasible"))
            continue
        obj = total_age(sched)
        avg = obj / args.T
        feasible_avgs.append(avg)
        rows.append((beta, c_min, obj, avg, report.branch))

    # the optimal age can only improve as the budget loosens
    for prev, cur in zip(feasible_avgs, feasible_avgs[1:]):
        if cur > prev * (1 + 1e-12):
            raise RuntimeError(
                f"internal inconsistency: avg_age rose from {prev} to {cur} "
                "along a loosening budget sweep"
            )

    def cell(v):
        return "" if v is None else _fmt(v)

    if args.format == "table":
        lines = [f"{'beta':>16} {'c_min':>16} {'total_age':>16} {'avg_age':>16} regime"]
        for r in rows:
            lines.append(
                f"{cell(r[0]):>16} {cell(r[1]):>16} {cell(r[2]):>16} "
                f"{cell(r[3]):>16} {r[4]}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    else:
        lines = ["beta,c_min,total_age,avg_age,regime"]
        for r in rows:
            lines.append(f"{cell(r[0])},{cell(r[1])},{cell(r[2])},{cell(r[3])},{r[4]}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _svg(traj: trajectory.AgeTrajectory) -> str:
    width, height = 640.0, 400.0
    ml, mr, mt, mb = 60.0, 20.0, 20.0, 50.0
    span_t = traj.horizon if traj.horizon > 0 else 1.0
    top = max(max(b.age_before for b in traj.breakpoints), 1e-12)

    def px(t: float) -> float:
        return ml + t / span_t * (width - ml - mr)

    def py(age: float) -> float:
        return height - mb - age / top * (height - mt - mb)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        f'<rect x="0" y="0" width="{width:g}" height="{height:g}" fill="white"/>',
        f'<line x1="{ml:g}" y1="{height - mb:g}" x2="{width - mr:g}" y2="{height - mb:g}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{ml:g}" y1="{mt:g}" x2="{ml:g}" y2="{height - mb:g}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for k in range(5):
        tv = span_t * k / 4
        av = top * k / 4
        x, y = px(tv), py(av)
        parts.append(
            f'<line x1="{x:.2f}" y1="{height - mb:g}" x2="{x:.2f}" '
            f'y2="{height - mb + 5:g}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{height - mb + 18:g}" font-size="11" '
            f'text-anchor="middle">{tv:.3g}</text>'
        )
        parts.append(
            f'<line x1="{ml - 5:g}" y1="{y:.2f}" x2="{ml:g}" y2="{y:.2f}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{ml - 8:g}" y="{y + 4:.2f}" font-size="11" '
            f'text-anchor="end">{av:.3g}</text>'
        )
    parts.append(
        f'<text x="{(ml + width - mr) / 2:.2f}" y="{height - 12:g}" font-size="12" '
        'text-anchor="middle">t</text>'
    )
    parts.append(
        f'<text x="14" y="{(mt + height - mb) / 2:.2f}" font-size="12" '
        'text-anchor="middle">age</text>'
    )
    # one polyline per continuous stretch; drops start a new one
    points: list[str] = [f"{px(0):.2f},{py(0):.2f}"]
    for a, b in zip(traj.breakpoints, traj.breakpoints[1:]):
        points.append(f"{px(b.t):.2f},{py(b.age_before):.2f}")
        if b.age_after != b.age_before:
            parts.append(
                f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" '
                f'points="{" ".join(points)}"/>'
            )
            points = [f"{px(b.t):.2f},{py(b.age_after):.2f}"]
    parts.append(
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" '
        f'points="{" ".join(points)}"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_trajectory(args) -> int:
    instance = _load_instance(args)
    sched, report, obj, _ = _solve_payload(instance)
    traj = trajectory.build(sched)
    if args.format == "csv":
        step = args.step if args.step is not None else traj.horizon
        rows = trajectory.sample(traj, step)
        text = "t,age\n" + "\n".join(f"{_fmt(t)},{_fmt(a)}" for t, a in rows) + "\n"
    else:
        text = _svg(traj)
    _emit(text, args.output)
    # keep machine output clean when it goes to stdout
    summary = sys.stdout if args.output is not None else sys.stderr
    print(f"total_age {_fmt(obj)}", file=summary)
    return 0


def _add_instance_flags(p: _Parser) -> None:
    p.add_argument("--mode", choices=_MODES, help="constraint mode")
    p.add_argument("--T", type=float, help="horizon length")
    p.add_argument("--N", type=int, help="number of updates")
    p.add_argument("--c", type=float, help="c_min (constant) or c (proportional)")
    p.add_argument("--alpha", type=float, help="age coefficient")
    p.add_argument("--input", help="JSON instance file instead of inline flags")


def build_parser() -> _Parser:
    parser = _Parser(prog="aoi-sched", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("solve", help="solve one instance with the exact solver")
    _add_instance_flags(p)
    p.add_argument("--format", choices=("table", "csv", "json-lines"), default="table")
    p.add_argument("--output", help="write to this path instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="random agreement check against the oracle")
    p.add_argument("--trials", type=int, default=20, help="instances per mode")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=_MODES, default=None, help="restrict to one mode")
    p.add_argument("--restarts", type=int, default=8, help="oracle restarts per trial")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="distortion-budget sweep for constant mode")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--preset", choices=sorted(PRESETS), default="steep")
    p.add_argument("--kind", choices=[k.value for k in DistortionKind], default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--c-max", dest="c_max", type=float, default=None)
    p.add_argument("--beta-min", dest="beta_min", type=float, default=None)
    p.add_argument("--beta-max", dest="beta_max", type=float, default=None)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--format", choices=("table", "csv"), default="csv")
    p.add_argument("--output", help="write to this path instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trajectory", help="emit the sawtooth age curve")
    _add_instance_flags(p)
    p.add_argument("--step", type=float, default=None, help="sample grid spacing (csv)")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--output", help="write to this path instead of stdout")
    p.set_defaults(func=cmd_trajectory)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (DomainError, ShapeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Infeasible as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 2
    except NonConvergence as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
