"""Timing harness for the descent oracle's two kernel backends.

Run directly to time the active backend (AOI_SCHED_BACKEND decides which):

    python3 benchmarks/bench_oracle.py --trials 60

or time both backends in subprocesses and report the speedup:

    python3 benchmarks/bench_oracle.py --trials 60 --both
"""

import argparse
import os
import subprocess
import sys
import time

RESULT_PREFIX = "RESULT"


def run_workload(trials: int, restarts: int, seed: int) -> None:
    import numpy as np

    from aoi_sched import BACKEND, oracle_solve
    from aoi_sched.model import Constant, ProblemInstance
    from aoi_sched.oracle import OracleConfig, random_instance

    # compile/warm outside the timed region
    oracle_solve(
        ProblemInstance(T=5.0, N=2, mode=Constant(c_min=0.5)),
        OracleConfig(restarts=2, seed=0),
    )

    rng = np.random.default_rng(seed)
    kinds = ("constant", "inverse-age", "proportional")
    instances = [random_instance(kinds[i % 3], rng) for i in range(trials)]
    cfg = OracleConfig(restarts=restarts, seed=seed)

    t0 = time.perf_counter()
    for instance in instances:
        oracle_solve(instance, cfg)
    elapsed = time.perf_counter() - t0

    print(
        f"{RESULT_PREFIX} backend={BACKEND} trials={trials} restarts={restarts} "
        f"total={elapsed:.3f}s per_instance={elapsed / trials * 1e3:.2f}ms"
    )


def run_both(args: argparse.Namespace) -> None:
    totals = {}
    for backend in ("numba", "python"):
        env = dict(os.environ, AOI_SCHED_BACKEND=backend)
        cmd = [
            sys.executable, os.path.abspath(__file__),
            "--trials", str(args.trials),
            "--restarts", str(args.restarts),
            "--seed", str(args.seed),
        ]
        out = subprocess.run(
            cmd, env=env, capture_output=True, text=True, check=True
        ).stdout
        line = next(l for l in out.splitlines() if l.startswith(RESULT_PREFIX))
        print(line)
        totals[backend] = float(line.split("total=")[1].split("s")[0])
    print(f"speedup numba vs python: {totals['python'] / totals['numba']:.1f}x")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=60)
    parser.add_argument("--restarts", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--both", action="store_true",
        help="time the numba and pure-python backends in subprocesses",
    )
    args = parser.parse_args(argv)
    if args.both:
        run_both(args)
    else:
        run_workload(args.trials, args.restarts, args.seed)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
