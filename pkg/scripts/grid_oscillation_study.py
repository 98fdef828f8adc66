"""Coarse versus fine grid behaviour at moderately high Reynolds number.

Runs a cold-start solve for every (n, Re) pair and records whether it
converged, ran out of budget, or blew up, together with the iteration count,
final residuals and the cell Peclet number of the last state.  A JSON table
is written to ``--out`` and a summary printed to stdout.

    python scripts/grid_oscillation_study.py --grids 65,257 --re 1000,5000
"""

import argparse
import json
import time

from drivencavity import (
    Diverged, NotConverged, SolverConfig, make_grid, peclet_report, solve,
)
from drivencavity.diagnostics import primary_vortex


def _ints(text):
    return [int(s) for s in text.split(",")]


def _floats(text):
    return [float(s) for s in text.split(",")]


def run_case(n, re, config):
    start = time.perf_counter()
    row = {"n": n, "re": re}
    try:
        outcome = solve(config, re, make_grid(n))
        row["status"] = "converged"
    except NotConverged as exc:
        outcome = exc.outcome
        row["status"] = "not_converged"
    except Diverged as exc:
        row.update(status="diverged", iterations=exc.iterations,
                   seconds=time.perf_counter() - start)
        return row
    final = outcome.final
    row.update(
        iterations=outcome.iterations,
        seconds=time.perf_counter() - start,
        res1_psi=final.res1_psi, res1_omega=final.res1_omega,
        peclet_max=peclet_report(outcome.state).peclet_max,
        psi_min=primary_vortex(outcome.state).psi_value,
    )
    return row


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grids", type=_ints, default=[65, 257])
    p.add_argument("--re", type=_floats, default=[1000.0, 5000.0])
    p.add_argument("--relax-psi", type=float, default=1.5)
    p.add_argument("--relax-omega", type=float, default=0.3)
    p.add_argument("--max-iters", type=int, default=1_000_000)
    p.add_argument("--out", default="grid_oscillation_study.json")
    args = p.parse_args(argv)

    config = SolverConfig(relax_psi=args.relax_psi, relax_omega=args.relax_omega,
                          max_iters=args.max_iters, log_every=10_000)
    rows = []
    for n in args.grids:
        for re in args.re:
            row = run_case(n, re, config)
            rows.append(row)
            print(f"n={n:4d} Re={re:7g}  {row['status']:13s} "
                  f"iters={row.get('iterations')}  {row['seconds']:.0f}s", flush=True)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump({"relax_psi": args.relax_psi, "relax_omega": args.relax_omega,
                   "max_iters": args.max_iters, "cases": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
