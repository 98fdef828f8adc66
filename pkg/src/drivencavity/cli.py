"""Command-line front end.

Subcommands::

    solve     --re RE          relax one Reynolds number, write all outputs
    sweep     --re-list A,B,.. warm-started continuation, one folder per Re
    check     --input FILE     continuity report for an existing field dump
    vortices  --input FILE     vortex census for an existing field dump
    profiles  --input FILE     centerline profiles for an existing field dump

Exit status is 0 on success, 2 when a solve stops without meeting the
residual criterion (outputs are still written) or blows up, and 1 on usage
or I/O errors.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from . import diagnostics, io
from .errors import Diverged, FormatError, NotConverged, RejectedGridSize, UsageError
from .fields import BoundarySpec, make_grid
from .solver import SolverConfig, continuation_sweep, solve

log = logging.getLogger("drivencavity")

SUBCOMMANDS = ("solve", "sweep", "check", "vortices", "profiles")
CORNER_FLAGS = {"average": "average_adjacent_walls", "lid": "owned_by_lid"}

FIELD_FILE = "field.csv"
LOG_FILE = "convergence.csv"
CONTINUITY_FILE = "continuity.json"
VORTEX_FILE = "vortices.json"
U_PROFILE_FILE = "u_profile.csv"
V_PROFILE_FILE = "v_profile.csv"


@dataclass
class RunConfig:
    subcommand: str
    re: Optional[float] = None
    re_list: List[float] = field(default_factory=list)
    n: int = 129
    relax_psi: float = 1.5
    relax_omega: float = 0.6
    tol: float = 1e-10
    max_iters: int = 500_000
    log_every: int = 100
    corner_policy: str = "average_adjacent_walls"
    red_black: bool = False
    refine: bool = False
    output_dir: Path = Path(".")
    input_field: Optional[Path] = None
    verbose: int = 0

    def solver_config(self, initial=None):
        return SolverConfig(
            relax_psi=self.relax_psi, relax_omega=self.relax_omega,
            tol=self.tol, max_iters=self.max_iters, log_every=self.log_every,
            bc=BoundarySpec(corner_policy=self.corner_policy),
            initial=initial, red_black=self.red_black)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _re_list(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser():
    parser = _Parser(prog="drivencavity",
                     description="Steady lid-driven cavity flow by SOR.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        if name == "sweep":
            p.add_argument("--re-list", type=_re_list, required=True, dest="re_list")
        else:
            p.add_argument("--re", type=float, required=(name == "solve"))
        p.add_argument("--n", type=int, default=129)
        p.add_argument("--relax-psi", type=float, default=1.5)
        p.add_argument("--relax-omega", type=float, default=0.6)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--max-iters", type=int, default=500_000)
        p.add_argument("--log-every", type=int, default=100)
        p.add_argument("--corner-policy", choices=sorted(CORNER_FLAGS), default="average")
        p.add_argument("--red-black", action="store_true")
        p.add_argument("--refine", action="store_true",
                       help="sub-grid vortex centers by local quadratic fit")
        p.add_argument("--out", type=Path, default=Path("."))
        p.add_argument("--input", type=Path, required=name in ("check", "vortices", "profiles"))
    return parser


def parse_args(argv):
    """Parse and validate ``argv`` into a :class:`RunConfig`."""
    ns = build_parser().parse_args(list(argv))
    cfg = RunConfig(
        subcommand=ns.subcommand,
        re=getattr(ns, "re", None),
        re_list=getattr(ns, "re_list", None) or [],
        n=ns.n, relax_psi=ns.relax_psi, relax_omega=ns.relax_omega,
        tol=ns.tol, max_iters=ns.max_iters, log_every=ns.log_every,
        corner_policy=CORNER_FLAGS[ns.corner_policy], red_black=ns.red_black,
        refine=ns.refine, output_dir=ns.out, input_field=ns.input,
        verbose=ns.verbose)
    _validate(cfg)
    return cfg


def _validate(cfg):
    try:
        make_grid(cfg.n)
    except RejectedGridSize as exc:
        raise UsageError(f"--n: {exc}") from None
    if cfg.re is not None and not cfg.re > 0:
        raise UsageError(f"--re: Reynolds number must be positive, got {cfg.re}")
    if cfg.subcommand == "sweep":
        if not cfg.re_list:
            raise UsageError("--re-list: empty list")
        if any(r <= 0 for r in cfg.re_list):
            raise UsageError("--re-list: Reynolds numbers must be positive")
        if any(b <= a for a, b in zip(cfg.re_list, cfg.re_list[1:])):
            raise UsageError("--re-list: values must be strictly increasing")
    for flag, value in (("--relax-psi", cfg.relax_psi), ("--relax-omega", cfg.relax_omega)):
        if not 0.0 < value < 2.0:
            raise UsageError(f"{flag}: must lie in (0, 2), got {value}")
    if not cfg.tol > 0:
        raise UsageError(f"--tol: must be positive, got {cfg.tol}")
    if cfg.max_iters < 0:
        raise UsageError(f"--max-iters: must be non-negative, got {cfg.max_iters}")
    if cfg.log_every < 1:
        raise UsageError(f"--log-every: must be positive, got {cfg.log_every}")


def write_reports(out_dir, state, bc, refine=False):
    """Continuity, vortex and profile files for one state."""
    out_dir = Path(out_dir)
    io.write_json(out_dir / CONTINUITY_FILE, diagnostics.continuity_check(state, bc).as_dict())
    io.write_json(out_dir / VORTEX_FILE,
                  [r.as_dict() for r in diagnostics.detect_vortices(state, refine=refine)])
    u_prof, v_prof = diagnostics.centerline_profiles(state, bc)
    io.write_profile(out_dir / U_PROFILE_FILE, u_prof)
    io.write_profile(out_dir / V_PROFILE_FILE, v_prof)


def write_outcome(out_dir, outcome, bc, refine=False):
    out_dir = Path(out_dir)
    io.write_field_dump(out_dir / FIELD_FILE, outcome.state, bc)
    io.write_convergence_log(out_dir / LOG_FILE, outcome.history)
    write_reports(out_dir, outcome.state, bc, refine)


def _run_solve(cfg):
    initial = None
    if cfg.input_field is not None:
        initial, _ = io.load_field_dump_with_bc(cfg.input_field, cfg.re)
    scfg = cfg.solver_config(initial)
    grid = initial.grid if initial is not None else make_grid(cfg.n)
    status = 0
    try:
        outcome = solve(scfg, cfg.re, grid)
    except NotConverged as exc:
        outcome = exc.outcome
        status = 2
    write_outcome(cfg.output_dir, outcome, scfg.bc, cfg.refine)
    log.info("Re=%g: %s after %d iterations", cfg.re,
             "converged" if outcome.converged else "not converged", outcome.iterations)
    return status


def _run_sweep(cfg):
    scfg = cfg.solver_config()
    failure = None
    try:
        results = continuation_sweep(cfg.re_list, scfg, make_grid(cfg.n))
    except Diverged as exc:
        results, failure = exc.completed, exc
    status = 0
    for re, outcome in results.items():
        write_outcome(cfg.output_dir / f"re_{re:g}", outcome, scfg.bc, cfg.refine)
        log.info("Re=%g: %s after %d iterations", re,
                 "converged" if outcome.converged else "not converged", outcome.iterations)
        if not outcome.converged:
            status = 2
    if failure is not None:
        raise failure
    return status


def _run_existing(cfg):
    state, bc = io.load_field_dump_with_bc(cfg.input_field, cfg.re or 1.0)
    out = cfg.output_dir
    if cfg.subcommand == "check":
        io.write_json(out / CONTINUITY_FILE, diagnostics.continuity_check(state, bc).as_dict())
    elif cfg.subcommand == "vortices":
        io.write_json(out / VORTEX_FILE,
                      [r.as_dict() for r in diagnostics.detect_vortices(state, refine=cfg.refine)])
    else:
        u_prof, v_prof = diagnostics.centerline_profiles(state, bc)
        io.write_profile(out / U_PROFILE_FILE, u_prof)
        io.write_profile(out / V_PROFILE_FILE, v_prof)
    return 0


def run(cfg):
    """Execute a parsed :class:`RunConfig`; returns the exit status."""
    try:
        if cfg.subcommand == "solve":
            return _run_solve(cfg)
        if cfg.subcommand == "sweep":
            return _run_sweep(cfg)
        return _run_existing(cfg)
    except Diverged as exc:
        log.error("%s", exc)
        return 2
    except (OSError, FormatError) as exc:
        log.error("%s", exc)
        return 1


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"drivencavity: error: {exc}", file=sys.stderr)
        return 1
    level = logging.DEBUG if cfg.verbose > 1 else logging.INFO if cfg.verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
