"""Successive over-relaxation for the steady streamfunction-vorticity system.

One outer iteration is a psi sweep, a wall-vorticity refresh from the new
psi, and an omega sweep.  Convergence is monitored with three residual
measures per field:

* RES1, the largest absolute residual of the discrete equations;
* RES2, the largest absolute change between consecutive iterates;
* RES3, the largest relative change, normalised by the previous iterate
  (nodes with ``|previous| < 1e-12`` are skipped).

RES2 and RES3 are taken over interior nodes, where the unknowns live.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _kernels
from .errors import Diverged, NotConverged
from .fields import BoundarySpec, FlowState, apply_boundary, residual_fields

log = logging.getLogger(__name__)

RES3_GUARD = _kernels.RES3_GUARD


@dataclass
class SolverConfig:
    relax_psi: float = 1.5
    relax_omega: float = 0.6
    tol: float = 1e-10
    max_iters: int = 500_000
    log_every: int = 100
    bc: BoundarySpec = field(default_factory=BoundarySpec)
    initial: Optional[FlowState] = None
    red_black: bool = False

    def __post_init__(self):
        if not 0.0 < self.relax_psi < 2.0:
            raise ValueError(f"relax_psi must lie in (0, 2), got {self.relax_psi}")
        if not 0.0 < self.relax_omega < 2.0:
            raise ValueError(f"relax_omega must lie in (0, 2), got {self.relax_omega}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ValueError(f"max_iters must be a non-negative integer, got {self.max_iters}")
        if int(self.log_every) != self.log_every or self.log_every < 1:
            raise ValueError(f"log_every must be a positive integer, got {self.log_every}")

    @property
    def ordering(self):
        return _kernels.RED_BLACK if self.red_black else _kernels.LEXICOGRAPHIC


@dataclass(frozen=True)
class ResidualTriad:
    iter: int
    res1_psi: float
    res1_omega: float
    res2_psi: float
    res2_omega: float
    res3_psi: float
    res3_omega: float

    FIELDS = ("iter", "res1_psi", "res1_omega", "res2_psi", "res2_omega",
              "res3_psi", "res3_omega")

    @classmethod
    def from_array(cls, iteration, values):
        return cls(int(iteration), *(float(x) for x in values))

    def values(self):
        return (self.res1_psi, self.res1_omega, self.res2_psi,
                self.res2_omega, self.res3_psi, self.res3_omega)

    def as_row(self):
        """Log line ``iter,res1_psi,...`` at 17 significant digits."""
        return ",".join([str(self.iter)] + [f"{x:.16e}" for x in self.values()])


@dataclass
class SolveOutcome:
    state: FlowState
    history: list
    converged: bool
    iterations: int

    @property
    def final(self):
        return self.history[-1] if self.history else None


def _check_diverged(acc, what):
    if acc[2] != 0.0:
        raise Diverged(f"{what} sweep produced a non-finite value")


def sweep_psi(state, relax_psi, red_black=False):
    """One SOR pass on the Poisson equation for psi.

    Returns ``(new_state, max_abs_change)``; the input is left untouched.
    """
    out = state.copy()
    order = _kernels.RED_BLACK if red_black else _kernels.LEXICOGRAPHIC
    acc = _kernels.sweep_psi(out.psi, out.omega, out.grid.h, relax_psi, order)
    _check_diverged(acc, "psi")
    return out, float(acc[0])


def sweep_omega(state, relax_omega, re=None, red_black=False):
    """One SOR pass on the steady vorticity equation.

    ``re`` defaults to ``state.re``.  Returns ``(new_state, max_abs_change)``.
    """
    out = state.copy()
    re = state.re if re is None else re
    order = _kernels.RED_BLACK if red_black else _kernels.LEXICOGRAPHIC
    acc = _kernels.sweep_omega(out.psi, out.omega, out.grid.h, re,
                               relax_omega, order)
    _check_diverged(acc, "omega")
    return out, float(acc[0])


def _guarded_relative(prev, nxt):
    mask = np.abs(prev) >= RES3_GUARD
    if not mask.any():
        return 0.0
    return float(np.max(np.abs((nxt[mask] - prev[mask]) / prev[mask])))


def compute_residuals(prev, next, iter):
    """Residual triad between two consecutive iterates."""
    if prev.grid != next.grid:
        raise ValueError("iterates live on different grids")
    r_psi, r_om = residual_fields(next)
    c = (slice(1, -1), slice(1, -1))
    return ResidualTriad(
        iter=int(iter),
        res1_psi=float(np.max(np.abs(r_psi))),
        res1_omega=float(np.max(np.abs(r_om))),
        res2_psi=float(np.max(np.abs(next.psi[c] - prev.psi[c]))),
        res2_omega=float(np.max(np.abs(next.omega[c] - prev.omega[c]))),
        res3_psi=_guarded_relative(prev.psi[c], next.psi[c]),
        res3_omega=_guarded_relative(prev.omega[c], next.omega[c]),
    )


def iterate(state, config, iter):
    """Apply one outer iteration; returns ``(new_state, triad)``."""
    mid, _ = sweep_psi(state, config.relax_psi, config.red_black)
    mid = apply_boundary(mid, config.bc, inplace=True)
    out, _ = sweep_omega(mid, config.relax_omega, state.re, config.red_black)
    return out, compute_residuals(state, out, iter)


def _initial_state(config, re, grid):
    if config.initial is None:
        state = FlowState.zeros(grid, re)
    else:
        if config.initial.grid != grid:
            raise ValueError("warm-start state lives on a different grid")
        state = config.initial.copy()
        state.re = re
    return apply_boundary(state, config.bc, inplace=True)


def solve(config, re, grid):
    """Relax from ``config.initial`` (zero fields when ``None``) until both
    RES1 values drop to ``config.tol``.

    The history holds the triad every ``config.log_every`` iterations plus
    the final one.

    Raises
    ------
    NotConverged
        ``config.max_iters`` iterations ran without meeting the criterion;
        the partial outcome is attached.
    Diverged
        A sweep produced a non-finite value.
    """
    state = _initial_state(config, re, grid)
    speeds = config.bc.speeds()
    history = []
    done = 0
    status = _kernels.STATUS_RUNNING
    triad = None
    while done < config.max_iters:
        steps = min(config.log_every - done % config.log_every,
                    config.max_iters - done)
        n_run, status, values = _kernels.advance(
            state.psi, state.omega, grid.h, float(re), config.relax_psi,
            config.relax_omega, speeds, config.bc.corner_code, config.ordering,
            config.tol, steps)
        done += n_run
        if status == _kernels.STATUS_DIVERGED:
            raise Diverged(f"non-finite values at iteration {done} (Re={re})",
                           iterations=done)
        triad = ResidualTriad.from_array(done, values)
        if done % config.log_every == 0 or status == _kernels.STATUS_CONVERGED:
            history.append(triad)
            log.debug("Re=%g %s", re, triad.as_row())
        if status == _kernels.STATUS_CONVERGED:
            break
    if triad is not None and (not history or history[-1].iter != done):
        history.append(triad)
    outcome = SolveOutcome(state, history,
                           status == _kernels.STATUS_CONVERGED, done)
    if not outcome.converged:
        raise NotConverged(outcome)
    log.info("Re=%g converged in %d iterations", re, done)
    return outcome


def continuation_sweep(re_list, config, grid):
    """Solve at increasing Reynolds numbers, warm-starting each from the
    previous converged state.

    Returns a dict ``{re: SolveOutcome}`` in ``re_list`` order.  The sweep
    stops at the first unconverged solve, whose partial outcome is the last
    entry.  A divergence propagates as :class:`Diverged` with the outcomes
    finished so far in its ``completed`` attribute.
    """
    re_list = [float(r) for r in re_list]
    if any(b <= a for a, b in zip(re_list, re_list[1:])):
        raise ValueError("Reynolds numbers must be strictly increasing")
    results = {}
    current = config
    for re in re_list:
        try:
            outcome = solve(current, re, grid)
        except NotConverged as exc:
            results[re] = exc.outcome
            break
        except Diverged as exc:
            exc.completed = results
            raise
        results[re] = outcome
        current = replace(config, initial=outcome.state)
    return results
