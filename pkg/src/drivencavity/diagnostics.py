"""Checks and characterisation of a computed cavity flow.

Continuity is verified by integrating the centerline velocity profiles
with composite Simpson quadrature: for a closed cavity the net flow
through either centerline vanishes, so the normalised rates ``q1`` (through
x = 0.5) and ``q2`` (through y = 0.5) measure the discrete mass error.  The
normalising rate ``qc = 0.5`` is that of plane Couette flow under a unit-speed
lid with no side walls.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadSampleCount, NoPrimaryVortex
from .fields import velocity_fields

COUETTE_RATE = 0.5
# Theoretical uniform core vorticity of the primary eddy as Re -> infinity
# (Batchelor inviscid-core model, evaluated by Burggraf).
CORE_VORTICITY_LIMIT = 1.886
EXTREMUM_THRESHOLD = 1e-10

REGIONS = ("primary", "BR", "BL", "TL")
_CORNERS = (("BL", 0.0, 0.0), ("BR", 1.0, 0.0), ("TL", 0.0, 1.0))


def simpson(samples, h):
    """Composite Simpson rule over equally spaced samples.

    >>> simpson([0.0, 0.125, 1.0], 0.5)
    0.25
    """
    f = np.asarray(samples, dtype=float)
    if f.ndim != 1 or f.size < 3 or f.size % 2 == 0:
        raise BadSampleCount(
            f"Simpson needs an odd sample count >= 3, got {f.size}")
    if not h > 0:
        raise ValueError(f"spacing must be positive, got {h}")
    total = f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum()
    return float(h * total / 3.0)


@dataclass(frozen=True)
class FlowRateReport:
    q1: float
    q2: float
    qc: float = COUETTE_RATE

    def as_dict(self):
        return {"q1": self.q1, "q2": self.q2, "qc": self.qc}


def centerline_profiles(state, bc=None):
    """u along the vertical centerline and v along the horizontal one.

    Returns ``(u_profile, v_profile)`` as lists of ``(y, u)`` and ``(x, v)``
    pairs including the wall nodes.
    """
    grid = state.grid
    u, v = velocity_fields(state, bc)
    c = grid.coords
    mid = grid.mid
    u_profile = [(float(y), float(val)) for y, val in zip(c, u[mid, :])]
    v_profile = [(float(x), float(val)) for x, val in zip(c, v[:, mid])]
    return u_profile, v_profile


def continuity_check(state, bc=None):
    """Normalised net flow rates through the two centerlines.

    The signed integral is taken first, then its magnitude, so positive and
    negative lobes of the profile cancel.
    """
    grid = state.grid
    u, v = velocity_fields(state, bc)
    mid = grid.mid
    q1 = abs(simpson(u[mid, :], grid.h)) / COUETTE_RATE
    q2 = abs(simpson(v[:, mid], grid.h)) / COUETTE_RATE
    return FlowRateReport(q1, q2)


@dataclass(frozen=True)
class VortexRecord:
    region: str
    rank: int
    node: tuple
    center: tuple
    psi_value: float
    omega_value: float

    @property
    def label(self):
        return "primary" if self.region == "primary" else f"{self.region}{self.rank}"

    def as_dict(self):
        return {"label": self.label, "i": self.node[0], "j": self.node[1],
                "x": self.center[0], "y": self.center[1],
                "psi": self.psi_value, "omega": self.omega_value}


def strict_extrema(psi, threshold=EXTREMUM_THRESHOLD):
    """Interior nodes strictly above or below all eight neighbours.

    Returns a list of ``(i, j)`` in lexicographic order.
    """
    c = psi[1:-1, 1:-1]
    is_max = np.ones(c.shape, dtype=bool)
    is_min = np.ones(c.shape, dtype=bool)
    n = psi.shape[0]
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            nb = psi[1 + di:n - 1 + di, 1 + dj:n - 1 + dj]
            is_max &= c > nb
            is_min &= c < nb
    hit = (is_max | is_min) & (np.abs(c) >= threshold)
    return [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(hit))]


def _region(x, y):
    left = x <= 0.5
    lower = y <= 0.5
    if lower:
        return "BL" if left else "BR"
    if left:
        return "TL"
    # top-right: nearest of the three eddy-bearing corners
    dist = [(cx - x) ** 2 + (cy - y) ** 2 for _, cx, cy in _CORNERS]
    return _CORNERS[int(np.argmin(dist))][0]


def _quadratic_fit(values, i, j):
    """Least-squares quadratic on the 3x3 patch around ``(i, j)`` in
    node-offset coordinates; returns coefficients of
    ``1, s, t, s^2, s*t, t^2``."""
    s, t = np.meshgrid([-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], indexing="ij")
    s, t = s.ravel(), t.ravel()
    design = np.column_stack([np.ones(9), s, t, s * s, s * t, t * t])
    patch = values[i - 1:i + 2, j - 1:j + 2].ravel()
    return np.linalg.lstsq(design, patch, rcond=None)[0]


def _eval_quadratic(coef, s, t):
    return float(coef @ np.array([1.0, s, t, s * s, s * t, t * t]))


def refine_extremum(state, i, j):
    """Sub-grid stationary point of a local quadratic fit to psi.

    Returns ``((x, y), psi, omega)``; the offset is clipped to one cell.
    """
    coef = _quadratic_fit(state.psi, i, j)
    hess = np.array([[2.0 * coef[3], coef[4]], [coef[4], 2.0 * coef[5]]])
    try:
        ds, dt = np.linalg.solve(hess, -coef[1:3])
    except np.linalg.LinAlgError:
        ds, dt = 0.0, 0.0
    ds, dt = float(np.clip(ds, -1.0, 1.0)), float(np.clip(dt, -1.0, 1.0))
    h = state.grid.h
    psi_val = _eval_quadratic(coef, ds, dt)
    om_val = _eval_quadratic(_quadratic_fit(state.omega, i, j), ds, dt)
    return ((i + ds) * h, (j + dt) * h), psi_val, om_val


def detect_vortices(state, refine=False, threshold=EXTREMUM_THRESHOLD):
    """Census of eddies as strict local extrema of the streamfunction.

    The extremum of largest ``|psi|`` is the primary vortex; the rest are
    grouped by corner region (BR, BL, TL) and ranked by decreasing
    ``|psi|``.  Centers are grid nodes unless ``refine`` is set, in which
    case a local quadratic fit supplies sub-grid centers and values.
    """
    h = state.grid.h
    found = []
    for i, j in strict_extrema(state.psi, threshold):
        if refine:
            center, psi_val, om_val = refine_extremum(state, i, j)
        else:
            center = (i * h, j * h)
            psi_val, om_val = float(state.psi[i, j]), float(state.omega[i, j])
        found.append(((i, j), center, psi_val, om_val))
    if not found:
        return []

    # stable sorts keep lexicographic order among equal magnitudes
    found.sort(key=lambda r: -abs(r[2]))
    node, center, psi_val, om_val = found[0]
    records = [VortexRecord("primary", 1, node, center, psi_val, om_val)]
    counts = {}
    for node, center, psi_val, om_val in found[1:]:
        region = _region(node[0] * h, node[1] * h)
        counts[region] = counts.get(region, 0) + 1
        records.append(VortexRecord(region, counts[region], node, center,
                                    psi_val, om_val))
    return records


def primary_vortex(state, refine=False):
    for rec in detect_vortices(state, refine=refine):
        if rec.region == "primary":
            return rec
    raise NoPrimaryVortex("streamfunction has no qualifying extremum")


def core_vorticity_gap(state, refine=False):
    """``1.886 - |omega|`` at the primary vortex center.

    Positive when the computed core vorticity falls short of the
    infinite-Reynolds-number limit.
    """
    return CORE_VORTICITY_LIMIT - abs(primary_vortex(state, refine).omega_value)


@dataclass(frozen=True)
class PecletReport:
    peclet_max: float
    location: tuple


def peclet_report(state, bc=None):
    """Largest interior cell Peclet number ``max(|u|, |v|) * h * Re``.

    In nondimensional form the viscosity is ``1/Re``.
    """
    grid = state.grid
    u, v = velocity_fields(state, bc)
    speed = np.maximum(np.abs(u), np.abs(v))[1:-1, 1:-1]
    cell = speed * grid.h * state.re
    k = int(np.argmax(cell))
    i, j = np.unravel_index(k, cell.shape)
    return PecletReport(float(cell[i, j]), (int(i) + 1, int(j) + 1))
