"""Grid geometry, flow state, point stencils and the wall-vorticity closure.

Fields are ``(n, n)`` float64 arrays indexed ``[i, j]`` with ``i`` along x
and ``j`` along y, node ``(i, j)`` sitting at ``(i*h, j*h)`` in the unit
square.  The streamfunction and vorticity obey ``lap(psi) = -omega`` and the
steady vorticity transport equation; velocities are ``u = dpsi/dy`` and
``v = -dpsi/dx``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BoundaryIndex, RejectedGridSize

WALLS = ("bottom", "top", "left", "right")
CORNER_POLICIES = ("average_adjacent_walls", "owned_by_lid")

# Sign of the wall-speed term in the closure for each wall.  Speeds are
# signed along the global axes: +x for bottom/top, +y for left/right.
_WALL_SIGN = {"bottom": 1.0, "top": -1.0, "left": -1.0, "right": 1.0}


@dataclass(frozen=True)
class Grid:
    """Uniform node grid on the unit square."""

    n: int

    @property
    def h(self):
        return 1.0 / (self.n - 1)

    @property
    def coords(self):
        """Node coordinates along either axis, exactly ``k*h``."""
        return np.arange(self.n) * self.h

    @property
    def mid(self):
        """Index of the centerline node (x = 0.5 or y = 0.5)."""
        return (self.n - 1) // 2

    def is_wall(self, i, j):
        m = self.n - 1
        return i == 0 or j == 0 or i == m or j == m


def make_grid(n):
    """Build a :class:`Grid` with ``n`` nodes per side.

    ``n`` must be odd and at least 5 so centerlines fall on nodes and the
    sample count along any line suits composite Simpson quadrature.
    """
    if isinstance(n, bool) or int(n) != n:
        raise RejectedGridSize(f"node count must be an integer, got {n!r}")
    n = int(n)
    if n < 5:
        raise RejectedGridSize(f"node count {n} < 5")
    if n % 2 == 0:
        raise RejectedGridSize(f"node count {n} is even; need an odd count")
    return Grid(n)


@dataclass
class BoundarySpec:
    """Tangential wall speeds and the corner-vorticity policy.

    Top and bottom speeds point along +x, left and right along +y.
    """

    top: float = 1.0
    bottom: float = 0.0
    left: float = 0.0
    right: float = 0.0
    corner_policy: str = "average_adjacent_walls"

    def __post_init__(self):
        if self.corner_policy not in CORNER_POLICIES:
            raise ValueError(f"unknown corner policy {self.corner_policy!r}")
        for wall in WALLS:
            if not np.isfinite(getattr(self, wall)):
                raise ValueError(f"{wall} wall speed must be finite")

    def speeds(self):
        """Speeds as an array ordered bottom, top, left, right."""
        return np.array([self.bottom, self.top, self.left, self.right],
                        dtype=float)

    @property
    def corner_code(self):
        if self.corner_policy == "owned_by_lid":
            return _kernels.CORNER_LID
        return _kernels.CORNER_AVERAGE


@dataclass
class FlowState:
    """Streamfunction and vorticity on one grid at one Reynolds number."""

    grid: Grid
    psi: np.ndarray
    omega: np.ndarray
    re: float = field(default=1.0)

    def __post_init__(self):
        shape = (self.grid.n, self.grid.n)
        self.psi = np.ascontiguousarray(self.psi, dtype=float)
        self.omega = np.ascontiguousarray(self.omega, dtype=float)
        if self.psi.shape != shape or self.omega.shape != shape:
            raise ValueError(
                f"fields must have shape {shape}, got {self.psi.shape} "
                f"and {self.omega.shape}")
        if not (np.isfinite(self.psi).all() and np.isfinite(self.omega).all()):
            raise ValueError("fields contain non-finite values")
        if not self.re > 0:
            raise ValueError(f"Reynolds number must be positive, got {self.re}")

    @classmethod
    def zeros(cls, grid, re=1.0):
        return cls(grid, np.zeros((grid.n, grid.n)), np.zeros((grid.n, grid.n)), re)

    def copy(self):
        return FlowState(self.grid, self.psi.copy(), self.omega.copy(), self.re)

    def equals(self, other):
        """Bitwise equality of grid, fields and Reynolds number."""
        return (self.grid == other.grid and self.re == other.re
                and np.array_equal(self.psi, other.psi)
                and np.array_equal(self.omega, other.omega))


def _check_interior(grid, i, j):
    if not (0 < i < grid.n - 1 and 0 < j < grid.n - 1):
        raise BoundaryIndex(f"node ({i}, {j}) is not interior")


def wall_velocity(grid, i, j, bc=None):
    """Velocity ``(u, v)`` prescribed at wall node ``(i, j)``.

    Corners follow the corner policy: stationary under
    ``average_adjacent_walls``, lid speed at the top corners under
    ``owned_by_lid``.
    """
    bc = bc or BoundarySpec()
    m = grid.n - 1
    on_x_wall = i in (0, m)
    on_y_wall = j in (0, m)
    if on_x_wall and on_y_wall:
        if bc.corner_policy == "owned_by_lid" and j == m:
            return bc.top, 0.0
        return 0.0, 0.0
    if j == 0:
        return bc.bottom, 0.0
    if j == m:
        return bc.top, 0.0
    if i == 0:
        return 0.0, bc.left
    if i == m:
        return 0.0, bc.right
    raise BoundaryIndex(f"node ({i}, {j}) is not on a wall")


def velocity_u(state, i, j, bc=None):
    """x-velocity at node ``(i, j)``; wall nodes return the wall speed."""
    grid = state.grid
    if grid.is_wall(i, j):
        return wall_velocity(grid, i, j, bc)[0]
    psi = state.psi
    return (psi[i, j + 1] - psi[i, j - 1]) / (2.0 * grid.h)


def velocity_v(state, i, j, bc=None):
    """y-velocity at node ``(i, j)``; wall nodes return the wall speed."""
    grid = state.grid
    if grid.is_wall(i, j):
        return wall_velocity(grid, i, j, bc)[1]
    psi = state.psi
    return -((psi[i + 1, j] - psi[i - 1, j]) / (2.0 * grid.h))


def velocity_fields(state, bc=None):
    """Full ``(u, v)`` arrays, interior by central differences."""
    grid = state.grid
    psi = state.psi
    two_h = 2.0 * grid.h
    u = np.zeros_like(psi)
    v = np.zeros_like(psi)
    u[1:-1, 1:-1] = (psi[1:-1, 2:] - psi[1:-1, :-2]) / two_h
    v[1:-1, 1:-1] = -((psi[2:, 1:-1] - psi[:-2, 1:-1]) / two_h)
    m = grid.n - 1
    for k in range(grid.n):
        for i, j in ((k, 0), (k, m), (0, k), (m, k)):
            u[i, j], v[i, j] = wall_velocity(grid, i, j, bc)
    return u, v


def psi_residual_at(state, i, j):
    """Residual of the discrete Poisson equation ``lap(psi) + omega`` at an
    interior node."""
    grid = state.grid
    _check_interior(grid, i, j)
    h = grid.h
    return _kernels.psi_residual.py_func(state.psi, state.omega, i, j, h * h)


def omega_residual_at(state, i, j):
    """Residual of the discrete steady vorticity equation at an interior
    node: diffusion over Re minus the central-difference convection."""
    grid = state.grid
    _check_interior(grid, i, j)
    h = grid.h
    return _kernels.omega_residual.py_func(
        state.psi, state.omega, i, j, h, h * h, state.re)


def residual_fields(state):
    """Vectorised interior residual arrays ``(r_psi, r_omega)``.

    Wall entries are zero.
    """
    psi, om = state.psi, state.omega
    h = state.grid.h
    h2 = h * h
    two_h = 2.0 * h
    c = (slice(1, -1), slice(1, -1))
    e, w = (slice(2, None), slice(1, -1)), (slice(None, -2), slice(1, -1))
    nn, s = (slice(1, -1), slice(2, None)), (slice(1, -1), slice(None, -2))
    r_psi = np.zeros_like(psi)
    r_om = np.zeros_like(om)
    r_psi[c] = (psi[e] + psi[w] + psi[nn] + psi[s] - 4.0 * psi[c]) / h2 + om[c]
    r_om[c] = ((1.0 / state.re) * (om[e] + om[w] + om[nn] + om[s] - 4.0 * om[c]) / h2
               - ((psi[nn] - psi[s]) / two_h) * ((om[e] - om[w]) / two_h)
               + ((psi[e] - psi[w]) / two_h) * ((om[nn] - om[s]) / two_h))
    return r_psi, r_om


def jensen_wall_vorticity(psi1, psi2, V, h, orientation):
    """Second-order wall vorticity from the two nearest interior psi values.

    Parameters
    ----------
    psi1, psi2 : float
        Streamfunction one and two nodes along the inward wall normal.
    V : float
        Tangential wall speed, signed along +x (top/bottom) or +y
        (left/right).
    h : float
        Grid spacing.
    orientation : {"bottom", "top", "left", "right"}

    Notes
    -----
    With ``d`` the inward distance, ``psi(d) = psi_d(0) d + psi_dd(0) d^2/2 +
    O(d^3)``; eliminating the cubic term between the two samples gives
    ``psi_dd(0)`` exactly for cubics, and the wall value of
    ``omega = -psi_dd``.  The sign of the speed term follows from
    ``u = dpsi/dy`` and ``v = -dpsi/dx`` along each inward normal.
    """
    if orientation not in _WALL_SIGN:
        raise ValueError(f"unknown wall {orientation!r}")
    return _kernels.jensen.py_func(psi1, psi2, V, h, h * h, _WALL_SIGN[orientation])


def apply_boundary(state, bc=None, inplace=False):
    """Zero the wall streamfunction and refresh wall vorticity.

    Non-corner wall nodes get the closure of :func:`jensen_wall_vorticity`
    with the current interior streamfunction.  Corners take the mean of the
    two adjacent-wall closures evaluated with zero speed, or, under
    ``owned_by_lid``, the top-wall closure with the lid speed at the two top
    corners.
    """
    bc = bc or BoundarySpec()
    out = state if inplace else state.copy()
    _kernels.refresh_walls(out.psi, out.omega, out.grid.h, bc.speeds(),
                           bc.corner_code)
    return out
