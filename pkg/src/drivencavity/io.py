"""Text formats: field dumps, convergence logs, profiles and JSON reports.

Every float is written with 17 significant digits so values survive a
write/read round trip bit-for-bit.  All writers replace their target
atomically (temporary file in the same directory, then rename).
"""

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError, RejectedGridSize
from .fields import BoundarySpec, FlowState, make_grid, velocity_fields
from .solver import ResidualTriad

FIELD_HEADER = "x,y,psi,omega,u,v"
LOG_HEADER = ",".join(ResidualTriad.FIELDS)
PROFILE_HEADER = "coord,value"


def fmt(x):
    return f"{x:.16e}"


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_field_dump(state, bc=None):
    """CSV text of a state; rows run with x varying fastest."""
    grid = state.grid
    u, v = velocity_fields(state, bc)
    c = grid.coords
    lines = [FIELD_HEADER]
    for j in range(grid.n):
        for i in range(grid.n):
            lines.append(",".join(fmt(val) for val in (
                c[i], c[j], state.psi[i, j], state.omega[i, j], u[i, j], v[i, j])))
    return "\n".join(lines) + "\n"


def write_field_dump(path, state, bc=None):
    atomic_write_text(path, format_field_dump(state, bc))


def load_field_dump(path, re=1.0):
    """Read a field dump back into a :class:`FlowState`.

    The node count is inferred from the row count.
    """
    return load_field_dump_with_bc(path, re)[0]


def load_field_dump_with_bc(path, re=1.0):
    """Like :func:`load_field_dump` but also recover the wall speeds.

    The speeds are read off the stored velocity at the middle node of each
    wall; a nonzero u at the top corners marks the ``owned_by_lid`` corner
    policy.  Returns ``(state, bc)``.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != FIELD_HEADER:
        raise FormatError(f"expected header {FIELD_HEADER!r}", line=1)
    rows = lines[1:]
    while rows and not rows[-1].strip():
        rows.pop()
    n = math.isqrt(len(rows))
    if n * n != len(rows):
        raise FormatError(f"{len(rows)} data rows is not a square node count",
                          line=len(rows) + 1)
    try:
        grid = make_grid(n)
    except RejectedGridSize as exc:
        raise FormatError(str(exc), line=len(rows) + 1) from None
    coords = grid.coords
    psi = np.empty((n, n))
    omega = np.empty((n, n))
    vel_u = np.empty((n, n))
    vel_v = np.empty((n, n))
    for k, row in enumerate(rows):
        lineno = k + 2
        parts = row.split(",")
        if len(parts) != 6:
            raise FormatError(f"expected 6 columns, got {len(parts)}", line=lineno)
        try:
            x, y, p, w, uu, vv = (float(s) for s in parts)
        except ValueError:
            raise FormatError("unparseable number", line=lineno) from None
        j, i = divmod(k, n)
        if x != coords[i] or y != coords[j]:
            raise FormatError(f"coordinates ({x}, {y}) out of order", line=lineno)
        if not (math.isfinite(p) and math.isfinite(w)):
            raise FormatError("non-finite field value", line=lineno)
        psi[i, j] = p
        omega[i, j] = w
        vel_u[i, j] = uu
        vel_v[i, j] = vv
    m, mid = n - 1, grid.mid
    bc = BoundarySpec(
        top=vel_u[mid, m], bottom=vel_u[mid, 0], left=vel_v[0, mid], right=vel_v[m, mid],
        corner_policy="owned_by_lid" if vel_u[0, m] != 0.0 else "average_adjacent_walls")
    return FlowState(grid, psi, omega, re), bc


def format_convergence_log(history):
    return "\n".join([LOG_HEADER] + [t.as_row() for t in history]) + "\n"


def write_convergence_log(path, history):
    atomic_write_text(path, format_convergence_log(history))


def read_convergence_log(path):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != LOG_HEADER:
        raise FormatError(f"expected header {LOG_HEADER!r}", line=1)
    out = []
    for k, row in enumerate(lines[1:], start=2):
        parts = row.split(",")
        if len(parts) != 7:
            raise FormatError("expected 7 columns", line=k)
        try:
            out.append(ResidualTriad(int(parts[0]), *(float(s) for s in parts[1:])))
        except ValueError:
            raise FormatError("unparseable number", line=k) from None
    return out


def write_profile(path, pairs):
    lines = [PROFILE_HEADER] + [f"{fmt(a)},{fmt(b)}" for a, b in pairs]
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_profile(path):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != PROFILE_HEADER:
        raise FormatError(f"expected header {PROFILE_HEADER!r}", line=1)
    out = []
    for k, row in enumerate(lines[1:], start=2):
        parts = row.split(",")
        if len(parts) != 2:
            raise FormatError("expected 2 columns", line=k)
        try:
            out.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise FormatError("unparseable number", line=k) from None
    return out


def write_json(path, payload):
    atomic_write_text(path, json.dumps(payload, indent=2, allow_nan=False) + "\n")
