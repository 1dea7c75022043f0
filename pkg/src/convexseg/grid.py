"""Finite-difference operators on a unit-spaced image grid.

Fields are numpy arrays of shape ``(N, M)``: row index ``n`` (y), column
index ``m`` (x).  The 1-based coordinate ``(m, n)`` therefore lives at
``field[n - 1, m - 1]``.  This is the only place where that mapping is
spelled out; every other module goes through ``X_AXIS`` / ``Y_AXIS``.

Neumann ghost cells are never stored.  Each operator evaluates its
boundary rows inline as if ``psi(0, n) = psi(1, n)`` and
``psi(M + 1, n) = psi(M, n)`` (same in y).
"""

import numpy as np

X_AXIS = 1
Y_AXIS = 0


def as_field(f):
    """Return ``f`` as a 2-D float64 array (no copy when already one)."""
    arr = np.asarray(f, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D field, got shape {arr.shape}")
    return arr


def shape_mn(f):
    """(M, N) = (width, height) of a field."""
    return f.shape[X_AXIS], f.shape[Y_AXIS]


def _forward_diff(f, axis):
    out = np.zeros_like(f)
    src = np.moveaxis(f, axis, 0)
    dst = np.moveaxis(out, axis, 0)
    # the last entry differences against its own ghost copy -> 0
    dst[:-1] = src[1:] - src[:-1]
    return out


def _backward_diff_adjoint(q, axis):
    # nabla^- with the boundary rows q(1) at the start and -q(J-1) at the end
    out = np.zeros_like(q)
    src = np.moveaxis(q, axis, 0)
    dst = np.moveaxis(out, axis, 0)
    J = src.shape[0]
    if J == 1:
        return out
    dst[0] = src[0]
    dst[1:J - 1] = src[1:J - 1] - src[0:J - 2]
    dst[J - 1] = -src[J - 2]
    return out


def forward_gradient(f):
    """Forward differences ``(d+_x f, d+_y f)`` with Neumann extension.

    Returns a pair ``(gx, gy)`` of arrays shaped like ``f``.  The x-component
    vanishes on the last column and the y-component on the last row.
    """
    f = as_field(f)
    return _forward_diff(f, X_AXIS), _forward_diff(f, Y_AXIS)


def divergence_adjoint(q):
    """Adjoint of :func:`forward_gradient`, i.e. ``-(d-_x q1 + d-_y q2)``."""
    q1, q2 = (as_field(c) for c in q)
    if q1.shape != q2.shape:
        raise ValueError("vector field components differ in shape")
    return -(_backward_diff_adjoint(q1, X_AXIS) + _backward_diff_adjoint(q2, Y_AXIS))


def second_difference(f, axis):
    """1-D central second difference along ``axis`` with replicated ghosts."""
    f = as_field(f)
    padded = np.pad(f, [(1, 1) if a == axis else (0, 0) for a in range(2)], mode="edge")
    src = np.moveaxis(padded, axis, 0)
    return np.moveaxis(src[2:] - 2.0 * src[1:-1] + src[:-2], 0, axis)


def laplacian(f):
    """5-point Laplacian with Neumann ghost extension, same shape as ``f``."""
    f = as_field(f)
    return second_difference(f, X_AXIS) + second_difference(f, Y_AXIS)


def inner(a, b):
    """L2 inner product of two fields, or of two vector fields given as pairs."""
    if isinstance(a, tuple):
        return sum(float(np.vdot(x, y)) for x, y in zip(a, b))
    return float(np.vdot(a, b))


def default_omega1(shape):
    """Boolean mask of ``{(m, n) : 1 < m < M, 1 < n < N}``, the grid minus its frame."""
    mask = np.zeros(shape, dtype=bool)
    mask[1:-1, 1:-1] = True
    return mask
