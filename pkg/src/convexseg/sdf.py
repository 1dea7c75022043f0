"""Signed distance functions from binary masks (fast sweeping).

Masks follow the segmentation convention ``u = 0`` on the object and
``u = 1`` on the background, so the SDF is negative on object pixels.
"""

import math

import numpy as np

from .exceptions import AllBackgroundError, AllForegroundError
from .grid import as_field

SWEEP_PASSES = 3


def check_binary_mask(mask):
    """Validate a {0, 1} mask and return it as a uint8 array."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("mask values must be 0 (object) or 1 (background)")
    return arr.astype(np.uint8)


def _interface_seeds(obj):
    # sub-pixel distance for pixels with a 4-neighbour of the other label;
    # the interface sits halfway between the two pixel centres
    N, M = obj.shape
    hx = np.zeros(obj.shape, dtype=bool)
    hy = np.zeros(obj.shape, dtype=bool)
    dx = obj[:, 1:] != obj[:, :-1]
    hx[:, 1:] |= dx
    hx[:, :-1] |= dx
    dy = obj[1:, :] != obj[:-1, :]
    hy[1:, :] |= dy
    hy[:-1, :] |= dy
    seed = np.full(obj.shape, np.inf)
    seed[hx ^ hy] = 0.5
    # both directions: distance to the corner line through two half-steps
    seed[hx & hy] = 0.5 / math.sqrt(2.0)
    return seed


def fast_sweep(dist, fixed, passes=SWEEP_PASSES):
    """Solve ``|grad d| = 1`` by Gauss-Seidel sweeps in 4 alternating orders.

    ``dist`` holds the initial values (``inf`` where unknown); entries flagged
    in ``fixed`` are never modified.  Returns a new array.
    """
    N, M = dist.shape
    d = dist.astype(np.float64).ravel().tolist()
    fx = np.asarray(fixed, dtype=bool).ravel().tolist()
    inf = math.inf
    orders = (
        (range(N), range(M)),
        (range(N), range(M - 1, -1, -1)),
        (range(N - 1, -1, -1), range(M - 1, -1, -1)),
        (range(N - 1, -1, -1), range(M)),
    )
    for _ in range(passes):
        for rows, cols in orders:
            for i in rows:
                base = i * M
                for j in cols:
                    k = base + j
                    if fx[k]:
                        continue
                    a = inf
                    if j > 0:
                        a = d[k - 1]
                    if j < M - 1 and d[k + 1] < a:
                        a = d[k + 1]
                    b = inf
                    if i > 0:
                        b = d[k - M]
                    if i < N - 1 and d[k + M] < b:
                        b = d[k + M]
                    if a == inf and b == inf:
                        continue
                    if abs(a - b) >= 1.0:
                        new = (a if a < b else b) + 1.0
                    else:
                        new = 0.5 * (a + b + math.sqrt(2.0 - (a - b) ** 2))
                    if new < d[k]:
                        d[k] = new
    return np.array(d).reshape(N, M)


def sdf_from_mask(mask):
    """Signed distance to the 0/1 interface of ``mask``; negative on the object."""
    u = check_binary_mask(mask)
    obj = u == 0
    if obj.all():
        raise AllForegroundError("mask has no background pixels")
    if not obj.any():
        raise AllBackgroundError("mask has no object pixels")
    seed = _interface_seeds(obj)
    fixed = np.isfinite(seed)
    dist = fast_sweep(seed, fixed)
    return np.where(obj, -dist, dist)


def mask_from_sdf(phi):
    """Sharp Heaviside of ``phi``: 0 where ``phi <= 0`` (object), 1 elsewhere."""
    phi = as_field(phi)
    return (phi > 0).astype(np.uint8)


def eikonal_residual(phi, band=2.0):
    """Median of ``| |grad phi| - 1 |`` away from the zero level and the frame.

    Central differences; only points with ``|phi| >= band`` that are not on
    the outer one-pixel frame contribute.  Returns ``nan`` if none qualify.
    """
    phi = as_field(phi)
    gy, gx = np.gradient(phi)
    mag = np.hypot(gx, gy)
    sel = np.abs(phi) >= band
    sel[0, :] = sel[-1, :] = False
    sel[:, 0] = sel[:, -1] = False
    if not sel.any():
        return float("nan")
    return float(np.median(np.abs(mag[sel] - 1.0)))


def circle_mask(shape, cx, cy, r):
    """Mask with object pixels ``(x - cx)^2 + (y - cy)^2 <= r^2`` (0-based x=column)."""
    yy, xx = np.indices(shape)
    return np.where((xx - cx) ** 2 + (yy - cy) ** 2 <= r * r, 0, 1).astype(np.uint8)


def rect_mask(shape, x0, y0, x1, y1):
    """Mask whose object is the inclusive pixel rectangle ``[x0, x1] x [y0, y1]``."""
    u = np.ones(shape, dtype=np.uint8)
    u[max(y0, 0):y1 + 1, max(x0, 0):x1 + 1] = 0
    if (u == 1).all():
        raise ValueError("rectangle does not intersect the grid")
    return u


def dilate_object(mask):
    """Grow the object (0-pixels) by one pixel in the 4-neighbourhood."""
    obj = check_binary_mask(mask) == 0
    grown = obj.copy()
    grown[1:, :] |= obj[:-1, :]
    grown[:-1, :] |= obj[1:, :]
    grown[:, 1:] |= obj[:, :-1]
    grown[:, :-1] |= obj[:, 1:]
    return np.where(grown, 0, 1).astype(np.uint8)



def _segment_distance(px, py, vertices):
    # unsigned distance from points (px, py) to a closed polyline
    v = np.asarray(vertices, dtype=np.float64)
    a = v
    b = np.roll(v, -1, axis=0)
    best = np.full(px.shape, np.inf)
    for (ax, ay), (bx, by) in zip(a, b):
        ex, ey = bx - ax, by - ay
        L2 = ex * ex + ey * ey
        if L2 == 0.0:
            t = np.zeros_like(px)
        else:
            t = np.clip(((px - ax) * ex + (py - ay) * ey) / L2, 0.0, 1.0)
        np.minimum(best, np.hypot(px - ax - t * ex, py - ay - t * ey), out=best)
    return best


def points_in_polygon(px, py, vertices):
    """Even-odd rule containment of points in a closed polygon."""
    v = np.asarray(vertices, dtype=np.float64)
    inside = np.zeros(px.shape, dtype=bool)
    x0, y0 = v[:, 0], v[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    for xa, ya, xb, yb in zip(x0, y0, x1, y1):
        crosses = (ya > py) != (yb > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = xa + (py - ya) * (xb - xa) / (yb - ya)
        inside ^= crosses & (px < xint)
    return inside


def polygon_mask(shape, vertices):
    """Rasterize a polygon (x = column, y = row, pixel centres) to a 0/1 mask."""
    yy, xx = np.indices(shape, dtype=np.float64)
    inside = points_in_polygon(xx, yy, vertices)
    return np.where(inside, 0, 1).astype(np.uint8)


def sdf_from_polygon(shape, vertices, band=1.5):
    """SDF of a closed polygonal curve, sampled at pixel centres.

    Points within ``band`` pixels of the curve are seeded with their exact
    distance; the rest of the grid is filled by fast sweeping.  Unlike
    :func:`sdf_from_mask` this sees the curve itself rather than its
    staircase rasterization.
    """
    yy, xx = np.indices(shape, dtype=np.float64)
    inside = points_in_polygon(xx, yy, vertices)
    dist = _segment_distance(xx, yy, vertices)
    near = dist < band
    if not near.any():
        raise ValueError("polygon does not pass near any grid point")
    d = fast_sweep(np.where(near, dist, np.inf), near)
    return np.where(inside, -d, d)
