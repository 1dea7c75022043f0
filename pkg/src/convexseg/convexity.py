"""Empirical convexity checks for masks and level-set functions.

Two complementary views of the same property: a convex object has a
signed distance function with nonnegative Laplacian almost everywhere, and
every sublevel set of that SDF is convex as well.  On a pixel grid both
tests need tolerances; see :func:`is_mask_convex`.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .exceptions import EmptyObjectError
from .grid import as_field, default_omega1, laplacian


@dataclass
class ConvexityReport:
    max_violation: float
    mask_convex: bool
    worst_pixel: tuple
    sublevel_results: list = field(default_factory=list)

    def to_text(self):
        lines = [
            f"max_violation = {self.max_violation:.6g}",
            f"mask_convex = {str(self.mask_convex).lower()}",
            f"worst_pixel = {self.worst_pixel[0]} {self.worst_pixel[1]}",
        ]
        for c, ok in self.sublevel_results:
            lines.append(f"sublevel {c:g} = {'convex' if ok else 'nonconvex'}")
        return "\n".join(lines) + "\n"


def laplacian_violation(phi, omega1=None, return_argmax=False):
    """Largest ``max(0, -Lap phi)`` over ``omega1`` (default: all but the frame).

    With ``return_argmax`` the ``(x, y)`` pixel of the worst violation is
    returned too.
    """
    phi = as_field(phi)
    if omega1 is None:
        omega1 = default_omega1(phi.shape)
    v = np.where(omega1, np.maximum(0.0, -laplacian(phi)), 0.0)
    idx = np.unravel_index(int(np.argmax(v)), v.shape)
    worst = float(v[idx])
    if return_argmax:
        return worst, (int(idx[1]), int(idx[0]))
    return worst


def convex_hull(points):
    """Andrew's monotone chain; ``points`` is (K, 2), returns CCW hull vertices."""
    pts = np.unique(np.asarray(points, dtype=np.float64), axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def hull_pixels(obj):
    """Boolean mask of pixel centres lying in the convex hull of ``obj``'s centres."""
    ys, xs = np.nonzero(obj)
    # only boundary pixels can be hull vertices
    edge = obj & ~ndimage.binary_erosion(obj, border_value=0)
    ey, ex = np.nonzero(edge)
    hull = convex_hull(np.c_[ex, ey])
    out = np.zeros(obj.shape, dtype=bool)
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min(), ys.max()
    yy, xx = np.mgrid[y0:y1 + 1, x0:x1 + 1].astype(np.float64)
    inside = np.ones(xx.shape, dtype=bool)
    if len(hull) >= 2:
        nxt = np.roll(hull, -1, axis=0)
        for (ax, ay), (bx, by) in zip(hull, nxt):
            cr = (bx - ax) * (yy - ay) - (by - ay) * (xx - ax)
            inside &= cr >= -1e-9
    out[y0:y1 + 1, x0:x1 + 1] = inside
    return out


def is_mask_convex(mask, tol_px=1.0):
    """True when the hull of the object lies inside the object grown by ``tol_px``.

    ``mask`` uses 0 for object pixels.  Raises :class:`EmptyObjectError`
    when there are none.
    """
    obj = np.asarray(mask) == 0
    if not obj.any():
        raise EmptyObjectError("mask has no object pixels")
    hull = hull_pixels(obj)
    dist_to_obj = ndimage.distance_transform_edt(~obj)
    return bool(np.all(dist_to_obj[hull] <= tol_px + 1e-9))


def sublevel_convexity_oracle(phi, levels, tol_px=1.0, omega1=None):
    """Check convexity of ``{phi <= c}`` for each level ``c``.

    Empty sublevel sets are skipped (reported as convex).  ``mask_convex``
    is the zero-level result, or the conjunction over levels when 0 is not
    among them.
    """
    phi = as_field(phi)
    results = []
    for c in levels:
        sub = np.where(phi <= c, 0, 1)
        ok = True if (sub == 1).all() else is_mask_convex(sub, tol_px)
        results.append((float(c), ok))
    zero = [ok for c, ok in results if c == 0.0]
    mask_convex = zero[0] if zero else all(ok for _, ok in results)
    viol, worst = laplacian_violation(phi, omega1, return_argmax=True)
    return ConvexityReport(viol, mask_convex, worst, results)


def convexity_report(phi, tol_px=1.0, omega1=None):
    """Report for a single level-set function: Laplacian + zero-sublevel convexity."""
    return sublevel_convexity_oracle(phi, [0.0], tol_px, omega1)
