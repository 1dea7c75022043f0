"""Synthetic test images with known ground truth.

All generators return ``(image, truth)``: a float image in [0, 1] of shape
``(N, M)`` and a 0/1 truth mask (0 = object).  Output is a deterministic
function of the arguments, including ``seed``.
"""

import numpy as np

SHAPES = ("disk", "ellipse", "crescent", "occluded-disk", "low-contrast-disk", "corrupted-disk")

OBJECT_LEVEL = 0.25
BACKGROUND_LEVEL = 0.75


def _disk(shape, cx, cy, r):
    yy, xx = np.indices(shape, dtype=np.float64)
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r


def _geometry(size):
    M, N = size
    cx, cy = (M - 1) / 2.0, (N - 1) / 2.0
    r = 0.25 * min(M, N)
    return (N, M), cx, cy, r


def object_region(name, size=(128, 128)):
    """Boolean object region for a named shape (the truth mask, inverted)."""
    shape, cx, cy, r = _geometry(size)
    yy, xx = np.indices(shape, dtype=np.float64)
    if name in ("disk", "occluded-disk", "low-contrast-disk", "corrupted-disk"):
        return _disk(shape, cx, cy, r)
    if name == "ellipse":
        return ((xx - cx) / (1.3 * r)) ** 2 + ((yy - cy) / (0.75 * r)) ** 2 <= 1.0
    if name == "crescent":
        outer = _disk(shape, cx, cy, 1.2 * r)
        bite = _disk(shape, cx + 0.75 * r, cy, 0.95 * r)
        return outer & ~bite
    raise ValueError(f"unknown shape {name!r}; expected one of {', '.join(SHAPES)}")


def occluder_region(size=(128, 128)):
    """Vertical bar, background-coloured, covering part of the occluded disk."""
    shape, cx, cy, r = _geometry(size)
    yy, xx = np.indices(shape, dtype=np.float64)
    return (xx >= cx + 0.35 * r) & (xx <= cx + 0.65 * r)


def corrupted_sector(size=(128, 128)):
    """Quarter sector (pointing to +x) of the disk whose contrast is degraded."""
    shape, cx, cy, r = _geometry(size)
    yy, xx = np.indices(shape, dtype=np.float64)
    ang = np.arctan2(yy - cy, xx - cx)
    return _disk(shape, cx, cy, r) & (np.abs(ang) <= np.pi / 4)


def boundary_landmarks(size=(128, 128), angles=(-np.pi / 4, -np.pi / 12, np.pi / 12, np.pi / 4)):
    """Integer pixels on the true disk boundary at the given angles, as (x, y)."""
    _, cx, cy, r = _geometry(size)
    pts = [(int(round(cx + r * np.cos(a))), int(round(cy + r * np.sin(a)))) for a in angles]
    return np.array(pts, dtype=int)


def make_image(name, size=(128, 128), sigma=0.05, seed=0, contrast_kept=0.4):
    """Generate ``(image, truth)`` for a named shape; ``size`` is ``(M, N)``."""
    if name not in SHAPES:
        raise ValueError(f"unknown shape {name!r}; expected one of {', '.join(SHAPES)}")
    obj = object_region(name, size)
    lo, hi = OBJECT_LEVEL, BACKGROUND_LEVEL
    if name == "low-contrast-disk":
        lo, hi = 0.45, 0.55
    img = np.where(obj, lo, hi).astype(np.float64)
    if name == "occluded-disk":
        img[occluder_region(size) & obj] = hi
    if name == "corrupted-disk":
        img[corrupted_sector(size)] = hi - contrast_kept * (hi - lo)
    rng = np.random.default_rng(seed)
    if sigma > 0:
        img = img + rng.normal(0.0, sigma, img.shape)
    img = np.clip(img, 0.0, 1.0)
    truth = np.where(obj, 0, 1).astype(np.uint8)
    return img, truth


def default_scribbles(size=(128, 128), length=10):
    """Short object and background strokes for the occluded disk.

    The object stroke is horizontal, left of the centre.  The background
    stroke is vertical, just above the disk and in line with the occluder,
    so the occluder looks like background to nearby pixels.
    """
    shape, cx, cy, r = _geometry(size)
    ob = np.zeros(shape, dtype=bool)
    bg = np.zeros(shape, dtype=bool)
    x0, row = int(round(cx - 0.58 * r)), int(cy)
    ob[row, x0:x0 + length] = True
    col, y0 = int(cx + 0.5 * r), int(round(cy - 1.24 * r))
    bg[y0:y0 + length, col] = True
    return ob, bg
