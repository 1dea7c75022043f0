"""Input checks shared by the estimator and the command line."""

import numpy as np
from sklearn.utils.validation import check_array

from .sdf import check_binary_mask


def check_image(img):
    """Return ``img`` as float64 ``(N, M)`` or ``(N, M, 3)`` with values in [0, 1]."""
    arr = check_array(img, ensure_2d=False, allow_nd=True, dtype=np.float64,
                      ensure_min_samples=2, ensure_min_features=2)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[..., 0]
    if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
        raise ValueError(f"expected a gray (N, M) or color (N, M, 3) image, got shape {arr.shape}")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("image values must lie in [0, 1]")
    return arr


def check_mask(mask, shape, name="mask"):
    """0/1 mask (0 = object) of the given ``(N, M)`` shape."""
    m = check_binary_mask(mask)
    if m.shape != tuple(shape):
        raise ValueError(f"{name} shape {m.shape} != image shape {tuple(shape)}")
    return m


def check_landmarks(landmarks, shape):
    """``(K, 2)`` integer ``(x, y)`` pixel positions inside a ``(N, M)`` image."""
    arr = np.asarray(landmarks)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=int)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"landmarks must have shape (K, 2), got {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
            raise ValueError("landmarks must be integer pixel positions")
    arr = arr.astype(int)
    N, M = shape
    if ((arr[:, 0] < 0) | (arr[:, 0] >= M) | (arr[:, 1] < 0) | (arr[:, 1] >= N)).any():
        raise ValueError("landmark outside the image")
    return arr
