"""Data terms of the segmentation energy.

Everything here is a pixelwise map or a global moment; nothing carries
state between calls.  Probability maps give ``p1``, the probability that a
pixel belongs to class 1, which is the background (``u = 1``, ``phi > 0``).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.special import logsumexp

from .exceptions import DegenerateClassError, EmptyLabelsError
from .grid import as_field

SMOOTHING_KERNEL = np.array([[1.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 1.0]]) / 16.0
P_MIN = 1e-6
MAX_PRIOR_LABELS = 2000


@dataclass
class ForceConfig:
    """Weights of the data terms.  ``eps`` and ``theta`` are the library's
    own choices; the other defaults are the standard settings."""

    w0: float = 1.0
    w1: float = 1.0
    alpha: float = 0.1
    beta: float = 10.0
    eps: float = 1.0
    theta: float = 1000.0
    a1: float = 0.1
    a2: float = 10.0
    eps_p: float = 0.01
    lam: float = 0.1

    def __post_init__(self):
        for name in ("w0", "w1", "alpha", "beta", "eps", "theta", "a1", "a2", "eps_p", "lam"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")


@dataclass
class GmmParams:
    """Two-class Gaussian mixture; index 0 = object, 1 = background.

    ``sigma`` holds the covariances *after* diagonal loading.
    """

    c: np.ndarray
    mu: np.ndarray
    sigma: np.ndarray

    @property
    def dim(self):
        return self.mu.shape[1]


@dataclass
class LabelSet:
    """User priors: boundary landmarks and/or object/background scribbles.

    ``landmarks`` is a (K, 2) integer array of ``(x, y)`` = (column, row)
    pixel positions.  ``ob`` and ``bg`` are boolean masks or ``None``.
    """

    landmarks: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=int))
    ob: np.ndarray = None
    bg: np.ndarray = None

    def __post_init__(self):
        self.landmarks = np.asarray(self.landmarks, dtype=int).reshape(-1, 2)
        if self.ob is not None:
            self.ob = np.asarray(self.ob, dtype=bool)
        if self.bg is not None:
            self.bg = np.asarray(self.bg, dtype=bool)
        if self.ob is not None and self.bg is not None:
            if self.ob.shape != self.bg.shape:
                raise ValueError("scribble masks differ in shape")
            if (self.ob & self.bg).any():
                raise ValueError("object and background scribbles overlap")

    def validate(self, shape):
        N, M = shape
        lm = self.landmarks
        if len(lm) and ((lm[:, 0] < 0) | (lm[:, 0] >= M) | (lm[:, 1] < 0) | (lm[:, 1] >= N)).any():
            raise ValueError("landmark outside the image")
        for m in (self.ob, self.bg):
            if m is not None and m.shape != tuple(shape):
                raise ValueError(f"scribble mask shape {m.shape} != image shape {tuple(shape)}")
        return self

    @property
    def has_scribbles(self):
        return (self.ob is not None and self.ob.any()) and (self.bg is not None and self.bg.any())


def as_image(img):
    """Return an image as a float64 ``(N, M, d)`` array with d in {1, 3}."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[2] not in (1, 3):
        raise ValueError(f"image must be (N, M), (N, M, 1) or (N, M, 3); got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("image contains non-finite values")
    return arr


def regularized_heaviside(s, eps):
    """Return ``(H_eps(s), delta_eps(s), delta_eps'(s))``.

    ``H_eps = 1/2 + arctan(s / eps) / pi`` and ``delta_eps = eps / (eps^2 + s^2)``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    s = np.asarray(s, dtype=np.float64)
    den = eps * eps + s * s
    H = 0.5 + np.arctan(s / eps) / np.pi
    delta = eps / den
    ddelta = -2.0 * eps * s / (den * den)
    return H, delta, ddelta


def edge_detector(img, alpha=0.1, beta=10.0):
    """``g = alpha / (1 + beta |grad (G * I)|)`` with a 3x3 binomial G and Sobel gradients.

    Colour images use the Euclidean norm over all channel gradients.  Both
    convolutions replicate edge pixels.  The Sobel response is unscaled.
    """
    im = as_image(img)
    sq = np.zeros(im.shape[:2])
    for ch in range(im.shape[2]):
        smooth = ndimage.convolve(im[:, :, ch], SMOOTHING_KERNEL, mode="nearest")
        gx = ndimage.sobel(smooth, axis=1, mode="nearest")
        gy = ndimage.sobel(smooth, axis=0, mode="nearest")
        sq += gx * gx + gy * gy
    return alpha / (1.0 + beta * np.sqrt(sq))


def gmm_update_params(img, phi, eps=1.0, lam=0.1):
    """Weighted moments of the two classes with soft memberships from ``phi``.

    ``q1 = H_eps(phi)`` (background), ``q0 = 1 - q1`` (object).  Covariances
    get ``lam`` added on the diagonal.
    """
    im = as_image(img)
    phi = as_field(phi)
    if phi.shape != im.shape[:2]:
        raise ValueError(f"phi shape {phi.shape} does not match image {im.shape[:2]}")
    q1, _, _ = regularized_heaviside(phi, eps)
    d = im.shape[2]
    X = im.reshape(-1, d)
    c = np.empty(2)
    mu = np.empty((2, d))
    sigma = np.empty((2, d, d))
    for i, q in enumerate((1.0 - q1.ravel(), q1.ravel())):
        total = q.sum()
        if total < 1e-9:
            raise DegenerateClassError(f"class {i} has total weight {total:.3g}")
        c[i] = total / q.size
        mu[i] = q @ X / total
        D = X - mu[i]
        sigma[i] = (D * q[:, None]).T @ D / total + lam * np.eye(d)
    return GmmParams(c, mu, sigma)


def _log_gaussian(X, mu, sigma):
    d = X.shape[1]
    L = np.linalg.cholesky(sigma)
    z = np.linalg.solve(L, (X - mu).T)
    logdet = 2.0 * np.log(np.diag(L)).sum()
    return -0.5 * (z * z).sum(axis=0) - 0.5 * (d * np.log(2.0 * np.pi) + logdet)


def gmm_posterior(img, params, p_min=P_MIN):
    """Posterior probability of class 1 (background), clamped to ``[p_min, 1 - p_min]``."""
    im = as_image(img)
    if im.shape[2] != params.dim:
        raise ValueError("image channels do not match GMM dimension")
    X = im.reshape(-1, im.shape[2])
    with np.errstate(divide="ignore"):
        logs = np.stack([
            np.log(params.c[i]) + _log_gaussian(X, params.mu[i], params.sigma[i])
            for i in (0, 1)
        ])
    p1 = np.exp(logs[1] - logsumexp(logs, axis=0))
    return np.clip(p1, p_min, 1.0 - p_min).reshape(im.shape[:2])


def _subsample(points, limit):
    if len(points) <= limit:
        return points
    idx = np.linspace(0, len(points) - 1, limit).round().astype(int)
    return points[idx]


def prior_probability(img, labels, cfg=None, chunk=4096):
    """Background probability from similarity to scribbled pixels.

    Returns exact 1 on background scribbles and 0 on object scribbles; 0.5
    wherever the total similarity falls below ``cfg.eps_p``.
    """
    cfg = cfg or ForceConfig()
    im = as_image(img)
    shape = im.shape[:2]
    if not labels.has_scribbles:
        raise EmptyLabelsError("need nonempty object and background scribbles")
    labels.validate(shape)
    d = im.shape[2]
    pts = []
    for m in (labels.bg, labels.ob):
        yx = _subsample(np.argwhere(m), MAX_PRIOR_LABELS)
        pts.append((yx, im[yx[:, 0], yx[:, 1]]))
    yy, xx = np.indices(shape)
    qy, qx = yy.ravel(), xx.ravel()
    Q = im.reshape(-1, d)
    num = np.empty(qy.size)
    den = np.empty(qy.size)
    for s in range(0, qy.size, chunk):
        sl = slice(s, s + chunk)
        sums = []
        for yx, vals in pts:
            E = cfg.a1 * ((yx[None, :, 0] - qy[sl, None]) ** 2 + (yx[None, :, 1] - qx[sl, None]) ** 2)
            E = E + cfg.a2 * ((Q[sl, None, :] - vals[None, :, :]) ** 2).sum(axis=2)
            sums.append(np.exp(-E).sum(axis=1))
        num[sl] = sums[0]
        den[sl] = sums[0] + sums[1]
    p1 = np.full(qy.size, 0.5)
    ok = den >= cfg.eps_p
    p1[ok] = num[ok] / den[ok]
    p1 = p1.reshape(shape)
    p1[labels.bg] = 1.0
    p1[labels.ob] = 0.0
    return p1


def region_force(p1, w0=1.0, w1=1.0, p_min=P_MIN):
    """``f = -w1 ln p1 + w0 ln(1 - p1)``; inputs are clipped to ``[p_min, 1 - p_min]``."""
    p = np.clip(as_field(p1), p_min, 1.0 - p_min)
    return -w1 * np.log(p) + w0 * np.log1p(-p)


def f_prime(phi, f, g, eps=1.0):
    """Derivative of ``f H_eps(phi) + g delta_eps(phi)`` with respect to ``phi``."""
    _, delta, ddelta = regularized_heaviside(as_field(phi), eps)
    return delta * f + ddelta * g


def data_energy(phi, f, g, eps=1.0):
    """Discrete ``sum(f H_eps(phi) + g delta_eps(phi))``."""
    H, delta, _ = regularized_heaviside(as_field(phi), eps)
    return float(np.sum(f * H + g * delta))
