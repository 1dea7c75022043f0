"""Orthonormal 2-D DCT-II and the spectral Neumann solvers built on it.

The Neumann 5-point Laplacian is diagonal in the DCT-II basis: the k-th
basis vector of length J is scaled by ``2 (cos(pi (k-1) / J) - 1)``.  Hence

    (sqrt(rho1) L - sqrt(rho0) I)  has symbol  -r(k, l)

with ``r = sqrt(rho0) + 2 sqrt(rho1) (2 - cos(pi(k-1)/M) - cos(pi(l-1)/N))``,
which is strictly positive, so both solves below are always well posed.
"""

from functools import lru_cache

import numpy as np
import scipy.fft

from .grid import X_AXIS, Y_AXIS, as_field, laplacian

# axis length at or below which the dense separable transform is used
DIRECT_MAX = 64


@lru_cache(maxsize=64)
def dct_matrix(J):
    """Dense orthonormal DCT-II matrix ``C`` with ``S_hat = C @ S``."""
    j = np.arange(1, J + 1)
    k = np.arange(1, J + 1)
    C = np.cos(np.pi * np.outer(k - 1, 2 * j - 1) / (2.0 * J))
    w = np.full(J, np.sqrt(2.0 / J))
    w[0] = np.sqrt(1.0 / J)
    C = w[:, None] * C
    C.setflags(write=False)
    return C


def _direct_forward(f):
    Cy = dct_matrix(f.shape[Y_AXIS])
    Cx = dct_matrix(f.shape[X_AXIS])
    return Cy @ f @ Cx.T


def _direct_inverse(F):
    Cy = dct_matrix(F.shape[Y_AXIS])
    Cx = dct_matrix(F.shape[X_AXIS])
    return Cy.T @ F @ Cx


def dct2_forward(f, method="auto"):
    """Orthonormal 2-D DCT-II of a field.

    ``method`` is ``"direct"`` (dense separable matrices), ``"fast"``
    (scipy.fft) or ``"auto"`` (direct when both sides are <= ``DIRECT_MAX``).
    """
    f = as_field(f)
    if method == "direct" or (method == "auto" and max(f.shape) <= DIRECT_MAX):
        return _direct_forward(f)
    if method not in ("fast", "auto"):
        raise ValueError(f"unknown DCT method {method!r}")
    return scipy.fft.dctn(f, type=2, norm="ortho")


def dct2_inverse(F, method="auto"):
    """Inverse of :func:`dct2_forward` (the transpose, by orthonormality)."""
    F = as_field(F)
    if method == "direct" or (method == "auto" and max(F.shape) <= DIRECT_MAX):
        return _direct_inverse(F)
    if method not in ("fast", "auto"):
        raise ValueError(f"unknown DCT method {method!r}")
    return scipy.fft.idctn(F, type=2, norm="ortho")


def laplacian_eigenvalues(J):
    """Eigenvalues ``2 (cos(pi (k-1) / J) - 1)`` of the 1-D Neumann second difference."""
    k = np.arange(J)
    return 2.0 * (np.cos(np.pi * k / J) - 1.0)


def spectral_symbol(shape, rho1, rho0):
    """``r(k, l)`` on a grid of the given ``(N, M)`` shape."""
    if rho0 <= 0 or rho1 <= 0:
        raise ValueError("rho0 and rho1 must be positive")
    lam_y = laplacian_eigenvalues(shape[Y_AXIS])
    lam_x = laplacian_eigenvalues(shape[X_AXIS])
    # -(lam_x + lam_y) = 2 (2 - cos - cos)
    return np.sqrt(rho0) - np.sqrt(rho1) * (lam_y[:, None] + lam_x[None, :])


def helmholtz_solve(rhs, rho1, rho0):
    """Solve ``(sqrt(rho1) L - sqrt(rho0) I) psi = rhs`` with Neumann BCs."""
    rhs = as_field(rhs)
    r = spectral_symbol(rhs.shape, rho1, rho0)
    return dct2_inverse(-dct2_forward(rhs) / r)


def biharmonic_solve(rhs, rho1, rho0):
    """Solve ``(sqrt(rho1) L - sqrt(rho0) I)^2 phi = rhs`` with Neumann BCs.

    Equivalent to two :func:`helmholtz_solve` calls; the two ``-r``
    divisions combine into one division by ``r**2``.
    """
    rhs = as_field(rhs)
    r = spectral_symbol(rhs.shape, rho1, rho0)
    return dct2_inverse(dct2_forward(rhs) / (r * r))


def apply_helmholtz(psi, rho1, rho0):
    """Apply ``sqrt(rho1) L - sqrt(rho0) I`` in physical space (stencil, not DCT)."""
    psi = as_field(psi)
    return np.sqrt(rho1) * laplacian(psi) - np.sqrt(rho0) * psi
