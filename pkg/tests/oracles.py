"""Independent dense-matrix and brute-force references for the tests.

Nothing here imports the package; every operator is rebuilt from its
textbook definition on the flattened (row-major) grid.
"""

import numpy as np


def neumann_second_difference_1d(J):
    """Dense J x J second difference with replicated ghost values."""
    D = np.zeros((J, J))
    for i in range(J):
        left = i - 1 if i > 0 else i
        right = i + 1 if i < J - 1 else i
        D[i, left] += 1.0
        D[i, right] += 1.0
        D[i, i] -= 2.0
    return D


def forward_difference_1d(J):
    """Dense forward difference; the last entry differences against its ghost (0)."""
    F = np.zeros((J, J))
    for i in range(J - 1):
        F[i, i] = -1.0
        F[i, i + 1] = 1.0
    return F


def neumann_laplacian(N, M):
    """Dense (NM x NM) Laplacian acting on row-major (N, M) fields."""
    return np.kron(np.eye(N), neumann_second_difference_1d(M)) + np.kron(
        neumann_second_difference_1d(N), np.eye(M))


def gradient_matrices(N, M):
    Gx = np.kron(np.eye(N), forward_difference_1d(M))
    Gy = np.kron(forward_difference_1d(N), np.eye(M))
    return Gx, Gy


def dct_basis(J):
    """Orthonormal DCT-II matrix built entry by entry."""
    C = np.empty((J, J))
    for k in range(J):
        w = np.sqrt((1.0 if k == 0 else 2.0) / J)
        for j in range(J):
            C[k, j] = w * np.cos(np.pi * k * (2 * j + 1) / (2 * J))
    return C


def helmholtz_matrix(N, M, rho1, rho0):
    return np.sqrt(rho1) * neumann_laplacian(N, M) - np.sqrt(rho0) * np.eye(N * M)


def brute_unsigned_distance(obj):
    """Distance from every pixel centre to the nearest midpoint between a pixel
    and a 4-neighbour of the other label (the interface location)."""
    N, M = obj.shape
    mids = []
    for y in range(N):
        for x in range(M):
            if x + 1 < M and obj[y, x] != obj[y, x + 1]:
                mids.append((x + 0.5, y))
            if y + 1 < N and obj[y, x] != obj[y + 1, x]:
                mids.append((x, y + 0.5))
    mids = np.array(mids)
    yy, xx = np.indices(obj.shape)
    d = np.hypot(xx[..., None] - mids[:, 0], yy[..., None] - mids[:, 1])
    return d.min(axis=2)


def brute_signed_distance(mask):
    obj = np.asarray(mask) == 0
    d = brute_unsigned_distance(obj)
    return np.where(obj, -d, d)


def hull_contains(points, px, py):
    """Point-in-convex-polygon by brute force: (px, py) is inside the hull of
    ``points`` iff it is not strictly separated by any line through two points."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        return False
    n = len(pts)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a, b = pts[i], pts[j]
            side_all = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
            if (side_all >= -1e-12).all():
                s = (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0])
                if s < -1e-12:
                    return False
    return True
