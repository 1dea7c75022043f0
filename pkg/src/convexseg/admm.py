"""ADMM splitting for level-set segmentation with an optional convexity prior.

The level-set function ``phi`` is tied to two auxiliary variables,
``zeta ~ Lap phi`` (projected to be nonnegative for convex models) and
``xi ~ grad phi`` (projected to unit length), with multipliers ``gamma1``
and ``gamma2``.  With ``rho2 = 2 sqrt(rho0 rho1)`` the phi-subproblem is
``(sqrt(rho1) L - sqrt(rho0) I)^2 phi = RHD`` and is solved by one DCT pair.
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import dct
from .exceptions import EmptyLabelsError, NonFiniteStateError
from .forces import (
    ForceConfig,
    LabelSet,
    as_image,
    data_energy,
    edge_detector,
    f_prime,
    gmm_posterior,
    gmm_update_params,
    prior_probability,
    region_force,
)
from .grid import default_omega1, divergence_adjoint, forward_gradient, laplacian
from .sdf import check_binary_mask, mask_from_sdf, sdf_from_mask

logger = logging.getLogger(__name__)

MODELS = ("GMM", "GMMC", "GMML", "GMMLC", "RP", "RPC")


@dataclass
class AdmmConfig:
    rho0: float = 10.0
    rho1: float = 1.0
    rho2: float = None
    num_iters: int = 300
    inner_steps: int = 1
    model: str = "GMMC"
    early_stop: bool = True
    stop_tol: float = 1e-3
    stop_patience: int = 10

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {', '.join(MODELS)}")
        if not (self.rho0 > 0 and self.rho1 > 0):
            raise ValueError("rho0 and rho1 must be positive")
        if self.rho2 is None:
            self.rho2 = 2.0 * np.sqrt(self.rho0 * self.rho1)
        elif not np.isclose(self.rho2, 2.0 * np.sqrt(self.rho0 * self.rho1)):
            raise ValueError("rho2 must equal 2 sqrt(rho0 rho1) for the factorized phi-solve")
        if self.num_iters < 0 or self.inner_steps < 1:
            raise ValueError("num_iters must be >= 0 and inner_steps >= 1")

    @property
    def convex(self):
        return self.model.endswith("C")

    @property
    def uses_landmarks(self):
        return self.model.startswith("GMML")

    @property
    def uses_gmm(self):
        return self.model.startswith("GMM")


@dataclass
class AdmmState:
    phi: np.ndarray
    zeta: np.ndarray
    xi: tuple
    gamma1: np.ndarray
    gamma2: tuple
    iter: int = 0

    @classmethod
    def initial(cls, phi0):
        phi0 = np.array(phi0, dtype=np.float64)
        z = np.zeros_like(phi0)
        return cls(phi0, z.copy(), (z.copy(), z.copy()), z.copy(), (z.copy(), z.copy()), 0)

    def fields(self):
        yield "phi", self.phi
        yield "zeta", self.zeta
        yield "xi", self.xi[0]
        yield "xi", self.xi[1]
        yield "gamma1", self.gamma1
        yield "gamma2", self.gamma2[0]
        yield "gamma2", self.gamma2[1]


@dataclass
class Forces:
    """Everything the phi-update needs from the image side."""

    f: np.ndarray
    g: np.ndarray
    eps: float = 1.0
    landmarks: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=int))
    theta: float = 0.0


def update_zeta(state, cfg, omega1):
    """Projection of ``Lap phi + gamma1 / rho1`` onto ``zeta >= 0`` inside ``omega1``."""
    zt = laplacian(state.phi) + state.gamma1 / cfg.rho1
    if not cfg.convex:
        return zt
    return np.where(omega1, np.maximum(zt, 0.0), zt)


def update_xi(state, cfg, omega1):
    """Normalize ``grad phi + gamma2 / rho2`` to unit length inside ``omega1``.

    A zero vector has no direction; it maps to ``(1, 0)``.
    """
    gx, gy = forward_gradient(state.phi)
    tx = gx + state.gamma2[0] / cfg.rho2
    ty = gy + state.gamma2[1] / cfg.rho2
    mag = np.hypot(tx, ty)
    zero = mag == 0.0
    safe = np.where(zero, 1.0, mag)
    ux = np.where(zero, 1.0, tx / safe)
    uy = np.where(zero, 0.0, ty / safe)
    return np.where(omega1, ux, tx), np.where(omega1, uy, ty)


def compute_rhd(state, cfg):
    """``rho0 phi - Lap(gamma1 - rho1 zeta) - grad^T(gamma2 - rho2 xi)``."""
    q = (state.gamma2[0] - cfg.rho2 * state.xi[0], state.gamma2[1] - cfg.rho2 * state.xi[1])
    return (
        cfg.rho0 * state.phi
        - laplacian(state.gamma1 - cfg.rho1 * state.zeta)
        - divergence_adjoint(q)
    )


class LandmarkSolver:
    """Biharmonic solve with a quadratic pin ``theta/2 sum phi(x_k)^2`` folded in.

    The pin adds ``theta P^T P`` to the operator, a rank-K update handled by
    the Woodbury identity on top of the DCT solve.  Treating it implicitly
    keeps the iteration stable for ``theta`` far above ``rho0``.
    """

    def __init__(self, shape, landmarks, theta, rho1, rho0):
        self.shape = shape
        self.rho1, self.rho0 = rho1, rho0
        lm = np.asarray(landmarks, dtype=int).reshape(-1, 2)
        self.flat = np.ravel_multi_index((lm[:, 1], lm[:, 0]), shape) if len(lm) else np.zeros(0, int)
        K = len(self.flat)
        cols = np.empty((K, shape[0] * shape[1]))
        for k, idx in enumerate(self.flat):
            e = np.zeros(shape[0] * shape[1])
            e[idx] = 1.0
            cols[k] = dct.biharmonic_solve(e.reshape(shape), rho1, rho0).ravel()
        self.cols = cols
        S = cols[:, self.flat] if K else np.zeros((0, 0))
        self.small = np.eye(K) / theta + S if K else None

    def solve(self, rhs):
        phi = dct.biharmonic_solve(rhs, self.rho1, self.rho0)
        if self.small is None:
            return phi
        corr = np.linalg.solve(self.small, phi.ravel()[self.flat])
        return phi - (corr @ self.cols).reshape(self.shape)


def update_phi(state, forces, cfg, solver=None):
    """Linearized phi-step: ``inner_steps`` DCT solves with ``RHD = rhd - F'(phi)``.

    Landmarks in ``forces`` enter through :class:`LandmarkSolver` (pass a
    prebuilt one as ``solver`` to reuse its factorization).
    """
    rhd = compute_rhd(state, cfg)
    if solver is None and len(forces.landmarks) and forces.theta > 0:
        solver = LandmarkSolver(state.phi.shape, forces.landmarks, forces.theta, cfg.rho1, cfg.rho0)
    phi = state.phi
    for _ in range(cfg.inner_steps):
        rhs = rhd - f_prime(phi, forces.f, forces.g, forces.eps)
        if solver is None:
            phi = dct.biharmonic_solve(rhs, cfg.rho1, cfg.rho0)
        else:
            phi = solver.solve(rhs)
    return phi


def update_multipliers(state, cfg):
    """Dual ascent on both constraints, returning ``(gamma1, gamma2)``."""
    gx, gy = forward_gradient(state.phi)
    g1 = state.gamma1 + cfg.rho1 * (laplacian(state.phi) - state.zeta)
    g2 = (
        state.gamma2[0] + cfg.rho2 * (gx - state.xi[0]),
        state.gamma2[1] + cfg.rho2 * (gy - state.xi[1]),
    )
    return g1, g2


def dice(mask_a, mask_b):
    """Dice overlap of the object (0-valued) pixels of two masks."""
    a = np.asarray(mask_a) == 0
    b = np.asarray(mask_b) == 0
    tot = a.sum() + b.sum()
    if tot == 0:
        return 1.0
    return 2.0 * float((a & b).sum()) / float(tot)


@dataclass
class SegResult:
    phi: np.ndarray
    mask: np.ndarray
    diagnostics: list
    state: AdmmState
    gmm_params: object = None
    p1: np.ndarray = None
    iterations: int = 0


DIAGNOSTIC_COLUMNS = ("iter", "energy", "res_zeta", "res_xi", "convexity_violation", "dice")


def _residuals(state, omega1):
    L = laplacian(state.phi)
    gx, gy = forward_gradient(state.phi)
    res_zeta = float(np.abs(L - state.zeta).max())
    res_xi = float(np.hypot(gx - state.xi[0], gy - state.xi[1]).max())
    viol = float(np.where(omega1, np.maximum(0.0, -L), 0.0).max())
    return res_zeta, res_xi, viol


def _check_finite(state, t):
    for name, arr in state.fields():
        if not np.isfinite(arr).all():
            raise NonFiniteStateError(t, name)


def run_segmentation(img, init_mask, labels=None, cfg=None, force_cfg=None,
                     truth=None, omega1=None, callback=None, init_phi=None):
    """Segment ``img`` starting from the object of ``init_mask``.

    GMM models re-fit the mixture after every iteration; RP models use
    scribble priors computed once.  Landmark models pin ``phi`` to zero at
    ``labels.landmarks``.  ``truth`` (a 0/1 mask) only feeds the Dice column
    of the diagnostics.  ``callback(state, record)`` runs after each
    iteration.  ``init_phi`` replaces the SDF of ``init_mask`` as the
    starting level-set function when given.
    """
    cfg = cfg or AdmmConfig()
    force_cfg = force_cfg or ForceConfig()
    im = as_image(img)
    shape = im.shape[:2]
    labels = labels or LabelSet()
    labels.validate(shape)
    if cfg.uses_landmarks and len(labels.landmarks) == 0:
        raise EmptyLabelsError(f"model {cfg.model} needs landmarks")
    if cfg.model.startswith("RP") and not labels.has_scribbles:
        raise EmptyLabelsError(f"model {cfg.model} needs object and background scribbles")
    if init_phi is not None:
        phi0 = np.array(init_phi, dtype=np.float64)
        if phi0.shape != shape or not np.isfinite(phi0).all():
            raise ValueError("init_phi must be finite and match the image shape")
    else:
        init = check_binary_mask(init_mask)
        if init.shape != shape:
            raise ValueError(f"initial mask shape {init.shape} != image shape {shape}")
        phi0 = sdf_from_mask(init)
    if omega1 is None:
        omega1 = default_omega1(shape)

    state = AdmmState.initial(phi0)
    g = edge_detector(im, force_cfg.alpha, force_cfg.beta)
    # lam is quoted for 8-bit intensities; images here live on [0, 1]
    lam = force_cfg.lam / 255.0 ** 2
    params = None
    if cfg.uses_gmm:
        params = gmm_update_params(im, state.phi, force_cfg.eps, lam)
        p1 = gmm_posterior(im, params)
    else:
        p1 = prior_probability(im, labels, force_cfg)
    landmarks = labels.landmarks if cfg.uses_landmarks else np.zeros((0, 2), dtype=int)
    theta = force_cfg.theta if cfg.uses_landmarks else 0.0
    forces = Forces(region_force(p1, force_cfg.w0, force_cfg.w1), g, force_cfg.eps, landmarks, theta)
    solver = None
    if len(landmarks):
        solver = LandmarkSolver(shape, landmarks, theta, cfg.rho1, cfg.rho0)

    diagnostics = []
    prev_mask = mask_from_sdf(state.phi)
    stable = 0
    for t in range(cfg.num_iters):
        zeta = update_zeta(state, cfg, omega1)
        state = replace(state, zeta=zeta)
        xi = update_xi(state, cfg, omega1)
        state = replace(state, xi=xi)
        phi = update_phi(state, forces, cfg, solver)
        state = replace(state, phi=phi)
        g1, g2 = update_multipliers(state, cfg)
        state = replace(state, gamma1=g1, gamma2=g2, iter=t + 1)
        _check_finite(state, t + 1)
        if cfg.uses_gmm:
            params = gmm_update_params(im, state.phi, force_cfg.eps, lam)
            p1 = gmm_posterior(im, params)
            forces.f = region_force(p1, force_cfg.w0, force_cfg.w1)

        res_zeta, res_xi, viol = _residuals(state, omega1)
        energy = data_energy(state.phi, forces.f, g, force_cfg.eps)
        if len(landmarks):
            energy += 0.5 * theta * float((state.phi[landmarks[:, 1], landmarks[:, 0]] ** 2).sum())
        mask = mask_from_sdf(state.phi)
        record = {
            "iter": t + 1,
            "energy": energy,
            "res_zeta": res_zeta,
            "res_xi": res_xi,
            "convexity_violation": viol,
            "dice": dice(mask, truth) if truth is not None else None,
        }
        diagnostics.append(record)
        if callback is not None:
            callback(state, record)

        stable = stable + 1 if np.array_equal(mask, prev_mask) else 0
        prev_mask = mask
        if (cfg.early_stop and stable >= cfg.stop_patience
                and res_zeta < cfg.stop_tol and res_xi < cfg.stop_tol):
            logger.info("converged at iteration %d", t + 1)
            break

    return SegResult(state.phi, mask_from_sdf(state.phi), diagnostics, state,
                     params, p1, state.iter)
