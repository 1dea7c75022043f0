"""scikit-learn style wrapper around :func:`run_segmentation`."""

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_is_fitted

from .admm import AdmmConfig, dice, run_segmentation
from .forces import ForceConfig, LabelSet
from .sdf import circle_mask
from .validation import check_image, check_landmarks, check_mask


class ConvexShapeSegmenter(BaseEstimator):
    """Two-phase level-set segmentation with an optional convexity prior.

    Segmentation is transductive: ``fit(X)`` segments the image ``X``
    itself.  ``predict`` and ``transform`` on the fitted image return the
    stored mask and level-set function; on any other image they run a fresh
    segmentation with the same parameters and priors.

    Parameters mirror :class:`AdmmConfig` and :class:`ForceConfig`.  The
    initial curve is ``init_mask`` if given to ``fit``, otherwise a centred
    circle of radius ``init_radius`` times the shorter image side.

    Attributes
    ----------
    phi_ : ndarray (N, M)
        Final level-set function, negative on the object.
    mask_ : ndarray (N, M) of uint8
        0 on the object, 1 on the background.
    diagnostics_ : list of dict
        Per-iteration energy, residuals and convexity violation.
    n_iter_ : int
    """

    def __init__(self, model="GMMC", rho0=10.0, rho1=1.0, num_iters=300, inner_steps=1,
                 w0=1.0, w1=1.0, alpha=0.1, beta=10.0, eps=1.0, theta=1000.0,
                 a1=0.1, a2=10.0, eps_p=0.01, lam=0.1, init_radius=0.25, early_stop=True):
        self.model = model
        self.rho0 = rho0
        self.rho1 = rho1
        self.num_iters = num_iters
        self.inner_steps = inner_steps
        self.w0 = w0
        self.w1 = w1
        self.alpha = alpha
        self.beta = beta
        self.eps = eps
        self.theta = theta
        self.a1 = a1
        self.a2 = a2
        self.eps_p = eps_p
        self.lam = lam
        self.init_radius = init_radius
        self.early_stop = early_stop

    def _configs(self):
        admm = AdmmConfig(rho0=self.rho0, rho1=self.rho1, num_iters=self.num_iters,
                          inner_steps=self.inner_steps, model=self.model,
                          early_stop=self.early_stop)
        forces = ForceConfig(w0=self.w0, w1=self.w1, alpha=self.alpha, beta=self.beta,
                             eps=self.eps, theta=self.theta, a1=self.a1, a2=self.a2,
                             eps_p=self.eps_p, lam=self.lam)
        return admm, forces

    def fit(self, X, y=None, init_mask=None, landmarks=None, ob=None, bg=None):
        """Segment ``X``.

        ``y`` is an optional ground-truth mask used only for the Dice column
        of ``diagnostics_``.  ``landmarks`` are ``(x, y)`` pixels;
        ``ob``/``bg`` are boolean scribble masks.
        """
        img = check_image(X)
        shape = img.shape[:2]
        admm_cfg, force_cfg = self._configs()
        if init_mask is None:
            if not 0 < self.init_radius:
                raise ValueError("init_radius must be positive")
            N, M = shape
            init = circle_mask(shape, (M - 1) / 2.0, (N - 1) / 2.0, self.init_radius * min(M, N))
        else:
            init = check_mask(init_mask, shape, "init_mask")
        lm = check_landmarks(landmarks if landmarks is not None else [], shape)
        if ob is not None:
            ob = np.asarray(ob, dtype=bool)
        if bg is not None:
            bg = np.asarray(bg, dtype=bool)
        labels = LabelSet(landmarks=lm, ob=ob, bg=bg)
        truth = None if y is None else check_mask(y, shape, "y")

        res = run_segmentation(img, init, labels, admm_cfg, force_cfg, truth=truth)
        self.phi_ = res.phi
        self.mask_ = res.mask
        self.diagnostics_ = res.diagnostics
        self.n_iter_ = res.iterations
        self.gmm_params_ = res.gmm_params
        self._fit_image = img
        self._fit_priors = dict(init_mask=init_mask, landmarks=landmarks, ob=ob, bg=bg)
        return self

    def _result_for(self, X):
        check_is_fitted(self, "phi_")
        img = check_image(X)
        if img.shape == self._fit_image.shape and np.array_equal(img, self._fit_image):
            return self.phi_, self.mask_
        other = clone(self).fit(img, **self._fit_priors)
        return other.phi_, other.mask_

    def predict(self, X):
        """Binary mask, 0 on the object."""
        return self._result_for(X)[1]

    def transform(self, X):
        """Level-set function (signed distance, negative on the object)."""
        return self._result_for(X)[0]

    def fit_predict(self, X, y=None, **fit_params):
        return self.fit(X, y, **fit_params).mask_

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y, **fit_params).phi_

    def score(self, X, y):
        """Dice overlap between the predicted object and the object of ``y``."""
        pred = self.predict(X)
        return dice(pred, check_mask(y, pred.shape, "y"))
