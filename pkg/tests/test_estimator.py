import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from convexseg import ConvexShapeSegmenter
from convexseg.synth import boundary_landmarks, make_image
from convexseg.validation import check_image, check_landmarks, check_mask

SIZE = (48, 48)


@pytest.fixture(scope="module")
def disk():
    return make_image("disk", size=SIZE, seed=1)


@pytest.fixture(scope="module")
def fitted(disk):
    img, truth = disk
    return ConvexShapeSegmenter(num_iters=60, w1=0.5, init_radius=0.24).fit(img, truth)


def test_params_roundtrip():
    est = ConvexShapeSegmenter(model="GMM", w0=2.0)
    p = est.get_params()
    assert p["model"] == "GMM" and p["w0"] == 2.0
    est.set_params(theta=50.0)
    assert clone(est).get_params()["theta"] == 50.0


def test_fit_attributes(fitted, disk):
    img, truth = disk
    assert fitted.phi_.shape == SIZE and fitted.mask_.dtype == np.uint8
    assert fitted.n_iter_ == 60 and len(fitted.diagnostics_) == 60
    assert fitted.score(img, truth) >= 0.97
    assert np.array_equal(fitted.predict(img), fitted.mask_)
    assert np.array_equal(fitted.transform(img), fitted.phi_)


def test_fit_predict_transform_consistent(disk):
    img, _ = disk
    est = ConvexShapeSegmenter(num_iters=5, w1=0.5)
    mask = est.fit_predict(img)
    phi = clone(est).fit_transform(img)
    assert np.array_equal(mask, (phi > 0).astype(np.uint8))


def test_predict_other_image_refits(fitted):
    other, truth = make_image("disk", size=SIZE, seed=2)
    mask = fitted.predict(other)
    assert mask.shape == SIZE
    assert fitted.score(other, truth) >= 0.97


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ConvexShapeSegmenter().predict(np.zeros((8, 8)))


def test_landmark_model_through_estimator():
    img, truth = make_image("corrupted-disk", size=SIZE)
    lm = boundary_landmarks(SIZE)
    est = ConvexShapeSegmenter(model="GMMLC", num_iters=10, w1=0.5).fit(img, landmarks=lm)
    assert est.phi_.shape == SIZE
    with pytest.raises(ValueError):
        ConvexShapeSegmenter(model="GMMLC", num_iters=1).fit(img)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        check_image(np.full((5, 5), 2.0))
    with pytest.raises(ValueError):
        check_image(np.zeros((5, 5, 2)))
    with pytest.raises(ValueError):
        check_image(np.array([[np.nan, 0], [0, 0]]))
    with pytest.raises(ValueError):
        check_mask(np.zeros((3, 3)), (4, 4))
    with pytest.raises(ValueError):
        check_landmarks([[1, 2, 3]], (5, 5))
    with pytest.raises(ValueError):
        check_landmarks([[9, 0]], (5, 5))
    with pytest.raises(ValueError):
        check_landmarks([[1.5, 0]], (5, 5))
    with pytest.raises(ValueError):
        ConvexShapeSegmenter(model="bogus").fit(np.zeros((8, 8)))


@given(st.integers(0, 7), st.integers(0, 6))
def test_check_landmarks_accepts_in_bounds(x, y):
    out = check_landmarks(np.array([[x, y]], dtype=float), (7, 8))
    assert out.tolist() == [[x, y]]


def test_color_image_accepted():
    g, _ = make_image("disk", size=(32, 32))
    rgb = np.stack([g, g, g], axis=2)
    est = ConvexShapeSegmenter(num_iters=3, w1=0.5).fit(rgb)
    assert est.gmm_params_.dim == 3
