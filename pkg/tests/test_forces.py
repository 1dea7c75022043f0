import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from convexseg.exceptions import DegenerateClassError, EmptyLabelsError
from convexseg.forces import (
    ForceConfig,
    GmmParams,
    LabelSet,
    data_energy,
    edge_detector,
    f_prime,
    gmm_posterior,
    gmm_update_params,
    prior_probability,
    region_force,
    regularized_heaviside,
)

unit = st.floats(0, 1, allow_nan=False)


def images(max_side=10):
    shapes = st.tuples(st.integers(3, max_side), st.integers(3, max_side))
    return shapes.flatmap(lambda s: arrays(np.float64, s, elements=unit))


def test_heaviside_at_zero():
    # [DERIVED] H(0) = 1/2, delta(0) = eps/eps^2 = 1/eps
    H, d, dd = regularized_heaviside(0.0, 2.0)
    assert H == 0.5 and d == pytest.approx(0.5) and dd == 0.0


def test_heaviside_limits():
    H, d, _ = regularized_heaviside(1e12, 1.0)
    assert H == pytest.approx(1.0) and d == pytest.approx(0.0, abs=1e-20)


@pytest.mark.parametrize("s", [-2.0, -1.0, 0.5, 3.0])
def test_delta_prime_finite_difference(s):
    h = 1e-5
    _, dp, _ = regularized_heaviside(s + h, 1.0)
    _, dm, _ = regularized_heaviside(s - h, 1.0)
    _, _, dd = regularized_heaviside(s, 1.0)
    assert dd == pytest.approx((dp - dm) / (2 * h), abs=1e-6)


def test_heaviside_rejects_bad_eps():
    with pytest.raises(ValueError):
        regularized_heaviside(0.0, 0.0)


def test_edge_detector_constant_image():
    # [PAPER] g = alpha / (1 + beta |grad|) with alpha = 0.1; a flat image gives alpha
    np.testing.assert_allclose(edge_detector(np.full((6, 7), 0.3)), 0.1)


@given(images())
def test_edge_detector_range_and_shift_invariance(img):
    g = edge_detector(img)
    assert (g > 0).all() and (g <= 0.1 + 1e-15).all()
    np.testing.assert_allclose(edge_detector(img + 0.37), g, atol=1e-12)


def test_edge_detector_step_minimum_on_step():
    img = np.zeros((9, 12))
    img[:, 6:] = 1.0
    g = edge_detector(img)
    cols = np.argmin(g, axis=1)
    # the step lies between columns 5 and 6; both sides respond equally
    assert set(cols) <= {5, 6}
    # direct Sobel oracle: smoothing turns the step into a .25/.75 ramp over
    # columns 5 and 6; rows are constant, so Sobel-x is 4 * central difference
    sm = np.array([0, 0, 0, 0, 0, 0.25, 0.75, 1, 1, 1, 1, 1])
    gx5 = 4 * (sm[6] - sm[4])
    assert g[4, 5] == pytest.approx(0.1 / (1 + 10 * gx5))


def test_edge_detector_color_norm():
    rng = np.random.default_rng(0)
    img = rng.random((8, 9, 3))
    g = edge_detector(img)
    parts = [edge_detector(img[..., c]) for c in range(3)]
    # recover each channel's gradient magnitude from g = a / (1 + b |grad|)
    mags = [(0.1 / p - 1) / 10 for p in parts]
    expect = 0.1 / (1 + 10 * np.sqrt(sum(m * m for m in mags)))
    np.testing.assert_allclose(g, expect, rtol=1e-10)


def test_gmm_half_split_proportion():
    img = np.random.default_rng(1).random((8, 10))
    phi = np.where(np.arange(10) < 5, -50.0, 50.0) * np.ones((8, 1))
    p = gmm_update_params(img, phi, eps=1.0)
    assert p.c[1] == pytest.approx(0.5, abs=0.01)
    assert p.c.sum() == pytest.approx(1.0)


def test_gmm_two_value_image_moments():
    img = np.where(np.arange(10) < 4, 0.2, 0.9) * np.ones((6, 1))
    phi = np.where(np.arange(10) < 4, -1000.0, 1000.0) * np.ones((6, 1))
    p = gmm_update_params(img, phi, eps=1e-3, lam=0.1)
    # direct weighted-moment oracle with the same soft memberships
    q1 = 0.5 + np.arctan(phi / 1e-3) / np.pi
    for i, q in enumerate((1 - q1, q1)):
        mu = (q * img).sum() / q.sum()
        assert p.mu[i, 0] == pytest.approx(mu, abs=1e-12)
        assert p.sigma[i, 0, 0] == pytest.approx((q * (img - mu) ** 2).sum() / q.sum() + 0.1, abs=1e-12)
    assert p.mu[0, 0] == pytest.approx(0.2, abs=1e-6)
    assert p.mu[1, 0] == pytest.approx(0.9, abs=1e-6)
    np.testing.assert_allclose(p.sigma[:, 0, 0], 0.1, atol=1e-6)


def test_gmm_constant_image():
    phi = np.linspace(-3, 3, 20).reshape(4, 5)
    p = gmm_update_params(np.full((4, 5), 0.4), phi)
    np.testing.assert_allclose(p.mu, 0.4)


def test_gmm_degenerate_class():
    with pytest.raises(DegenerateClassError):
        gmm_update_params(np.zeros((3, 3)), np.full((3, 3), 1e12), eps=1e-6)


def test_gmm_color_full_covariance():
    rng = np.random.default_rng(2)
    img = rng.random((10, 10, 3))
    phi = np.where(rng.random((10, 10)) < 0.5, -40.0, 40.0)
    p = gmm_update_params(img, phi, eps=1e-3, lam=0.05)
    X = img.reshape(-1, 3)
    sel = phi.ravel() > 0
    ref = np.cov(X[sel].T, bias=True) + 0.05 * np.eye(3)
    np.testing.assert_allclose(p.sigma[1], ref, atol=1e-4)


def test_posterior_identical_classes():
    params = GmmParams(np.array([0.5, 0.5]), np.array([[0.3], [0.3]]), np.array([[[0.02]], [[0.02]]]))
    np.testing.assert_allclose(gmm_posterior(np.random.default_rng(3).random((5, 5)), params), 0.5)


def test_posterior_separated_classes_density_ratio():
    params = GmmParams(np.array([0.5, 0.5]), np.array([[0.2], [0.8]]), np.array([[[0.01]], [[0.01]]]))
    p1 = gmm_posterior(np.array([[0.8, 0.2, 0.5]]), params)
    # direct density ratio: exp(-(0.6)^2 / (2 * 0.01)) is ~1.5e-8, so p1 is within 1e-6 of 1
    ratio = np.exp(-0.36 / 0.02)
    assert p1[0, 0] == pytest.approx(min(1 / (1 + ratio), 1 - 1e-6))
    assert p1[0, 0] >= 0.99
    assert p1[0, 1] == pytest.approx(1e-6)
    assert p1[0, 2] == pytest.approx(0.5)


@given(images(), st.floats(0.05, 0.95))
def test_posterior_in_unit_interval(img, c1):
    params = GmmParams(np.array([1 - c1, c1]), np.array([[0.25], [0.75]]), np.array([[[0.05]], [[0.02]]]))
    p1 = gmm_posterior(img, params)
    assert ((p1 >= 1e-6) & (p1 <= 1 - 1e-6)).all()
    np.testing.assert_allclose(p1 + (1 - p1), 1.0)


def test_gmm_fixed_point_on_bimodal_image():
    img = np.full((16, 16), 0.75)
    img[4:11, 3:12] = 0.25
    phi = np.where(img < 0.5, -5.0, 5.0)
    p1 = gmm_posterior(img, gmm_update_params(img, phi, eps=1.0))
    assert np.array_equal(p1 > 0.5, phi > 0)


def _labels(shape, ob_pts, bg_pts):
    ob = np.zeros(shape, bool)
    bg = np.zeros(shape, bool)
    for y, x in ob_pts:
        ob[y, x] = True
    for y, x in bg_pts:
        bg[y, x] = True
    return LabelSet(ob=ob, bg=bg)


def test_prior_forced_labels_and_symmetry():
    img = np.full((5, 9), 0.5)
    lab = _labels(img.shape, [(2, 2)], [(2, 6)])
    p1 = prior_probability(img, lab)
    assert p1[2, 6] == 1.0 and p1[2, 2] == 0.0
    assert p1[2, 4] == pytest.approx(0.5)


def test_prior_remote_pixel_threshold():
    img = np.full((5, 40), 0.5)
    lab = _labels(img.shape, [(2, 0)], [(2, 1)])
    p1 = prior_probability(img, lab)
    # at 30 px the similarity is e^-90, far below 0.01
    assert p1[2, 30] == 0.5


def test_prior_formula_oracle():
    rng = np.random.default_rng(4)
    img = rng.random((6, 7))
    lab = _labels(img.shape, [(1, 1), (4, 2)], [(0, 6), (5, 5)])
    cfg = ForceConfig()
    p1 = prior_probability(img, lab, cfg)
    y, x = 3, 3

    def s(py, px):
        return np.exp(-(0.1 * ((py - y) ** 2 + (px - x) ** 2) + 10 * (img[y, x] - img[py, px]) ** 2))

    num = s(0, 6) + s(5, 5)
    den = num + s(1, 1) + s(4, 2)
    expect = num / den if den >= 0.01 else 0.5
    assert p1[y, x] == pytest.approx(expect, rel=1e-12)


def test_prior_needs_both_sets():
    with pytest.raises(EmptyLabelsError):
        prior_probability(np.zeros((3, 3)), LabelSet(ob=np.eye(3, dtype=bool)))


def test_labelset_overlap_rejected():
    m = np.eye(3, dtype=bool)
    with pytest.raises(ValueError):
        LabelSet(ob=m, bg=m)


def test_region_force_examples():
    assert region_force(np.array([[0.5]]))[0, 0] == pytest.approx(0.0)
    assert region_force(np.array([[0.8]]), w0=2.0, w1=0.5)[0, 0] == pytest.approx(-0.5 * np.log(0.8) + 2 * np.log(0.2))
    f = region_force(np.array([[1.0]]))[0, 0]
    assert np.isfinite(f) and f < 0


def test_f_prime_at_zero_level():
    f = np.array([[1.0, -2.0]])
    g = np.array([[0.1, 0.05]])
    np.testing.assert_allclose(f_prime(np.zeros((1, 2)), f, g, eps=2.0), f / 2.0)


def test_f_prime_far_from_interface():
    assert np.abs(f_prime(np.full((2, 2), 1e6), np.ones((2, 2)), np.ones((2, 2)))).max() < 1e-5


def test_f_prime_energy_finite_difference():
    # delta_eps is printed as eps / (eps^2 + s^2), i.e. pi times H_eps', so the
    # energy whose gradient is F' carries f * pi * H_eps.
    rng = np.random.default_rng(5)
    phi = rng.normal(scale=2.0, size=(4, 5))
    f = rng.normal(size=(4, 5))
    g = rng.random((4, 5)) * 0.1

    def energy(p):
        return data_energy(p, np.pi * f, g, 1.0)

    F = f_prime(phi, f, g, 1.0)
    h = 1e-6
    for idx in [(0, 0), (2, 3), (3, 4)]:
        e = np.zeros_like(phi)
        e[idx] = h
        fd = (energy(phi + e) - energy(phi - e)) / (2 * h)
        assert F[idx] == pytest.approx(fd, abs=1e-5)


def test_force_config_positive():
    with pytest.raises(ValueError):
        ForceConfig(theta=0.0)
