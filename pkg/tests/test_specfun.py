import math

import numpy as np
import pytest
from scipy import special
from scipy.integrate import quad

from semigfpy.specfun.functions import (DomainError, exp1_scaled, exp_int_ei,
                                        hyp2f1_pathloss, phi_kernel)
from semigfpy.specfun.quadrature import (QuadratureSpec, chebyshev_arrays,
                                         chebyshev_nodes)


def test_ei_golden():
    assert exp_int_ei(-1.) == pytest.approx(-0.21938393439552027, abs=1e-10)


@pytest.mark.parametrize('x', [-1e-8, -0.1, -1., -4.9, -5.1, -20., -100., -700.])
def test_ei_matches_scipy(x):
    assert exp_int_ei(x) == pytest.approx(special.expi(x), rel=1e-10)


def test_ei_rejects_non_negative():
    with pytest.raises(DomainError):
        exp_int_ei(0.)
    with pytest.raises(ValueError):
        exp_int_ei(1.)


def test_series_and_fraction_overlap():
    x = np.linspace(2., 8., 25)
    by_series = exp1_scaled(x, series_limit=100.)
    by_fraction = exp1_scaled(x, series_limit=0.)
    np.testing.assert_allclose(by_series, by_fraction, rtol=1e-9)


def test_branches_agree_above_switch():
    # the series loses about eps * ln(x) / E1(x) to cancellation, still below 1e-10 up to x = 7
    x = np.linspace(5., 7., 9)
    np.testing.assert_allclose(exp1_scaled(x, series_limit=100.), exp1_scaled(x, series_limit=0.), rtol=1e-10)
    # the default split hands [5, 15] to the continued fraction
    x = np.linspace(5., 15., 41)
    np.testing.assert_allclose(exp1_scaled(x), np.exp(x) * special.exp1(x), rtol=1e-10)


def test_exp1_scaled_no_overflow():
    # exp(x) E1(x) ~ 1 / (x + 1) for large x
    assert exp1_scaled(1e6) == pytest.approx(1 / (1e6 + 1), rel=1e-6)
    x = 1000.
    assert exp1_scaled(x) == pytest.approx((1 - 1 / x + 2 / x ** 2 - 6 / x ** 3) / x, rel=1e-10)


def test_exp1_scaled_shapes():
    assert isinstance(exp1_scaled(1.), float)
    out = exp1_scaled(np.ones((3, 2)))
    assert out.shape == (3, 2)
    with pytest.raises(DomainError):
        exp1_scaled(np.array([1., 0.]))


def test_hyp2f1_golden():
    # alpha = 2 gives 2F1(1, 2; 3; z)
    assert hyp2f1_pathloss(alpha=2., z=-1.) == pytest.approx(2 * (1 - math.log(2)), abs=1e-10)


@pytest.mark.parametrize('alpha', [2., 2.8, 3.5, 4.])
@pytest.mark.parametrize('z', [-0.3, -5., -9.5, -50., -1e4])
def test_hyp2f1_matches_scipy(alpha, z):
    expected = special.hyp2f1(1, (2 + alpha) / alpha, 2 + 2 / alpha, z)
    assert hyp2f1_pathloss(alpha=alpha, z=z) == pytest.approx(expected, rel=1e-8)


def test_hyp2f1_integer_b_closed_form():
    w = np.array([20., 100., 1e5])
    np.testing.assert_allclose(hyp2f1_pathloss(alpha=2., z=-w),
                               2 / w - 2 * np.log1p(w) / w ** 2, rtol=1e-12)


@pytest.mark.parametrize('alpha', [2., 2.8, 4.])
def test_hyp2f1_decreasing_in_argument(alpha):
    # crosses the series / connection switch at |z| = 9
    z = -np.concatenate([[0.], np.logspace(-3, 6, 200)])
    values = hyp2f1_pathloss(alpha=alpha, z=z)
    assert values[0] == 1.
    assert np.all(np.diff(values) < 0)
    assert np.all(values > 0)


def test_hyp2f1_edges():
    assert hyp2f1_pathloss(alpha=2.8, z=0.) == 1.
    assert hyp2f1_pathloss(alpha=2.8, z=-np.inf) == 0.
    with pytest.raises(DomainError):
        hyp2f1_pathloss(alpha=2.8, z=0.5)
    with pytest.raises(ValueError):
        hyp2f1_pathloss(alpha=0., z=-1.)


def test_phi_at_zero_rate():
    assert phi_kernel(1., 0.) == pytest.approx(math.log(2), rel=1e-15)
    assert phi_kernel(1., 0., literal=True) == np.inf


@pytest.mark.parametrize('a', [1e-3, 0.5, 1., 40.])
@pytest.mark.parametrize('b', [1e-6, 0.2, 3., 250.])
def test_phi_matches_integral(a, b):
    expected = quad(lambda t: math.exp(-b * t) / (t + a), 0, 1, epsabs=0, epsrel=1e-13, limit=200, points=[1e-3, 1e-2, 1e-1])[0]
    assert phi_kernel(a, b) == pytest.approx(expected, rel=1e-9)


def test_phi_broadcasts_and_validates():
    out = phi_kernel(np.array([[1.], [2.]]), np.array([0., 1., 2.]))
    assert out.shape == (2, 3)
    with pytest.raises(ValueError):
        phi_kernel(0., 1.)
    with pytest.raises(ValueError):
        phi_kernel(1., -1.)


def test_chebyshev_rule():
    nodes, weights = chebyshev_arrays(order=50)
    # int sqrt(1 - x^2) dx = int (1 - x^2) / sqrt(1 - x^2) dx
    assert np.sum(weights * (1 - nodes ** 2)) == pytest.approx(math.pi / 2, abs=1e-6)
    assert np.all(np.diff(nodes) < 0)
    np.testing.assert_array_equal(nodes, -nodes[::-1])
    np.testing.assert_allclose(weights, math.pi / 50)


def test_chebyshev_single_node():
    assert chebyshev_nodes(order=1) == [(0., math.pi)]


@pytest.mark.parametrize('order', [0, -3, 2.5])
def test_chebyshev_rejects_bad_order(order):
    with pytest.raises(ValueError):
        chebyshev_arrays(order=order)


def test_quadrature_spec():
    spec = QuadratureSpec(n_outer=20, n_inner=30)
    assert spec.outer[0].shape == (20,)
    assert spec.inner[0].shape == (30,)
    assert spec.doubled() == QuadratureSpec(n_outer=40, n_inner=60)
    assert QuadratureSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        spec.outer[0][0] = 1.
