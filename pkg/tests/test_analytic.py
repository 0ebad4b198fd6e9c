import math

import numpy as np
import pytest

from semigfpy.analytic.helpers import (HelperBundle, delta1_xi, delta_set, psi,
                                       xi)
from semigfpy.analytic.rates import (gf_rate_argmax, rate_gb, rate_gb_high,
                                     rate_gb_low, rate_gb_low_items, rate_gf,
                                     rate_gf_approx)
from semigfpy.model.params import SystemParams
from semigfpy.specfun.quadrature import QuadratureSpec


def test_helper_bundle(small_disc):
    helpers = HelperBundle(params=small_disc)
    assert helpers.theta1 == pytest.approx(1.)
    assert helpers.theta2 == pytest.approx(1e-9 / 1e-3)
    assert helpers.omega1(-1.) == 0.
    assert helpers.omega1(1.) == 10.
    assert helpers.omega2(1.) == 1.
    np.testing.assert_allclose(helpers.omega2(np.array([0., -0.5])), [2., 4.])


def test_psi(small_disc):
    assert psi(y=2., z=3., t=0., params=small_disc) == pytest.approx(1.)
    # equal powers and distances: P_GF / P_GB = 1
    assert psi(y=3., z=3., t=2., params=small_disc) == pytest.approx(3.)


def test_delta_set_flags_equal_means(small_disc):
    deltas = delta_set(y=4., z=4., params=small_disc)
    assert deltas.singular
    assert deltas.delta4 == pytest.approx(1.)
    regular = delta_set(y=np.array([2., 8.]), z=np.array([4., 4.]), params=small_disc)
    assert not np.any(regular.singular)
    d1, d2, d3, d4 = regular
    assert np.all(d3 <= 1.)
    assert np.all(d2 > 0.)


def test_delta1_xi_removable_pole(small_disc):
    at_pole = delta1_xi(y=4., z=4., params=small_disc)
    below = delta1_xi(y=4. * (1 - 1e-4), z=4., params=small_disc)
    above = delta1_xi(y=4. * (1 + 1e-4), z=4., params=small_disc)
    assert math.isfinite(at_pole)
    assert at_pole == pytest.approx((below + above) / 2, rel=1e-3)


def test_xi_finite_on_singular_nodes(small_disc):
    # y == z when both nodes coincide
    assert math.isfinite(xi(node_n=0.2, node_m=0.2, params=small_disc))


def test_rates_positive(wide_disc):
    assert rate_gb_high(params=wide_disc) > 0
    first, second = rate_gb_low_items(params=wide_disc)
    assert first > 0 and second > 0
    assert rate_gb_low(params=wide_disc) == pytest.approx(first + second)
    assert rate_gb(params=wide_disc) == pytest.approx(rate_gb_high(params=wide_disc) + first + second)
    assert rate_gf(params=wide_disc) > 0


def test_quadrature_refinement(wide_disc):
    coarse = QuadratureSpec(n_outer=200, n_inner=200)
    fine = coarse.doubled()
    assert rate_gb(params=wide_disc, quad=coarse) == pytest.approx(rate_gb(params=wide_disc, quad=fine), rel=1e-2)
    assert rate_gf(params=wide_disc, quad=coarse) == pytest.approx(rate_gf(params=wide_disc, quad=fine), rel=1e-2)


def test_literal_form_differs(wide_disc):
    # the printed weights sqrt(1 + e^2) inflate every term
    assert rate_gb_high(params=wide_disc, literal=True) > rate_gb_high(params=wide_disc)
    assert rate_gf(params=wide_disc, literal=True) > rate_gf(params=wide_disc)


def test_gb_rate_no_error_floor(unit_disc):
    values = np.arange(0., 41., 5.)
    curves = {}
    for partner in [20., 40.]:
        base = unit_disc.replace(rho_gf_db=partner)
        curves[partner] = np.array([rate_gb(params=base.replace(rho_gb_db=v)) for v in values])
        assert np.all(np.diff(curves[partner]) > 0)
    # log2(1 + rho) grows by log2(10) / 10 per dB once the GB user dominates
    slope = (curves[20.][-1] - curves[20.][-3]) / 10.
    assert slope == pytest.approx(math.log2(10) / 10, rel=0.25)
    # a stronger GF user lowers the whole curve
    assert np.all(curves[40.] < curves[20.])


def test_gb_rate_falls_with_gf_power():
    base = SystemParams(radius_m=10., p_gb_dbm=-30., noise_dbm=-90.)
    rates = [rate_gb(params=base.replace(p_gf_dbm=v)) for v in [-50., -40., -30., -20.]]
    assert np.all(np.diff(rates) < 0)


def test_gf_rate_falls_with_threshold(small_disc):
    rates = [rate_gf(params=small_disc.replace(sic_threshold=th)) for th in [0.5, 1., 2., 10.]]
    assert np.all(np.diff(rates) < 0)


def test_gf_rate_zero_without_sic(small_disc):
    never = small_disc.replace(sic_threshold=math.inf)
    assert rate_gf(params=never) == 0.
    assert rate_gf_approx(params=never) == 0.


def test_gf_rate_interior_maximum(unit_disc):
    values = list(np.arange(0., 41., 2.))
    rates = [rate_gf(params=unit_disc.replace(rho_gf_db=v)) for v in values]
    idx, interior = gf_rate_argmax(values=values, rates=rates)
    assert interior
    assert rates[-1] < rates[idx]


def test_high_snr_approximation_converges(unit_disc):
    gaps = []
    for rho in np.arange(20., 61., 5.):
        p = unit_disc.replace(rho_gf_db=rho)
        exact = rate_gf(params=p)
        gaps.append(abs(rate_gf_approx(params=p) - exact) / exact)
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 1e-2


def test_argmax_validation():
    assert gf_rate_argmax(values=[1., 2., 3.], rates=[0., 1., 2.]) == (2, False)
    with pytest.raises(ValueError):
        gf_rate_argmax(values=[], rates=[])
    with pytest.raises(ValueError):
        gf_rate_argmax(values=[1.], rates=[1., 2.])
