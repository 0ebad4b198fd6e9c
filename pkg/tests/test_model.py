import math

import numpy as np
import pytest

from semigfpy.model.link import (ChannelDraw, evaluate_link, received_power,
                                 sample_distance, sample_fading)
from semigfpy.model.params import SystemParams, dbm_to_mw


def test_dbm_to_mw():
    assert dbm_to_mw(0.) == 1.
    assert dbm_to_mw(30.) == pytest.approx(1000.)
    assert dbm_to_mw(-90.) == pytest.approx(1e-9)


def test_params_defaults_and_snr():
    p = SystemParams()
    assert p.radius_m == 600.
    assert p.pathloss_exp == 2.8
    assert p.noise_dbm == -90.
    assert p.rho_gb_db == pytest.approx(p.p_gb_dbm + 90.)
    assert p.rho_gf_db == pytest.approx(p.p_gf_dbm + 90.)


@pytest.mark.parametrize('field, value', [('radius_m', 0.), ('pathloss_exp', -1.), ('fading_mean_gb', 0.),
                                          ('p_gf_dbm', math.inf), ('sic_threshold', -0.5), ('noise_dbm', math.nan)])
def test_params_reject_out_of_range(field, value):
    with pytest.raises(ValueError):
        SystemParams(**{field: value})


def test_params_accept_infinite_threshold():
    assert SystemParams(sic_threshold=math.inf).sic_threshold == math.inf


def test_params_replace_snr_axis():
    p = SystemParams(noise_dbm=-90.)
    q = p.replace(rho_gb_db=30.)
    assert q.p_gb_dbm == -60.
    assert q.p_gf_dbm == p.p_gf_dbm
    # the axis is relative to the replaced noise power
    r = p.replace(noise_dbm=-100., rho_gf_db=50.)
    assert r.p_gf_dbm == -50.
    assert p.p_gb_dbm == SystemParams().p_gb_dbm


def test_params_replace_unknown():
    with pytest.raises(ValueError, match='rho_gb_db'):
        SystemParams().replace(snr=3.)


def test_params_json_and_hash():
    p = SystemParams(radius_m=10., p_gb_dbm=5.)
    q = SystemParams.from_json(p.to_json())
    assert p == q
    assert hash(p) == hash(q)
    assert p != SystemParams()


def test_sample_distance():
    assert sample_distance(radius_m=10., u=1.) == 10.
    assert sample_distance(radius_m=10., u=0.) == 0.
    assert sample_distance(radius_m=10., u=0.25) == pytest.approx(5.)
    np.testing.assert_allclose(sample_distance(radius_m=2., u=np.array([0.01, 0.64])), [0.2, 1.6])
    with pytest.raises(ValueError):
        sample_distance(radius_m=10., u=1.5)
    with pytest.raises(ValueError):
        sample_distance(radius_m=0., u=0.5)


def test_sample_fading():
    v = sample_fading(mean=1., u=1.)
    assert v == 0.
    assert math.copysign(1., v) == 1.
    assert sample_fading(mean=2., u=0.5) == pytest.approx(2 * math.log(2))
    with pytest.raises(ValueError):
        sample_fading(mean=1., u=0.)
    with pytest.raises(ValueError):
        sample_fading(mean=-1., u=0.5)


def test_sampler_moments():
    rng = np.random.default_rng(20210301)
    n = 1000000
    d = sample_distance(radius_m=600., u=rng.random(n))
    # density 2x / R^2 has mean 2R / 3
    assert abs(d.mean() - 400.) < 3 * d.std(ddof=1) / math.sqrt(n)
    h2 = sample_fading(mean=1., u=1. - rng.random(n))
    assert abs(h2.mean() - 1.) < 3 * h2.std(ddof=1) / math.sqrt(n)


def test_received_power():
    assert received_power(p_dbm=0., h2=1., d_m=1., alpha=2.8) == 1.
    assert received_power(p_dbm=10., h2=0.5, d_m=10., alpha=2.) == pytest.approx(10 * 0.5 / 100)
    with pytest.raises(ValueError):
        received_power(p_dbm=0., h2=1., d_m=0., alpha=2.8)


def _draw(d_gf, d_gb, h2_gf=1., h2_gb=1.):
    return ChannelDraw(d_gf_m=d_gf, d_gb_m=d_gb, h2_gf=h2_gf, h2_gb=h2_gb)


def test_admitted_when_gf_weaker():
    params = SystemParams(radius_m=10., p_gb_dbm=-30., p_gf_dbm=-30., noise_dbm=-90., sic_threshold=1.)
    out = evaluate_link(params=params, draw=_draw(d_gf=5., d_gb=2.))
    assert out.admitted
    assert out.gamma_gb == pytest.approx(out.g_gb / (out.g_gf + params.noise_mw))
    assert out.gamma_gf == pytest.approx(out.g_gf / params.noise_mw)
    assert out.sic_ok == (out.gamma_gb > 1.)


def test_rejected_on_tie():
    params = SystemParams(radius_m=10., p_gb_dbm=-30., p_gf_dbm=-30.)
    out = evaluate_link(params=params, draw=_draw(d_gf=3., d_gb=3.))
    assert not out.admitted
    assert not out.sic_ok
    # a non-admitted GB user sees no interference
    assert out.gamma_gb == pytest.approx(out.g_gb / params.noise_mw)


def test_sic_needs_threshold():
    params = SystemParams(radius_m=10., p_gb_dbm=-30., p_gf_dbm=-30., sic_threshold=math.inf)
    out = evaluate_link(params=params, draw=_draw(d_gf=5., d_gb=1.))
    assert out.admitted
    assert not out.sic_ok


def test_zero_gain_is_valid():
    params = SystemParams(radius_m=10.)
    out = evaluate_link(params=params, draw=_draw(d_gf=5., d_gb=1., h2_gf=0.))
    assert out.admitted
    assert out.gamma_gf == 0.


def test_batch_outcome():
    params = SystemParams(radius_m=10., p_gb_dbm=-30., p_gf_dbm=-30.)
    out = evaluate_link(params=params, draw=_draw(d_gf=np.array([5., 1.]), d_gb=np.array([1., 5.])))
    np.testing.assert_array_equal(out.admitted, [True, False])
    assert out.to_json()['gamma_gb'].shape == (2,)


def _random_draws(params, n, seed):
    rng = np.random.default_rng(seed)
    return ChannelDraw.from_uniforms(params=params, u=1. - rng.random((4, n)))


def test_admission_scale_invariant():
    params = SystemParams(radius_m=600., p_gb_dbm=-20., p_gf_dbm=-30.)
    draw = _random_draws(params=params, n=20000, seed=1)
    base = evaluate_link(params=params, draw=draw).admitted
    assert 0 < base.mean() < 1
    for shift in [-40., 17., 60.]:
        scaled = params.replace(p_gb_dbm=params.p_gb_dbm + shift, p_gf_dbm=params.p_gf_dbm + shift)
        np.testing.assert_array_equal(evaluate_link(params=scaled, draw=draw).admitted, base)


def test_admission_monotone_in_gains():
    params = SystemParams(radius_m=600., p_gb_dbm=-20., p_gf_dbm=-30.)
    draw = _random_draws(params=params, n=20000, seed=2)
    base = evaluate_link(params=params, draw=draw)
    stronger_gf = ChannelDraw(d_gf_m=draw.d_gf_m, d_gb_m=draw.d_gb_m, h2_gf=draw.h2_gf * 3., h2_gb=draw.h2_gb)
    stronger_gb = ChannelDraw(d_gf_m=draw.d_gf_m, d_gb_m=draw.d_gb_m, h2_gf=draw.h2_gf, h2_gb=draw.h2_gb * 3.)
    # admitted never switches on when h2_gf grows, nor off when h2_gb grows
    assert not np.any(evaluate_link(params=params, draw=stronger_gf).admitted & ~base.admitted)
    assert not np.any(~evaluate_link(params=params, draw=stronger_gb).admitted & base.admitted)
    # GF SINR ignores every GB-side field
    np.testing.assert_array_equal(evaluate_link(params=params, draw=stronger_gb).gamma_gf, base.gamma_gf)


def test_distance_outside_disc():
    with pytest.raises(ValueError):
        evaluate_link(params=SystemParams(radius_m=10.), draw=_draw(d_gf=11., d_gb=1.))
    with pytest.raises(ValueError):
        _draw(d_gf=0., d_gb=1.)
