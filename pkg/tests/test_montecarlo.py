import numpy as np
import pytest

from semigfpy.analytic.rates import gf_rate_argmax, rate_gf
from semigfpy.model.params import SystemParams
from semigfpy.montecarlo.moments import Moments, pairwise_merge
from semigfpy.montecarlo.simulator import (RateEstimate, block_generator,
                                           coverage_curve, layer_cake_rate,
                                           simulate, sub_seed, sweep_simulate,
                                           threshold_grid)


def test_moments_merge_matches_batch():
    rng = np.random.default_rng(1)
    x = rng.normal(3., 2., 1001)
    parts = [Moments.of(chunk) for chunk in np.array_split(x, 7)]
    merged = pairwise_merge(parts)
    assert merged.count == 1001
    assert merged.mean == pytest.approx(np.mean(x), rel=1e-12)
    assert merged.variance == pytest.approx(np.var(x, ddof=1), rel=1e-10)
    assert merged.std_err == pytest.approx(np.std(x, ddof=1) / np.sqrt(1001), rel=1e-10)


def test_moments_empty():
    assert pairwise_merge([]).count == 0
    m = Moments.of(np.array([2.]))
    assert m.merge(Moments()).mean == 2.
    assert m.variance == 0.
    assert Moments().std_err == 0.


def test_block_streams_are_independent_of_partition():
    a = block_generator(seed=7, block=3).random(5)
    b = block_generator(seed=7, block=3).random(5)
    c = block_generator(seed=7, block=4).random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_simulate_deterministic_across_jobs(wide_disc):
    one = simulate(params=wide_disc, trials=20000, seed=11, n_jobs=1, block_size=3000)
    many = simulate(params=wide_disc, trials=20000, seed=11, n_jobs=4, block_size=3000)
    assert one == many
    other = simulate(params=wide_disc, trials=20000, seed=12, n_jobs=1, block_size=3000)
    assert other != one


def test_simulate_reports_probabilities(wide_disc):
    gb, gf = simulate(params=wide_disc, trials=20000, seed=3, block_size=5000)
    assert gb.trials == 20000
    assert 0 < gb.admit_prob < 1
    assert gb.sic_success_prob <= gb.admit_prob
    assert gf.unconditioned_mean_bpcu >= gf.mean_bpcu
    assert RateEstimate.from_json(gb.to_json()) == gb


def test_simulate_rejects_bad_trials(wide_disc):
    with pytest.raises(ValueError):
        simulate(params=wide_disc, trials=0)
    with pytest.raises(ValueError):
        simulate(params=wide_disc, trials=2.5)


def test_symmetric_admission():
    params = SystemParams(radius_m=10., p_gb_dbm=-30., p_gf_dbm=-30.)
    trials = 100000
    gb, _ = simulate(params=params, trials=trials, seed=5)
    assert abs(gb.admit_prob - 0.5) < 4 * np.sqrt(0.25 / trials)


def test_no_sic_no_gf_rate(small_disc):
    _, gf = simulate(params=small_disc.replace(sic_threshold=np.inf), trials=5000, seed=1)
    assert gf.mean_bpcu == 0.
    assert gf.sic_success_prob == 0.


def test_gb_rate_grows_with_gb_power(small_disc):
    low, _ = simulate(params=small_disc.replace(rho_gb_db=50.), trials=50000, seed=2)
    high, _ = simulate(params=small_disc.replace(rho_gb_db=70.), trials=50000, seed=2)
    assert high.mean_bpcu > low.mean_bpcu


def test_sub_seeds_differ():
    assert sub_seed(seed=1, index=0) != sub_seed(seed=1, index=1)
    assert sub_seed(seed=1, index=0) == sub_seed(seed=1, index=0)


def test_sweep_simulate(small_disc):
    res = sweep_simulate(base=small_disc, axis='rho_gf_db', values=[40., 60.], trials=2000, seed=9)
    assert [v for v, _, _ in res] == [40., 60.]
    gb, gf = simulate(params=small_disc.replace(rho_gf_db=60.), trials=2000, seed=sub_seed(seed=9, index=1))
    assert res[1][1] == gb and res[1][2] == gf
    with pytest.raises(ValueError):
        sweep_simulate(base=small_disc, axis='power', values=[1.])
    with pytest.raises(ValueError):
        sweep_simulate(base=small_disc, axis='rho_gf_db', values=[])


@pytest.mark.slow
def test_gf_rate_matches_closed_form(wide_disc):
    # with sic_threshold >= 1 the closed form is exact up to quadrature error
    _, gf = simulate(params=wide_disc, trials=400000, seed=21)
    expected = rate_gf(params=wide_disc)
    assert abs(gf.mean_bpcu - expected) < 4 * gf.std_err + 1e-2 * expected


@pytest.mark.slow
def test_layer_cake_matches_indicator_mean(wide_disc):
    trials = 200000
    thresholds = threshold_grid(t_max=1e5)
    gb_cov, gf_cov = coverage_curve(params=wide_disc, thresholds=thresholds, trials=trials, seed=4)
    gb, gf = simulate(params=wide_disc, trials=trials, seed=4)
    assert layer_cake_rate(thresholds=thresholds, coverage=gb_cov) == pytest.approx(gb.mean_bpcu, rel=2e-2)
    assert layer_cake_rate(thresholds=thresholds, coverage=gf_cov) == pytest.approx(gf.mean_bpcu, rel=2e-2)


def test_coverage_curve_is_monotone(wide_disc):
    thresholds = threshold_grid(t_max=1e2, n=50)
    gb_cov, gf_cov = coverage_curve(params=wide_disc, thresholds=thresholds, trials=5000, seed=1)
    assert np.all(np.diff(gb_cov) <= 0)
    assert np.all(np.diff(gf_cov) <= 0)
    with pytest.raises(ValueError):
        coverage_curve(params=wide_disc, thresholds=np.array([-1.]), trials=10)


@pytest.mark.slow
def test_std_err_shrinks_with_root_trials(unit_disc):
    few, _ = simulate(params=unit_disc, trials=10000, seed=6)
    many, _ = simulate(params=unit_disc, trials=1000000, seed=6)
    assert few.std_err / many.std_err == pytest.approx(10., rel=0.2)


@pytest.mark.slow
def test_gf_argmax_matches_closed_form(unit_disc):
    base = unit_disc.replace(rho_gb_db=40.)
    values = [float(v) for v in np.arange(0., 41., 2.)]
    analytic = [rate_gf(params=base.replace(rho_gf_db=v)) for v in values]
    simulated = [gf.mean_bpcu for _, _, gf in sweep_simulate(base=base, axis='rho_gf_db', values=values,
                                                             trials=1000000, seed=17)]
    analytic_idx, _ = gf_rate_argmax(values=values, rates=analytic)
    simulated_idx, interior = gf_rate_argmax(values=values, rates=simulated)
    assert interior
    assert abs(simulated_idx - analytic_idx) <= 1
