import logging

import pytest

from semigfpy.experiment.scenario import (ConfigError, ScenarioConfig,
                                          parse_config, serialize_config)
from semigfpy.model.params import SystemParams


def test_defaults_applied_and_logged(caplog):
    with caplog.at_level(logging.INFO, logger='experiment'):
        cfg = parse_config('mode = analytic\n')
    assert cfg.mode == 'analytic'
    assert cfg.params == SystemParams()
    assert cfg.quad.n_outer == 200 and cfg.quad.n_inner == 200
    assert cfg.trials == 1000000
    assert cfg.sweep_values() == [None]
    messages = [r.getMessage() for r in caplog.records]
    assert any('radius_m=600.0' in m for m in messages)
    assert any('trials=' in m for m in messages)


def test_comments_and_values():
    text = ('# rate vs GB transmit SNR\n'
            'mode = compare\n'
            '\n'
            'p_gf_dbm = 20   ; partner power\n'
            'axis = rho_gb_db\n'
            'from = 0\n'
            'to = 40\n'
            'step = 5\n'
            'figure = no\n')
    cfg = parse_config(text)
    assert cfg.params.p_gf_dbm == 20.
    assert cfg.figure is False
    values = cfg.sweep_values()
    assert len(values) == 9
    assert values[0] == 0. and values[-1] == 40.
    assert cfg.params_at(10.).p_gb_dbm == -80.


def test_range_error_names_key_and_line():
    with pytest.raises(ConfigError) as e:
        parse_config('mode = analytic\nalpha = -1\n')
    assert e.value.key == 'alpha'
    assert e.value.line == 2
    assert 'alpha' in str(e.value)


@pytest.mark.parametrize('text, key', [
    ('radius_m = 5\n', 'mode'),
    ('mode = analytic\npower = 3\n', 'power'),
    ('mode = analytic\ntrials = many\n', 'trials'),
    ('mode = analytic\ntrials = 2.5\n', 'trials'),
    ('mode = guess\n', 'mode'),
    ('mode = analytic\naxis = rho_gb_db\nfrom = 0\nto = 10\n', 'step'),
    ('mode = analytic\naxis = rho_gb_db\nfrom = 10\nto = 0\nstep = 1\n', 'to'),
    ('mode = analytic\nfrom = 0\n', 'from'),
    ('mode = analytic\naxis = power\nfrom = 0\nto = 1\nstep = 1\n', 'axis'),
    ('mode = analytic\nfigure = maybe\n', 'figure'),
    ('mode = analytic\nrel_tol = 1e-12\n', 'rel_tol'),
    ('mode = analytic\nmode = oracle\n', 'mode'),
])
def test_invalid_documents(text, key):
    with pytest.raises(ConfigError) as e:
        parse_config(text)
    assert e.value.key == key


def test_malformed_line():
    with pytest.raises(ConfigError) as e:
        parse_config('mode = analytic\njust words\n')
    assert e.value.line == 2


def test_overrides_take_precedence():
    cfg = parse_config('mode = analytic\ntrials = 10\nseed = 1\n',
                       overrides={'mode': 'montecarlo', 'trials': 20, 'seed': None})
    assert cfg.mode == 'montecarlo'
    assert cfg.trials == 20
    assert cfg.seed == 1
    with pytest.raises(ConfigError):
        parse_config('mode = analytic\n', overrides={'power': 1})


def test_round_trip():
    text = ('mode = montecarlo\n'
            'radius_m = 10\n'
            'p_gb_dbm = -30.5\n'
            'sic_threshold = inf\n'
            'axis = rho_gf_db\n'
            'from = 0\n'
            'to = 1\n'
            'step = 0.1\n'
            'jobs = -1\n')
    cfg = parse_config(text)
    again = parse_config(serialize_config(cfg))
    assert again == cfg
    assert ScenarioConfig.from_json(cfg.to_json()) == cfg
    assert len(cfg.sweep_values()) == 11
