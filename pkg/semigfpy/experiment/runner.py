import logging
import os
import platform
import time
from datetime import datetime
from enum import IntEnum
from importlib import metadata
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from semigfpy.analytic.rates import (rate_gb, rate_gb_high, rate_gb_low,
                                     rate_gb_low_items, rate_gf,
                                     rate_gf_approx)
from semigfpy.common.jsonifier import json_dump
from semigfpy.config import ANALYTIC_REL_TOL, MC_SIGMAS
from semigfpy.experiment.scenario import ScenarioConfig, serialize_config
from semigfpy.montecarlo.simulator import simulate, sub_seed
from semigfpy.oracle.integrate import (integrate_gb_high, integrate_gb_low,
                                       integrate_gf)
from semigfpy.stats.plots import plot_rates

COLUMNS = ['axis_value',
           'rate_gb_analytic', 'rate_gb_oracle', 'rate_gb_mc', 'rate_gb_mc_stderr',
           'rate_gf_analytic', 'rate_gf_approx', 'rate_gf_oracle', 'rate_gf_mc', 'rate_gf_mc_stderr',
           'admit_prob', 'sic_prob',
           'rate_gb_oracle_simplified', 'rate_gf_oracle_simplified']

ERRATA_COLUMNS = ['axis_value',
                  'rate_gb_high_literal', 'rate_gb_high_analytic', 'rate_gb_high_oracle',
                  'gb_low_first_literal', 'gb_low_first_analytic', 'gb_low_first_oracle_simplified',
                  'gb_low_second_literal', 'gb_low_second_analytic', 'gb_low_second_oracle_simplified',
                  'rate_gb_low_literal', 'rate_gb_low_analytic', 'rate_gb_low_oracle_simplified', 'rate_gb_low_oracle',
                  'rate_gf_literal', 'rate_gf_analytic', 'rate_gf_oracle_simplified', 'rate_gf_oracle']


class RunStatus(IntEnum):
    OK = 0
    CONFIG_ERROR = 2
    TOLERANCE_FAILURE = 3
    IO_ERROR = 4


class PointResult:
    def __init__(self,
                 row: Dict[str, Optional[float]],
                 converged: bool = True):
        self.row = row
        self.converged = converged

    def __str__(self) -> str:
        return f'PointResult({self.row}, converged={self.converged})'

    def __repr__(self) -> str:
        return str(self)


def _oracle_columns(cfg: ScenarioConfig,
                    value: Optional[float]) -> Tuple[Dict[str, float], bool]:
    params = cfg.params_at(value)
    icfg = cfg.integration
    high = integrate_gb_high(params=params, cfg=icfg)
    low = integrate_gb_low(params=params, cfg=icfg, form='exact')
    low_app = integrate_gb_low(params=params, cfg=icfg, form='simplified')
    gf = integrate_gf(params=params, cfg=icfg, form='exact')
    # both forms coincide when the SIC threshold implies admission
    gf_app = gf if params.sic_threshold >= 1 else integrate_gf(params=params, cfg=icfg, form='simplified')
    converged = all(r.converged for r in [high, low, low_app, gf, gf_app])
    return {'rate_gb_oracle': high.value + low.value,
            'rate_gb_oracle_simplified': high.value + low_app.value,
            'rate_gf_oracle': gf.value,
            'rate_gf_oracle_simplified': gf_app.value}, converged


def _errata_row(cfg: ScenarioConfig,
                value: Optional[float]) -> Tuple[Dict[str, float], bool]:
    params = cfg.params_at(value)
    quad = cfg.quad
    icfg = cfg.integration
    high = integrate_gb_high(params=params, cfg=icfg)
    low = integrate_gb_low(params=params, cfg=icfg, form='exact')
    low_app = integrate_gb_low(params=params, cfg=icfg, form='simplified')
    gf = integrate_gf(params=params, cfg=icfg, form='exact')
    gf_app = integrate_gf(params=params, cfg=icfg, form='simplified')
    first_lit, second_lit = rate_gb_low_items(params=params, quad=quad, literal=True)
    first, second = rate_gb_low_items(params=params, quad=quad)
    row = {'rate_gb_high_literal': rate_gb_high(params=params, quad=quad, literal=True),
           'rate_gb_high_analytic': rate_gb_high(params=params, quad=quad),
           'rate_gb_high_oracle': high.value,
           'gb_low_first_literal': first_lit,
           'gb_low_first_analytic': first,
           'gb_low_first_oracle_simplified': low_app.items[0],
           'gb_low_second_literal': second_lit,
           'gb_low_second_analytic': second,
           'gb_low_second_oracle_simplified': low_app.items[1],
           'rate_gb_low_literal': first_lit + second_lit,
           'rate_gb_low_analytic': first + second,
           'rate_gb_low_oracle_simplified': low_app.value,
           'rate_gb_low_oracle': low.value,
           'rate_gf_literal': rate_gf(params=params, quad=quad, literal=True),
           'rate_gf_analytic': rate_gf(params=params, quad=quad),
           'rate_gf_oracle_simplified': gf_app.value,
           'rate_gf_oracle': gf.value}
    return row, all(r.converged for r in [high, low, low_app, gf, gf_app])


def evaluate_point(cfg: ScenarioConfig,
                   index: int,
                   value: Optional[float]) -> PointResult:
    """Evaluate every method the run mode asks for at one sweep point.

    Args:
        cfg (ScenarioConfig): The run configuration.
        index (int): The index of the point (selects the Monte Carlo sub-seed).
        value (Optional[float]): The axis value, None for a single-point run.

    Returns:
        PointResult: The CSV row and whether every oracle integration converged.
    """
    logger = logging.getLogger('experiment')
    logger.debug(f'[{__name__}.evaluate_point] Point {index}: {cfg.axis}={value}.')
    if cfg.mode == 'errata':
        row, converged = _errata_row(cfg=cfg, value=value)
        row['axis_value'] = value
        return PointResult(row={k: row.get(k) for k in ERRATA_COLUMNS}, converged=converged)
    params = cfg.params_at(value)
    row: Dict[str, Any] = {'axis_value': value}
    converged = True
    if cfg.mode in ['analytic', 'compare']:
        row['rate_gb_analytic'] = rate_gb(params=params, quad=cfg.quad)
        row['rate_gf_analytic'] = rate_gf(params=params, quad=cfg.quad)
        row['rate_gf_approx'] = rate_gf_approx(params=params, quad=cfg.quad)
    if cfg.mode in ['oracle', 'compare']:
        cols, converged = _oracle_columns(cfg=cfg, value=value)
        row.update(cols)
    if cfg.mode in ['montecarlo', 'compare']:
        gb, gf = simulate(params=params,
                          trials=cfg.trials,
                          seed=sub_seed(seed=cfg.seed, index=index),
                          n_jobs=1)
        row.update({'rate_gb_mc': gb.mean_bpcu,
                    'rate_gb_mc_stderr': gb.std_err,
                    'rate_gf_mc': gf.mean_bpcu,
                    'rate_gf_mc_stderr': gf.std_err,
                    'admit_prob': gb.admit_prob,
                    'sic_prob': gb.sic_success_prob})
    return PointResult(row={k: row.get(k) for k in COLUMNS}, converged=converged)


def compare_flags(row: Dict[str, Optional[float]],
                  analytic_rel_tol: float = ANALYTIC_REL_TOL,
                  mc_sigmas: float = MC_SIGMAS) -> List[str]:
    """List the disagreements of one compare row.

    Closed forms are checked against the simplified-form oracle (relative tolerance),
    Monte Carlo against the exact oracle (standard errors).

    Args:
        row (Dict[str, Optional[float]]): A results row.
        analytic_rel_tol (float, optional): Allowed relative gap of the closed forms. Defaults to ANALYTIC_REL_TOL.
        mc_sigmas (float, optional): Allowed Monte Carlo gap in standard errors. Defaults to MC_SIGMAS.

    Returns:
        List[str]: One message per disagreement; empty if the row is clean.
    """
    flags = []
    for user in ['gb', 'gf']:
        analytic = row.get(f'rate_{user}_analytic')
        ref = row.get(f'rate_{user}_oracle_simplified')
        if analytic is not None and ref is not None:
            gap = abs(analytic - ref) / ref if ref != 0 else abs(analytic)
            if gap > analytic_rel_tol:
                flags.append(f'{user.upper()} analytic {analytic:.6g} vs oracle {ref:.6g} (relative gap {gap:.2e})')
        mc = row.get(f'rate_{user}_mc')
        oracle = row.get(f'rate_{user}_oracle')
        if mc is not None and oracle is not None:
            err = row[f'rate_{user}_mc_stderr']
            if abs(mc - oracle) > mc_sigmas * err + 1e-12:
                flags.append(f'{user.upper()} Monte Carlo {mc:.6g} +- {err:.2g} vs oracle {oracle:.6g}')
    return flags


def run_sweep(cfg: ScenarioConfig) -> Tuple[pd.DataFrame, List[str], bool]:
    """Evaluate every sweep point, `cfg.jobs` points at a time.

    Args:
        cfg (ScenarioConfig): The run configuration.

    Returns:
        Tuple[pd.DataFrame, List[str], bool]: The results (ordered by axis value), the compare flags and
        whether every oracle integration converged.
    """
    values = cfg.sweep_values()
    points = Parallel(n_jobs=cfg.jobs, prefer="threads")(delayed(evaluate_point)(cfg, i, v)
                                                          for i, v in enumerate(tqdm(values, desc='Sweep ', disable=len(values) < 2)))
    df = pd.DataFrame([p.row for p in points],
                      columns=ERRATA_COLUMNS if cfg.mode == 'errata' else COLUMNS)
    flags = []
    if cfg.mode == 'compare':
        for p in points:
            flags.extend([f'{cfg.axis}={p.row["axis_value"]}: {f}' for f in compare_flags(row=p.row)])
    return df, flags, all(p.converged for p in points)


def _versions() -> Dict[str, str]:
    versions = {'python': platform.python_version()}
    for pkg in ['SemiGFPy', 'numpy', 'scipy', 'pandas', 'matplotlib', 'joblib', 'tqdm']:
        try:
            versions[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            versions[pkg] = 'unknown'
    return versions


def run(cfg: ScenarioConfig) -> RunStatus:
    """Run an experiment and write its artifacts to `cfg.out`.

    Writes `results.csv` (`errata.csv` in errata mode), the `run.json` manifest and,
    unless disabled, `figure.svg`.

    Args:
        cfg (ScenarioConfig): The run configuration.

    Raises:
        OSError: Raised if the output directory or a file cannot be written.

    Returns:
        RunStatus: `OK`, or `TOLERANCE_FAILURE` if an oracle integration did not converge.
    """
    logger = logging.getLogger('experiment')
    os.makedirs(cfg.out, exist_ok=True)
    started = datetime.now().isoformat(timespec='seconds')
    t0 = time.perf_counter()
    logger.info(f'[{__name__}.run] Starting {cfg}.')
    df, flags, converged = run_sweep(cfg=cfg)
    wall_time = time.perf_counter() - t0

    csv_name = 'errata.csv' if cfg.mode == 'errata' else 'results.csv'
    df.to_csv(os.path.join(cfg.out, csv_name), index=False, lineterminator='\n')
    if cfg.figure and cfg.mode != 'errata':
        plot_rates(df=df,
                   axis=cfg.axis or 'single point',
                   title=f'{cfg.mode} run',
                   filename=os.path.join(cfg.out, 'figure.svg'))

    for f in flags:
        logger.warning(f'[{__name__}.run] Flagged: {f}.')
    if not converged:
        logger.warning(f'[{__name__}.run] Some oracle integrations did not reach the requested tolerance.')
    status = RunStatus.OK if converged else RunStatus.TOLERANCE_FAILURE
    p = cfg.params
    manifest = {
        'config': cfg,
        'config_text': serialize_config(cfg),
        'seed': cfg.seed,
        'versions': _versions(),
        'started_at': started,
        'wall_time_s': wall_time,
        'power_conventions': {
            'axis_semantics': 'rho_*_db axes set the transmit power to noise_dbm + value; other powers are absolute dBm',
            'p_gb_dbm': p.p_gb_dbm,
            'p_gf_dbm': p.p_gf_dbm,
            'noise_dbm': p.noise_dbm,
            'rho_gb_db': p.rho_gb_db,
            'rho_gf_db': p.rho_gf_db
        },
        'flags': flags,
        'converged': converged,
        'status': int(status)
    }
    with open(os.path.join(cfg.out, 'run.json'), 'w') as f:
        json_dump(obj=manifest, fp=f)
    logger.info(f'[{__name__}.run] Wrote {len(df)} row(s) to {cfg.out} in {wall_time:.1f}s; {len(flags)} flag(s).')
    return status
