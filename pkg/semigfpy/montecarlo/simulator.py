import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed
from scipy.integrate import trapezoid
from tqdm import tqdm

from semigfpy.config import MC_BLOCK_SIZE, MC_N_JOBS, MC_SEED, MC_TRIALS
from semigfpy.model.link import ChannelDraw, evaluate_link
from semigfpy.model.params import SystemParams
from semigfpy.montecarlo.moments import Moments, pairwise_merge

# per-block statistics, in this order
_STATS = ['gb', 'gf', 'gf_free', 'admit', 'sic']


class RateEstimate:
    def __init__(self,
                 mean_bpcu: float,
                 std_err: float,
                 trials: int,
                 admit_prob: float,
                 sic_success_prob: float,
                 unconditioned_mean_bpcu: Optional[float] = None):
        """Create a Monte Carlo rate estimate.

        Args:
            mean_bpcu (float): The estimated ergodic rate (BPCU).
            std_err (float): The standard error of the mean.
            trials (int): The number of trials.
            admit_prob (float): The fraction of trials where the GF user was admitted.
            sic_success_prob (float): The fraction of trials where SIC succeeded.
            unconditioned_mean_bpcu (Optional[float], optional): The mean rate with the protocol indicators dropped. Defaults to None.
        """
        self.mean_bpcu = mean_bpcu
        self.std_err = std_err
        self.trials = trials
        self.admit_prob = admit_prob
        self.sic_success_prob = sic_success_prob
        self.unconditioned_mean_bpcu = unconditioned_mean_bpcu

    def __str__(self) -> str:
        return f'{self.mean_bpcu:.6g} +- {self.std_err:.2g} BPCU ({self.trials} trials)'

    def __repr__(self) -> str:
        return str(self)

    def __eq__(self,
               other: 'RateEstimate') -> bool:
        if isinstance(other, RateEstimate):
            return self.to_json() == other.to_json()
        return False

    def to_json(self) -> Dict[str, Any]:
        return {
            'mean_bpcu': self.mean_bpcu,
            'std_err': self.std_err,
            'trials': self.trials,
            'admit_prob': self.admit_prob,
            'sic_success_prob': self.sic_success_prob,
            'unconditioned_mean_bpcu': self.unconditioned_mean_bpcu
        }

    @staticmethod
    def from_json(my_args: Dict[str, Any]) -> 'RateEstimate':
        return RateEstimate(**my_args)


def block_generator(seed: int,
                    block: int) -> np.random.Generator:
    """Get the counter-based generator of one block of trials.

    The stream of block `b` depends on `(seed, b)` only, so any partition of the
    blocks across workers draws the same numbers.

    Args:
        seed (int): The run seed.
        block (int): The block index.

    Returns:
        np.random.Generator: A Philox generator.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(block,))))


def _block_uniforms(seed: int,
                    block: int,
                    n: int) -> npt.NDArray[np.float64]:
    # one row per trial: (d_GF, d_GB, h2_GF, h2_GB), mapped from [0, 1) to (0, 1]
    u = 1. - block_generator(seed=seed, block=block).random((n, 4))
    return u.T


def _block_outcome(params: SystemParams,
                   seed: int,
                   block: int,
                   n: int):
    draw = ChannelDraw.from_uniforms(params=params, u=_block_uniforms(seed=seed, block=block, n=n))
    return evaluate_link(params=params, draw=draw)


def _block_stats(params: SystemParams,
                 seed: int,
                 block: int,
                 n: int) -> List[Moments]:
    out = _block_outcome(params=params, seed=seed, block=block, n=n)
    rate_gb = np.log2(1 + out.gamma_gb)
    rate_gf = np.log2(1 + out.gamma_gf)
    return [Moments.of(np.where(out.admitted, rate_gb, 0.)),
            Moments.of(np.where(out.sic_ok, rate_gf, 0.)),
            Moments.of(rate_gf),
            Moments.of(out.admitted.astype(np.float64)),
            Moments.of(out.sic_ok.astype(np.float64))]


def _blocks(trials: int,
            block_size: int) -> List[Tuple[int, int]]:
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise ValueError(f'trials must be a positive integer, got {trials}.')
    if block_size < 1:
        raise ValueError(f'block_size must be positive, got {block_size}.')
    n_blocks = -(-int(trials) // block_size)
    return [(b, min(block_size, int(trials) - b * block_size)) for b in range(n_blocks)]


def simulate(params: SystemParams,
             trials: int = MC_TRIALS,
             seed: int = MC_SEED,
             n_jobs: int = MC_N_JOBS,
             block_size: int = MC_BLOCK_SIZE) -> Tuple[RateEstimate, RateEstimate]:
    """Estimate both ergodic rates as indicator-weighted sample means.

    The GB rate averages `log2(1 + gamma_GB)` over admitted trials (zero otherwise),
    the GF rate averages `log2(1 + gamma_GF)` over trials where SIC succeeded.

    Args:
        params (SystemParams): The scenario.
        trials (int, optional): The number of trials. Defaults to MC_TRIALS.
        seed (int, optional): The run seed. Defaults to MC_SEED.
        n_jobs (int, optional): The number of worker threads. Defaults to MC_N_JOBS.
        block_size (int, optional): Trials per generator block. Defaults to MC_BLOCK_SIZE.

    Raises:
        ValueError: Raised if `trials` is not a positive integer.

    Returns:
        Tuple[RateEstimate, RateEstimate]: The GB and GF estimates.
    """
    blocks = _blocks(trials=trials, block_size=block_size)
    logging.getLogger('montecarlo').debug(f'[{__name__}.simulate] {trials} trials in {len(blocks)} block(s), seed={seed}, n_jobs={n_jobs}.')
    per_block = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(_block_stats)(params, seed, b, n)
                                                           for b, n in tqdm(blocks, desc='Monte Carlo ', leave=False, disable=len(blocks) < 8))
    merged = {name: pairwise_merge([stats[i] for stats in per_block]) for i, name in enumerate(_STATS)}
    admit_prob = merged['admit'].mean
    sic_prob = merged['sic'].mean
    gb = RateEstimate(mean_bpcu=merged['gb'].mean,
                      std_err=merged['gb'].std_err,
                      trials=int(trials),
                      admit_prob=admit_prob,
                      sic_success_prob=sic_prob)
    gf = RateEstimate(mean_bpcu=merged['gf'].mean,
                      std_err=merged['gf'].std_err,
                      trials=int(trials),
                      admit_prob=admit_prob,
                      sic_success_prob=sic_prob,
                      unconditioned_mean_bpcu=merged['gf_free'].mean)
    logging.getLogger('montecarlo').debug(f'[{__name__}.simulate] GB {gb}; GF {gf}.')
    return gb, gf


def sub_seed(seed: int,
             index: int) -> int:
    """Derive the seed of the `index`-th point of a sweep.

    Args:
        seed (int): The sweep seed.
        index (int): The point index.

    Returns:
        int: A 64-bit seed.
    """
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def sweep_simulate(base: SystemParams,
                   axis: str,
                   values: List[float],
                   trials: int = MC_TRIALS,
                   seed: int = MC_SEED,
                   n_jobs: int = MC_N_JOBS) -> List[Tuple[float, RateEstimate, RateEstimate]]:
    """Run `simulate` at every value of one parameter.

    Args:
        base (SystemParams): The scenario the sweep starts from.
        axis (str): A `SystemParams` field or a transmit SNR axis (`rho_gb_db`, `rho_gf_db`).
        values (List[float]): The values of the axis.
        trials (int, optional): Trials per point. Defaults to MC_TRIALS.
        seed (int, optional): The sweep seed. Defaults to MC_SEED.
        n_jobs (int, optional): The number of worker threads per point. Defaults to MC_N_JOBS.

    Raises:
        ValueError: Raised if `axis` is unknown or `values` is empty.

    Returns:
        List[Tuple[float, RateEstimate, RateEstimate]]: The (value, GB, GF) triples, in input order.
    """
    if axis not in SystemParams.axes():
        raise ValueError(f'Unknown sweep axis {axis}; valid axes are {", ".join(SystemParams.axes())}.')
    if len(values) == 0:
        raise ValueError('Sweep values must not be empty.')
    res = []
    for i, v in enumerate(values):
        gb, gf = simulate(params=base.replace(**{axis: v}),
                          trials=trials,
                          seed=sub_seed(seed=seed, index=i),
                          n_jobs=n_jobs)
        res.append((v, gb, gf))
    return res


def threshold_grid(t_max: float = 1e3,
                   n: int = 4000,
                   t_min: float = 1e-12) -> npt.NDArray[np.float64]:
    """Get a threshold grid `[0] + logspace(t_min, t_max)` for coverage curves."""
    return np.concatenate([[0.], np.logspace(math.log10(t_min), math.log10(t_max), n)])


def _block_coverage(params: SystemParams,
                    seed: int,
                    block: int,
                    n: int,
                    thresholds: npt.NDArray[np.float64]) -> Tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    out = _block_outcome(params=params, seed=seed, block=block, n=n)
    # trials failing the protocol never count as covered (thresholds are >= 0)
    gb = np.sort(np.where(out.admitted, out.gamma_gb, -1.))
    gf = np.sort(np.where(out.sic_ok, out.gamma_gf, -1.))
    return (n - np.searchsorted(gb, thresholds, side='right'),
            n - np.searchsorted(gf, thresholds, side='right'))


def coverage_curve(params: SystemParams,
                   thresholds: npt.NDArray[np.float64],
                   trials: int = MC_TRIALS,
                   seed: int = MC_SEED,
                   n_jobs: int = MC_N_JOBS,
                   block_size: int = MC_BLOCK_SIZE) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Estimate the coverage probabilities of both users over a threshold grid.

    GB coverage is `P(gamma_GB > t, admitted)`; GF coverage is `P(gamma_GF > t, SIC ok)`.
    The trials are the same as those of `simulate` with equal arguments.

    Args:
        params (SystemParams): The scenario.
        thresholds (npt.NDArray[np.float64]): Non-negative SINR thresholds (linear).
        trials (int, optional): The number of trials. Defaults to MC_TRIALS.
        seed (int, optional): The run seed. Defaults to MC_SEED.
        n_jobs (int, optional): The number of worker threads. Defaults to MC_N_JOBS.
        block_size (int, optional): Trials per generator block. Defaults to MC_BLOCK_SIZE.

    Raises:
        ValueError: Raised if a threshold is negative.

    Returns:
        Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]: The GB and GF coverage curves.
    """
    thresholds = np.asarray(thresholds, dtype=np.float64)
    if np.any(thresholds < 0):
        raise ValueError('Coverage thresholds must be non-negative.')
    blocks = _blocks(trials=trials, block_size=block_size)
    per_block = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(_block_coverage)(params, seed, b, n, thresholds)
                                                           for b, n in blocks)
    gb = np.sum([c[0] for c in per_block], axis=0)
    gf = np.sum([c[1] for c in per_block], axis=0)
    return gb / trials, gf / trials


def layer_cake_rate(thresholds: npt.NDArray[np.float64],
                    coverage: npt.NDArray[np.float64]) -> float:
    """Integrate a coverage curve into an ergodic rate, `(1 / ln 2) int P_c(t) / (1 + t) dt`.

    Args:
        thresholds (npt.NDArray[np.float64]): The ascending threshold grid.
        coverage (npt.NDArray[np.float64]): The coverage probability at each threshold.

    Returns:
        float: The rate (BPCU), truncated at the last threshold.
    """
    thresholds = np.asarray(thresholds, dtype=np.float64)
    return float(trapezoid(np.asarray(coverage) / (1 + thresholds), thresholds) / math.log(2))
