import logging
import math
from typing import List, Tuple

import numpy as np
import numpy.typing as npt

from semigfpy.analytic.helpers import HelperBundle, delta1_xi, psi
from semigfpy.model.params import SystemParams
from semigfpy.specfun.functions import EULER_GAMMA, exp1_scaled, hyp2f1_pathloss
from semigfpy.specfun.quadrature import QuadratureSpec


def _weights(nodes: npt.NDArray[np.float64],
             weights: npt.NDArray[np.float64],
             literal: bool) -> npt.NDArray[np.float64]:
    # w_k sqrt(1 - e_k^2) turns the Chebyshev-Gauss rule into a plain integral over [-1, 1]
    if literal:
        return weights * np.sqrt(1 + nodes ** 2)
    return weights * np.sqrt(1 - nodes ** 2)


def _distance_grid(params: SystemParams,
                   quad: QuadratureSpec,
                   literal: bool) -> Tuple[npt.NDArray[np.float64], ...]:
    """Get the (N, M) grids of GF distance `y`, GB distance `z` and the weight products."""
    helpers = HelperBundle(params=params)
    en, wn = quad.outer
    em, wm = quad.inner
    y = helpers.omega1(en)[:, None]
    z = helpers.omega1(em)[None, :]
    w = _weights(en, wn, literal)[:, None] * _weights(em, wm, literal)[None, :]
    return y, z, w


def rate_gb_high(params: SystemParams,
                 quad: QuadratureSpec = QuadratureSpec(),
                 literal: bool = False) -> float:
    """Compute the ergodic-rate contribution of GB thresholds in [1, inf) (BPCU).

    Over that range admission is implied by the SINR event, so the result is exact
    up to the quadrature error.

    Args:
        params (SystemParams): The scenario.
        quad (QuadratureSpec, optional): The Chebyshev-Gauss orders. Defaults to QuadratureSpec().
        literal (bool, optional): Use the printed prefactor and weights. Defaults to False.

    Returns:
        float: The rate contribution.
    """
    helpers = HelperBundle(params=params)
    a = params.pathloss_exp
    r = params.radius_m
    en, wn = quad.outer
    em, wm = quad.inner
    # outer node -> GB distance, inner node -> threshold
    x = helpers.omega1(en)[:, None]
    t = helpers.omega2(em)[None, :]
    w = _weights(en, wn, literal)[:, None] * _weights(em, wm, literal)[None, :]
    if literal:
        prefactor = 2 * r ** (a - 1) / (1 + 1 / a)
    else:
        prefactor = 4 * r ** (a - 1) / ((a + 2) * math.log(2))
    hyp = hyp2f1_pathloss(alpha=a, z=-np.power(r / x, a) / (helpers.theta1 * t))
    terms = (w * np.exp(-helpers.theta2 * np.power(x, a) * t)
             / ((em[None, :] + 1) ** 2 * helpers.theta1 * np.power(x, a - 1) * (t + t ** 2))
             * hyp)
    return float(prefactor * terms.sum())


def rate_gb_low_items(params: SystemParams,
                      quad: QuadratureSpec = QuadratureSpec(),
                      literal: bool = False) -> Tuple[float, float]:
    """Compute the two items of the GB rate contribution of thresholds in [0, 1).

    Args:
        params (SystemParams): The scenario.
        quad (QuadratureSpec, optional): The Chebyshev-Gauss orders. Defaults to QuadratureSpec().
        literal (bool, optional): Use the printed weights and kernel form. Defaults to False.

    Returns:
        Tuple[float, float]: The first (kernel-combination) and second (tail) items.
    """
    y, z, w = _distance_grid(params=params, quad=quad, literal=literal)
    r2 = params.radius_m ** 2
    lf = params.fading_mean_gf
    first = w * y * z / (math.log(2) * lf * r2) * delta1_xi(y=y, z=z, params=params, literal=literal)
    p = psi(y=y, z=z, t=1., params=params)
    # Psi(y, z, 1) sigma^2 y^a / P_GF, expanded so that P_GF cancels exactly
    a = params.pathloss_exp
    k = params.noise_mw * (np.power(z, a) / (params.fading_mean_gb * params.p_gb_mw)
                           + np.power(y, a) / (lf * params.p_gf_mw))
    second = w * y * z / (r2 * lf * p) * np.exp(-k)
    return float(first.sum()), float(second.sum())


def rate_gb_low(params: SystemParams,
                quad: QuadratureSpec = QuadratureSpec(),
                literal: bool = False) -> float:
    """Compute the ergodic-rate contribution of GB thresholds in [0, 1) (BPCU).

    Args:
        params (SystemParams): The scenario.
        quad (QuadratureSpec, optional): The Chebyshev-Gauss orders. Defaults to QuadratureSpec().
        literal (bool, optional): Use the printed weights and kernel form. Defaults to False.

    Returns:
        float: The rate contribution.
    """
    return sum(rate_gb_low_items(params=params, quad=quad, literal=literal))


def rate_gb(params: SystemParams,
            quad: QuadratureSpec = QuadratureSpec(),
            literal: bool = False) -> float:
    """Compute the ergodic rate of the GB user (BPCU)."""
    return (rate_gb_high(params=params, quad=quad, literal=literal)
            + rate_gb_low(params=params, quad=quad, literal=literal))


def _gf_terms(params: SystemParams,
              quad: QuadratureSpec,
              literal: bool) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Get the non-negative prefactors of the GF sum and the exponential-integral arguments."""
    y, z, w = _distance_grid(params=params, quad=quad, literal=literal)
    a = params.pathloss_exp
    th = params.sic_threshold
    lb_pb = params.fading_mean_gb * params.p_gb_mw
    lf = params.fading_mean_gf
    sic = th * params.noise_mw * np.power(z, a) / lb_pb
    p = psi(y=y, z=z, t=th, params=params)
    k = sic + params.noise_mw * np.power(y, a) / (lf * params.p_gf_mw)
    prefactor = w * y * z * np.exp(-sic) / (math.log(2) * lf * params.radius_m ** 2 * p)
    return prefactor, k


def rate_gf(params: SystemParams,
            quad: QuadratureSpec = QuadratureSpec(),
            literal: bool = False) -> float:
    """Compute the ergodic rate of the GF user (BPCU).

    The product `exp(k) Ei(-k)` is evaluated as the scaled `-exp(k) E1(k)`.

    Args:
        params (SystemParams): The scenario.
        quad (QuadratureSpec, optional): The Chebyshev-Gauss orders. Defaults to QuadratureSpec().
        literal (bool, optional): Use the printed weights. Defaults to False.

    Returns:
        float: The rate.
    """
    if math.isinf(params.sic_threshold):
        return 0.
    prefactor, k = _gf_terms(params=params, quad=quad, literal=literal)
    return float((prefactor * exp1_scaled(k)).sum())


def rate_gf_approx(params: SystemParams,
                   quad: QuadratureSpec = QuadratureSpec(),
                   literal: bool = False) -> float:
    """Compute the high-SNR approximation of the GF ergodic rate (BPCU).

    `exp(k) Ei(-k)` is replaced by `(ln k + C)(1 - k)`; meaningful while every `k` is small.

    Args:
        params (SystemParams): The scenario.
        quad (QuadratureSpec, optional): The Chebyshev-Gauss orders. Defaults to QuadratureSpec().
        literal (bool, optional): Use the printed weights. Defaults to False.

    Returns:
        float: The approximated rate.
    """
    if math.isinf(params.sic_threshold):
        return 0.
    prefactor, k = _gf_terms(params=params, quad=quad, literal=literal)
    if np.max(k) > 1:
        logging.getLogger('analytic').debug(f'[{__name__}.rate_gf_approx] Approximation used outside its regime (max k={np.max(k):.3g}).')
    return float((-prefactor * (np.log(k) + EULER_GAMMA) * (1 - k)).sum())


def gf_rate_argmax(values: List[float],
                   rates: List[float]) -> Tuple[int, bool]:
    """Locate the maximum of a rate curve.

    Args:
        values (List[float]): The sweep values (ascending).
        rates (List[float]): The rates at each value.

    Raises:
        ValueError: Raised if the lists are empty or of different length.

    Returns:
        Tuple[int, bool]: The index of the maximum and whether it is an interior point.
    """
    if len(values) == 0 or len(values) != len(rates):
        raise ValueError(f'Expected two non-empty lists of equal length, got {len(values)} and {len(rates)}.')
    idx = int(np.argmax(rates))
    return idx, 0 < idx < len(rates) - 1
