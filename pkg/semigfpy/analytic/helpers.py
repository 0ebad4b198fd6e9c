import logging
from typing import Union

import numpy as np
import numpy.typing as npt

from semigfpy.config import SINGULAR_PERTURBATION, SINGULAR_REL_TOL
from semigfpy.model.params import SystemParams
from semigfpy.specfun.functions import phi_kernel

FloatOrArray = Union[float, npt.NDArray[np.float64]]


def _out(x: npt.NDArray[np.float64]) -> FloatOrArray:
    return float(x) if np.ndim(x) == 0 else x


class HelperBundle:
    def __init__(self,
                 params: SystemParams):
        """Create the substitution maps and power ratios shared by the closed forms.

        Args:
            params (SystemParams): The scenario.
        """
        self.radius_m = params.radius_m
        self.theta1 = params.fading_mean_gf * params.p_gf_mw / (params.fading_mean_gb * params.p_gb_mw)
        self.theta2 = params.noise_mw / (params.fading_mean_gb * params.p_gb_mw)

    def __str__(self) -> str:
        return f'HelperBundle(R={self.radius_m}, theta1={self.theta1}, theta2={self.theta2})'

    def __repr__(self) -> str:
        return str(self)

    def omega1(self,
               x: FloatOrArray) -> FloatOrArray:
        """Map a node in (-1, 1) to a distance in (0, R)."""
        return _out(self.radius_m * (np.asarray(x, dtype=np.float64) + 1) / 2)

    def omega2(self,
               x: FloatOrArray) -> FloatOrArray:
        """Map a node in (-1, 1] to a threshold in [1, inf)."""
        return _out(2 / (np.asarray(x, dtype=np.float64) + 1))


def psi(y: FloatOrArray,
        z: FloatOrArray,
        t: FloatOrArray,
        params: SystemParams) -> FloatOrArray:
    """Compute `Psi(y, z, t) = P_GF y^-a t / (lambda_GB P_GB z^-a) + 1 / lambda_GF`.

    Args:
        y (FloatOrArray): GF user distance(s) (m).
        z (FloatOrArray): GB user distance(s) (m).
        t (FloatOrArray): Threshold(s), non-negative.
        params (SystemParams): The scenario.

    Returns:
        FloatOrArray: The value(s), broadcast over the arguments.
    """
    y, z, t = [np.asarray(v, dtype=np.float64) for v in (y, z, t)]
    ratio = params.p_gf_mw / (params.fading_mean_gb * params.p_gb_mw)
    return _out(ratio * t * np.power(z / y, params.pathloss_exp) + 1 / params.fading_mean_gf)


class DeltaSet:
    def __init__(self,
                 delta1: FloatOrArray,
                 delta2: FloatOrArray,
                 delta3: FloatOrArray,
                 delta4: FloatOrArray,
                 singular: Union[bool, npt.NDArray[np.bool_]]):
        self.delta1 = delta1
        self.delta2 = delta2
        self.delta3 = delta3
        self.delta4 = delta4
        self.singular = singular

    def __str__(self) -> str:
        return f'DeltaSet(d1={self.delta1}, d2={self.delta2}, d3={self.delta3}, d4={self.delta4}, singular={self.singular})'

    def __repr__(self) -> str:
        return str(self)

    def __iter__(self):
        return iter((self.delta1, self.delta2, self.delta3, self.delta4))


def delta_set(y: FloatOrArray,
              z: FloatOrArray,
              params: SystemParams,
              rel_tol: float = SINGULAR_REL_TOL) -> DeltaSet:
    """Compute the four coefficients of the finite-threshold GB rate.

    `delta1` has a pole where the mean GB and GF received powers coincide;
    those points are flagged as singular (and `delta1` is +-inf there if the
    cancellation is exact).

    Args:
        y (FloatOrArray): GF user distance(s) (m).
        z (FloatOrArray): GB user distance(s) (m).
        params (SystemParams): The scenario.
        rel_tol (float, optional): Denominator threshold relative to the numerator. Defaults to SINGULAR_REL_TOL.

    Returns:
        DeltaSet: The coefficients and the singularity flag(s).
    """
    y = np.asarray(y, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    a = params.pathloss_exp
    # lambda_GB P_GB z^-a / (lambda_GF P_GF y^-a)
    delta4 = (params.fading_mean_gb * params.p_gb_mw) / (params.fading_mean_gf * params.p_gf_mw) * np.power(y / z, a)
    denom = 1 - 1 / delta4
    singular = np.abs(denom) < rel_tol
    with np.errstate(divide='ignore'):
        delta1 = params.fading_mean_gf / denom
    delta2 = params.noise_mw * np.power(z, a) / (params.fading_mean_gb * params.p_gb_mw)
    delta3 = np.exp(-params.noise_mw * np.power(y, a) / (params.fading_mean_gf * params.p_gf_mw))
    return DeltaSet(delta1=_out(delta1),
                    delta2=_out(delta2),
                    delta3=_out(delta3),
                    delta4=_out(delta4),
                    singular=bool(singular) if np.ndim(singular) == 0 else singular)


def _xi(deltas: DeltaSet,
        literal: bool) -> npt.NDArray[np.float64]:
    _, d2, d3, d4 = [np.asarray(d, dtype=np.float64) for d in deltas]
    return (phi_kernel(a=1., b=d2, literal=literal)
            - d3 * phi_kernel(a=1., b=2 * d2, literal=literal)
            - phi_kernel(a=d4, b=d2, literal=literal)
            + d3 * phi_kernel(a=d4, b=2 * d2, literal=literal))


def xi(node_n: FloatOrArray,
       node_m: FloatOrArray,
       params: SystemParams,
       literal: bool = False) -> FloatOrArray:
    """Compute the four-kernel combination at the distances mapped from two nodes.

    `y` (GF) comes from `node_n` and `z` (GB) from `node_m`.

    Args:
        node_n (FloatOrArray): The outer node(s) in (-1, 1).
        node_m (FloatOrArray): The inner node(s) in (-1, 1).
        params (SystemParams): The scenario.
        literal (bool, optional): Use the semi-infinite kernel form. Defaults to False.

    Returns:
        FloatOrArray: The combination (finite even where `delta1` is singular).
    """
    helpers = HelperBundle(params=params)
    deltas = delta_set(y=helpers.omega1(node_n), z=helpers.omega1(node_m), params=params)
    if np.any(deltas.singular):
        logging.getLogger('analytic').debug(f'[{__name__}.xi] delta1 near-singular at {np.count_nonzero(deltas.singular)} point(s).')
    return _out(_xi(deltas=deltas, literal=literal))


def delta1_xi(y: FloatOrArray,
              z: FloatOrArray,
              params: SystemParams,
              literal: bool = False,
              perturbation: float = SINGULAR_PERTURBATION) -> FloatOrArray:
    """Compute `delta1(y, z) * Xi(y, z)`, the integrand of the first GB item.

    The pole of `delta1` is removable; near it the product is replaced by the
    average of its values at `y (1 - perturbation)` and `y (1 + perturbation)`.

    Args:
        y (FloatOrArray): GF user distance(s) (m).
        z (FloatOrArray): GB user distance(s) (m).
        params (SystemParams): The scenario.
        literal (bool, optional): Use the semi-infinite kernel form. Defaults to False.
        perturbation (float, optional): Relative shift of `y` around a pole. Defaults to SINGULAR_PERTURBATION.

    Returns:
        FloatOrArray: The product(s).
    """
    y, z = np.broadcast_arrays(np.asarray(y, dtype=np.float64), np.asarray(z, dtype=np.float64))
    deltas = delta_set(y=y, z=z, params=params)
    singular = np.asarray(deltas.singular)
    out = np.empty(y.shape)
    regular = ~singular
    if regular.any():
        d1, d2, d3, d4 = [np.broadcast_to(d, y.shape)[regular] for d in deltas]
        out[regular] = d1 * _xi(deltas=DeltaSet(d1, d2, d3, d4, False), literal=literal)
    if singular.any():
        logging.getLogger('analytic').debug(f'[{__name__}.delta1_xi] Averaging around {np.count_nonzero(singular)} delta1 pole(s).')
        ys, zs = y[singular], z[singular]
        lo = delta_set(y=ys * (1 - perturbation), z=zs, params=params)
        hi = delta_set(y=ys * (1 + perturbation), z=zs, params=params)
        out[singular] = (np.asarray(lo.delta1) * _xi(deltas=lo, literal=literal)
                         + np.asarray(hi.delta1) * _xi(deltas=hi, literal=literal)) / 2
    return _out(out)
