from typing import Any, Dict, Union

import numpy as np
import numpy.typing as npt

from semigfpy.model.params import SystemParams, dbm_to_mw

FloatOrArray = Union[float, npt.NDArray[np.float64]]


def sample_distance(radius_m: float,
                    u: FloatOrArray) -> FloatOrArray:
    """Draw a user distance, uniform over the disc, by inverse-CDF sampling.

    The density of the distance is `2x / R^2` on `[0, R]`.

    Args:
        radius_m (float): The radius of the disc (m).
        u (FloatOrArray): Uniform sample(s) in [0, 1].

    Raises:
        ValueError: Raised if `radius_m <= 0` or any `u` is outside [0, 1].

    Returns:
        FloatOrArray: The distance(s) (m).
    """
    if not radius_m > 0:
        raise ValueError(f'radius_m must be positive, got {radius_m}.')
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(~((u_arr >= 0) & (u_arr <= 1))):
        raise ValueError(f'Uniform sample must lie in [0, 1], got {u}.')
    d = radius_m * np.sqrt(u_arr)
    return float(d) if d.ndim == 0 else d


def sample_fading(mean: float,
                  u: FloatOrArray) -> FloatOrArray:
    """Draw a Rayleigh fading power gain (exponential with the given mean).

    Args:
        mean (float): The mean power gain.
        u (FloatOrArray): Uniform sample(s) in (0, 1].

    Raises:
        ValueError: Raised if `mean <= 0` or any `u` is outside (0, 1].

    Returns:
        FloatOrArray: The power gain(s).
    """
    if not mean > 0:
        raise ValueError(f'Fading mean must be positive, got {mean}.')
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(~((u_arr > 0) & (u_arr <= 1))):
        raise ValueError(f'Uniform sample must lie in (0, 1], got {u}.')
    h2 = -mean * np.log(u_arr)
    # -0.0 at u = 1
    h2 = h2 + 0.
    return float(h2) if h2.ndim == 0 else h2


def received_power(p_dbm: float,
                   h2: FloatOrArray,
                   d_m: FloatOrArray,
                   alpha: float) -> FloatOrArray:
    """Compute the received power at the base station, `P h^2 d^-alpha` (mW).

    Args:
        p_dbm (float): The transmit power (dBm).
        h2 (FloatOrArray): The fading power gain(s).
        d_m (FloatOrArray): The distance(s) to the base station (m).
        alpha (float): The path-loss exponent.

    Raises:
        ValueError: Raised if any distance is not positive.

    Returns:
        FloatOrArray: The received power(s) (mW).
    """
    d_arr = np.asarray(d_m, dtype=np.float64)
    if np.any(~(d_arr > 0)):
        raise ValueError(f'Distance must be positive, got {d_m}.')
    g = dbm_to_mw(p_dbm) * np.asarray(h2, dtype=np.float64) * np.power(d_arr, -alpha)
    return float(g) if g.ndim == 0 else g


class ChannelDraw:
    def __init__(self,
                 d_gf_m: FloatOrArray,
                 d_gb_m: FloatOrArray,
                 h2_gf: FloatOrArray,
                 h2_gb: FloatOrArray):
        """Create a channel realization (or a batch of them, if the fields are arrays).

        Args:
            d_gf_m (FloatOrArray): The GF user distance (m).
            d_gb_m (FloatOrArray): The GB user distance (m).
            h2_gf (FloatOrArray): The GF fading power gain.
            h2_gb (FloatOrArray): The GB fading power gain.

        Raises:
            ValueError: Raised if a distance is not positive or a gain is negative.
        """
        for name, v in [('d_gf_m', d_gf_m), ('d_gb_m', d_gb_m)]:
            if np.any(~(np.asarray(v) > 0)):
                raise ValueError(f'{name} must be positive, got {v}.')
        # a fading uniform of exactly 1 gives a zero gain
        for name, v in [('h2_gf', h2_gf), ('h2_gb', h2_gb)]:
            if np.any(~(np.asarray(v) >= 0)):
                raise ValueError(f'{name} must be non-negative, got {v}.')
        self.d_gf_m = d_gf_m
        self.d_gb_m = d_gb_m
        self.h2_gf = h2_gf
        self.h2_gb = h2_gb

    def __str__(self) -> str:
        return f'ChannelDraw(d_gf={self.d_gf_m}, d_gb={self.d_gb_m}, h2_gf={self.h2_gf}, h2_gb={self.h2_gb})'

    def __repr__(self) -> str:
        return str(self)

    @staticmethod
    def from_uniforms(params: SystemParams,
                      u: npt.NDArray[np.float64]) -> 'ChannelDraw':
        """Build draws from uniforms given in the order (d_GF, d_GB, h2_GF, h2_GB).

        Args:
            params (SystemParams): The scenario.
            u (npt.NDArray[np.float64]): Array of shape (4,) or (4, n); fading uniforms must lie in (0, 1].

        Returns:
            ChannelDraw: The draw(s).
        """
        return ChannelDraw(d_gf_m=sample_distance(radius_m=params.radius_m, u=u[0]),
                           d_gb_m=sample_distance(radius_m=params.radius_m, u=u[1]),
                           h2_gf=sample_fading(mean=params.fading_mean_gf, u=u[2]),
                           h2_gb=sample_fading(mean=params.fading_mean_gb, u=u[3]))


class LinkOutcome:
    def __init__(self,
                 g_gf: FloatOrArray,
                 g_gb: FloatOrArray,
                 admitted: Union[bool, npt.NDArray[np.bool_]],
                 gamma_gb: FloatOrArray,
                 gamma_gf: FloatOrArray,
                 sic_ok: Union[bool, npt.NDArray[np.bool_]]):
        self.g_gf = g_gf
        self.g_gb = g_gb
        self.admitted = admitted
        self.gamma_gb = gamma_gb
        self.gamma_gf = gamma_gf
        self.sic_ok = sic_ok

    def __str__(self) -> str:
        return f'LinkOutcome(admitted={self.admitted}, sic_ok={self.sic_ok}, gamma_gb={self.gamma_gb}, gamma_gf={self.gamma_gf})'

    def __repr__(self) -> str:
        return str(self)

    def to_json(self) -> Dict[str, Any]:
        return {
            'g_gf': self.g_gf,
            'g_gb': self.g_gb,
            'admitted': self.admitted,
            'gamma_gb': self.gamma_gb,
            'gamma_gf': self.gamma_gf,
            'sic_ok': self.sic_ok
        }


def evaluate_link(params: SystemParams,
                  draw: ChannelDraw) -> LinkOutcome:
    """Apply the dynamic admission protocol and compute both SINRs.

    The GF user is admitted iff its received power is strictly below the GB one.
    A non-admitted GB user sees no interference. SIC succeeds iff the GF user is
    admitted and the GB SINR exceeds `params.sic_threshold`.
    Works elementwise when the draw holds arrays.

    Args:
        params (SystemParams): The scenario.
        draw (ChannelDraw): The channel realization(s).

    Raises:
        ValueError: Raised if a distance exceeds the disc radius.

    Returns:
        LinkOutcome: The derived per-trial quantities.
    """
    if np.any(np.asarray(draw.d_gf_m) > params.radius_m) or np.any(np.asarray(draw.d_gb_m) > params.radius_m):
        raise ValueError(f'Distances must not exceed radius_m={params.radius_m}.')
    noise = params.noise_mw
    g_gf = received_power(p_dbm=params.p_gf_dbm, h2=draw.h2_gf, d_m=draw.d_gf_m, alpha=params.pathloss_exp)
    g_gb = received_power(p_dbm=params.p_gb_dbm, h2=draw.h2_gb, d_m=draw.d_gb_m, alpha=params.pathloss_exp)
    admitted = np.less(g_gf, g_gb)
    gamma_gb = np.where(admitted, np.divide(g_gb, np.add(g_gf, noise)), np.divide(g_gb, noise))
    gamma_gf = np.divide(g_gf, noise)
    sic_ok = admitted & (gamma_gb > params.sic_threshold)
    if np.ndim(admitted) == 0:
        return LinkOutcome(g_gf=g_gf, g_gb=g_gb, admitted=bool(admitted), gamma_gb=float(gamma_gb),
                           gamma_gf=float(gamma_gf), sic_ok=bool(sic_ok))
    return LinkOutcome(g_gf=g_gf, g_gb=g_gb, admitted=admitted, gamma_gb=gamma_gb,
                       gamma_gf=gamma_gf, sic_ok=sic_ok)
