import logging
import math
from typing import Any, Callable, Dict, List, Optional, Tuple

from scipy.integrate import quad

from semigfpy.config import (ORACLE_ABS_TOL, ORACLE_MAX_DEPTH, ORACLE_REL_TOL,
                             ORACLE_U_CLIP)
from semigfpy.model.params import SystemParams

FORMS = ['exact', 'simplified']

_LN2 = math.log(2)


class IntegrationConfig:
    def __init__(self,
                 abs_tol: float = ORACLE_ABS_TOL,
                 rel_tol: float = ORACLE_REL_TOL,
                 max_depth: int = ORACLE_MAX_DEPTH,
                 u_clip: float = ORACLE_U_CLIP):
        """Create the settings of the nested adaptive quadrature.

        Args:
            abs_tol (float, optional): Absolute tolerance of every 1-D integration. Defaults to ORACLE_ABS_TOL.
            rel_tol (float, optional): Relative tolerance of every 1-D integration. Defaults to ORACLE_REL_TOL.
            max_depth (int, optional): Maximum number of subintervals per 1-D integration. Defaults to ORACLE_MAX_DEPTH.
            u_clip (float, optional): Semi-infinite ranges stop at u = 1 - u_clip. Defaults to ORACLE_U_CLIP.

        Raises:
            ValueError: Raised if a setting is out of range.
        """
        if not abs_tol > 0:
            raise ValueError(f'abs_tol must be positive, got {abs_tol}.')
        if not rel_tol >= 1e-10:
            raise ValueError(f'rel_tol must be at least 1e-10, got {rel_tol}.')
        if isinstance(max_depth, bool) or int(max_depth) != max_depth or max_depth < 1:
            raise ValueError(f'max_depth must be a positive integer, got {max_depth}.')
        if not 0 < u_clip < 1:
            raise ValueError(f'u_clip must lie in (0, 1), got {u_clip}.')
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.max_depth = int(max_depth)
        self.u_clip = u_clip

    def __str__(self) -> str:
        return f'IntegrationConfig(abs_tol={self.abs_tol}, rel_tol={self.rel_tol}, max_depth={self.max_depth}, map: {self.infinity_map})'

    def __repr__(self) -> str:
        return str(self)

    @property
    def infinity_map(self) -> str:
        return f't = t0 + u / (1 - u), dt = du / (1 - u)^2, u in [0, 1 - {self.u_clip}]'

    def to_json(self) -> Dict[str, Any]:
        return {
            'abs_tol': self.abs_tol,
            'rel_tol': self.rel_tol,
            'max_depth': self.max_depth,
            'u_clip': self.u_clip
        }

    @staticmethod
    def from_json(my_args: Dict[str, Any]) -> 'IntegrationConfig':
        return IntegrationConfig(**my_args)


class OracleResult:
    def __init__(self,
                 value: float,
                 err_est: float,
                 converged: bool,
                 items: Optional[Tuple[float, ...]] = None):
        self.value = value
        self.err_est = err_est
        self.converged = converged
        self.items = items

    def __str__(self) -> str:
        return f'{self.value:.10g} +- {self.err_est:.2g}{"" if self.converged else " (not converged)"}'

    def __repr__(self) -> str:
        return str(self)

    def __iter__(self):
        return iter((self.value, self.err_est))

    def __add__(self,
                other: 'OracleResult') -> 'OracleResult':
        return OracleResult(value=self.value + other.value,
                            err_est=self.err_est + other.err_est,
                            converged=self.converged and other.converged)

    def to_json(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'err_est': self.err_est,
            'converged': self.converged,
            'items': list(self.items) if self.items is not None else None
        }


class _NestedQuad:
    def __init__(self,
                 cfg: IntegrationConfig):
        """Nested 1-D adaptive quadrature (QUADPACK, 21-point Gauss-Kronrod)."""
        self.cfg = cfg
        self.inner_rel_err = 0.
        self.failures = 0

    def _quad(self,
              f: Callable[[float], float],
              lo: float,
              hi: float) -> Tuple[float, float]:
        res = quad(f, lo, hi,
                   epsabs=self.cfg.abs_tol,
                   epsrel=self.cfg.rel_tol,
                   limit=self.cfg.max_depth,
                   full_output=1)
        # a fourth item (the message) is only returned when QUADPACK flags a problem
        if len(res) > 3:
            self.failures += 1
        return res[0], res[1]

    def _level(self,
               f: Callable[..., float],
               bounds: List[Tuple[float, float]],
               args: Tuple[float, ...]) -> Tuple[float, float]:
        lo, hi = bounds[len(args)]
        if len(args) == len(bounds) - 1:
            return self._quad(lambda x: f(*args, x), lo, hi)

        def inner(x: float) -> float:
            val, err = self._level(f, bounds, args + (x,))
            if val != 0:
                self.inner_rel_err = max(self.inner_rel_err, err / abs(val))
            return val

        return self._quad(inner, lo, hi)

    def integrate(self,
                  f: Callable[..., float],
                  bounds: List[Tuple[float, float]],
                  name: str) -> OracleResult:
        """Integrate `f(x_0, ..., x_k)` over a box, outermost variable first.

        Args:
            f (Callable[..., float]): The integrand.
            bounds (List[Tuple[float, float]]): The finite bounds of each variable.
            name (str): The name used in log messages.

        Returns:
            OracleResult: The value, the combined error estimate and the convergence flag.
        """
        value, outer_err = self._level(f, bounds, ())
        err_est = outer_err + self.inner_rel_err * abs(value)
        converged = self.failures == 0
        logger = logging.getLogger('oracle')
        if converged:
            logger.debug(f'[{__name__}.integrate] {name}: {value:.10g} +- {err_est:.2g}.')
        else:
            logger.warning(f'[{__name__}.integrate] {name}: {self.failures} integration(s) did not reach the requested tolerance; best estimate {value:.10g} +- {err_est:.2g}.')
        return OracleResult(value=value, err_est=err_est, converged=converged)


def _semi_infinite(f: Callable[..., float],
                   t0: float) -> Callable[..., float]:
    # t = t0 + u / (1 - u)
    def g(u: float, *rest: float) -> float:
        return f(t0 + u / (1 - u), *rest) / (1 - u) ** 2
    return g


def _density(x: float,
             radius_m: float) -> float:
    return 2 * x / radius_m ** 2


def _means(y: float,
           z: float,
           params: SystemParams) -> Tuple[float, float]:
    # mean GB and GF received powers at distances z (GB) and y (GF)
    a = params.pathloss_exp
    return (params.fading_mean_gb * params.p_gb_mw * z ** -a,
            params.fading_mean_gf * params.p_gf_mw * y ** -a)


def gb_high_integrand(t: float,
                      z: float,
                      y: float,
                      params: SystemParams) -> float:
    """Integrand of the GB rate over thresholds t >= 1 (fading integrals done analytically)."""
    mean_gb, mean_gf = _means(y=y, z=z, params=params)
    p = math.exp(-t * params.noise_mw / mean_gb) / (1 + t * mean_gf / mean_gb)
    return p / (_LN2 * (1 + t)) * _density(y, params.radius_m) * _density(z, params.radius_m)


def gb_low_integrand(t: float,
                     z: float,
                     y: float,
                     params: SystemParams) -> float:
    """Integrand of the GB rate over thresholds t in [0, 1), with the admission constraint.

    For t < 1 the GB SINR event alone does not imply admission: the interfering
    power splits at `t sigma^2 / (1 - t)`.
    """
    mean_gb, mean_gf = _means(y=y, z=z, params=params)
    noise = params.noise_mw
    v = t * noise / (1 - t)
    k1 = t / mean_gb + 1 / mean_gf
    k2 = 1 / mean_gb + 1 / mean_gf
    p = (math.exp(-t * noise / mean_gb) * -math.expm1(-k1 * v) / (mean_gf * k1)
         + math.exp(-k2 * v) / (mean_gf * k2))
    return p / (_LN2 * (1 + t)) * _density(y, params.radius_m) * _density(z, params.radius_m)


def gb_low_simplified_first(t: float,
                          z: float,
                          y: float,
                          params: SystemParams) -> float:
    """Integrand of the first simplified item: interfering power below sigma^2, thresholds in [0, 1]."""
    mean_gb, mean_gf = _means(y=y, z=z, params=params)
    noise = params.noise_mw
    lf = params.fading_mean_gf
    psi = t * mean_gf / (lf * mean_gb) + 1 / lf
    # Psi(y, z, t) sigma^2 y^a / P_GF
    k = t * noise / mean_gb + noise / mean_gf
    p = math.exp(-t * noise / mean_gb) * -math.expm1(-k) / (lf * psi)
    return p / (_LN2 * (1 + t)) * _density(y, params.radius_m) * _density(z, params.radius_m)


def gb_low_simplified_second(z: float,
                           y: float,
                           params: SystemParams) -> float:
    """Integrand of the second simplified item: interfering power above sigma^2."""
    mean_gb, mean_gf = _means(y=y, z=z, params=params)
    noise = params.noise_mw
    lf = params.fading_mean_gf
    psi = mean_gf / (lf * mean_gb) + 1 / lf
    k = noise / mean_gb + noise / mean_gf
    return math.exp(-k) / (lf * psi) * _density(y, params.radius_m) * _density(z, params.radius_m)


def _gf_probability(t: float,
                    mean_gb: float,
                    mean_gf: float,
                    params: SystemParams,
                    form: str) -> float:
    noise = params.noise_mw
    th = params.sic_threshold
    v0 = t * noise
    k = th / mean_gb + 1 / mean_gf
    if form == 'simplified' or th >= 1:
        return math.exp(-th * noise / mean_gb - k * v0) / (mean_gf * k)
    k2 = 1 / mean_gb + 1 / mean_gf
    v = th * noise / (1 - th)
    if v0 < v:
        return (math.exp(-th * noise / mean_gb) * (math.exp(-k * v0) - math.exp(-k * v)) / (mean_gf * k)
                + math.exp(-k2 * v) / (mean_gf * k2))
    return math.exp(-k2 * v0) / (mean_gf * k2)


def gf_integrand(t: float,
                 z: float,
                 y: float,
                 params: SystemParams,
                 form: str = 'exact') -> float:
    """Integrand of the GF rate over thresholds t >= 0.

    The exact form requires admission and SIC success; the simplified form keeps
    only the SIC condition, which coincides with it for `sic_threshold >= 1`.
    """
    mean_gb, mean_gf = _means(y=y, z=z, params=params)
    p = _gf_probability(t=t, mean_gb=mean_gb, mean_gf=mean_gf, params=params, form=form)
    return p / (_LN2 * (1 + t)) * _density(y, params.radius_m) * _density(z, params.radius_m)


def _check_form(form: str) -> None:
    if form not in FORMS:
        raise ValueError(f'Unknown integrand form {form}; valid forms are {", ".join(FORMS)}.')


def integrate_gb_high(params: SystemParams,
                      cfg: IntegrationConfig = IntegrationConfig()) -> OracleResult:
    """Integrate the GB rate over thresholds in [1, inf) and both distances.

    Args:
        params (SystemParams): The scenario.
        cfg (IntegrationConfig, optional): The quadrature settings. Defaults to IntegrationConfig().

    Returns:
        OracleResult: The rate contribution (BPCU) with its error estimate.
    """
    r = params.radius_m
    f = _semi_infinite(lambda t, z, y: gb_high_integrand(t=t, z=z, y=y, params=params), t0=1.)
    return _NestedQuad(cfg=cfg).integrate(f=f,
                                          bounds=[(0., 1 - cfg.u_clip), (0., r), (0., r)],
                                          name='gb_high')


def integrate_gb_low(params: SystemParams,
                     cfg: IntegrationConfig = IntegrationConfig(),
                     form: str = 'exact') -> OracleResult:
    """Integrate the GB rate over thresholds in [0, 1) and both distances.

    With `form='simplified'` the two simplified items are integrated separately
    (the second over distances only) and returned in `items` too.

    Args:
        params (SystemParams): The scenario.
        cfg (IntegrationConfig, optional): The quadrature settings. Defaults to IntegrationConfig().
        form (str, optional): 'exact' or 'simplified'. Defaults to 'exact'.

    Raises:
        ValueError: Raised if `form` is unknown.

    Returns:
        OracleResult: The rate contribution (BPCU) with its error estimate.
    """
    _check_form(form)
    r = params.radius_m
    if form == 'exact':
        return _NestedQuad(cfg=cfg).integrate(f=lambda t, z, y: gb_low_integrand(t=t, z=z, y=y, params=params),
                                              bounds=[(0., 1.), (0., r), (0., r)],
                                              name='gb_low')
    first = _NestedQuad(cfg=cfg).integrate(f=lambda t, z, y: gb_low_simplified_first(t=t, z=z, y=y, params=params),
                                           bounds=[(0., 1.), (0., r), (0., r)],
                                           name='gb_low first item')
    second = _NestedQuad(cfg=cfg).integrate(f=lambda z, y: gb_low_simplified_second(z=z, y=y, params=params),
                                            bounds=[(0., r), (0., r)],
                                            name='gb_low second item')
    res = first + second
    res.items = (first.value, second.value)
    return res


def integrate_gf(params: SystemParams,
                 cfg: IntegrationConfig = IntegrationConfig(),
                 form: str = 'exact') -> OracleResult:
    """Integrate the GF rate over thresholds in [0, inf) and both distances.

    Args:
        params (SystemParams): The scenario.
        cfg (IntegrationConfig, optional): The quadrature settings. Defaults to IntegrationConfig().
        form (str, optional): 'exact' or 'simplified'. Defaults to 'exact'.

    Raises:
        ValueError: Raised if `form` is unknown.

    Returns:
        OracleResult: The rate (BPCU) with its error estimate.
    """
    _check_form(form)
    if math.isinf(params.sic_threshold):
        return OracleResult(value=0., err_est=0., converged=True)
    r = params.radius_m
    f = _semi_infinite(lambda t, z, y: gf_integrand(t=t, z=z, y=y, params=params, form=form), t0=0.)
    return _NestedQuad(cfg=cfg).integrate(f=f,
                                          bounds=[(0., 1 - cfg.u_clip), (0., r), (0., r)],
                                          name=f'gf ({form})')
