import logging
import math
from typing import Union

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad

from semigfpy.config import EI_SERIES_LIMIT, HYP2F1_SERIES_LIMIT

EULER_GAMMA = 0.57721566490153286061

# series branch of E1: terms x^n / (n! 2^(n-1)) are below 1e-17 by n = 48 for x <= 8
_E1_SERIES_TERMS = 48
_CF_EPS = 1e-15
_CF_MAXIT = 10000
_HYP2F1_EPS = 1e-17
_HYP2F1_MAXIT = 100000
# b = 1 + 2 / alpha this close to an integer uses the logarithmic closed form
_INTEGER_B_TOL = 1e-9
# ... and this close falls back to quadrature of the Euler integral
_NEAR_INTEGER_B_TOL = 1e-4

ArrayLike = Union[float, npt.NDArray[np.float64]]


class DomainError(ValueError):
    pass


def _e1_series(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """E1 via the exponentially weighted series of Ei.

    All series terms share the sign, so the only cancellation left is against `gamma + ln(x)`.

    Args:
        x (npt.NDArray[np.float64]): Positive arguments.

    Returns:
        npt.NDArray[np.float64]: E1(x).
    """
    term = x.copy()
    harmonic = np.ones_like(x)
    acc = term * harmonic
    for n in range(1, _E1_SERIES_TERMS):
        term = term * x / (2 * (n + 1))
        if n % 2 == 0:
            harmonic = harmonic + 1 / (n + 1)
        acc = acc + term * harmonic
    return np.exp(-x / 2) * acc - EULER_GAMMA - np.log(x)


def _e1_scaled_cf(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """exp(x) * E1(x) via the modified Lentz continued fraction.

    Args:
        x (npt.NDArray[np.float64]): Positive arguments (fast for x > 1).

    Raises:
        ArithmeticError: Raised if the continued fraction does not converge.

    Returns:
        npt.NDArray[np.float64]: exp(x) * E1(x).
    """
    tiny = np.finfo(np.float64).tiny
    b = x + 1
    c = np.full_like(x, 1 / tiny)
    d = 1 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, _CF_MAXIT):
        an = -float(i * i)
        b = b + 2
        d = 1 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1) >= _CF_EPS
        if not active.any():
            return h
    raise ArithmeticError(f'Continued fraction for E1 did not converge in {_CF_MAXIT} iterations.')


def exp1_scaled(x: ArrayLike,
                series_limit: float = EI_SERIES_LIMIT) -> ArrayLike:
    """Compute `exp(x) * E1(x) = -exp(x) * Ei(-x)` for `x > 0` without overflow.

    Args:
        x (ArrayLike): Positive argument(s).
        series_limit (float, optional): Largest `x` handled by the series. Defaults to EI_SERIES_LIMIT.

    Raises:
        DomainError: Raised if any `x <= 0`.

    Returns:
        ArrayLike: The scaled exponential integral, same shape as `x`.
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(~(arr > 0)):
        raise DomainError(f'exp1_scaled is defined for x > 0 only, got {x}.')
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    small = flat <= series_limit
    if small.any():
        out[small] = np.exp(flat[small]) * _e1_series(flat[small])
    if (~small).any():
        out[~small] = _e1_scaled_cf(flat[~small])
    out = out.reshape(arr.shape)
    return float(out) if np.ndim(x) == 0 else out


def exp_int_ei(x: float,
               series_limit: float = EI_SERIES_LIMIT) -> float:
    """Compute the exponential integral `Ei(x) = int_{-inf}^{x} exp(t) / t dt` for `x < 0`.

    Args:
        x (float): The (negative) argument.
        series_limit (float, optional): Largest `|x|` handled by the series. Defaults to EI_SERIES_LIMIT.

    Raises:
        DomainError: Raised if `x >= 0`.

    Returns:
        float: Ei(x), a negative value.
    """
    if not x < 0:
        raise DomainError(f'Ei is only evaluated at negative arguments, got {x}.')
    k = np.asarray([-x], dtype=np.float64)
    if -x <= series_limit:
        return -float(_e1_series(k)[0])
    return -float(_e1_scaled_cf(k)[0]) * math.exp(x)


def phi_kernel(a: ArrayLike,
               b: ArrayLike,
               literal: bool = False) -> ArrayLike:
    """Compute `Phi(a, b) = int_0^1 exp(-b t) / (t + a) dt`.

    For `b > 0` the integral is `S(ab) - exp(-b) S(ab + b)` with `S(x) = exp(x) E1(x)`;
    for `b = 0` it is `ln((1 + a) / a)`.

    Args:
        a (ArrayLike): Positive shift(s).
        b (ArrayLike): Non-negative rate(s).
        literal (bool, optional): Use `-exp(ab) Ei(-ab)` (the semi-infinite integral) instead. Defaults to False.

    Raises:
        ValueError: Raised if any `a <= 0` or `b < 0`.

    Returns:
        ArrayLike: The kernel value(s), broadcast over `a` and `b`.
    """
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=np.float64),
                                       np.asarray(b, dtype=np.float64))
    if np.any(~(a_arr > 0)):
        raise ValueError(f'Phi(a, b) needs a > 0 (integrand pole inside [0, 1]), got a={a}.')
    if np.any(~(b_arr >= 0)):
        raise ValueError(f'Phi(a, b) needs b >= 0, got b={b}.')
    a_flat = np.atleast_1d(a_arr).ravel()
    b_flat = np.atleast_1d(b_arr).ravel()
    out = np.empty_like(a_flat)
    zero = b_flat == 0
    if literal:
        out[zero] = np.inf
    else:
        out[zero] = np.log1p(1 / a_flat[zero])
    pos = ~zero
    if pos.any():
        ab = a_flat[pos] * b_flat[pos]
        out[pos] = exp1_scaled(ab)
        if not literal:
            out[pos] -= np.exp(-b_flat[pos]) * exp1_scaled(ab + b_flat[pos])
    out = out.reshape(a_arr.shape)
    return float(out) if out.ndim == 0 else out


def _hyp2f1_pfaff_series(w: npt.NDArray[np.float64],
                         c: float) -> npt.NDArray[np.float64]:
    # 2F1(1, b; c; -w) = 2F1(1, 1; c; u) / (1 + w), u = w / (1 + w), because c - b = 1
    u = w / (1 + w)
    term = np.ones_like(w)
    acc = np.ones_like(w)
    for n in range(_HYP2F1_MAXIT):
        term = term * (n + 1) / (c + n) * u
        acc = acc + term
        if np.all(term <= _HYP2F1_EPS * acc):
            return acc / (1 + w)
    raise ArithmeticError(f'2F1 series did not converge in {_HYP2F1_MAXIT} terms.')


def _hyp2f1_connection(w: npt.NDArray[np.float64],
                       b: float) -> npt.NDArray[np.float64]:
    # b pi w^-b / sin(pi b) + b sum_j (-1)^j w^(-1-j) / (b - 1 - j), non-integer b, w > 1
    acc = b * np.pi * np.power(w, -b) / math.sin(math.pi * b)
    power = 1 / w
    for j in range(_HYP2F1_MAXIT):
        term = b * (-1) ** j * power / (b - 1 - j)
        acc = acc + term
        if np.all(np.abs(term) <= _HYP2F1_EPS * np.abs(acc)):
            return acc
        power = power / w
    raise ArithmeticError(f'2F1 connection series did not converge in {_HYP2F1_MAXIT} terms.')


def _hyp2f1_integer_b(w: npt.NDArray[np.float64],
                      m: int) -> npt.NDArray[np.float64]:
    # m w^-m [sum_{j<m-1} (-1)^j w^(m-1-j) / (m-1-j) + (-1)^(m-1) ln(1 + w)]
    acc = (-1) ** (m - 1) * m * np.power(w, -m) * np.log1p(w)
    for j in range(m - 1):
        acc = acc + m * (-1) ** j * np.power(w, -1. - j) / (m - 1 - j)
    return acc


def _hyp2f1_euler(w: npt.NDArray[np.float64],
                  b: float) -> npt.NDArray[np.float64]:
    return np.asarray([b * quad(lambda s: s ** (b - 1) / (1 + wi * s), 0, 1,
                                epsabs=0, epsrel=1e-13, limit=200)[0] for wi in w])


def hyp2f1_pathloss(alpha: float,
                    z: ArrayLike,
                    series_limit: float = HYP2F1_SERIES_LIMIT) -> ArrayLike:
    """Evaluate `2F1(1, (2 + alpha) / alpha; 2 + 2 / alpha; z)` for `z <= 0`.

    Args:
        alpha (float): The path-loss exponent.
        z (ArrayLike): Non-positive argument(s).
        series_limit (float, optional): Largest `|z|` summed as a Pfaff series. Defaults to HYP2F1_SERIES_LIMIT.

    Raises:
        ValueError: Raised if `alpha <= 0`.
        DomainError: Raised if any `z > 0`.

    Returns:
        ArrayLike: The hypergeometric value(s), in (0, 1].
    """
    if not alpha > 0:
        raise ValueError(f'alpha must be positive, got {alpha}.')
    z_arr = np.asarray(z, dtype=np.float64)
    if np.any(~(z_arr <= 0)):
        raise DomainError(f'2F1 is only evaluated for z <= 0, got {z}.')
    b = 1 + 2 / alpha
    w = -np.atleast_1d(z_arr).ravel()
    out = np.ones_like(w)
    near = (w > 0) & (w <= series_limit)
    if near.any():
        out[near] = _hyp2f1_pfaff_series(w=w[near], c=b + 1)
    far = w > series_limit
    if far.any():
        m = round(b)
        if abs(b - m) < _INTEGER_B_TOL:
            out[far] = _hyp2f1_integer_b(w=w[far], m=m)
        elif abs(b - m) < _NEAR_INTEGER_B_TOL:
            logging.getLogger('specfun').debug(f'[{__name__}.hyp2f1_pathloss] b={b} close to an integer; using quadrature.')
            out[far] = _hyp2f1_euler(w=w[far], b=b)
        else:
            out[far] = _hyp2f1_connection(w=w[far], b=b)
    # w = inf
    out[np.isinf(w)] = 0.
    out = out.reshape(z_arr.shape)
    return float(out) if out.ndim == 0 else out
