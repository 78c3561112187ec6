"""
Special functions and scalar root finding used by every pricing module.

norm_cdf and norm_quantile accept either a float or a numpy array and return the same kind of value, so the Monte Carlo
engine and the scalar pricing functions share one normal implementation.
"""

from dataclasses import dataclass
from logging import getLogger
from typing import Callable, Union

import numpy as np
from scipy.special import ndtr, ndtri

from ..exceptions import BracketingException, ConvergenceException, DomainException

logger = getLogger('eqp')

Probability = float
ArrayOrFloat = Union[float, np.ndarray]

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class RootBracket:
    """
    A search interval for find_root.

    Attributes:
        lo (float): Lower end of the interval.
        hi (float): Upper end of the interval; must exceed `lo`.
        tol_abs (float): Absolute tolerance on the interval width at termination.
        max_iter (int): Iteration limit before a ConvergenceException is raised.
    """

    lo: float
    hi: float
    tol_abs: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)) or self.lo >= self.hi:
            raise DomainException(f'root bracket requires finite lo < hi, got [{self.lo}, {self.hi}]')

        if not self.tol_abs > 0:
            raise DomainException(f'root bracket tolerance must be positive, got {self.tol_abs}')

        if self.max_iter < 1:
            raise DomainException(f'root bracket max_iter must be positive, got {self.max_iter}')


def _as_output(value: np.ndarray, scalar: bool) -> ArrayOrFloat:
    return float(value) if scalar else value


def check_probability(value: float, name: str = 'probability', open_interval: bool = False) -> float:
    """
    Validates that `value` is a probability, raising a DomainException otherwise. With `open_interval` the endpoints
    0 and 1 are rejected too.
    """

    value = float(value)

    if open_interval:
        valid = 0.0 < value < 1.0
    else:
        valid = 0.0 <= value <= 1.0

    if not valid:
        interval = '(0, 1)' if open_interval else '[0, 1]'
        raise DomainException(f'{name} must lie in {interval}, got {value}')

    return value


def norm_cdf(x: ArrayOrFloat) -> ArrayOrFloat:
    """
    Standard normal distribution function, evaluated through the complementary error function so both tails keep full
    relative precision.

    Args:
        x (float or np.ndarray): Finite argument(s).

    Returns:
        float or np.ndarray: Phi(x).
    """

    values = np.asarray(x, dtype=float)

    if not np.all(np.isfinite(values)):
        raise DomainException(f'norm_cdf requires finite input, got {x}')

    return _as_output(ndtr(values), np.ndim(x) == 0)


def norm_pdf(x: ArrayOrFloat) -> ArrayOrFloat:
    """
    Standard normal density. norm_quantile uses it for the Halley correction.

    Args:
        x (float or np.ndarray): Finite values.

    Returns:
        float or np.ndarray: phi(x).
    """

    values = np.asarray(x, dtype=float)

    return _as_output(np.exp(-0.5 * values * values) / _SQRT_2PI, np.ndim(x) == 0)


def norm_quantile(p: ArrayOrFloat) -> ArrayOrFloat:
    """
    Inverse of norm_cdf on the open unit interval.

    The initial estimate comes from scipy's rational approximation and is polished with one Halley step against
    norm_cdf, so that norm_cdf(norm_quantile(p)) reproduces p to within a few ulps of p. Values above one half are
    reflected through the lower tail, where the residual is computed without cancellation.

    Args:
        p (float or np.ndarray): Probabilities strictly between 0 and 1.

    Returns:
        float or np.ndarray: The standard normal quantile(s).
    """

    values = np.asarray(p, dtype=float)

    if not np.all((values > 0.0) & (values < 1.0)):
        raise DomainException(f'norm_quantile requires 0 < p < 1, got {p}', log_level='debug')

    upper = values > 0.5
    tail = np.where(upper, 1.0 - values, values)

    z = ndtri(tail)
    residual = ndtr(z) - tail
    density = norm_pdf(z)

    # Halley step; the density is never zero for tail >= 2**-1074 once z is finite
    with np.errstate(divide='ignore', invalid='ignore'):
        step = residual / density
        refined = z - step / (1.0 + 0.5 * z * step)

    z = np.where(np.isfinite(refined), refined, z)
    z = np.where(upper, -z, z)

    return _as_output(z, np.ndim(p) == 0)


def find_root(f: Callable[[float], float], bracket: RootBracket) -> float:
    """
    Finds a root of a continuous scalar function inside a bracket using Brent's method.

    Args:
        f (Callable): The function; f(bracket.lo) and f(bracket.hi) must differ in sign (or one must be zero).
        bracket (RootBracket): The search interval, tolerance and iteration limit.

    Returns:
        float: x with |f(x)| at the floating point noise floor or the final bracket narrower than `tol_abs`.
    """

    from scipy.optimize import brentq

    f_lo, f_hi = f(bracket.lo), f(bracket.hi)

    if f_lo == 0:
        return bracket.lo

    if f_hi == 0:
        return bracket.hi

    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketingException(f'no sign change on [{bracket.lo}, {bracket.hi}]: '
                                  f'f(lo)={f_lo}, f(hi)={f_hi}')

    root, result = brentq(f, bracket.lo, bracket.hi,
                          xtol=bracket.tol_abs,
                          maxiter=bracket.max_iter,
                          full_output=True,
                          disp=False)

    if not result.converged:
        raise ConvergenceException(f'root finding did not converge on [{bracket.lo}, {bracket.hi}] '
                                   f'after {result.iterations} iterations ({result.flag})')

    return float(root)
