"""The standard skew-normal law SN(lambda) with density 2 phi(x) Phi(lambda x).

Survival probabilities are returned in log-scaled form. Two independent
evaluation routes exist and agree where both are valid:

* ``direct_owen``: ``1 - Phi(x) + 2 T(x, lambda)`` (Owen's T identity);
* ``log_tail_quadrature``: the integral ``int_x^inf 2 phi(t)(1 - Phi(k t)) dt``
  with the factor ``exp(-(1+k^2) x^2/2)`` removed analytically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import erfcx, log_ndtr, ndtr

from ._backend import get_kernels
from .special import (
    LOG_SQRT_2PI,
    SQRT2,
    TAIL_EXPONENT,
    DomainError,
    LogScaledValue,
    _check_finite,
    adaptive_panels,
    log_normal_sf,
    owen_t_scaled,
)

TAIL_THRESHOLD = 6.0


class RegimeError(ValueError):
    """Operation undefined for the sign of the shape parameter."""


class Regime(str, enum.Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"


@dataclass(frozen=True)
class ShapeParameter:
    lam: float

    def __post_init__(self):
        _check_finite(self.lam)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def regime(self) -> Regime:
        if self.lam > 0:
            return Regime.POSITIVE
        if self.lam < 0:
            return Regime.NEGATIVE
        return Regime.ZERO

    @property
    def delta(self) -> float:
        return self.lam / math.sqrt(1.0 + self.lam * self.lam)


def as_shape(sp) -> ShapeParameter:
    return sp if isinstance(sp, ShapeParameter) else ShapeParameter(sp)


class SurvivalMethod(str, enum.Enum):
    NORMAL = "normal"
    DIRECT_OWEN = "direct_owen"
    LOG_TAIL = "log_tail_quadrature"


@dataclass(frozen=True)
class SurvivalEvaluation:
    value: LogScaledValue
    method: SurvivalMethod
    x: float

    @property
    def probability(self) -> float:
        return self.value.value


def tail_threshold(lam: float) -> float:
    """Abscissa from which :func:`survival` switches to the tail quadrature.

    For lambda < 0 the direct route subtracts two numbers of size
    ``1 - Phi(x)`` whose difference carries the extra factor
    ``~exp(-lambda^2 x^2/2)``; switching at ``|lambda| x = 2`` bounds the loss
    to about 1.5 digits.
    """
    if lam < 0:
        return min(TAIL_THRESHOLD, 2.0 / abs(lam))
    return TAIL_THRESHOLD


# -- vectorised log-survival --------------------------------------------------

def log_tail_integral(x, k, backend=None):
    """``log int_x^inf 2 phi(t) (1 - Phi(k t)) dt`` for x >= 0, k >= 0."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    c = 1.0 + k * k
    span = 2.0 * TAIL_EXPONENT / c
    hi = span / (x + np.sqrt(x * x + span))
    kern = get_kernels(backend)
    j = adaptive_panels(lambda i, p: kern.tail_scaled(x[i], k, hi[i], p), x.size, start=4)
    return -0.5 * c * x * x + np.log(j) - LOG_SQRT_2PI


def _log_sf_direct(lam, x, backend=None):
    """``log(1 - Phi(x) + 2 T(x, lam))`` with the Gaussian factor kept apart."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    if lam == 0.0:
        return log_normal_sf(x)
    sgn = 1.0 if lam > 0 else -1.0
    ts = owen_t_scaled(np.abs(x), abs(lam), backend=backend)
    pos = x >= 0
    xp = x[pos]
    out[pos] = np.log(0.5 * erfcx(xp / SQRT2) + 2.0 * sgn * ts[pos]) - 0.5 * xp * xp
    xn = x[~pos]
    out[~pos] = np.log(ndtr(-xn) + 2.0 * sgn * ts[~pos] * np.exp(-0.5 * xn * xn))
    return out


def _log_sf_tail(lam, x, backend=None):
    """Tail route; valid for x >= 0."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise DomainError("tail route requires x >= 0")
    if lam == 0.0:
        return log_normal_sf(x)
    if lam < 0:
        return log_tail_integral(x, -lam, backend=backend)
    # 2(1 - Phi(x)) minus the correction integral, both on the exp(-x^2/2) scale
    corr = log_tail_integral(x, lam, backend=backend) + 0.5 * x * x
    # erfcx(x/sqrt2) * exp(-x^2/2) = 2(1 - Phi(x))
    return np.log(erfcx(x / SQRT2) - np.exp(corr)) - 0.5 * x * x


def log_survival(lam, x, backend=None):
    """Vectorised ``log(1 - F_lam(x))`` plus a mask of tail-route elements."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if lam == 0.0:
        return log_normal_sf(x), np.zeros(x.shape, dtype=bool)
    tail = x >= tail_threshold(lam)
    out = np.empty_like(x)
    if np.any(tail):
        out[tail] = _log_sf_tail(lam, x[tail], backend=backend)
    if np.any(~tail):
        out[~tail] = _log_sf_direct(lam, x[~tail], backend=backend)
    return out, tail


def log_cdf(lam, x, backend=None):
    """Vectorised ``log F_lam(x)``; the lower tail goes through reflection."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    low = x <= 0
    if np.any(low):
        out[low] = log_survival(-lam, -x[low], backend=backend)[0]
    if np.any(~low):
        ls = log_survival(lam, x[~low], backend=backend)[0]
        out[~low] = np.log1p(-np.exp(ls))
    return out


def log_pdf(lam, x):
    x = np.asarray(x, dtype=float)
    return math.log(2.0) - 0.5 * x * x - LOG_SQRT_2PI + log_ndtr(lam * x)


# -- scalar public API ----------------------------------------------------------

def pdf(sp, x: float) -> float:
    """Density ``2 phi(x) Phi(lambda x)``."""
    sp = as_shape(sp)
    _check_finite(x)
    return float(np.exp(log_pdf(sp.lam, x)))


def cdf(sp, x: float) -> float:
    """``F_lambda(x)``, equal to ``Phi(x) - 2 T(x, lambda)``.

    Evaluated through the survival function on whichever side keeps full
    relative accuracy: ``F_lam(x) = 1 - F_{-lam}(-x)`` for x <= 0.
    """
    sp = as_shape(sp)
    _check_finite(x)
    if x <= 0:
        return float(np.exp(log_survival(-sp.lam, -x)[0][0]))
    return float(-np.expm1(log_survival(sp.lam, x)[0][0]))


def survival(sp, x: float) -> SurvivalEvaluation:
    sp = as_shape(sp)
    _check_finite(x)
    ls, tail = log_survival(sp.lam, x)
    if sp.lam == 0.0:
        method = SurvivalMethod.NORMAL
    elif tail[0]:
        method = SurvivalMethod.LOG_TAIL
    else:
        method = SurvivalMethod.DIRECT_OWEN
    return SurvivalEvaluation(LogScaledValue(float(ls[0]), 1), method, float(x))


def tail_expansion(sp, x: float, order: int = 1) -> LogScaledValue:
    """Two-term tail expansion of ``1 - F_lambda(x)`` for lambda != 0.

    ``order=0`` gives the leading term, ``order=1`` multiplies it by the
    bracket ``1 + coef / x^2`` with coef -1 (lambda > 0) or
    ``-(1+3 lambda^2)/(lambda^2 (1+lambda^2))`` (lambda < 0).
    """
    sp = as_shape(sp)
    _check_finite(x)
    lam = sp.lam
    if lam == 0.0:
        raise RegimeError("tail expansion is defined for lambda != 0")
    if x <= 0:
        raise DomainError("tail expansion requires x > 0")
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    c = 1.0 + lam * lam
    if lam > 0:
        lead = math.log(2.0) - 0.5 * x * x - LOG_SQRT_2PI - math.log(x)
        coef = -1.0
    else:
        lead = -0.5 * c * x * x - math.log(math.pi * abs(lam) * c * x * x)
        coef = -(1.0 + 3.0 * lam * lam) / (lam * lam * c)
    if order == 0:
        return LogScaledValue(lead, 1)
    factor = 1.0 + coef / (x * x)
    if factor == 0.0:
        return LogScaledValue(-math.inf, 0)
    return LogScaledValue(lead + math.log(abs(factor)), 1 if factor > 0 else -1)


class MillsBracket(NamedTuple):
    lower: LogScaledValue
    upper: LogScaledValue

    @property
    def lower_positive(self) -> bool:
        return self.lower.sign > 0

    def contains(self, v: LogScaledValue) -> bool:
        return self.lower < v < self.upper


def mills_bracket(sp, x: float) -> MillsBracket:
    """Explicit lower/upper bounds on ``1 - F_lambda(x)`` valid for x > 0.

    The lower bound may be nonpositive for small x; check
    :attr:`MillsBracket.lower_positive`.
    """
    sp = as_shape(sp)
    _check_finite(x)
    lam = sp.lam
    if lam == 0.0:
        raise RegimeError("lambda = 0: use special.normal_mills_bracket")
    if x <= 0:
        raise DomainError("brackets hold for x > 0")
    c = 1.0 + lam * lam
    if lam > 0:
        log_up = math.log(2.0) - 0.5 * x * x - LOG_SQRT_2PI - math.log(x)
        coef = 1.0 + 1.0 / (lam * lam * math.sqrt(2.0 * math.pi * math.e))
    else:
        log_up = -0.5 * c * x * x - math.log(math.pi * abs(lam) * c * x * x)
        coef = c * c / (lam * lam)
    factor = 1.0 - coef / (x * x)
    upper = LogScaledValue(log_up, 1)
    if factor == 0.0:
        lower = LogScaledValue(-math.inf, 0)
    else:
        lower = LogScaledValue(log_up + math.log(abs(factor)), 1 if factor > 0 else -1)
    return MillsBracket(lower, upper)


def sample(sp, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` SN(lambda) variates as ``delta |U0| + sqrt(1-delta^2) U1``.

    Normals are consumed pairwise (U0, U1) from a PCG64 stream seeded by
    ``seed``, the same order the block-maximum kernels use.
    """
    sp = as_shape(sp)
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return np.empty(0)
    delta = sp.delta
    omega = math.sqrt(1.0 - delta * delta)
    z = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed))).standard_normal(2 * count)
    return delta * np.abs(z[0::2]) + omega * z[1::2]
