"""Tail-stable special functions.

Everything that lives on the ``exp(-x**2/2)`` scale is carried in log form
(:class:`LogScaledValue`) so that survival probabilities far below the double
underflow threshold stay representable.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx, ndtr

from ._backend import get_kernels

SQRT2 = math.sqrt(2.0)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
BRANCH_POINT = -math.exp(-1.0)

# scaled integrands are cut where they fall below exp(-TAIL_EXPONENT)
TAIL_EXPONENT = 50.0


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


def _check_finite(*args):
    for v in args:
        if not math.isfinite(v):
            raise DomainError(f"expected a finite real, got {v!r}")


@functools.total_ordering
@dataclass(frozen=True)
class LogScaledValue:
    """A real number stored as ``sign * exp(log_magnitude)``."""

    log_magnitude: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.sign == 0:
            object.__setattr__(self, "log_magnitude", -math.inf)
        elif not math.isfinite(self.log_magnitude):
            raise ValueError("log_magnitude must be finite for a nonzero value")

    @classmethod
    def from_float(cls, v: float) -> LogScaledValue:
        if v == 0.0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(v)), 1 if v > 0 else -1)

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self):
        return self.value

    def __lt__(self, other):
        if not isinstance(other, LogScaledValue):
            other = LogScaledValue.from_float(float(other))
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.log_magnitude < other.log_magnitude
        return self.log_magnitude > other.log_magnitude

    def scale(self, log_factor: float) -> LogScaledValue:
        """Multiply by ``exp(log_factor)``."""
        if self.sign == 0:
            return self
        return LogScaledValue(self.log_magnitude + log_factor, self.sign)


# -- normal distribution ------------------------------------------------------

def normal_pdf(x: float) -> float:
    _check_finite(x)
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


def normal_pdf_log(x: float) -> LogScaledValue:
    """The standard normal density in log-scaled form (never underflows)."""
    _check_finite(x)
    return LogScaledValue(-0.5 * x * x - LOG_SQRT_2PI, 1)


def normal_cdf(x: float) -> float:
    _check_finite(x)
    return float(ndtr(x))


def log_normal_sf(x):
    """Vectorised ``log(1 - Phi(x))`` without cancellation for large x."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    xp = x[pos]
    out[pos] = np.log(0.5 * erfcx(xp / SQRT2)) - 0.5 * xp * xp
    out[~pos] = np.log(ndtr(-x[~pos]))
    return out


def normal_survival(x: float) -> LogScaledValue:
    """``1 - Phi(x)`` in log-scaled form, relatively accurate for every x."""
    _check_finite(x)
    return LogScaledValue(float(log_normal_sf(np.array([x]))[0]), 1)


# -- composite Gauss-Legendre with panel doubling ----------------------------

def adaptive_panels(evaluate, size, start=2, max_panels=2048, rtol=1e-14):
    """Double the panel count per element until successive sums agree.

    ``evaluate(index, panels)`` returns the composite-rule sums for the
    elements selected by ``index``.
    """
    out = np.empty(size)
    idx = np.arange(size)
    panels = start
    prev = evaluate(idx, panels)
    while idx.size:
        panels *= 2
        cur = evaluate(idx, panels)
        done = np.abs(cur - prev) <= rtol * np.abs(cur)
        if panels >= max_panels:
            done[:] = True
        out[idx[done]] = cur[done]
        idx, prev = idx[~done], cur[~done]
    return out


def owen_t_scaled(h, a, backend=None):
    """``T(h, a) * exp(h**2/2)`` for h >= 0, a >= 0 (vectorised over h).

    Uses ``t = tan(theta)`` so the integrand is bounded on a finite interval,
    then cuts the range where ``exp(-h^2 tan^2/2)`` drops below e^-50.
    """
    h = np.atleast_1d(np.asarray(h, dtype=float))
    kern = get_kernels(backend)
    cut = np.sqrt(2.0 * TAIL_EXPONENT) / np.maximum(h, 1e-300)
    hi = np.minimum(np.arctan(a), np.arctan(cut))
    vals = adaptive_panels(lambda i, p: kern.owen_scaled(h[i], hi[i], p), h.size)
    return vals / (2.0 * math.pi)


def owen_t(h: float, a: float) -> float:
    """Owen's T function ``(1/2pi) int_0^a exp(-h^2(1+t^2)/2)/(1+t^2) dt``."""
    _check_finite(h, a)
    if a == 0.0:
        return 0.0
    h = abs(h)
    scaled = float(owen_t_scaled(h, abs(a))[0])
    return math.copysign(scaled * math.exp(-0.5 * h * h), a)


# -- Lambert W, principal branch ---------------------------------------------

def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function, ``w*exp(w) = x, w >= -1``."""
    _check_finite(x)
    if x < BRANCH_POINT:
        raise DomainError(f"lambert_w0 undefined below -1/e, got {x!r}")
    if x == BRANCH_POINT:
        return -1.0
    if x == 0.0:
        return 0.0
    if x > math.e:
        # log form g(w) = w + log w - log x keeps huge arguments finite
        lx = math.log(x)
        llx = math.log(lx)
        w = lx - llx + llx / lx
        for _ in range(60):
            g = w + math.log(w) - lx
            g1 = 1.0 + 1.0 / w
            g2 = -1.0 / (w * w)
            step = g / (g1 - 0.5 * g * g2 / g1)
            w -= step
            if abs(step) <= 4e-16 * abs(w):
                break
        return w
    if x < -0.25:
        p = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    else:
        w = math.log1p(x)
    for _ in range(60):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            break
        wp1 = w + 1.0
        denom = ew * wp1 - 0.5 * (w + 2.0) * f / wp1
        step = f / denom
        w -= step
        if abs(step) <= 4e-16 * max(abs(w), 1e-300) or wp1 == 0.0:
            break
    return max(w, -1.0)


def lambert_w0_from_log(log_x: float) -> float:
    """``W0(exp(log_x))`` without forming ``exp(log_x)``; handy for n**2 scales."""
    _check_finite(log_x)
    if log_x < 1.0:
        return lambert_w0(math.exp(log_x))
    w = log_x - math.log(log_x)
    for _ in range(60):
        g = w + math.log(w) - log_x
        step = g / (1.0 + 1.0 / w)
        w -= step
        if abs(step) <= 4e-16 * w:
            break
    return w


def normal_mills_bracket(x: float):
    """``(phi(x)/x (1 - x^-2), phi(x)/x)`` as log-scaled values, x > 0."""
    _check_finite(x)
    if x <= 0:
        raise DomainError("Mills bracket requires x > 0")
    log_up = -0.5 * x * x - LOG_SQRT_2PI - math.log(x)
    factor = 1.0 - 1.0 / (x * x)
    upper = LogScaledValue(log_up, 1)
    if factor == 0.0:
        return LogScaledValue(-math.inf, 0), upper
    return LogScaledValue(log_up + math.log(abs(factor)), 1 if factor > 0 else -1), upper
