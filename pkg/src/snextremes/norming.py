"""Norming constants a_n, b_n for SN(lambda) maxima and the bound suite.

Defining equations (b > 0):

* lambda > 0: ``sqrt(pi/2) b exp(b^2/2) = n``, ``a = 1/b``;
* lambda < 0: ``pi |l| (1+l^2) b^2 exp((1+l^2) b^2/2) = n``, ``a = 1/((1+l^2) b)``;
* lambda = 0 (Hall): ``2 pi b^2 exp(b^2) = n^2``, ``a = 1/b``.

Each has a Lambert-W closed form; the root is polished by one Newton step on
the log of the defining equation and the remaining defect is reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .skew_normal import Regime, RegimeError, as_shape
from .special import DomainError, lambert_w0_from_log


@dataclass(frozen=True)
class NormingConstants:
    n: float
    lam: float
    regime: Regime
    b_n: float
    a_n: float
    residual: float

    @property
    def integer_n(self) -> bool:
        return float(self.n).is_integer()

    @property
    def tail_factor(self) -> float:
        """``1 + lambda^2`` for lambda < 0, else 1."""
        return 1.0 + self.lam * self.lam if self.regime is Regime.NEGATIVE else 1.0


@dataclass(frozen=True)
class AuxSequences:
    c_n: float | None = None
    d_n: float | None = None
    below_n0: bool = False


def log_defect(lam: float, n: float, b: float) -> float:
    """log(lhs) - log(rhs) of the regime's defining equation."""
    if lam > 0:
        return 0.5 * math.log(0.5 * math.pi) + math.log(b) + 0.5 * b * b - math.log(n)
    if lam < 0:
        c = 1.0 + lam * lam
        return math.log(math.pi * abs(lam) * c) + 2.0 * math.log(b) + 0.5 * c * b * b - math.log(n)
    return math.log(2.0 * math.pi) + 2.0 * math.log(b) + b * b - 2.0 * math.log(n)


def _log_defect_slope(lam: float, b: float) -> float:
    if lam > 0:
        return 1.0 / b + b
    if lam < 0:
        return 2.0 / b + (1.0 + lam * lam) * b
    return 2.0 / b + 2.0 * b


def solve_constants(lam, n) -> NormingConstants:
    sp = as_shape(lam)
    lam = sp.lam
    if not n >= 2:
        raise DomainError(f"n must be >= 2, got {n!r}")
    logn = math.log(n)
    if lam > 0:
        b = math.sqrt(lambert_w0_from_log(math.log(2.0 / math.pi) + 2.0 * logn))
    elif lam < 0:
        c = 1.0 + lam * lam
        u = lambert_w0_from_log(logn - math.log(2.0 * math.pi * abs(lam)))
        b = math.sqrt(2.0 * u / c)
    else:
        b = math.sqrt(lambert_w0_from_log(2.0 * logn - math.log(2.0 * math.pi)))
    b -= log_defect(lam, n, b) / _log_defect_slope(lam, b)
    a = 1.0 / ((1.0 + lam * lam) * b) if lam < 0 else 1.0 / b
    return NormingConstants(
        n=n, lam=lam, regime=sp.regime, b_n=b, a_n=a,
        residual=math.expm1(log_defect(lam, n, b)),
    )


def aux_sequences(nc: NormingConstants) -> AuxSequences:
    """``c_n = log log b_n^2`` (lambda > 0) or ``d_n = log log[(1+l^2) b_n^2]``.

    ``below_n0`` is set when the sequence is not positive; the value is
    ``None`` if the inner logarithm is itself nonpositive.
    """
    if nc.regime is Regime.ZERO:
        raise RegimeError("c_n/d_n are defined for lambda != 0")
    inner = math.log(nc.tail_factor * nc.b_n * nc.b_n)
    value = math.log(inner) if inner > 0 else None
    below = value is None or value <= 0
    if nc.regime is Regime.POSITIVE:
        return AuxSequences(c_n=value, below_n0=below)
    return AuxSequences(d_n=value, below_n0=below)


def n_zero(lam: float) -> int:
    """Smallest integer n >= 2 with d_n > 0, i.e. (1+l^2) b_n^2 > e."""
    if lam >= 0:
        raise RegimeError("n0 is defined for lambda < 0")
    # (1+l^2) b^2 = 2u with u e^u = n / (2 pi |l|); d_n > 0 iff u > e/2
    half_e = 0.5 * math.e
    n0 = max(2, math.floor(2.0 * math.pi * abs(lam) * half_e * math.exp(half_e)) + 1)
    while n0 > 2 and not aux_sequences(solve_constants(lam, n0 - 1)).below_n0:
        n0 -= 1
    while aux_sequences(solve_constants(lam, n0)).below_n0:
        n0 += 1
    return n0


def geometric_grid(start: int, stop: int, ratio: float = 1.1) -> list[int]:
    """Strictly increasing integers from ``start`` to ``stop`` (both included)."""
    if start > stop:
        raise ValueError("start must not exceed stop")
    if ratio <= 1:
        raise ValueError("ratio must exceed 1")
    k = math.ceil(math.log(stop / start) / math.log(ratio))
    pts = np.unique(np.round(start * ratio ** np.arange(k + 1)).astype(np.int64))
    pts = pts[(pts >= start) & (pts <= stop)]
    return sorted({int(start), int(stop), *map(int, pts)})


# -- bound suite ----------------------------------------------------------------

@dataclass
class BoundCheck:
    name: str
    expression: str
    bound: float
    start: int
    max_observed: float = -math.inf
    argmax_n: int | None = None
    points: int = 0
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.points > 0 and self.max_observed < self.bound


@dataclass
class BoundReport:
    lam: float
    n_max: int
    ratio: float
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _positive_terms(n, nc):
    b2 = nc.b_n ** 2
    a2 = nc.a_n ** 2
    lb = math.log(b2)
    cn = math.log(lb) if lb > 0 else math.nan
    return {
        "inv_one_minus_a2c": 1.0 / (1.0 - a2 * cn),
        "a2_log_b2": a2 * lb,
        "a2_log_b2_sq": a2 * lb * lb,
        "log_b2_over_n": lb / n,
        "b3_exp": nc.b_n ** 3 * math.exp(-0.5 * b2),
    }


def _negative_terms(n, nc):
    x = nc.tail_factor * nc.b_n ** 2
    lx = math.log(x)
    dn = math.log(lx) if lx > 0 else math.nan
    # (1+l^2) a_n^2 = 1/((1+l^2) b_n^2)
    return {
        "inv_one_minus_ca2d": 1.0 / (1.0 - dn / x),
        "ca2_log": lx / x,
        "ca2_log_sq": lx * lx / x,
        "log_over_n": lx / n,
        "cb2_exp": x * math.exp(-0.5 * x),
    }


_POSITIVE_SUITE = [
    ("inv_one_minus_a2c", "(1 - a_n^2 c_n)^-1", 1.11, 9),
    ("a2_log_b2", "a_n^2 log b_n^2", 0.37, 9),
    ("a2_log_b2_sq", "a_n^2 (log b_n^2)^2", 0.55, 9),
    ("log_b2_over_n", "n^-1 log b_n^2", 0.17, 9),
    ("b3_exp", "b_n^3 exp(-b_n^2/2)", 1.16, 9),
]

# start None means n0(lambda)
_NEGATIVE_SUITE = [
    ("inv_one_minus_ca2d", "[1 - (1+l^2) a_n^2 d_n]^-1", 1.11, 2),
    ("ca2_log", "(1+l^2) a_n^2 log[(1+l^2) b_n^2]", 0.37, 2),
    ("ca2_log_sq", "(1+l^2) a_n^2 (log[(1+l^2) b_n^2])^2", 0.55, None),
    ("log_over_n", "n^-1 log[(1+l^2) b_n^2]", 0.27, 2),
    ("cb2_exp", "(1+l^2) b_n^2 exp(-(1+l^2) b_n^2/2)", 0.74, 2),
]


def bound_suite(lam: float, n_max: int, ratio: float = 1.1) -> BoundReport:
    """Evaluate the printed numeric bounds on a geometric n-grid.

    Failures are recorded in the report, never raised. Each entry starts at
    its own index (9 for lambda > 0; 2 or n_zero(lam) for lambda < 0); grid
    points where an entry is undefined (``d_n`` below n0) are counted in
    ``skipped``.
    """
    if n_max < 9:
        raise DomainError("n_max must be >= 9")
    if lam == 0:
        raise RegimeError("the bound suite is defined for lambda != 0")
    if lam > 0:
        suite, terms, default_start = _POSITIVE_SUITE, _positive_terms, 9
    else:
        suite, terms, default_start = _NEGATIVE_SUITE, _negative_terms, n_zero(lam)
    report = BoundReport(lam=lam, n_max=n_max, ratio=ratio)
    checks = {
        key: BoundCheck(key, expr, bound, start or default_start)
        for key, expr, bound, start in suite
    }
    report.checks = list(checks.values())
    start = min(c.start for c in report.checks)
    for n in geometric_grid(start, max(n_max, start), ratio):
        vals = terms(n, solve_constants(lam, n))
        for key, chk in checks.items():
            if n < chk.start:
                continue
            v = vals[key]
            if not math.isfinite(v):
                chk.skipped += 1
                continue
            chk.points += 1
            if v > chk.max_observed:
                chk.max_observed, chk.argmax_n = v, n
    return report
