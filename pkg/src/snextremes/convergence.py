"""Distance of the normalized SN(lambda) maximum to the Gumbel law.

For constants (a_n, b_n) from :mod:`snextremes.norming` the object of study is

    D_n(x) = F_lambda(a_n x + b_n)**n - Lambda(x),   Lambda(x) = exp(-exp(-x)),

and its sup-norm ``Delta_n``. Powers of F are always formed as
``exp(n log F)`` with ``log F`` taken from the tail-stable routines.
"""
from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import get_kernels
from .norming import NormingConstants, aux_sequences, n_zero, solve_constants
from .skew_normal import Regime, RegimeError, as_shape, log_cdf, log_survival
from .special import DomainError, LogScaledValue

GRID_POINTS = 4096
REFINE_TOL = 1e-8
MAX_EXPANSIONS = 12
# reps * n ceiling for monte_carlo_check (about a minute of sampling per 1e9)
MAX_DRAWS = 10**10

PSI_BOUND_POSITIVE = 0.1887
R_BOUND_FACTOR = 0.39
PSI_BOUND_NEGATIVE = 0.332667

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class SearchWindowError(RuntimeError):
    """The sup search window could not be widened enough."""


def gumbel_cdf(x):
    return np.exp(-np.exp(-np.asarray(x, dtype=float)))


def _constants(lam, n) -> NormingConstants:
    return n if isinstance(n, NormingConstants) else solve_constants(lam, n)


def log_max_cdf(lam, n, x, backend=None):
    """Vectorised ``n log F_lam(a_n x + b_n)``."""
    nc = _constants(lam, n)
    t = nc.a_n * np.asarray(x, dtype=float) + nc.b_n
    return nc.n * log_cdf(nc.lam, np.atleast_1d(t), backend=backend)


def max_cdf(lam, n, x: float) -> float:
    """``P(M_n <= a_n x + b_n)`` for the maximum of n SN(lam) draws."""
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    return float(np.exp(log_max_cdf(lam, n, x)[0]))


def _gap(lam, nc, x, backend=None):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.exp(log_max_cdf(lam, nc, x, backend)) - gumbel_cdf(x)


def _golden_max(f, lo, hi, tol):
    """Maximise a unimodal f on [lo, hi]; returns (x, f(x), final width)."""
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    x = c if fc >= fd else d
    return x, max(fc, fd), hi - lo


# -- sup distance ---------------------------------------------------------------

@dataclass(frozen=True)
class DistanceReport:
    n: float
    lam: float
    delta_n: float
    argmax_x: float
    delta_times_log_n: float
    bracket_width: float
    window: tuple[float, float] = (math.nan, math.nan)


def _check_n(lam, n):
    if n < 2:
        raise DomainError("n must be >= 2")
    if lam < 0 and n < n_zero(lam):
        raise DomainError(f"n={n} is below n0({lam:g})={n_zero(lam)}")


def sup_distance(lam, n, backend=None) -> DistanceReport:
    """``sup_x |F^n(a_n x + b_n) - Lambda(x)|`` by grid scan plus golden refinement."""
    lam = as_shape(lam).lam
    _check_n(lam, n)
    nc = solve_constants(lam, n)
    loglog = math.log(math.log(n))
    lo, hi = -2.0 - loglog, 3.0 + math.log(n)
    for _ in range(MAX_EXPANSIONS + 1):
        xs = np.linspace(lo, hi, GRID_POINTS)
        d = np.abs(_gap(lam, nc, xs, backend))
        peak = float(d.max())
        grow_lo, grow_hi = d[0] >= peak / 10, d[-1] >= peak / 10
        if not (grow_lo or grow_hi):
            break
        width = hi - lo
        lo -= 0.5 * width if grow_lo else 0.0
        hi += 0.5 * width if grow_hi else 0.0
    else:
        raise SearchWindowError(
            f"|D| still large at the window edge [{lo:g}, {hi:g}] for lambda={lam}, n={n}"
        )

    def f(x):
        return float(np.abs(_gap(lam, nc, x, backend))[0])

    best = (0.0, -1.0, 0.0)
    interior = np.flatnonzero((d[1:-1] >= d[:-2]) & (d[1:-1] >= d[2:])) + 1
    for i in interior:
        x, v, w = _golden_max(f, xs[i - 1], xs[i + 1], REFINE_TOL)
        if v > best[1]:
            best = (x, v, w)
    x, v, w = best
    return DistanceReport(
        n=n, lam=lam, delta_n=v, argmax_x=x,
        delta_times_log_n=v * math.log(n), bracket_width=w, window=(lo, hi),
    )


# -- leading term ---------------------------------------------------------------

def _profile_poly(lam, x):
    if lam > 0:
        return 1.0 + x + 0.5 * x * x
    return (1.0 + 3.0 * lam * lam) / (lam * lam) + 2.0 * x + 0.5 * x * x


def _profile(lam, x):
    """Leading term divided by a_n^2."""
    x = np.asarray(x, dtype=float)
    scale = 1.0 + lam * lam if lam < 0 else 1.0
    return scale * gumbel_cdf(x) * np.exp(-x) * _profile_poly(lam, x)


def leading_term(lam, n, x):
    """The a_n^2-order term of ``F^n(a_n x + b_n) - Lambda(x)`` (up to sign)."""
    lam = as_shape(lam).lam
    if lam == 0:
        raise RegimeError("no leading term is available for lambda = 0")
    nc = _constants(lam, n)
    return nc.a_n ** 2 * _profile(lam, x)


@functools.lru_cache(maxsize=256)
def sup_profile(lam: float) -> float:
    """``M_lambda = sup_x |leading_term| / a_n^2``; cached per lambda."""
    if lam == 0:
        raise RegimeError("no leading term is available for lambda = 0")
    xs = np.linspace(-5.0, 30.0, 7001)
    i = int(np.argmax(_profile(lam, xs)))
    _, v, _ = _golden_max(lambda x: float(_profile(lam, x)), xs[i - 1], xs[i + 1], 1e-12)
    return v


# -- proof diagnostics ----------------------------------------------------------

@dataclass(frozen=True)
class DiagnosticCheck:
    name: str
    value: float
    bound: float
    applicable: bool

    @property
    def passed(self) -> bool | None:
        return self.value < self.bound if self.applicable else None


@dataclass(frozen=True)
class ProofDiagnostics:
    x: float
    psi: LogScaledValue
    r: float
    h: float
    a_big: float
    b_big: float
    log_max_cdf: float
    checks: tuple[DiagnosticCheck, ...] = ()

    @property
    def identity_defect(self) -> float:
        """Relative gap between ``F^n`` and ``Lambda * A * B``."""
        lhs = math.exp(self.log_max_cdf)
        rhs = math.exp(-math.exp(-self.x)) * self.a_big * self.b_big
        return abs(lhs - rhs) / lhs if lhs > 0 else abs(rhs)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)


def _log1p_excess(psi, log_f):
    """``-log(1 - psi) - psi`` without cancellation for small psi."""
    if psi < 1e-2:
        term, acc, k = psi, 0.0, 2
        while True:
            term *= psi
            step = term / k
            acc += step
            if step <= 1e-18 * acc:
                return acc
            k += 1
    return -log_f - psi


def proof_diagnostics(lam, n, x: float) -> ProofDiagnostics:
    lam = as_shape(lam).lam
    nc = solve_constants(lam, n)
    t = nc.a_n * x + nc.b_n
    log_psi = float(log_survival(lam, t)[0][0])
    psi = math.exp(log_psi)
    log_f = float(log_cdf(lam, t)[0])
    r = n * _log1p_excess(psi, log_f)
    h = -n * psi + math.exp(-x)
    checks = []
    if lam > 0:
        aux = aux_sequences(nc)
        ok = n >= 9 and not aux.below_n0 and x > -aux.c_n
        checks.append(DiagnosticCheck("psi", psi, PSI_BOUND_POSITIVE, ok))
        checks.append(DiagnosticCheck("r", r, R_BOUND_FACTOR * nc.a_n ** 2, ok))
    elif lam < 0:
        aux = aux_sequences(nc)
        ok = n >= n_zero(lam) and not aux.below_n0 and x > -aux.d_n
        checks.append(DiagnosticCheck("psi", psi, PSI_BOUND_NEGATIVE, ok))
    return ProofDiagnostics(
        x=x, psi=LogScaledValue(log_psi, 1), r=r, h=h,
        a_big=math.exp(h) if h < 709.0 else math.inf, b_big=math.exp(-r), log_max_cdf=n * log_f,
        checks=tuple(checks),
    )


# -- rate curve -----------------------------------------------------------------

@dataclass
class RateCurve:
    lam: float
    points: list[DistanceReport]
    predicted: list[float] = field(default_factory=list)

    @property
    def band(self) -> tuple[float, float]:
        v = [p.delta_times_log_n for p in self.points]
        return min(v), max(v)

    @property
    def band_ratio(self) -> float:
        lo, hi = self.band
        return hi / lo

    @property
    def ratios(self) -> list[float]:
        """``Delta_n / (a_n^2 M_lambda)`` per point (nan for lambda = 0)."""
        return [p.delta_n / q for p, q in zip(self.points, self.predicted)]

    def top_decade_deviation(self) -> float:
        top = self.points[-1].n / 10.0
        dev = [abs(r - 1.0) for p, r in zip(self.points, self.ratios) if p.n >= top]
        return max(dev) if dev else math.nan


def _predicted(lam, n):
    if lam == 0:
        return math.nan
    return solve_constants(lam, n).a_n ** 2 * sup_profile(lam)


def rate_curve(lam, n_grid, workers: int | None = None) -> RateCurve:
    lam = as_shape(lam).lam
    grid = list(n_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly increasing")
    for n in grid:
        _check_n(lam, n)
    if workers and workers > 1 and len(grid) > 1:
        with ProcessPoolExecutor(workers) as pool:
            points = list(pool.map(sup_distance, [lam] * len(grid), grid))
    else:
        points = [sup_distance(lam, n) for n in grid]
    return RateCurve(lam, points, [_predicted(lam, n) for n in grid])


# -- Monte Carlo ----------------------------------------------------------------

def dkw_margin(reps: int, alpha: float) -> float:
    """Two-sided DKW half-width ``sqrt(log(2/alpha) / (2 reps))``."""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * reps))


def _rep_generator(seed, rep):
    return np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(rep,)))


def _block_maxima(lam, n, seed, start, stop, backend=None):
    sp = as_shape(lam)
    delta = sp.delta
    omega = math.sqrt(1.0 - delta * delta)
    kern = get_kernels(backend)
    return np.array([
        kern.block_max(_rep_generator(seed, r), n, delta, omega)
        for r in range(start, stop)
    ])


def block_maxima(lam, n, reps, seed, workers=None, backend=None) -> np.ndarray:
    """Maxima of ``reps`` independent samples of size n; rep r is keyed by (seed, r)."""
    if workers and workers > 1:
        edges = np.linspace(0, reps, workers + 1).astype(int)
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(
                _block_maxima, [lam] * workers, [n] * workers, [seed] * workers,
                edges[:-1].tolist(), edges[1:].tolist(), [backend] * workers,
            )
            return np.concatenate(list(parts))
    return _block_maxima(lam, n, seed, 0, reps, backend)


def ks_to_gumbel(z) -> float:
    z = np.sort(np.asarray(z, dtype=float))
    m = z.size
    g = gumbel_cdf(z)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - g), np.max(g - (i - 1) / m)))


def monte_carlo_check(lam, n, reps, seed, workers=None, backend=None) -> float:
    """KS distance between simulated normalized maxima and Lambda."""
    lam = as_shape(lam).lam
    if reps < 1000:
        raise ValueError("reps must be >= 1000")
    _check_n(lam, n)
    if reps * n > MAX_DRAWS:
        raise ValueError(f"reps * n = {reps * n} exceeds the limit {MAX_DRAWS}")
    nc = solve_constants(lam, n)
    m = block_maxima(lam, n, reps, seed, workers, backend)
    return ks_to_gumbel((m - nc.b_n) / nc.a_n)


__all__ = [
    "DiagnosticCheck", "DistanceReport", "ProofDiagnostics", "RateCurve",
    "SearchWindowError", "block_maxima", "dkw_margin", "gumbel_cdf",
    "ks_to_gumbel", "leading_term", "log_max_cdf", "max_cdf",
    "monte_carlo_check", "proof_diagnostics", "rate_curve", "sup_distance",
    "sup_profile", "Regime",
]
