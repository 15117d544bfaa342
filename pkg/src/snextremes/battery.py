"""The inequality battery behind ``snextremes verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convergence import proof_diagnostics
from .norming import aux_sequences, bound_suite, geometric_grid, n_zero, solve_constants
from .skew_normal import log_survival, mills_bracket
from .special import log_normal_sf, normal_mills_bracket

BRACKET_LAMBDAS = (-5.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0)


@dataclass(frozen=True)
class BatteryEntry:
    check: str
    lam: float
    inequality: str
    points: int
    failures: int
    witness: str = ""

    @property
    def passed(self) -> bool:
        return self.points > 0 and self.failures == 0


def bracket_grid(lam: float, x_max: float = 50.0, size: int = 2000):
    """Log-spaced abscissae in (0, x_max] where the lower bracket is positive."""
    xs = np.geomspace(0.05, x_max, size)
    if lam == 0:
        keep = [normal_mills_bracket(x)[0].sign > 0 for x in xs]
    else:
        keep = [mills_bracket(lam, x).lower_positive for x in xs]
    return xs[np.asarray(keep)]


def bracket_check(lam: float, xs=None) -> BatteryEntry:
    xs = bracket_grid(lam) if xs is None else np.asarray(xs, dtype=float)
    if lam == 0:
        ls = log_normal_sf(xs)
        pairs = [normal_mills_bracket(x) for x in xs]
    else:
        ls = log_survival(lam, xs)[0]
        pairs = [mills_bracket(lam, x) for x in xs]
    bad = [
        x for x, v, (lo, up) in zip(xs, ls, pairs)
        if not (lo.log_magnitude < v < up.log_magnitude)
    ]
    return BatteryEntry(
        "bracket", lam, "lower < 1 - F(x) < upper", len(xs), len(bad),
        f"x={bad[0]:.17g}" if bad else "",
    )


def bound_checks(lam: float, n_max: int = 10**9) -> list[BatteryEntry]:
    report = bound_suite(lam, n_max)
    return [
        BatteryEntry(
            f"bound:{c.name}", lam, f"{c.expression} < {c.bound:g}", c.points,
            0 if c.passed else 1,
            "" if c.passed else f"n={c.argmax_n} value={c.max_observed:.17g}",
        )
        for c in report.checks
    ]


def diagnostic_points(lam: float, n_max: int = 10**9, ratio: float = 1.5):
    """(n, x) pairs satisfying the preconditions of the printed bounds."""
    start = 9 if lam > 0 else n_zero(lam)
    for n in geometric_grid(start, n_max, ratio):
        aux = aux_sequences(solve_constants(lam, n))
        lo = -(aux.c_n if lam > 0 else aux.d_n)
        for x in lo + np.geomspace(1e-6, 1.0, 8) * (-lo):
            yield n, float(x)
        for x in np.linspace(0.0, 20.0, 21):
            yield n, float(x)


def diagnostic_checks(lam: float, n_max: int = 10**9) -> list[BatteryEntry]:
    counts: dict[str, list] = {}
    identity = [0, 0, ""]
    for n, x in diagnostic_points(lam, n_max):
        d = proof_diagnostics(lam, n, x)
        for c in d.checks:
            entry = counts.setdefault(c.name, [0, 0, "", c])
            entry[0] += 1
            if not c.passed:
                entry[1] += 1
                entry[2] = entry[2] or f"n={n} x={x:.17g} value={c.value:.17g}"
        identity[0] += 1
        if not d.identity_defect <= 1e-10:
            identity[1] += 1
            identity[2] = identity[2] or f"n={n} x={x:.17g}"
    out = []
    for name, (pts, fails, wit, c) in counts.items():
        expr = "R < 0.39 a_n^2" if name == "r" else f"Psi < {c.bound:g}"
        out.append(BatteryEntry(f"diagnostic:{name}", lam, expr, pts, fails, wit))
    out.append(BatteryEntry(
        "diagnostic:identity", lam, "|F^n - Lambda A B| <= 1e-10 F^n", *identity
    ))
    return out


def identity_checks(n_max: int = 10**12) -> list[BatteryEntry]:
    out = []
    for lam in (1.0, -1.0):
        grid = geometric_grid(2, n_max, 1.1)
        bad = []
        for n in grid:
            nc = solve_constants(lam, n)
            b = nc.b_n
            if lam > 0:
                lhs = math.log(math.pi / 2) + 2 * math.log(b) + b * b
                rhs = 2 * math.log(n)
            else:
                c = 1 + lam * lam
                lhs = math.log(math.pi * abs(lam) * c) + 2 * math.log(b) + c * b * b / 2
                rhs = math.log(n)
            if not abs(lhs - rhs) <= 1e-10:
                bad.append(n)
        out.append(BatteryEntry(
            "identity", lam, "defining equation in log form, |defect| <= 1e-10",
            len(grid), len(bad), f"n={bad[0]}" if bad else "",
        ))
    return out


def run_battery(n_max: int = 10**9) -> list[BatteryEntry]:
    entries = [bracket_check(0.0)]
    entries += [bracket_check(lam) for lam in BRACKET_LAMBDAS]
    for lam in (1.0, -1.0):
        entries += bound_checks(lam, n_max)
        entries += diagnostic_checks(lam, n_max)
    entries += identity_checks()
    return entries
