"""Command-line entry point: ``snextremes <command> [flags]``.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numeric or
domain error. Output is CSV (default) or JSON; floats carry 17 significant
digits so that re-parsing is lossless.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import battery
from .convergence import (
    SearchWindowError,
    dkw_margin,
    monte_carlo_check,
    rate_curve,
    sup_distance,
    sup_profile,
)
from .norming import aux_sequences, geometric_grid, n_zero, solve_constants
from .skew_normal import RegimeError, cdf, pdf, survival
from .special import DomainError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3
MC_ALPHA = 0.001

COLUMNS = {
    "constants": ["n", "lambda", "regime", "b_n", "a_n", "residual", "aux", "n0", "below_n0"],
    "dist": ["x", "lambda", "pdf", "cdf", "log_survival", "survival", "method"],
    "maxdist": ["n", "lambda", "delta_n", "argmax_x", "delta_times_log_n", "bracket_width",
                "predicted", "ratio"],
    "ratecurve": ["n", "lambda", "delta_n", "argmax_x", "delta_times_log_n", "bracket_width",
                  "predicted", "ratio"],
    "verify": ["check", "lambda", "inequality", "points", "failures", "status", "witness"],
    "simulate": ["n", "lambda", "reps", "seed", "ks", "delta_n", "margin", "bound", "status"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    lam: float | None
    n: int | None
    n_grid: tuple[int, ...] | None
    seed: int
    reps: int
    fmt: str
    out: str | None
    plot: str | None
    x: tuple[float, ...] = ()
    workers: int | None = None

    def ns(self) -> list[int]:
        if self.n_grid:
            return list(self.n_grid)
        if self.n is None:
            raise UsageError("one of --n or --n-grid is required")
        return [self.n]


def parse_grid(spec: str) -> tuple[int, ...]:
    """``start:stop:ratio`` to a strictly increasing integer tuple."""
    try:
        start, stop, ratio = spec.split(":")
        start, stop, ratio = int(float(start)), int(float(stop)), float(ratio)
        return tuple(geometric_grid(start, stop, ratio))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {spec!r}: expected start:stop:ratio") from exc


def _int(text: str) -> int:
    """Integer flag that also accepts ``1e6``-style input."""
    v = float(text)
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="snextremes", description="Skew-normal maxima and Gumbel rates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "constants": "norming constants a_n, b_n (plus c_n/d_n and n0)",
        "dist": "pdf, cdf and survival at the --x points",
        "maxdist": "sup-norm distance to the Gumbel law for one n",
        "ratecurve": "distance curve over --n-grid",
        "verify": "run the inequality battery",
        "simulate": "Monte Carlo KS distance of normalized maxima",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--lambda", dest="lam", type=float, required=name != "verify")
        p.add_argument("--n", type=_int)
        p.add_argument("--n-grid", type=parse_grid, help="start:stop:ratio")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--reps", type=_int, default=10**4)
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--plot", help="SVG path (ratecurve only)")
        p.add_argument("--workers", type=int, help="worker processes")
        if name == "dist":
            p.add_argument("--x", type=float, nargs="+", required=True)
    return parser


# -- formatting -----------------------------------------------------------------

def fmt_float(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % v


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if v is None:
        return ""
    return str(v)


def _csv_cell(v) -> str:
    s = _cell(v)
    if any(ch in s for ch in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def to_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines += [",".join(_csv_cell(r.get(c)) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def _json(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return fmt_float(v) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, dict):
        return "{" + ", ".join(f"{_json(str(k))}: {_json(x)}" for k, x in v.items()) + "}"
    return "[" + ", ".join(_json(x) for x in v) + "]"


def to_json(command, params, columns, rows) -> str:
    results = [{c: r.get(c) for c in columns} for r in rows]
    doc = {"schema_version": SCHEMA_VERSION, "command": command,
           "params": params, "results": results}
    return _json(doc) + "\n"


# -- commands -------------------------------------------------------------------

def cmd_constants(cfg: RunConfig):
    rows = []
    for n in cfg.ns():
        nc = solve_constants(cfg.lam, n)
        row = {"n": n, "lambda": nc.lam, "regime": nc.regime.value, "b_n": nc.b_n,
               "a_n": nc.a_n, "residual": nc.residual, "below_n0": False}
        if nc.lam != 0:
            aux = aux_sequences(nc)
            row["aux"] = aux.c_n if nc.lam > 0 else aux.d_n
            row["below_n0"] = aux.below_n0
        if nc.lam < 0:
            n0 = n_zero(nc.lam)
            row["n0"] = n0
            if n < n0:
                print(f"note: n={n} is below n0({nc.lam:g})={n0}; d_n is not positive "
                      "and the rate results do not apply", file=sys.stderr)
        rows.append(row)
    return rows, EXIT_OK


def cmd_dist(cfg: RunConfig):
    rows = []
    for x in cfg.x:
        s = survival(cfg.lam, x)
        rows.append({"x": x, "lambda": cfg.lam, "pdf": pdf(cfg.lam, x), "cdf": cdf(cfg.lam, x),
                     "log_survival": s.value.log_magnitude, "survival": s.probability,
                     "method": s.method.value})
    return rows, EXIT_OK


def _distance_row(lam, rep, predicted):
    return {"n": rep.n, "lambda": lam, "delta_n": rep.delta_n, "argmax_x": rep.argmax_x,
            "delta_times_log_n": rep.delta_times_log_n, "bracket_width": rep.bracket_width,
            "predicted": predicted, "ratio": rep.delta_n / predicted if predicted else None}


def cmd_maxdist(cfg: RunConfig):
    rows = []
    for n in cfg.ns():
        rep = sup_distance(cfg.lam, n)
        pred = solve_constants(cfg.lam, n).a_n ** 2 * sup_profile(cfg.lam) if cfg.lam else None
        rows.append(_distance_row(cfg.lam, rep, pred))
    return rows, EXIT_OK


def cmd_ratecurve(cfg: RunConfig):
    if not cfg.n_grid:
        raise UsageError("ratecurve needs --n-grid")
    curve = rate_curve(cfg.lam, cfg.n_grid, workers=cfg.workers)
    rows = [
        _distance_row(cfg.lam, p, q if cfg.lam else None)
        for p, q in zip(curve.points, curve.predicted)
    ]
    lo, hi = curve.band
    print(f"band: min {fmt_float(lo)} max {fmt_float(hi)} ratio {fmt_float(hi / lo)}",
          file=sys.stderr)
    if cfg.plot:
        write_svg(cfg.plot, curve)
    return rows, EXIT_OK


def cmd_verify(cfg: RunConfig):
    rows, status = [], EXIT_OK
    for e in battery.run_battery():
        rows.append({"check": e.check, "lambda": e.lam, "inequality": e.inequality,
                     "points": e.points, "failures": e.failures,
                     "status": "pass" if e.passed else "fail", "witness": e.witness})
        if not e.passed:
            status = EXIT_VERIFY
            print(f"FAIL {e.check} lambda={e.lam:g}: {e.inequality} at {e.witness}",
                  file=sys.stderr)
    return rows, status


def cmd_simulate(cfg: RunConfig):
    if cfg.n is None:
        raise UsageError("simulate needs --n")
    ks = monte_carlo_check(cfg.lam, cfg.n, cfg.reps, cfg.seed, workers=cfg.workers)
    delta = sup_distance(cfg.lam, cfg.n).delta_n
    margin = dkw_margin(cfg.reps, MC_ALPHA)
    bound = delta + 3.0 * margin
    ok = ks <= bound
    row = {"n": cfg.n, "lambda": cfg.lam, "reps": cfg.reps, "seed": cfg.seed, "ks": ks,
           "delta_n": delta, "margin": margin, "bound": bound,
           "status": "pass" if ok else "fail"}
    return [row], EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "constants": cmd_constants, "dist": cmd_dist, "maxdist": cmd_maxdist,
    "ratecurve": cmd_ratecurve, "verify": cmd_verify, "simulate": cmd_simulate,
}


# -- SVG ------------------------------------------------------------------------

def write_svg(path: str, curve) -> None:
    """Delta_n log n and Delta_n/(a_n^2 M) against log10 n."""
    w, h, m = 640, 400, 50
    lx = [math.log10(p.n) for p in curve.points]
    series = [("Delta_n log n", "#1f77b4", [p.delta_times_log_n for p in curve.points])]
    if curve.lam != 0:
        series.append(("Delta_n / (a_n^2 M)", "#d62728", curve.ratios))
    ymax = 1.1 * max(max(s[2]) for s in series)
    x0, x1 = min(lx), max(lx)
    span = (x1 - x0) or 1.0

    def px(v):
        return m + (v - x0) / span * (w - 2 * m)

    def py(v):
        return h - m - v / ymax * (h - 2 * m)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{m}" y1="{h - m}" x2="{w - m}" y2="{h - m}" stroke="black"/>',
        f'<line x1="{m}" y1="{m}" x2="{m}" y2="{h - m}" stroke="black"/>',
        f'<text x="{w / 2}" y="{h - 10}" text-anchor="middle">log10 n</text>',
    ]
    for k in range(math.ceil(x0), math.floor(x1) + 1):
        parts.append(f'<text x="{px(k):.1f}" y="{h - m + 18}" text-anchor="middle">{k}</text>')
    for k in range(5):
        v = ymax * k / 4
        parts.append(f'<text x="{m - 6}" y="{py(v):.1f}" text-anchor="end">{v:.2f}</text>')
    for i, (label, colour, ys) in enumerate(series):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(lx, ys))
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{pts}"/>')
        parts.append(f'<text x="{w - m}" y="{m + 16 * i}" text-anchor="end" '
                     f'fill="{colour}">{label}</text>')
    parts.append(f'<text x="{w / 2}" y="20" text-anchor="middle">lambda = {curve.lam:g}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command, lam=args.lam, n=args.n, n_grid=args.n_grid, seed=args.seed,
        reps=args.reps, fmt=args.fmt, out=args.out, plot=args.plot,
        x=tuple(getattr(args, "x", None) or ()), workers=args.workers,
    )
    try:
        rows, status = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"snextremes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, RegimeError, SearchWindowError, ValueError) as exc:
        print(f"snextremes: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    columns = COLUMNS[cfg.command]
    if cfg.fmt == "json":
        params = {"lambda": cfg.lam, "n": cfg.n, "n_grid": list(cfg.n_grid or ()),
                  "seed": cfg.seed, "reps": cfg.reps}
        text = to_json(cfg.command, params, columns, rows)
    else:
        text = to_csv(columns, rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
