"""Command-line front end: cost curves, parameter tuning, verification suites,
quadrature sweeps and polynomial degree fits.

    lchs cost-curve|tune|verify|quad-sweep|polyfit [--eps ...] [--mode ...] [--seed N]
         [--dims N] [--out DIR] [--format csv|json|svg] [--config FILE]

Exit status is 0 iff every bound check of the command passed.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import blockenc, evolution, planner, polyopt
from .bounds import truncation_budget
from .errors import LchsError
from .kernels import KernelSpec

COMMANDS = ("cost-curve", "tune", "verify", "quad-sweep", "polyfit")
FORMATS = ("csv", "json", "svg")
REF_TOL = 0.02

# optimized cost prefactors: eps -> (cost, j, y, alpha_R, gamma, R, c, y0)
REFERENCE_COSTS = {
    planner.FIX_21: {
        1e-1: (3.32, 2, 1, 1.178, 1.749, 2.82, 0.586, 5.58),
        1e-2: (9.34, 2, 1, 1.656, 1.996, 5.64, 0.832, 8.40),
        1e-3: (16.82, 2, 1, 1.921, 2.314, 8.75, 0.928, 11.67),
        1e-4: (25.25, 2, 1, 2.089, 2.623, 12.09, 0.976, 15.16),
        1e-5: (34.35, 2, 1, 2.203, 2.916, 15.59, 1.003, 18.79),
        1e-6: (43.93, 2, 1, 2.285, 3.194, 19.23, 1.019, 22.53),
        1e-7: (53.86, 2, 1, 2.345, 3.457, 22.96, 1.029, 26.37),
        1e-8: (64.06, 2, 1, 2.392, 3.708, 26.78, 1.036, 30.27),
        1e-9: (74.48, 2, 1, 2.429, 3.948, 30.66, 1.041, 34.23),
        1e-10: (85.05, 2, 1, 2.459, 4.177, 34.59, 1.044, 38.22),
    },
    planner.FREE_JY: {
        1e-1: (2.55, 3.68, 1.05, 1.272, math.inf, 2.01, -0.206, 12.54),
        1e-2: (7.06, 6.52, 2.45, 1.665, math.inf, 4.24, -0.329, 14.92),
        1e-3: (12.74, 9.86, 4.12, 1.902, math.inf, 6.70, -0.389, 19.28),
        1e-4: (19.26, 13.65, 6.01, 2.075, math.inf, 9.28, -0.432, 23.89),
        1e-5: (26.42, 17.77, 8.05, 2.210, math.inf, 11.95, -0.466, 28.61),
        1e-6: (34.08, 22.14, 10.21, 2.320, math.inf, 14.69, -0.492, 33.42),
        1e-7: (42.15, 26.70, 12.46, 2.412, math.inf, 17.47, -0.513, 38.28),
        1e-8: (50.56, 31.42, 14.78, 2.490, math.inf, 20.30, -0.531, 43.20),
        1e-9: (59.27, 36.27, 17.16, 2.559, math.inf, 23.16, -0.546, 48.16),
        1e-10: (68.23, 41.23, 19.60, 2.619, math.inf, 26.05, -0.558, 53.15),
    },
}

DEFAULT_EPS = {
    "cost-curve": [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
    "tune": [1e-1, 1e-3, 1e-6],
    "verify": [1e-3],
    "quad-sweep": [1e-3],
    "polyfit": [1e-6],
}


@dataclass
class RunConfig:
    command: str
    eps_list: list = field(default_factory=list)
    mode: str = None
    seed: int = 0
    dims: int = 8
    out_dir: str = "."
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.eps_list:
            self.eps_list = list(DEFAULT_EPS[self.command])
        if any(not 1e-10 <= e <= 0.9 for e in self.eps_list):
            raise ValueError("eps values must lie in [1e-10, 0.9]")
        if self.mode not in (None, planner.FIX_21, planner.FREE_JY):
            raise ValueError("mode must be FIX_21 or FREE_JY")
        if not 1 <= self.dims <= 128:
            raise ValueError("dims must lie in [1, 128]")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")


@dataclass
class Check:
    name: str
    observed: float
    bound: float
    passed: bool
    note: str = ""


## output helpers


def _fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else ("inf" if math.isinf(v) else f"{float(v):.10g}")
    return str(v)


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def svg_plot(series, title="", logx=True, logy=True, xlabel="", ylabel="", width=640, height=420):
    """Minimal line plot; series maps a label to (x, y) sequences."""
    pad = 60
    tx = (lambda v: math.log10(v)) if logx else float
    ty = (lambda v: math.log10(v)) if logy else float
    pts = {k: [(tx(x), ty(y)) for x, y in zip(*xy) if np.isfinite(x) and np.isfinite(y) and
               (not logx or x > 0) and (not logy or y > 0)] for k, xy in series.items()}
    allp = [p for v in pts.values() for p in v] or [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(p[0] for p in allp), max(p[0] for p in allp)
    y0, y1 = min(p[1] for p in allp), max(p[1] for p in allp)
    x1, y1 = (x1 if x1 > x0 else x0 + 1), (y1 if y1 > y0 else y0 + 1)
    sx = lambda x: pad + (x - x0) / (x1 - x0) * (width - 2 * pad)
    sy = lambda y: height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
           f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="12">{xlabel}</text>',
           f'<text x="15" y="{height / 2:.1f}" font-size="12" transform="rotate(-90 15 {height / 2:.1f})" '
           f'text-anchor="middle">{ylabel}</text>']
    for lab, v, y in ((f"{x0:.3g}", sx(x0), height - pad + 16), (f"{x1:.3g}", sx(x1), height - pad + 16)):
        out.append(f'<text x="{v:.1f}" y="{y}" font-size="11" text-anchor="middle">{"1e" if logx else ""}{lab}</text>')
    for lab, v in ((f"{y0:.3g}", sy(y0)), (f"{y1:.3g}", sy(y1))):
        out.append(f'<text x="{pad - 6}" y="{v + 4:.1f}" font-size="11" text-anchor="end">{"1e" if logy else ""}{lab}</text>')
    for i, (name, p) in enumerate(pts.items()):
        col = colors[i % len(colors)]
        if p:
            d = " ".join(f"{'M' if j == 0 else 'L'}{sx(a):.2f},{sy(b):.2f}" for j, (a, b) in enumerate(p))
            out.append(f'<path d="{d}" fill="none" stroke="{col}" stroke-width="2"/>')
            out.extend(f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="3" fill="{col}"/>' for a, b in p)
        out.append(f'<text x="{width - pad - 150}" y="{pad + 16 * i}" font-size="12" fill="{col}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _write(cfg, stem, header, rows, checks, extra=None, plot=None):
    os.makedirs(cfg.out_dir, exist_ok=True)
    base = os.path.join(cfg.out_dir, stem)
    with open(base + ".csv", "w") as fh:
        fh.write(csv_text(header, rows))
    if cfg.format == "json":
        rep = {"command": cfg.command, "config": asdict(cfg), "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
               "rows": [dict(zip(header, map(_json_safe, r))) for r in rows],
               "checks": [{k: _json_safe(v) for k, v in asdict(c).items()} for c in checks],
               "all_passed": all(c.passed for c in checks)}
        rep.update(extra or {})
        with open(base + ".json", "w") as fh:
            json.dump(rep, fh, indent=2, sort_keys=True)
    if cfg.format == "svg" and plot is not None:
        with open(base + ".svg", "w") as fh:
            fh.write(plot())


def _json_safe(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _print_checks(checks):
    for c in checks:
        tag = "PASS" if c.passed else "FAIL"
        print(f"[{tag}] {c.name}: observed {_fmt(c.observed)} vs {_fmt(c.bound)} {c.note}".rstrip())


def _pool_map(fn, items):
    n = int(os.environ.get("LCHS_THREADS", "1") or 1)
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


## cost-curve


def _opt_cell(arg):
    eps, mode = arg
    try:
        r = planner.optimize_cost(eps, mode)
        return r.cost, ""
    except (LchsError, ValueError, RuntimeError) as e:
        return math.nan, f"{mode}: {e}"


def default_fit():
    """Fit of the optimal bounded-polynomial degree at alpha = e over tau in {1,..,16}."""
    rows = polyfit_rows(math.e)
    a, c, _ = polyopt.fit_scaling(polyopt.fit_samples(rows), alpha=math.e)
    return a, c


def qsvt_lower(eps, a_fit, c_fit, alpha=math.e):
    return alpha * a_fit * math.log2(alpha / (c_fit * eps))


def cmd_cost_curve(cfg):
    eps_list = sorted(cfg.eps_list, reverse=True)
    a_fit, c_fit = default_fit()
    cells = [(e, m) for e in eps_list for m in (planner.FIX_21, planner.FREE_JY, planner.STRETCHED)]
    res = dict(zip(cells, _pool_map(_opt_cell, cells)))
    rows, checks = [], []
    for e in eps_list:
        closed = planner.closed_form_cost(min(e, planner.EPS_LCHS_MAX), 1.0)
        f21, jy, stretched = (res[(e, m)][0] for m in (planner.FIX_21, planner.FREE_JY, planner.STRETCHED))
        q = qsvt_lower(e, a_fit, c_fit)
        err = "; ".join(res[(e, m)][1] for m in (planner.FIX_21, planner.FREE_JY, planner.STRETCHED) if res[(e, m)][1])
        rows.append((e, closed, f21, jy, stretched, q, err))
        if e <= 1e-3 + 1e-15 and not err:
            ok = q <= jy <= f21 * (1 + 1e-9) <= closed * (1 + 1e-9)
            checks.append(Check(f"ordering qsvt <= jy <= 21 <= closed at eps={e:g}", jy, f21, ok))
        if abs(e - 1e-6) < 1e-18 and not err:
            checks.append(Check("gap cost_21/qsvt_lower at eps=1e-6", f21 / q, 4.5, f21 / q <= 4.5))
        ref = REFERENCE_COSTS[planner.FIX_21].get(_key(e))
        if ref and not err:
            d = abs(f21 / ref[0] - 1)
            checks.append(Check(f"FIX_21 cost vs reference at eps={e:g}", f21, ref[0], d <= REF_TOL, f"({100 * d:.2f}%)"))
    header = ["eps", "cost_closed_form", "cost_optimized_21", "cost_optimized_jy", "cost_stretched", "qsvt_lower", "error"]
    labels = header[1:6]

    def plot():
        xs = [r[0] for r in rows]
        return svg_plot({lab: (xs, [r[i + 1] for r in rows]) for i, lab in enumerate(labels)},
                        "cost prefactor vs eps", xlabel="log10 eps", ylabel="log10 cost")

    _write(cfg, "cost_curve", header, rows, checks, {"a_fit": a_fit, "c_fit": c_fit}, plot)
    return rows, checks


def _key(e):
    for k in REFERENCE_COSTS[planner.FIX_21]:
        if abs(math.log10(k) - math.log10(e)) < 1e-9:
            return k
    return None


## tune


def _tune_cell(arg):
    eps, mode = arg
    try:
        return planner.optimize_cost(eps, mode), ""
    except (LchsError, ValueError, RuntimeError) as e:
        return None, str(e)


def cmd_tune(cfg):
    modes = [cfg.mode] if cfg.mode else [planner.FIX_21, planner.FREE_JY]
    cells = [(e, m) for m in modes for e in sorted(cfg.eps_list, reverse=True)]
    out = _pool_map(_tune_cell, cells)
    rows, checks = [], []
    for (e, m), (r, err) in zip(cells, out):
        ref = REFERENCE_COSTS[m].get(_key(e))
        ref_cost = ref[0] if ref else math.nan
        if r is None:
            rows.append((e, m, math.nan, math.nan, math.nan, math.nan, math.nan, math.nan, math.nan, math.nan,
                         ref_cost, math.nan, False, err))
            checks.append(Check(f"{m} eps={e:g} feasible", math.nan, ref_cost, False, err))
            continue
        s = r.spec
        delta = 100.0 * (r.cost / ref_cost - 1.0) if ref else math.nan
        ok = abs(delta) <= 100 * REF_TOL if ref else True
        rows.append((e, m, r.cost, s.j, s.y, r.alpha_R, s.gamma, r.R, s.c, r.y0, ref_cost, delta, ok, ""))
        if ref:
            checks.append(Check(f"{m} cost at eps={e:g}", r.cost, ref_cost, ok, f"({delta:+.2f}%)"))
    header = ["eps", "mode", "cost", "j", "y", "alpha_R", "gamma", "R", "c", "y0", "ref_cost", "delta_pct",
              "within_tol", "error"]
    _write(cfg, "tune", header, rows, checks)
    return rows, checks


## verify


def _verify_plan(name, sched, eps, checks, rows, dense_limit=4096):
    plan = planner.make_plan(eps / 2, eps / 2, 1.0, sched.L1_norm_L())
    q = evolution.assemble_Ih(plan, sched)
    bound = plan.eps_lchs + plan.eps_quad
    checks.append(Check(f"{name}: ||I_h - U0||", q.ref_error, bound, q.ref_error <= bound))
    drift = abs(plan.alpha_Rh - plan.alpha_inf)
    db = planner.drift_bound(plan.eps_lchs, plan.eps_quad, plan.spec.c, plan.L1_norm_L)
    checks.append(Check(f"{name}: |alpha_Rh - alpha|", drift, db, drift <= db))
    if (2 * plan.M + 1) * sched.dim <= dense_limit:
        f = blockenc.build_lcu(plan, sched)
        res = blockenc.verify_block(f, q)
        checks.append(Check(f"{name}: LCU block residual", res, 1e-10, res <= 1e-10))
    else:
        res = math.nan
    u0 = np.zeros(sched.dim)
    u0[0] = 1.0
    try:
        p, rounds = blockenc.success_stats(q.I_h, u0, q.alpha_Rh)
    except LchsError:
        p, rounds = 0.0, 0
    checks.append(Check(f"{name}: success probability <= 1", p, 1.0, 0.0 <= p <= 1.0))
    rows.append((name, sched.dim, len(sched.segments), plan.R, plan.h, plan.M, q.alpha_Rh, q.ref_error, bound,
                 res, p, rounds))
    return plan, q


def cmd_verify(cfg):
    eps = cfg.eps_list[0]
    rng = np.random.default_rng(cfg.seed)
    seeds = rng.integers(0, 2**31, size=4)
    n = cfg.dims
    rows, checks = [], []
    _verify_plan("time-independent", evolution.random_schedule(n, int(seeds[0])), eps, checks, rows)
    _verify_plan("4-segment", evolution.random_schedule(n, int(seeds[1]), segments=4, t=1.0), eps, checks, rows)
    zero = evolution.CartesianSchedule.constant(np.zeros((n, n)), np.zeros((n, n)), 1.0)
    _verify_plan("L=H=0", zero, eps, checks, rows)
    neg = evolution.random_schedule(n, int(seeds[2]), shift=-0.3)
    shifted, acc = evolution.shift_to_psd(neg)
    plan, q = _verify_plan("shifted", shifted, eps, checks, rows)
    U0 = evolution.reference_U0(neg)
    scale = math.exp(-acc)
    err = float(np.linalg.norm(scale * q.I_h - U0, 2))
    bound = scale * (plan.eps_lchs + plan.eps_quad)
    checks.append(Check("shifted: ||e^{-int l0} I_h - U0(original)||", err, bound, err <= bound))
    header = ["case", "dim", "segments", "R", "h", "M", "alpha_Rh", "error", "bound", "block_residual",
              "success_prob", "amp_rounds"]
    _write(cfg, "verify", header, rows, checks)
    return rows, checks


## quad-sweep


def quad_sweep(gamma=2.0, c=1.0, R=24.0, seed=0, dims=4, inv_h=None, ref_inv_h=16.0):
    """Trapezoid error against a fine-step reference: rows (1/h, error, bound)."""
    inv_h = inv_h if inv_h is not None else [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0]
    sched = evolution.random_schedule(dims, seed)
    spec = KernelSpec.generalized(2, 1, gamma, c)
    ref = evolution.trapezoid_sum(spec, sched, R, 1.0 / ref_inv_h)
    L1 = sched.L1_norm_L()
    rows = []
    for v in inv_h:
        I = evolution.trapezoid_sum(spec, sched, R, 1.0 / v)
        rows.append((v, float(np.linalg.norm(I - ref, 2)), planner.quadrature_bound(1.0 / v, c, L1)))
    return rows


def fit_rate(rows, floor=1e-12):
    """Slope of log(error) against 1/h, skipping the first point and errors near roundoff."""
    pts = [(v, e) for v, e, _ in rows[1:] if e > floor]
    if len(pts) < 2:
        return math.nan
    x, y = np.array(pts).T
    return float(np.polyfit(x, np.log(y), 1)[0])


def cmd_quad_sweep(cfg):
    rows = quad_sweep(seed=cfg.seed, dims=min(cfg.dims, 8))
    slope = fit_rate(rows)
    checks = [Check(f"error at 1/h={v:g} below bound", e, b, e <= b) for v, e, b in rows]
    rate_ok = abs(slope / -math.pi - 1.0) <= 0.2
    rate = {"slope": slope, "target": -math.pi, "within_20pct_of_minus_pi": rate_ok,
            "ratio_to_minus_2pi": slope / (-2 * math.pi)}
    print(f"fitted slope {slope:.4f} (-pi = {-math.pi:.4f}, -2pi = {-2 * math.pi:.4f}); "
          f"rate check vs -pi: {'PASS' if rate_ok else 'FAIL'} (informational)")
    header = ["inv_h", "error", "bound"]

    def plot():
        xs = [r[0] for r in rows]
        return svg_plot({"error": (xs, [r[1] for r in rows]), "bound": (xs, [r[2] for r in rows])},
                        "trapezoid error vs 1/h", logx=False, xlabel="1/h", ylabel="log10 error")

    _write(cfg, "quad_sweep", header, rows, checks, {"rate": rate}, plot)
    return rows, checks


## polyfit

TAUS = (1, 2, 4, 8, 16)


def _sweep_cell(arg):
    tau, alpha, eps_min = arg
    step = 1 if tau < 4 else tau // 4
    return polyopt.degree_sweep(tau, alpha, range(1, 4096, step), eps_min=eps_min)


def polyfit_rows(alpha=math.e, eps_min=1e-6, taus=TAUS):
    out = _pool_map(_sweep_cell, [(t, alpha, eps_min) for t in taus])
    return [r for rs in out for r in rs]


def cmd_polyfit(cfg, alpha_sweep=False):
    eps_min = min(cfg.eps_list)
    rows = polyfit_rows(math.e, eps_min)
    a, c, rms = polyopt.fit_scaling(polyopt.fit_samples(rows, eps_min), alpha=math.e)
    last = [r for r in rows if r[0] == max(TAUS)][-1]
    apm = last[4] + last[5]
    checks = [Check("a_fit in [0.25, 0.40]", a, 0.40, 0.25 <= a <= 0.40),
              Check("alpha_plus + alpha_minus at smallest eps", apm, 1.08, abs(apm - 1.08) <= 0.05),
              Check("fit rms residual (degrees)", rms, 1.5, rms < 1.5)]
    syn = [(t, e, 0.31 * t * math.log2(math.e / (31.2 * e))) for t in TAUS for e in (1e-2, 1e-4, 1e-6)]
    sa, sc, _ = polyopt.fit_scaling(syn, alpha=math.e)
    checks.append(Check("synthetic self-test", abs(sa - 0.31) + abs(sc - 31.2) / 31.2, 1e-6,
                        abs(sa - 0.31) <= 1e-6 and abs(sc / 31.2 - 1) <= 1e-6))
    extra = {"a_fit": a, "c_fit": c, "rms": rms}
    if alpha_sweep:
        costs = {}
        for j in range(6, 12):
            al = math.exp(j / 10)
            aa, _, _ = polyopt.fit_scaling(polyopt.fit_samples(polyfit_rows(al, eps_min), eps_min), alpha=al)
            costs[j] = al * aa
        best = min(costs.values())
        extra["alpha_sweep"] = {f"e^{j / 10:.1f}": v for j, v in costs.items()}
        extra["alpha_e_excess_over_min"] = costs[10] / best - 1
        print("alpha * a_fit: " + ", ".join(f"e^{j / 10:.1f}: {v:.4f}" for j, v in costs.items()))
    print(f"a_fit = {a:.4f}, c_fit = {c:.3f}, rms = {rms:.3f}")
    header = ["tau", "alpha", "n", "eps", "alpha_plus", "alpha_minus", "rounds"]

    def plot():
        series = {}
        for t in TAUS:
            rs = [r for r in rows if r[0] == t]
            series[f"tau={t}"] = ([r[3] for r in rs], [r[2] for r in rs])
        return svg_plot(series, "degree vs eps", logy=False, xlabel="log10 eps", ylabel="degree n")

    _write(cfg, "polyfit", header, rows, checks, extra, plot)
    return rows, checks


## entry point


def build_parser():
    ap = argparse.ArgumentParser(prog="lchs", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--eps", type=float, nargs="+", default=None)
    ap.add_argument("--mode", choices=(planner.FIX_21, planner.FREE_JY), default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--dims", type=int, default=None)
    ap.add_argument("--out", default=None)
    ap.add_argument("--format", choices=FORMATS, default=None)
    ap.add_argument("--config", default=None, help="JSON file with the same keys as the options")
    ap.add_argument("--alpha-sweep", action="store_true", help="polyfit: also fit alpha in {e^0.6..e^1.1}")
    return ap


def config_from(args):
    conf = {}
    if args.config:
        with open(args.config) as fh:
            conf = json.load(fh)
    pick = lambda k, d: getattr(args, k) if getattr(args, k) is not None else conf.get(k, d)
    eps = pick("eps", [])
    eps = [eps] if isinstance(eps, (int, float)) else list(eps)
    return RunConfig(args.command, [float(e) for e in eps], pick("mode", None), int(pick("seed", 0)),
                     int(pick("dims", 8)), pick("out", "."), pick("format", "csv"))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from(args)
    except (ValueError, OSError) as e:
        print(f"lchs: {e}", file=sys.stderr)
        return 2
    fn = {"cost-curve": cmd_cost_curve, "tune": cmd_tune, "verify": cmd_verify,
          "quad-sweep": cmd_quad_sweep}.get(cfg.command)
    _, checks = fn(cfg) if fn else cmd_polyfit(cfg, args.alpha_sweep)
    _print_checks(checks)
    return 0 if all(c.passed for c in checks) else 1


if __name__ == "__main__":
    sys.exit(main())
