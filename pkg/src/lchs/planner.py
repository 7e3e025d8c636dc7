"""Closed-form LCHS parameters, step sizes, discrete normalization and the cost optimizer."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from .bounds import Y0_GUARD, strip_integral, tail_integral
from .errors import Infeasible, LchsError, PreconditionError, RangeError
from .kernels import INF, SQRT2PI, KernelSpec, abs_fhat_shifted, abs_tail_majorant, alpha_closed
from .quad import integrate_halfline

EPS_LCHS_MAX = 0.9027
EPS_QUAD_MAX = 4.0 / 15.0
FIX_21 = "FIX_21"
FREE_JY = "FREE_JY"
STRETCHED = "STRETCHED"


@dataclass(frozen=True)
class LchsPlan:
    spec: KernelSpec
    R: float
    h: float
    y0: float
    eps_lchs: float
    eps_quad: float
    alpha_inf: float
    alpha_R: float
    alpha_Rh: float
    L1_norm_L: float

    @property
    def M(self):
        return int(round(self.R / self.h))

    @property
    def nodes(self):
        return self.h * np.arange(-self.M, self.M + 1)


@dataclass
class CostReport:
    eps: float
    spec: KernelSpec
    R: float
    y0: float
    alpha_R: float
    cost: float
    iterations: int
    feasible: bool
    strip: float = math.nan
    tail: float = math.nan
    history: list = field(default_factory=list, repr=False)


## closed forms


def select_params(eps_lchs, c):
    """gamma = (1/c) sqrt(c + ln((1 + 1/(2 pi))/eps)), R = 2 c gamma^2."""
    if not 0.0 < eps_lchs <= EPS_LCHS_MAX:
        raise RangeError(f"eps_lchs must lie in (0, {EPS_LCHS_MAX}]")
    if c <= 0:
        raise RangeError("c must be positive")
    gamma = math.sqrt(c + math.log((1.0 + 1.0 / (2.0 * math.pi)) / eps_lchs)) / c
    return gamma, 2.0 * c * gamma * gamma


def stepsize_bound(eps_quad, c, L1_norm):
    if not 0.0 < eps_quad <= EPS_QUAD_MAX:
        raise RangeError(f"eps_quad must lie in (0, 4/15]")
    if L1_norm < 0:
        raise RangeError("L1 norm must be nonnegative")
    return math.pi / (0.5 * L1_norm + math.log(64.0 * math.exp(1.5 * c) / (15.0 * eps_quad)))


def select_stepsize(eps_quad, c, L1_norm, R=None):
    """Largest h below the step bound with R/h an integer (rounding only shrinks h)."""
    hb = stepsize_bound(eps_quad, c, L1_norm)
    if R is None:
        return hb
    return R / math.ceil(R / hb * (1.0 - 1e-15))


def quadrature_bound(h, c, L1_norm):
    """4 e^{||L||/2 + 3c/2} / (e^{pi/h} - 1) on the trapezoid error at step h."""
    return 4.0 * math.exp(0.5 * L1_norm + 1.5 * c) / math.expm1(math.pi / h)


def closed_form_cost(eps, c=1.0):
    """alpha * R for the (2,1) kernel with the closed-form gamma and R at the given c."""
    gamma, R = select_params(eps, c)
    return alpha_closed(KernelSpec.generalized(2, 1, gamma, c)) * R


def alpha_discrete(spec, R, h):
    """(h/sqrt(2 pi)) sum_{|j| <= R/h} |fhat(h j)|."""
    M = int(round(R / h))
    if M < 0 or abs(R / h - M) > 1e-9 * max(M, 1):
        raise PreconditionError("R/h must be an integer")
    k = h * np.arange(-M, M + 1)
    return float(h * np.sum(abs_fhat_shifted(spec, k)) / SQRT2PI)


def drift_bound(eps_lchs, eps_quad, c, L1_norm):
    return eps_lchs / (1.0 + 2.0 * math.pi) + eps_quad * math.exp(-0.5 * (L1_norm + c))


def alpha_norm(spec, tol=1e-13):
    """(1/sqrt(2 pi)) ||fhat||_{L1} on the real line."""
    a = alpha_closed(spec)
    if a is not None:
        return a
    val, _ = integrate_halfline(lambda k: abs_fhat_shifted(spec, k),
                                lambda K: abs_tail_majorant(spec, K), tol * SQRT2PI)
    return 2.0 * val / SQRT2PI


def make_plan(eps_lchs, eps_quad, c, L1_norm):
    """Plan for the (2,1) kernel with closed-form gamma, R, y0 = 2 c gamma^2 and step h."""
    gamma, R = select_params(eps_lchs, c)
    h = select_stepsize(eps_quad, c, L1_norm, R)
    spec = KernelSpec.generalized(2, 1, gamma, c)
    ainf = alpha_closed(spec)
    return LchsPlan(spec, R, h, R, eps_lchs, eps_quad, ainf,
                    ainf - tail_integral(spec, R).value, alpha_discrete(spec, R, h), L1_norm)


## numerical cost optimization


def _safe_strip(spec, y0):
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            v = strip_integral(spec, y0, tol=1e-14).value
    except (OverflowError, ArithmeticError, LchsError):
        return math.inf
    return v if math.isfinite(v) else math.inf


def best_y0(spec, y_max=400.0):
    """Strip depth minimizing the shifted-line integral: log grid then bounded Brent."""
    grid = 1.0 + np.geomspace(2 * Y0_GUARD, y_max, 48)
    vals = np.array([_safe_strip(spec, y) for y in grid])
    i = int(np.argmin(vals))
    if not math.isfinite(vals[i]):
        return grid[i], math.inf
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if hi - lo < 1e-12:
        return grid[i], vals[i]
    r = minimize_scalar(lambda y: _safe_strip(spec, y), bounds=(lo, hi), method="bounded",
                        options={"xatol": 1e-6 * hi})
    if r.fun < vals[i]:
        return float(r.x), float(r.fun)
    return float(grid[i]), float(vals[i])


def radius_for_tail(spec, target, tol=1e-14):
    """R with tail_integral(spec, R) = target, by bracketing and Brent on log-tail."""
    f = lambda R: math.log(tail_integral(spec, R, tol).value) - math.log(target)
    lo, hi = 1e-3, 1.0
    while f(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e6:
            raise Infeasible("tail never drops below the target")
    if f(lo) < 0:
        return lo
    return brentq(f, lo, hi, xtol=1e-12, rtol=1e-12)


def cost_at(spec, eps):
    """Cost alpha_R * R with the equality tail + strip = eps. Returns a CostReport."""
    y0, strip = best_y0(spec)
    if not strip < eps:
        return CostReport(eps, spec, math.nan, y0, math.nan, math.inf, 0, False, strip)
    target = eps - strip
    try:
        R = radius_for_tail(spec, target)
    except Infeasible:
        return CostReport(eps, spec, math.nan, y0, math.nan, math.inf, 0, False, strip)
    aR = alpha_norm(spec) - target
    return CostReport(eps, spec, R, y0, aR, aR * R, 0, True, strip, target)


def _seeds(eps, mode):
    L = math.log10(1.0 / eps)
    if mode == FIX_21:
        g2, _ = select_params(min(eps, EPS_LCHS_MAX), 1.0)
        return [
            (1.5 + 0.27 * L, min(0.55 + 0.08 * L, 1.05)),
            (g2, 1.0),
            (0.8 * g2, 0.8),
            (1.3 + 0.3 * L, 0.7),
            (2.0 + 0.2 * L, 0.95),
        ]
    return [
        (1.0 + 2.7 * L**1.1, 1.05 * L**1.27, -0.2 * L**0.45),
        (1.0 + 2.3 * L**1.1, 0.9 * L**1.27, -0.17 * L**0.45),
        (1.0 + 3.1 * L**1.1, 1.2 * L**1.27, -0.23 * L**0.45),
        (2.0 + 2.0 * L, 1.0 + 1.5 * L, -0.3),
        (3.0 + 1.5 * L, 0.5 + L, -0.15),
    ]


def _spec_from(mode, p):
    if mode == FIX_21:
        return KernelSpec.generalized(2, 1, math.exp(p[0]), p[1])
    if mode == "FREE_JYG":
        return KernelSpec.generalized(1.0 + math.exp(p[0]), math.exp(p[1]), math.exp(p[3]), p[2])
    return KernelSpec.generalized(1.0 + math.exp(p[0]), math.exp(p[1]), INF, p[2])


def _to_params(mode, seed):
    if mode == FIX_21:
        return np.array([math.log(seed[0]), seed[1]])
    return np.array([math.log(max(seed[0] - 1.0, 1e-3)), math.log(seed[1]), seed[2]])


def _nelder_mead(mode, eps, x0, maxiter):
    best = {"rep": None}

    def obj(p):
        try:
            rep = cost_at(_spec_from(mode, p), eps)
        except (ValueError, ArithmeticError, RuntimeError):
            return 1e6
        if not rep.feasible:
            return 1e6 + rep.strip if math.isfinite(rep.strip) else 1e7
        if best["rep"] is None or rep.cost < best["rep"].cost:
            best["rep"] = rep
        return rep.cost

    r = minimize(obj, x0, method="Nelder-Mead",
                 options={"maxiter": maxiter, "xatol": 1e-5, "fatol": 1e-7, "adaptive": len(x0) > 2})
    return best["rep"], r.nit


def optimize_cost(eps, mode=FIX_21, starts=5, maxiter=400, phi=0.5):
    """Minimize alpha_R * R subject to tail + strip = eps.

    FIX_21 searches (gamma, c) for the (2,1) kernel. FREE_JY searches (j, y, c)
    with the Gaussian dropped and then polishes (j, y, c, gamma) from the best
    of that and the FIX_21 optimum, so its result never exceeds FIX_21's.
    STRETCHED has no free kernel parameters and optimizes only y0 and R.
    """
    if not 1e-10 <= eps <= 1e-1 + 1e-15:
        raise RangeError("eps must lie in [1e-10, 1e-1]")
    if mode == STRETCHED:
        rep = cost_at(KernelSpec.stretched(phi), eps)
        rep.iterations = 1
        return rep
    if mode not in (FIX_21, FREE_JY):
        raise ValueError(f"unknown mode {mode!r}")
    best, iters = None, 0
    for seed in _seeds(eps, mode)[:starts]:
        rep, nit = _nelder_mead(mode, eps, _to_params(mode, seed), maxiter)
        iters += nit
        if rep is not None and (best is None or rep.cost < best.cost):
            best = rep
    if mode == FREE_JY:
        fix = optimize_cost(eps, FIX_21, starts=2, maxiter=maxiter)
        cands = [r for r in (best, fix) if r is not None and r.feasible]
        if cands:
            base = min(cands, key=lambda r: r.cost)
            s = base.spec
            g = s.gamma if math.isfinite(s.gamma) else 50.0
            x0 = np.array([math.log(s.j - 1.0 if s.j > 1.0 + 1e-3 else 1e-3), math.log(s.y), s.c, math.log(g)])
            rep, nit = _nelder_mead("FREE_JYG", eps, x0, maxiter)
            iters += nit + fix.iterations
            for r in (rep, fix):
                if r is not None and r.feasible and (best is None or r.cost < best.cost):
                    best = r
    if best is None:
        raise Infeasible(f"no start reached strip < eps at eps = {eps}")
    best.iterations = iters
    return best
