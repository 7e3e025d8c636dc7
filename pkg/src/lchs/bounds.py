"""Error integrals of the approximate LCHS bound, their closed forms, and norm comparisons."""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NonIntegrable, PoleOnLine, PreconditionError
from .kernels import STRETCHED, SQRT2PI, abs_fhat_shifted, abs_tail_majorant
from .quad import integrate_halfline, integrate_real_line

Y0_GUARD = 1e-3


class Estimate(NamedTuple):
    value: float
    error: float

    def upper(self):
        return self.value + self.error


@dataclass(frozen=True)
class ErrorBudget:
    tail: float
    strip: float
    total: float
    y0: float
    R: float
    quad_tol: float
    tail_err: float = 0.0
    strip_err: float = 0.0

    @property
    def total_upper(self):
        return self.total + self.tail_err + self.strip_err


def _check_integrable(spec):
    if spec.family != STRETCHED and spec.j <= 1.0 and not spec.gaussian:
        raise NonIntegrable("j = 1 without the Gaussian factor decays like 1/|k|")


def _feature_scale(spec, y0):
    if spec.family == STRETCHED:
        return max(abs(1.0 - y0), 1e-3)
    s = min(abs(1.0 - y0), spec.y + y0)
    if spec.gaussian:
        s = min(s, spec.gamma)
    return max(s, 1e-3)


def _line_integral(spec, y0, lo, tol):
    # (1/sqrt(2 pi)) * 2 * int_lo^inf |fhat(k - i y0)| dk; the modulus is even in k
    f = lambda k: abs_fhat_shifted(spec, k, y0)
    maj = lambda K: abs_tail_majorant(spec, K, y0)
    share = 0.5 * tol * SQRT2PI
    val, err = integrate_halfline(f, maj, share, lo=lo, scale=_feature_scale(spec, y0))
    return Estimate(2.0 * val / SQRT2PI, 2.0 * err / SQRT2PI)


def strip_integral(spec, y0, tol=1e-12):
    """(1/sqrt(2 pi)) int |fhat(k - i y0)| dk over the real line, as (value, error)."""
    if abs(y0 - 1.0) < Y0_GUARD:
        raise PoleOnLine(f"y0 = {y0} is within {Y0_GUARD} of the pole at -i")
    if y0 <= 1.0:
        raise PreconditionError("the shifted line must pass below the pole at -i (y0 > 1)")
    _check_integrable(spec)
    return _line_integral(spec, y0, 0.0, tol)


def tail_integral(spec, R, tol=1e-12):
    """(1/sqrt(2 pi)) int_{|k|>R} |fhat(k)| dk, as (value, error)."""
    if R <= 0:
        raise PreconditionError("R must be positive")
    _check_integrable(spec)
    return _line_integral(spec, 0.0, float(R), tol)


def closed_strip_bound(gamma, c):
    if c <= 0 or c * gamma * gamma < 1.0:
        raise PreconditionError("closed strip bound needs c > 0 and c gamma^2 >= 1")
    return math.exp(c - c * c * gamma * gamma)


def closed_tail_bound(gamma, c, R):
    if gamma <= 0 or c <= 0 or R <= 0:
        raise PreconditionError("gamma, c, R must be positive")
    return 4.0 * math.exp(c) / math.pi * gamma * gamma / R**3 * math.exp(-R * R / (4.0 * gamma * gamma))


def truncation_budget(spec, R, y0, tol=1e-12):
    """Tail plus strip: a bound on ||O_R(t) - U_0(t)|| valid for any L >= 0."""
    t = tail_integral(spec, R, tol)
    s = strip_integral(spec, y0, tol)
    return ErrorBudget(t.value, s.value, t.value + s.value, y0, R, tol, t.error, s.error)


def shifted_total(budget, l0_integral):
    """Bound when L - l0(s) I >= 0: the strip term picks up e^{-y0 int l0}."""
    return budget.tail + math.exp(-budget.y0 * l0_integral) * budget.strip


def asym_norm_compare(fl, fr, tol=1e-12):
    """(int |fl fr|, ||fl||_2 ||fr||_2) over the real line for vectorized callables."""
    l1, _ = integrate_real_line(lambda k: np.abs(fl(k) * fr(k)), tol)
    nl, _ = integrate_real_line(lambda k: np.abs(fl(k)) ** 2, tol)
    nr, _ = integrate_real_line(lambda k: np.abs(fr(k)) ** 2, tol)
    return float(l1), float(math.sqrt(nl * nr))
