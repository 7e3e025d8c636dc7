"""Kernel functions in the Fourier and time domains.

The generalized family is

    fhat_{j,y}(z; gamma, c) = (y+1)^(j-1)/sqrt(2 pi) * e^{c(1-iz)} e^{-(z^2+1)/(4 gamma^2)}
                              / ((1-iz) (y+iz)^(j-1))

and gamma = INF drops the Gaussian factor exactly. The stretched-exponential
baseline kernel is (e^{2^phi}/sqrt(2 pi)) e^{-(1+iz)^phi}/(1-iz).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, InvalidSpec, PoleError

GENERALIZED = "GENERALIZED"
STRETCHED = "STRETCHED"
INF = math.inf

POLE_GUARD = 1e-12
SQRT2PI = math.sqrt(2.0 * math.pi)
_SQRTPI = math.sqrt(math.pi)


@dataclass(frozen=True)
class KernelSpec:
    family: str = GENERALIZED
    j: float = 2.0
    y: float = 1.0
    gamma: float = INF
    c: float = 0.0
    phi: float = 0.5

    def __post_init__(self):
        if self.family not in (GENERALIZED, STRETCHED):
            raise InvalidSpec(f"unknown family {self.family!r}")
        if self.family == GENERALIZED:
            if not (self.j >= 1.0 and math.isfinite(self.j)):
                raise InvalidSpec(f"j must be >= 1, got {self.j}")
            if not (self.y > 0.0 and math.isfinite(self.y)):
                raise InvalidSpec(f"y must be > 0, got {self.y}")
            if not self.gamma > 0.0 or math.isnan(self.gamma):
                raise InvalidSpec(f"gamma must be > 0, got {self.gamma}")
            if not math.isfinite(self.c):
                raise InvalidSpec(f"c must be finite, got {self.c}")
        elif not 0.0 < self.phi < 1.0:
            raise InvalidSpec(f"phi must lie in (0,1), got {self.phi}")

    @classmethod
    def generalized(cls, j=2.0, y=1.0, gamma=INF, c=0.0):
        return cls(GENERALIZED, float(j), float(y), float(gamma), float(c))

    @classmethod
    def stretched(cls, phi=0.5):
        return cls(STRETCHED, phi=float(phi))

    @property
    def gaussian(self):
        return self.family == GENERALIZED and not math.isinf(self.gamma)

    @property
    def is_f2(self):
        return self.family == GENERALIZED and self.j == 2.0 and self.y == 1.0

    def with_(self, **kw):
        return replace(self, **kw)


## erfc


def _erf_series(x):
    # erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1}/(2n+1)!!, all terms positive
    t = s = x
    n = 0
    while True:
        n += 1
        t *= 2.0 * x * x / (2 * n + 1)
        s += t
        if t <= 1e-17 * s:
            break
    return 2.0 / _SQRTPI * math.exp(-x * x) * s


def _erfcx_cf(x):
    """e^{x^2} erfc(x) for x >= 0.5 by the Laplace continued fraction (modified Lentz)."""
    tiny = 1e-300
    f = C = x
    D = 0.0
    for k in range(1, 5000):
        a = 0.5 * k
        D = x + a * D
        D = 1.0 / (D if D != 0.0 else tiny)
        C = x + a / C
        if C == 0.0:
            C = tiny
        d = C * D
        f *= d
        if abs(d - 1.0) < 1e-16:
            break
    return 1.0 / (f * _SQRTPI)


_SWITCH = 0.5


def _exp_neg_sq(x):
    # e^{-x^2} with x split so the leading square is exact
    xh = math.ldexp(math.floor(math.ldexp(x, 26 - math.frexp(x)[1])), math.frexp(x)[1] - 26) if x else 0.0
    xl = x - xh
    return math.exp(-xh * xh) * math.exp(-xl * (2.0 * xh + xl))


def erfc(x):
    """Complementary error function with relative error below 1e-14."""
    x = float(x)
    if math.isnan(x):
        return math.nan
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x < _SWITCH:
        return 1.0 - _erf_series(x) if x > 0.0 else 1.0
    if x > 27.3:
        return 0.0
    return _exp_neg_sq(x) * _erfcx_cf(x)


def _half_exp_erfc(a, u):
    # 0.5 e^a erfc(u) without overflow when a and u are both large
    if u < _SWITCH:
        return 0.5 * math.exp(a) * erfc(u)
    return 0.5 * math.exp(a - u * u) * _erfcx_cf(u)


## Fourier domain


def _check_poles(spec, z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z + 1j) < POLE_GUARD):
        raise PoleError("argument at the pole z = -i")
    if spec.family == GENERALIZED and spec.j > 1.0:
        if np.any(np.abs(z - 1j * spec.y) < POLE_GUARD):
            raise PoleError(f"argument at the pole z = {spec.y}i")
    elif spec.family == STRETCHED and np.any(np.abs(z - 1j) < POLE_GUARD):
        raise PoleError("argument at the branch point z = i")
    return z


def eval_fhat(spec, z):
    """Kernel value at complex z. Works elementwise on arrays."""
    scalar = np.ndim(z) == 0
    z = _check_poles(spec, z)
    if spec.family == STRETCHED:
        phi = spec.phi
        logv = 2.0**phi - (1.0 + 1j * z) ** phi - np.log(1.0 - 1j * z)
    else:
        jm1 = spec.j - 1.0
        logv = spec.c * (1.0 - 1j * z) - np.log(1.0 - 1j * z)
        if jm1 != 0.0:
            logv = logv + jm1 * (math.log(spec.y + 1.0) - np.log(spec.y + 1j * z))
        if spec.gaussian:
            logv = logv - (z * z + 1.0) / (4.0 * spec.gamma**2)
    out = np.exp(logv) / SQRT2PI
    return complex(out) if scalar else out


def abs_fhat_shifted(spec, k, y0=0.0):
    """|fhat(k - i y0)| for real k, from the closed-form modulus."""
    k = np.asarray(k, dtype=float)
    if spec.family == STRETCHED:
        return np.abs(eval_fhat(spec, k - 1j * y0))
    k2 = k * k
    jm1 = spec.j - 1.0
    logm = spec.c * (1.0 - y0) - 0.5 * np.log((1.0 - y0) ** 2 + k2)
    if jm1 != 0.0:
        logm = logm + jm1 * (math.log(spec.y + 1.0) - 0.5 * np.log((spec.y + y0) ** 2 + k2))
    if spec.gaussian:
        logm = logm + (y0 * y0 - k2 - 1.0) / (4.0 * spec.gamma**2)
    return np.exp(logm) / SQRT2PI


def abs_tail_majorant(spec, K, y0=0.0):
    """Upper bound on the integral of |fhat(k - i y0)| over k > K (one side).

    Uses |fhat| <= P e^{-k^2/(4 gamma^2)} / k^j for the generalized family and
    a stretched-exponential envelope for the baseline kernel. Returns inf when divergent.
    """
    if K <= 0:
        return math.inf
    if spec.family == STRETCHED:
        phi = spec.phi
        a = math.cos(0.5 * math.pi * phi)
        u0 = a * K**phi
        return math.exp(2.0**phi) / SQRT2PI * math.exp(-u0) / (phi * u0)
    j = spec.j
    logP = (j - 1.0) * math.log(spec.y + 1.0) + spec.c * (1.0 - y0) - math.log(SQRT2PI)
    if spec.gaussian:
        g2 = spec.gamma**2
        logP += (y0 * y0 - 1.0) / (4.0 * g2)
        # int_K^inf e^{-k^2/(4g^2)} k^{-j} dk <= K^{-j} * (2 g^2/K) e^{-K^2/(4g^2)}
        return _exp_or_inf(logP - j * math.log(K) + math.log(2.0 * g2 / K) - K * K / (4.0 * g2))
    if j <= 1.0:
        return math.inf
    return _exp_or_inf(logP + (1.0 - j) * math.log(K)) / (j - 1.0)


def _exp_or_inf(x):
    return math.exp(x) if x < 700.0 else math.inf


## time domain


def _f1(x, gamma):
    return _half_exp_erfc(-x, 1.0 / (2.0 * gamma) - gamma * x)


def eval_f_time(gamma, c, x):
    """f_2(x; gamma, c) = e^c [f_1(x+c) + f_1(-x-c)], f_1(x) = e^{-x} erfc(1/(2 gamma) - gamma x)/2."""
    if not (gamma > 0 and math.isfinite(gamma)):
        raise InvalidSpec("time-domain kernel needs finite gamma > 0")
    if np.ndim(x):
        return np.array([eval_f_time(gamma, c, float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
    u = float(x) + c
    return math.exp(c) * (_f1(u, gamma) + _f1(-u, gamma))


def time_gap_bound(gamma, c, x):
    """Explicit upper bound on e^{-x} - f_2(x; gamma, c) for x >= 0.

    Returns inf when gamma (x + c) <= 1/(2 gamma) and the bound does not apply.
    """
    u = x + c
    xp = gamma * u - 1.0 / (2.0 * gamma)
    if xp <= 0:
        return math.inf
    return math.exp(c - gamma * gamma * u * u - 1.0 / (4.0 * gamma * gamma)) / (2.0 * _SQRTPI * xp)


def alpha_closed(spec):
    """e^c erfc(1/(2 gamma)) for the (j, y) = (2, 1) kernel, otherwise None."""
    if not spec.is_f2:
        return None
    if math.isinf(spec.gamma):
        return math.exp(spec.c)
    return math.exp(spec.c) * erfc(1.0 / (2.0 * spec.gamma))


def residue_at_minus_i(spec, r0=1e-2, n0=64, tol=1e-10):
    """Residue of fhat at z = -i from a trapezoid rule on a small circle.

    The rule is repeated at r0/2 and the two estimates must agree within tol.
    """

    def circle(r):
        th = 2.0 * math.pi * np.arange(n0) / n0
        e = np.exp(1j * th)
        return complex(r * np.mean(eval_fhat(spec, -1j + r * e) * e))

    a = circle(r0)
    b = circle(0.5 * r0)
    if abs(a - b) > tol:
        raise ConvergenceError(f"residue estimate moved by {abs(a - b):.3e} on halving r0")
    return b
