"""Dense-matrix evolution: reference propagators, Hamiltonian-simulation unitaries,
quadrature assembly, eigenvalue shifting, Duhamel sums and the search instance."""

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .bounds import ErrorBudget, truncation_budget
from .errors import ConvergenceError, PlanMismatch
from .kernels import SQRT2PI, eval_fhat

REFINE_TOL = 1e-10


@dataclass(frozen=True)
class Segment:
    duration: float
    L: np.ndarray
    H: np.ndarray


def _herm(M, name):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square")
    return 0.5 * (M + M.conj().T)


@dataclass
class CartesianSchedule:
    """Piecewise-constant A(s) = L(s) + i H(s) on consecutive segments."""

    dim: int
    segments: list
    psd_tol: float = 1e-10

    def __post_init__(self):
        segs = []
        for s in self.segments:
            d, L, H = (s.duration, s.L, s.H) if isinstance(s, Segment) else s
            if not d > 0:
                raise ValueError("segment durations must be positive")
            L, H = _herm(L, "L"), _herm(H, "H")
            if L.shape != (self.dim, self.dim) or H.shape != (self.dim, self.dim):
                raise ValueError("segment matrix shape does not match dim")
            segs.append(Segment(float(d), L, H))
        self.segments = segs

    @classmethod
    def constant(cls, L, H, t, psd_tol=1e-10):
        L = np.asarray(L)
        return cls(L.shape[0], [(t, L, H)], psd_tol)

    @classmethod
    def from_A(cls, A, t):
        A = np.asarray(A, dtype=complex)
        return cls.constant(0.5 * (A + A.conj().T), (A - A.conj().T) / 2j, t)

    @classmethod
    def from_json(cls, obj):
        """Ingest {dim, segments: [{duration, L, H}]} with entries as [re, im] pairs."""
        if isinstance(obj, str):
            obj = json.loads(obj)
        dim = int(obj["dim"])

        def mat(rows):
            a = np.asarray(rows, dtype=float)
            if a.shape != (dim, dim, 2):
                raise ValueError(f"matrix must be {dim}x{dim} of [re, im] pairs")
            return a[..., 0] + 1j * a[..., 1]

        segs = [(float(s["duration"]), mat(s["L"]), mat(s["H"])) for s in obj["segments"]]
        return cls(dim, segs, float(obj.get("psd_tol", 1e-10)))

    def to_json(self):
        enc = lambda M: np.stack([M.real, M.imag], axis=-1).tolist()
        return {"dim": self.dim, "psd_tol": self.psd_tol,
                "segments": [{"duration": s.duration, "L": enc(s.L), "H": enc(s.H)} for s in self.segments]}

    @property
    def total_time(self):
        return float(sum(s.duration for s in self.segments))

    def L1_norm_L(self):
        return float(sum(s.duration * np.linalg.norm(s.L, 2) for s in self.segments))

    def L1_norm_H(self):
        return float(sum(s.duration * np.linalg.norm(s.H, 2) for s in self.segments))

    def min_eigs(self):
        return np.array([np.linalg.eigvalsh(s.L)[0] for s in self.segments])

    def is_psd(self):
        return bool(np.all(self.min_eigs() >= -self.psd_tol))

    def window(self, s0, s1):
        """Sub-schedule covering [s0, s1] as (duration, L, H) triples."""
        out, t = [], 0.0
        for s in self.segments:
            a, b = max(s0, t), min(s1, t + s.duration)
            if b - a > 1e-15:
                out.append((b - a, s.L, s.H))
            t += s.duration
        return out


def random_schedule(dim, seed=None, segments=1, t=1.0, norm_L=1.0, norm_H=1.0, shift=0.0):
    """Seeded schedule with L >= 0 of spectral norm norm_L (then L + shift I) and ||H|| = norm_H."""
    rng = np.random.default_rng(seed)
    segs = []
    for _ in range(segments):
        X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        L = X @ X.conj().T
        L *= norm_L / max(np.linalg.norm(L, 2), 1e-300)
        Y = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        H = Y + Y.conj().T
        H *= norm_H / max(np.linalg.norm(H, 2), 1e-300)
        segs.append((t / segments, L + shift * np.eye(dim), H))
    return CartesianSchedule(dim, segs)


## propagators


def expm(M):
    """Matrix exponential (scaling and squaring with Pade 13)."""
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise ValueError("non-finite matrix entries")
    if np.linalg.norm(M, 1) > 1e5:
        raise OverflowError("matrix norm too large for a reliable exponential")
    E = sla.expm(M)
    if not np.all(np.isfinite(E)):
        raise OverflowError("matrix exponential overflowed")
    return E


def _ordered(pieces, gen, n_sub):
    # later times act on the left
    dim = pieces[0][1].shape[0]
    U = np.eye(dim, dtype=complex)
    for d, L, H in pieces:
        step = expm(gen(L, H) * (d / n_sub))
        for _ in range(n_sub):
            U = step @ U
    return U


def _refined(pieces, gen, max_halvings=6):
    if not pieces:
        raise ValueError("empty time window")
    prev = _ordered(pieces, gen, 1)
    n = 1
    for _ in range(max_halvings):
        n *= 2
        cur = _ordered(pieces, gen, n)
        if np.linalg.norm(cur - prev, 2) < REFINE_TOL * max(1.0, np.linalg.norm(cur, 2)):
            return cur
        prev = cur
    raise ConvergenceError("substep halving did not settle")


def propagate(sched, s0, s1):
    """U_{s0}(s1) = T exp(-int_{s0}^{s1} A)."""
    if s1 <= s0:
        return np.eye(sched.dim, dtype=complex)
    return _refined(sched.window(s0, s1), lambda L, H: -(L + 1j * H))


def reference_U0(sched, t=None):
    t = sched.total_time if t is None else t
    return propagate(sched, 0.0, t)


def unitary_U(sched, t, k, refine=True):
    """T exp(-i int (k L + H)); unitary for real k, complex k allowed."""
    t = sched.total_time if t is None else t
    gen = lambda L, H: -1j * (k * L + H)
    pieces = sched.window(0.0, t)
    return _refined(pieces, gen) if refine else _ordered(pieces, gen, 1)


def lognorm_bound(sched, z, t=None):
    """Upper bound e^{Im z int ||L_+||} (Im z > 0) or e^{|Im z| int ||L_-||} on ||U(t; z)||."""
    t = sched.total_time if t is None else t
    y = float(np.imag(z))
    acc = 0.0
    for d, L, _ in sched.window(0.0, t):
        w = np.linalg.eigvalsh(L)
        acc += d * (max(w[-1], 0.0) if y > 0 else max(-w[0], 0.0))
    return math.exp(abs(y) * acc)


## quadrature


@dataclass
class QuadratureResult:
    I_h: np.ndarray
    alpha_Rh: float
    ref_error: float
    budget: ErrorBudget
    weights: np.ndarray = field(repr=False, default=None)
    nodes: np.ndarray = field(repr=False, default=None)


def lchs_weights(plan):
    """a_j = h fhat(h j)/sqrt(2 pi) on the plan's nodes."""
    k = plan.nodes
    return k, plan.h * eval_fhat(plan.spec, k.astype(complex)) / SQRT2PI


def trapezoid_sum(spec, sched, R, h, t=None):
    """sum_{|j| <= R/h} h fhat(h j) U(t; h j) / sqrt(2 pi) for any step dividing R."""
    M = int(round(R / h))
    if M < 1 or abs(R / h - M) > 1e-9 * M:
        raise ValueError("R/h must be a positive integer")
    k = h * np.arange(-M, M + 1)
    a = h * eval_fhat(spec, k.astype(complex)) / SQRT2PI
    I = np.zeros((sched.dim, sched.dim), dtype=complex)
    for kj, aj in zip(k, a):
        I += aj * unitary_U(sched, t, kj)
    return I


def assemble_Ih(plan, sched, t=None, budget=True):
    """I_h = sum_j a_j U(t; h j) and its spectral-norm distance to U_0(t)."""
    t = sched.total_time if t is None else t
    if abs(plan.L1_norm_L - sched.L1_norm_L()) > 1e-9:
        raise PlanMismatch(f"plan uses ||L||_L1 = {plan.L1_norm_L}, schedule has {sched.L1_norm_L()}")
    k, a = lchs_weights(plan)
    I = np.zeros((sched.dim, sched.dim), dtype=complex)
    for kj, aj in zip(k, a):
        I += aj * unitary_U(sched, t, kj)
    U0 = reference_U0(sched, t)
    err = float(np.linalg.norm(I - U0, 2))
    b = truncation_budget(plan.spec, plan.R, plan.y0) if budget else None
    return QuadratureResult(I, float(np.sum(np.abs(a))), err, b, a, k)


def integrate_O(spec, sched, R, t=None, panel=0.5, order=24):
    """(1/sqrt(2 pi)) int_{-R}^{R} fhat(k) U(t;k) dk by panelled Gauss-Legendre."""
    t = sched.total_time if t is None else t
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-R, R, max(2, int(math.ceil(2 * R / panel))) + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    k = (mids[:, None] + half[:, None] * x[None, :]).ravel()
    wk = (half[:, None] * w[None, :]).ravel()
    f = eval_fhat(spec, k.astype(complex)) / SQRT2PI
    O = np.zeros((sched.dim, sched.dim), dtype=complex)
    for kj, wj, fj in zip(k, wk, f):
        O += wj * fj * unitary_U(sched, t, kj, refine=False)
    return O


## shifting, inhomogeneous sums


def shift_to_psd(sched, full=False):
    """Shift each segment's L by its smallest eigenvalue l0 so that L' >= 0.

    By default only negative l0 are removed; full=True also removes positive
    ones. Returns (shifted schedule, int l0). The original propagator equals
    exp(-int l0) times the shifted one.
    """
    segs, acc = [], 0.0
    for s in sched.segments:
        l0 = float(np.linalg.eigvalsh(s.L)[0])
        if not full:
            l0 = min(l0, 0.0)
        segs.append((s.duration, s.L - l0 * np.eye(sched.dim), s.H))
        acc += l0 * s.duration
    return CartesianSchedule(sched.dim, segs, sched.psd_tol), acc


def inhomogeneous_solve(sched, t, u0, b, M):
    """U_0(t) u0 + delta sum_{j<M} U_{j delta}(t) b(j delta), delta = t/M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    u0 = np.asarray(u0, dtype=complex)
    delta = t / M
    out = reference_U0(sched, t) @ u0
    for j in range(M):
        s = j * delta
        out = out + delta * (propagate(sched, s, t) @ np.asarray(b(s), dtype=complex))
    return out


## search instance


@dataclass
class SearchInstance:
    N: int
    K: int
    delta: float
    t: float
    L: np.ndarray
    phi0: np.ndarray
    E_shift: float
    E1: float
    marked: int
    t_constant: float = 1.0
    d: int = 1

    def evolve(self):
        """Normalized e^{-t L} phi0 and the probability on the marked element."""
        w, V = np.linalg.eigh(self.L)
        psi = V @ (np.exp(-self.t * np.maximum(w, 0.0)) * (V.conj().T @ self.phi0))
        psi = psi / np.linalg.norm(psi)
        if self.d == 1:
            p = abs(psi[self.marked]) ** 2
        else:
            p = float(np.sum(np.abs(psi.reshape(self.N, self.d)[self.marked]) ** 2))
        return psi, float(p)


def search_instance(N, K, seed=None, delta=None, d=1):
    """L = -(1+delta)|x><x| - (1-delta)|phi><phi| + E(delta) I with a random marked x."""
    if N < 2 or K <= 4:
        raise ValueError("need N >= 2 and K > 4")
    rng = np.random.default_rng(seed)
    x = int(rng.integers(N))
    if delta is None:
        delta = N ** ((-1.0 + 1.0 / K) / 2.0)
    r = math.sqrt(1.0 / N - delta**2 / N + delta**2)
    E = 1.0 + r
    phi = np.full(N, 1.0 / math.sqrt(N))
    L = -(1.0 - delta) * np.outer(phi, phi) + E * np.eye(N)
    L[x, x] -= 1.0 + delta
    t = math.log(delta**2 * N) / delta
    phi0 = phi
    if d > 1:
        # same evolution in time t/d on the uniform ancilla state
        L = np.kron(L, np.ones((d, d)))
        phi0 = np.kron(phi, np.full(d, 1.0 / math.sqrt(d)))
        t = t / d
    return SearchInstance(N, K, delta, t, L, phi0, E, 2.0 * r, x, 1.0, d)
