"""Bounded polynomial approximation of e^{-tau x}: discretized LP with exchange
refinement, degree scaling fits, alpha_pm accounting and Chebyshev truncation."""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft
import scipy.linalg as sla

from .errors import AliasingDetected, IllConditioned, LpCycling, LpInfeasible, NoConvergence

MAX_ROUNDS = 30
FINE_FACTOR = 50
LP_ITER_CAP = 10**6
BOUND_RTOL = 1e-7


def default_K(n):
    return 8 * n + 64


def cheb_nodes(K):
    """cos(pi k/(K-1)), k = 0..K-1, returned in increasing order."""
    if K < 2:
        return np.array([0.0]) if K == 1 else np.zeros(0)
    return np.cos(np.pi * np.arange(K - 1, -1, -1) / (K - 1))


def cheb_vandermonde(nodes, n):
    """V[k, j] = T_j(x_k) by the three-term recurrence."""
    x = np.asarray(nodes, dtype=float).ravel()
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise ValueError("nodes must lie in [-1, 1]")
    V = np.empty((x.size, n + 1))
    V[:, 0] = 1.0
    if n >= 1:
        V[:, 1] = x
    for j in range(2, n + 1):
        V[:, j] = 2.0 * x * V[:, j - 1] - V[:, j - 2]
    return V


def cheb_eval(coeffs, x):
    return np.polynomial.chebyshev.chebval(x, coeffs)


@dataclass
class LpGrid:
    K: int
    right_nodes: np.ndarray
    full_nodes: np.ndarray
    exchange_points: list = field(default_factory=list)

    @classmethod
    def chebyshev(cls, K):
        x = cheb_nodes(K)
        return cls(K, 0.5 * (x + 1.0), x, [])

    def add_exchange(self, pts, kind):
        """Add (x, kind) pairs, kind 'err' or 'bnd', skipping near-duplicates."""
        base = self.right_nodes if kind == "err" else self.full_nodes
        have = np.concatenate([base, [p for p, k in self.exchange_points if k == kind]])
        added = []
        for p in np.atleast_1d(pts):
            if have.size and np.min(np.abs(have - p)) <= 1e-10:
                continue
            self.exchange_points.append((float(p), kind))
            have = np.append(have, p)
            added.append(float(p))
        return added

    def err_points(self):
        return np.concatenate([self.right_nodes, [p for p, k in self.exchange_points if k == "err"]])

    def bnd_points(self):
        return np.concatenate([self.full_nodes, [p for p, k in self.exchange_points if k == "bnd"]])


@dataclass
class ChebPoly:
    degree: int
    coeffs: np.ndarray
    tau: float
    alpha: float
    eps: float
    alpha_plus: float = math.nan
    alpha_minus: float = math.nan
    rounds: int = 0
    grid_eps: float = math.nan
    n_active: int = 0
    lp: object = field(default=None, repr=False)

    def __call__(self, x):
        return cheb_eval(self.coeffs, x)


## embedded LP solver
#
# The primal is  min eps  s.t.  G x <= b  over free x = (a, eps). We run the
# revised primal simplex on its dual  min b^T y  s.t.  G^T y = e_eps * (-1), y >= 0,
# whose simplex multipliers are the primal solution. New constraints become new
# dual columns, so a basis stays feasible across exchange rounds.


class _DualLp:
    def __init__(self, m, tol=1e-12, bland_after=50):
        self.m = m
        self.rows = np.zeros((0, m))
        self.rhs = np.zeros(0)
        self.rhs_target = np.zeros(m)
        self.rhs_target[-1] = -1.0
        self.tol = tol
        self.bland_after = bland_after
        self.basis = None
        self.iterations = 0

    def add(self, G, b):
        self.rows = np.vstack([self.rows, G])
        self.rhs = np.concatenate([self.rhs, b])

    def solve(self, cap=LP_ITER_CAP):
        G, b, m = self.rows, self.rhs, self.m
        B = list(self.basis)
        lu = sla.lu_factor(G[B].T)
        yB = sla.lu_solve(lu, self.rhs_target)
        if np.any(yB < -1e-7):
            raise LpInfeasible(f"starting basis is not feasible (min weight {yB.min():.3e})")
        yB = np.maximum(yB, 0.0)
        degenerate = 0
        scale = max(1.0, float(np.max(np.abs(b))))
        while True:
            if self.iterations >= cap:
                raise LpCycling(f"simplex hit the iteration cap {cap}")
            pi = sla.lu_solve(lu, b[B], trans=1)
            d = b - G @ pi
            d[B] = 0.0
            cand = np.flatnonzero(d < -self.tol * scale)
            if cand.size == 0:
                self.basis = B
                return pi, yB
            q = int(cand[0]) if degenerate >= self.bland_after else int(np.argmin(d))
            w = sla.lu_solve(lu, G[q])
            # Harris two-pass ratio test: relax by a small feasibility tolerance,
            # then take the largest pivot among the admissible rows
            pos = np.flatnonzero(w > 1e-9 * max(1.0, float(np.max(np.abs(w)))))
            if pos.size == 0:
                raise LpInfeasible("dual unbounded, constraint set is empty")
            if degenerate >= self.bland_after:
                ratios = yB[pos] / w[pos]
                ties = pos[ratios <= float(np.min(ratios)) + 1e-14]
                r = int(min(ties, key=lambda i: B[i]))
            else:
                theta = float(np.min((yB[pos] + 1e-12) / w[pos]))
                ok = pos[yB[pos] / w[pos] <= theta]
                r = int(ok[np.argmax(w[ok])])
            rmin = max(float(yB[r] / w[r]), 0.0)
            degenerate = degenerate + 1 if rmin <= 1e-14 else 0
            yB = yB - rmin * w
            yB[r] = rmin
            yB[yB < 0] = 0.0
            B[r] = q
            lu = sla.lu_factor(G[B].T)
            self.iterations += 1
            if getattr(self,"trace",False) and self.iterations%100==0: print(self.iterations, float(b[B]@yB), float(d[q]), degenerate, np.linalg.cond(G[B]))


def _err_rows(x, n, tau):
    V = cheb_vandermonde(x, n)
    f = np.exp(-tau * x)
    one = np.ones((len(x), 1))
    G = np.vstack([np.hstack([V, -one]), np.hstack([-V, -one])])
    return G, np.concatenate([f, -f])


def _bnd_rows(x, n, alpha):
    V = cheb_vandermonde(x, n)
    z = np.zeros((len(x), 1))
    G = np.vstack([np.hstack([V, z]), np.hstack([-V, z])])
    return G, np.full(2 * len(x), float(alpha))


def solve_min_eps(tau, alpha, n, grid=None):
    """Min eps with |e^{-tau x} - p(x)| <= eps on the right nodes and |p| <= alpha on the full nodes.

    p is expanded in T_j(x) on [-1, 1]; the error constraints live on its right half.
    """
    if tau < 0 or alpha < 1 or n < 0:
        raise ValueError("need tau >= 0, alpha >= 1, n >= 0")
    grid = LpGrid.chebyshev(default_K(n)) if grid is None else grid
    if grid.K < n + 2:
        raise ValueError("grid needs K >= n + 2")
    lp = _DualLp(n + 2)
    xr = grid.err_points()
    xf = grid.bnd_points()
    G1, b1 = _err_rows(xr, n, tau)
    G2, b2 = _bnd_rows(xf, n, alpha)
    lp.add(G1, b1)
    lp.add(G2, b2)
    lp.n_err, lp.n_bnd = len(xr), len(xf)
    lp.err_x, lp.bnd_x = list(xr), list(xf)
    lp.basis = _start_basis(xr, xf, n)
    return _finish(lp, tau, alpha, n)


def _nearest_unused(pool, x, used):
    for i in np.argsort(np.abs(pool - x)):
        if int(i) not in used:
            return int(i)
    raise ValueError("not enough distinct nodes for a starting basis")


def _start_basis(xr, xf, n):
    # Alternating reference at the n+2 Chebyshev extrema of [-1, 1]: error rows
    # for points in [0, 1], bound rows for points in [-1, 0). The functional that
    # annihilates degree-n polynomials alternates in sign there, so every dual
    # weight is positive and the start is nondegenerate and well conditioned.
    Kr, Kf = len(xr), len(xf)
    ref = np.cos(np.pi * np.arange(n + 1, -1, -1) / (n + 1))
    used_r, used_f, basis = set(), set(), []
    for k, x in enumerate(ref):
        neg = k % 2 == 1
        if x >= 0.0:
            i = _nearest_unused(xr, x, used_r)
            used_r.add(i)
            basis.append(Kr + i if neg else i)
        else:
            i = _nearest_unused(xf, x, used_f)
            used_f.add(i)
            basis.append(2 * Kr + Kf + i if neg else 2 * Kr + i)
    return basis


def _finish(lp, tau, alpha, n):
    x, _ = lp.solve()
    a, eps = x[:-1].copy(), float(x[-1])
    slack = lp.rhs - lp.rows @ x
    active = int(np.sum(slack <= 1e-8))
    return ChebPoly(n, a, float(tau), float(alpha), eps, grid_eps=eps, n_active=active, lp=lp)


def _local_maxima(v):
    # interior maxima plus endpoints
    i = np.flatnonzero((v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:])) + 1
    ends = [k for k in (0, len(v) - 1) if len(v) > 1]
    return np.unique(np.concatenate([i, ends])).astype(int)


def _polish(g, x, lo, hi):
    # golden-section polish of a maximum of g on the neighbouring fine cells
    from scipy.optimize import minimize_scalar
    if hi - lo < 1e-14:
        return x
    r = minimize_scalar(lambda t: -g(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return float(r.x) if -r.fun >= g(x) else x


def _peaks(g, x, v, floor):
    """Polished local maxima of g whose scan value exceeds floor."""
    last = len(x) - 1
    return [_polish(g, x[i], x[max(i - 1, 0)], x[min(i + 1, last)]) for i in _local_maxima(v) if v[i] > floor]


def _scan(lo, hi, m):
    # cosine-clustered points resolve the narrow extrema near the endpoints
    return lo + (hi - lo) * 0.5 * (1.0 - np.cos(np.linspace(0.0, np.pi, m)))


def violations(poly, n_fine):
    """Fine-scan error on [0,1] and bound on [-1,1]: (xe, err, xb, absp)."""
    xe = _scan(0.0, 1.0, n_fine)
    err = np.abs(np.exp(-poly.tau * xe) - poly(xe))
    xb = _scan(-1.0, 1.0, n_fine)
    absp = np.abs(poly(xb))
    return xe, err, xb, absp


def certified_eps(poly, n_audit=10**5):
    """Max error on [0,1] and max |p| on [-1,1] over uniform plus clustered audit points."""
    xe = np.union1d(np.linspace(0.0, 1.0, n_audit), _scan(0.0, 1.0, n_audit))
    xb = np.union1d(np.linspace(-1.0, 1.0, n_audit), _scan(-1.0, 1.0, n_audit))
    err = np.abs(np.exp(-poly.tau * xe) - poly(xe))
    return float(np.max(err)), float(np.max(np.abs(poly(xb))))


def remez_refine(poly, grid=None, max_rounds=MAX_ROUNDS, rel_tol=1e-3):
    """Add fine-scan violation maxima as constraints and re-solve until they fall below
    rel_tol*eps on the error side and min(rel_tol*eps, BOUND_RTOL*alpha) on the bound side.

    The returned eps is the fine-scan maximum error. Raises NoConvergence
    after max_rounds.
    """
    lp = poly.lp
    n, tau, alpha = poly.degree, poly.tau, poly.alpha
    grid = grid if grid is not None else LpGrid(len(lp.err_x), np.array(lp.err_x), np.array(lp.bnd_x))
    n_fine = FINE_FACTOR * max(grid.K, default_K(n))
    cur = poly
    history = []
    for rnd in range(1, max_rounds + 1):
        xe, err, xb, absp = violations(cur, n_fine)
        ge = lambda t: abs(math.exp(-tau * t) - float(cur(t)))
        gb = lambda t: abs(float(cur(t)))
        tol = rel_tol * max(cur.grid_eps, 1e-300)
        tol_b = min(tol, BOUND_RTOL * alpha)
        # polish every near-active peak: narrow ones can sit between scan points
        pe = _peaks(ge, xe, err, 0.9 * cur.grid_eps)
        pb = _peaks(gb, xb, absp, 0.9 * alpha)
        ve = np.array([ge(t) for t in pe]) - cur.grid_eps
        vb = np.array([gb(t) for t in pb]) - alpha
        worst = max(float(np.max(ve, initial=-np.inf)) / tol, float(np.max(vb, initial=-np.inf)) / tol_b)
        history.append(worst)
        if worst <= 1.0:
            cur.eps = max(float(np.max(err)), cur.grid_eps + float(np.max(ve, initial=-np.inf)))
            cur.rounds = rnd
            cur.alpha_plus, cur.alpha_minus = alpha_pm(cur)
            return cur
        new_e = [t for t, v in zip(pe, ve) if v > tol]
        new_b = [t for t, v in zip(pb, vb) if v > tol_b]
        add_e = grid.add_exchange(new_e, "err")
        add_b = grid.add_exchange(new_b, "bnd")
        if not add_e and not add_b:
            raise NoConvergence(f"no new exchange points at round {rnd}", diagnostics={"violations": history})
        nr = len(lp.err_x)
        if add_e:
            G, b = _err_rows(np.array(add_e), n, tau)
            lp.add(G, b)
            lp.err_x.extend(add_e)
        if add_b:
            G, b = _bnd_rows(np.array(add_b), n, alpha)
            lp.add(G, b)
            lp.bnd_x.extend(add_b)
        cur = _finish(lp, tau, alpha, n)
    raise NoConvergence(f"exchange did not settle in {max_rounds} rounds",
                        diagnostics={"violations": history, "eps": cur.grid_eps})


def optimal_poly(tau, alpha, n, K=None, max_rounds=MAX_ROUNDS):
    """solve_min_eps on a Chebyshev grid followed by remez_refine."""
    grid = LpGrid.chebyshev(default_K(n) if K is None else K)
    return remez_refine(solve_min_eps(tau, alpha, n, grid), grid, max_rounds)


def degree_for_eps(tau, alpha, eps_target, cache=None):
    """Smallest n whose refined eps is at most eps_target (bracketing, then bisection)."""
    if not 0.0 < eps_target < 1.0:
        raise ValueError("eps_target must lie in (0, 1)")
    cache = {} if cache is None else cache

    def eps_of(n):
        if n not in cache:
            cache[n] = optimal_poly(tau, alpha, n).eps
        return cache[n]

    if eps_of(0) <= eps_target:
        return 0
    lo, hi = 0, 1
    while eps_of(hi) > eps_target:
        lo, hi = hi, 2 * hi
        if hi > 4096:
            raise NoConvergence("degree bracket exceeded 4096")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eps_of(mid) <= eps_target:
            hi = mid
        else:
            lo = mid
    return hi


def alpha_pm(poly, n_grid=20001):
    """(1/2) max |p'(x) +- p'(-x)| on [0,1] with p' = p/alpha."""
    x = np.linspace(0.0, 1.0, n_grid)
    p, q = poly(x) / poly.alpha, poly(-x) / poly.alpha
    return 0.5 * float(np.max(np.abs(p + q))), 0.5 * float(np.max(np.abs(p - q)))


## degree scaling


def fit_scaling(samples, alpha=math.e):
    """Least-squares fit n = a tau log2(1/(c eps')), eps' = eps/alpha. Returns (a, c, rms)."""
    s = np.asarray(samples, dtype=float)
    if s.ndim != 2 or s.shape[1] != 3 or len(s) < 8:
        raise ValueError("need at least 8 (tau, eps, n) samples")
    tau, eps, n = s.T
    if np.log10(eps.max() / eps.min()) < 2.0 - 1e-9:
        raise ValueError("samples must span at least two decades of eps")
    A = np.column_stack([tau * np.log2(alpha / eps), tau])
    if np.linalg.matrix_rank(A) < 2 or np.linalg.cond(A) > 1e12:
        raise IllConditioned("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(A, n, rcond=None)
    a = float(coef[0])
    if a <= 0:
        raise IllConditioned("fitted slope is not positive")
    c = 2.0 ** (-coef[1] / a)
    rms = float(np.sqrt(np.mean((A @ coef - n) ** 2)))
    return a, float(c), rms


def degree_sweep(tau, alpha, n_values, eps_min=1e-6, eps_max=1e-2):
    """Refined eps over a degree range; rows (tau, alpha, n, eps, alpha_plus, alpha_minus, rounds)."""
    rows = []
    for n in n_values:
        p = optimal_poly(tau, alpha, int(n))
        rows.append((tau, alpha, int(n), p.eps, p.alpha_plus, p.alpha_minus, p.rounds))
        if p.eps < eps_min:
            break
    return rows


def fit_samples(rows, eps_min=1e-6, eps_max=1e-2):
    return [(r[0], r[3], r[2]) for r in rows if eps_min <= r[3] <= eps_max]


def write_sweep_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", "alpha", "n", "eps", "alpha_plus", "alpha_minus", "rounds"])
        for r in rows:
            w.writerow([f"{r[0]:.6g}", f"{r[1]:.12g}", r[2], f"{r[3]:.9e}", f"{r[4]:.9f}", f"{r[5]:.9f}", r[6]])


## Chebyshev truncation


def _cheb_coeffs(f, N):
    k = np.arange(N)
    x = np.cos(np.pi * (k + 0.5) / N)
    y = scipy.fft.dct(np.asarray(f(x), dtype=float), type=2) / N
    y[0] *= 0.5
    return y


def cheb_truncate(handle, n, rho, M_bound):
    """Degree-n Chebyshev truncation from 4x oversampled samples and the bound 2M rho^-n/(rho-1)."""
    if rho <= 1:
        raise ValueError("rho must exceed 1")
    N = 4 * (n + 1)
    a = _cheb_coeffs(handle, N)[: n + 1]
    b = _cheb_coeffs(handle, 2 * N)[: n + 1]
    if np.max(np.abs(a - b)) > 1e-10:
        raise AliasingDetected("coefficients move when the sample count doubles")
    return a, 2.0 * M_bound * rho ** (-n) / (rho - 1.0)


def g2(k, gamma):
    """e^{-(k^2+1)/(8 gamma^2)} / sqrt(1 + k^2)."""
    k = np.asarray(k, dtype=float)
    return np.exp(-(k * k + 1.0) / (8.0 * gamma * gamma)) / np.sqrt(1.0 + k * k)


def g2_ellipse_bound(R, rho):
    """Max of |g2(R z)| over the Bernstein ellipse E_rho, valid when R y < 1, y = (rho - 1/rho)/2."""
    y = 0.5 * (rho - 1.0 / rho)
    if R * y >= 1.0:
        return math.inf
    return 1.0 / math.sqrt(1.0 - (R * y) ** 2)
