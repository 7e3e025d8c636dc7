import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from lchs import polyopt as po
from lchs.errors import AliasingDetected, IllConditioned

E = math.e


## Chebyshev basics


def test_nodes_ascending_and_endpoints():
    x = po.cheb_nodes(5)
    np.testing.assert_allclose(x, [-1, -math.sqrt(0.5), 0, math.sqrt(0.5), 1], atol=1e-15)
    assert po.cheb_nodes(1).tolist() == [0.0]


def test_vandermonde_small_example():
    V = po.cheb_vandermonde([-1.0, 0.0, 0.5, 1.0], 3)
    np.testing.assert_allclose(V, [[1, -1, 1, -1], [1, 0, -1, 0], [1, 0.5, -0.5, -1], [1, 1, 1, 1]], atol=1e-15)
    with pytest.raises(ValueError):
        po.cheb_vandermonde([1.1], 2)


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=20), st.integers(0, 40))
@settings(max_examples=50, deadline=None)
def test_vandermonde_matches_numpy(x, n):
    np.testing.assert_allclose(po.cheb_vandermonde(x, n), np.polynomial.chebyshev.chebvander(x, n), atol=1e-12)


## LP


def _highs(tau, alpha, n, K):
    x = po.cheb_nodes(K)
    xr = 0.5 * (x + 1)
    Vr = po.cheb_vandermonde(xr, n)
    Vf = po.cheb_vandermonde(x, n)
    f = np.exp(-tau * xr)
    one_r = np.ones((len(xr), 1))
    zero_f = np.zeros((len(x), 1))
    A = np.vstack([np.hstack([Vr, -one_r]), np.hstack([-Vr, -one_r]), np.hstack([Vf, zero_f]), np.hstack([-Vf, zero_f])])
    b = np.concatenate([f, -f, alpha * np.ones(len(x)), alpha * np.ones(len(x))])
    c = np.zeros(n + 2)
    c[-1] = 1
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * (n + 2), method="highs")
    return res.fun


@pytest.mark.parametrize("tau,n", [(1, 2), (2, 5), (4, 10), (8, 15), (16, 20)])
def test_lp_matches_highs(tau, n):
    K = po.default_K(n)
    p = po.solve_min_eps(tau, E, n)
    assert p.grid_eps == pytest.approx(_highs(tau, E, n, K), rel=1e-8, abs=1e-14)


def test_tau_zero_is_exact():
    p = po.solve_min_eps(0.0, E, 0)
    assert p.grid_eps <= 1e-14
    assert p(0.3) == pytest.approx(1.0)


def test_lp_solution_feasible_and_active_set():
    p = po.solve_min_eps(8.0, E, 12)
    xr = 0.5 * (po.cheb_nodes(po.default_K(12)) + 1)
    assert np.max(np.abs(np.exp(-8 * xr) - p(xr))) <= p.grid_eps * (1 + 1e-9)
    assert np.max(np.abs(p(po.cheb_nodes(po.default_K(12))))) <= E * (1 + 1e-12)
    assert p.n_active >= 12 + 2 - 1


def test_lp_monotone_in_degree():
    eps = [po.solve_min_eps(8.0, E, n).grid_eps for n in range(2, 16)]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(eps, eps[1:]))


def test_lp_validates():
    with pytest.raises(ValueError):
        po.solve_min_eps(-1, E, 3)
    with pytest.raises(ValueError):
        po.solve_min_eps(1, 0.5, 3)
    with pytest.raises(ValueError):
        po.solve_min_eps(1, E, 10, po.LpGrid.chebyshev(5))


def test_finer_grid_never_decreases_grid_eps():
    # more constraints can only raise the optimum (nested Chebyshev-Lobatto grids)
    a = po.solve_min_eps(8.0, E, 12, po.LpGrid.chebyshev(41)).grid_eps
    b = po.solve_min_eps(8.0, E, 12, po.LpGrid.chebyshev(81)).grid_eps
    assert b >= a * (1 - 1e-12)


## exchange refinement


def test_refinement_from_coarse_grid_matches_direct():
    coarse = po.LpGrid.chebyshev(40)
    p = po.remez_refine(po.solve_min_eps(8.0, E, 20, coarse), coarse)
    q = po.optimal_poly(8.0, E, 20)
    assert p.eps == pytest.approx(q.eps, rel=1e-3)


@pytest.mark.parametrize("tau,n", [(1, 3), (4, 12), (16, 40)])
def test_refined_poly_is_certified(tau, n):
    p = po.optimal_poly(tau, E, n)
    err, pmax = po.certified_eps(p)
    assert err <= 1.001 * p.eps
    assert pmax <= E * (1 + 1e-6)
    assert p.eps >= p.grid_eps * (1 - 1e-12)


def test_degree_for_eps():
    assert po.degree_for_eps(1.0, E, 1e-2) == 2
    cache = {}
    n = po.degree_for_eps(16.0, E, 1e-4, cache)
    assert cache[n] <= 1e-4 < cache[n - 1]
    with pytest.raises(ValueError):
        po.degree_for_eps(1.0, E, 0.0)


class _Fixed:
    def __init__(self, coeffs, alpha):
        self.coeffs, self.alpha = np.asarray(coeffs, float), alpha

    def __call__(self, x):
        return po.cheb_eval(self.coeffs, x)


def test_alpha_pm_examples():
    assert po.alpha_pm(_Fixed([0, 1], 1.0)) == pytest.approx((0.0, 1.0))
    ap, am = po.alpha_pm(_Fixed([0.2, 0, 0.5], 2.0))
    assert am == 0.0
    assert ap == pytest.approx(0.7 / 2.0)


def test_refined_alpha_pm_sum_near_one():
    p = po.optimal_poly(8.0, E, 30)
    assert 0.5 <= p.alpha_plus + p.alpha_minus <= 2.0


## fitting


def test_fit_scaling_recovers_synthetic_law():
    a, c = 0.3, 10.0
    samples = [(tau, eps, a * tau * math.log2(E / (c * eps))) for tau in (1, 2, 4, 8) for eps in (1e-2, 1e-4, 1e-6)]
    fa, fc, rms = po.fit_scaling(samples)
    assert fa == pytest.approx(a, rel=1e-10)
    assert fc == pytest.approx(c, rel=1e-8)
    assert rms <= 1e-10


def test_fit_scaling_errors():
    with pytest.raises(ValueError):
        po.fit_scaling([(1, 1e-3, 5)] * 7)
    with pytest.raises(ValueError):
        po.fit_scaling([(t, e, 5) for t in (1, 2, 4, 8) for e in (1e-3, 2e-3)])
    with pytest.raises(IllConditioned):
        po.fit_scaling([(1.0, e, 5.0) for e in np.logspace(-2, -6, 10)])


## Chebyshev truncation


def test_truncation_of_polynomial_is_exact():
    T5 = lambda x: np.cos(5 * np.arccos(x))
    a, bound = po.cheb_truncate(T5, 8, 2.0, 1.0)
    want = np.zeros(9)
    want[5] = 1
    np.testing.assert_allclose(a, want, atol=1e-14)
    with pytest.raises(ValueError):
        po.cheb_truncate(T5, 8, 1.0, 1.0)


@pytest.mark.parametrize("n", [60, 90, 120])
def test_g2_truncation_within_ellipse_bound(n):
    R, gamma = 10.0, 3.0
    y = 0.5 / R
    rho = y + math.sqrt(y * y + 1)
    M = po.g2_ellipse_bound(R, rho)
    assert M == pytest.approx(math.sqrt(4 / 3))
    f = lambda x: po.g2(R * x, gamma)
    a, bound = po.cheb_truncate(f, n, rho, M)
    x = np.linspace(-1, 1, 20001)
    assert np.max(np.abs(f(x) - po.cheb_eval(a, x))) <= bound


def test_aliasing_detected_when_undersampled():
    with pytest.raises(AliasingDetected):
        po.cheb_truncate(lambda x: po.g2(10 * x, 3.0), 10, 1.05, 1.0)


def test_required_degree_grows_linearly_in_R():
    def need(R, tol=1e-8):
        f = lambda x: po.g2(R * x, 1e6)
        x = np.linspace(-1, 1, 40001)
        for n in range(8, 5000, 8):
            try:
                a, _ = po.cheb_truncate(f, n, 1.5, 1.0)
            except AliasingDetected:
                continue
            if np.max(np.abs(f(x) - po.cheb_eval(a, x))) <= tol:
                return n
        raise AssertionError("no degree found")

    n10, n20, n40 = need(10.0), need(20.0), need(40.0)
    assert n20 / n10 == pytest.approx(2.0, rel=0.2)
    assert n40 / n20 == pytest.approx(2.0, rel=0.2)
