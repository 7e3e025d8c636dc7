import json
import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from lchs import evolution as ev
from lchs.bounds import truncation_budget
from lchs.errors import PlanMismatch
from lchs.kernels import KernelSpec
from lchs.planner import make_plan


def test_schedule_symmetrizes_and_validates():
    s = ev.CartesianSchedule.constant(np.array([[1.0, 2.0], [0.0, 1.0]]), np.zeros((2, 2)), 1.0)
    np.testing.assert_allclose(s.segments[0].L, [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        ev.CartesianSchedule(2, [(0.0, np.eye(2), np.eye(2))])
    with pytest.raises(ValueError):
        ev.CartesianSchedule(3, [(1.0, np.eye(2), np.eye(2))])


def test_from_A_cartesian_split():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    s = ev.CartesianSchedule.from_A(A, 1.0)
    seg = s.segments[0]
    np.testing.assert_allclose(seg.L + 1j * seg.H, A, atol=1e-14)


def test_json_round_trip():
    s = ev.random_schedule(3, 1, segments=2)
    back = ev.CartesianSchedule.from_json(json.dumps(s.to_json()))
    for a, b in zip(s.segments, back.segments):
        np.testing.assert_array_equal(a.L, b.L)
        assert a.duration == b.duration
    with pytest.raises(ValueError):
        ev.CartesianSchedule.from_json({"dim": 2, "segments": [{"duration": 1, "L": [[0, 0]], "H": [[0, 0]]}]})


def test_constant_propagator_matches_expm():
    s = ev.random_schedule(5, 2, t=1.3)
    seg = s.segments[0]
    np.testing.assert_allclose(ev.reference_U0(s), sla.expm(-1.3 * (seg.L + 1j * seg.H)), atol=1e-12)


def test_time_ordering_matches_ode():
    s = ev.random_schedule(3, 4, segments=3, t=1.5)
    U = ev.reference_U0(s)
    bounds = np.cumsum([0] + [g.duration for g in s.segments])

    def rhs(t, y):
        i = min(np.searchsorted(bounds, t, side="right") - 1, len(s.segments) - 1)
        g = s.segments[i]
        return -(g.L + 1j * g.H) @ y

    for j in range(3):
        y0 = np.eye(3, dtype=complex)[:, j]
        sol = solve_ivp(rhs, (0, 1.5), y0, rtol=1e-11, atol=1e-13, max_step=0.01)
        np.testing.assert_allclose(U[:, j], sol.y[:, -1], atol=1e-8)


@given(st.floats(-20, 20))
@settings(max_examples=20, deadline=None)
def test_unitary_for_real_k(k):
    s = ev.random_schedule(4, 5, segments=2)
    U = ev.unitary_U(s, None, k)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-10)


def test_U_at_minus_i_is_reference():
    s = ev.random_schedule(4, 6, segments=3)
    np.testing.assert_allclose(ev.unitary_U(s, None, -1j), ev.reference_U0(s), atol=1e-12)


def test_lognorm_bound_holds():
    s = ev.random_schedule(4, 7, segments=2)
    for z in (0.5 + 1.5j, 2 - 0.7j):
        assert np.linalg.norm(ev.unitary_U(s, None, z), 2) <= ev.lognorm_bound(s, z) * (1 + 1e-10)


def test_expm_guards():
    with pytest.raises(OverflowError):
        ev.expm(np.eye(2) * 1e6)
    with pytest.raises(ValueError):
        ev.expm(np.array([[np.nan]]))


def test_assemble_matches_plan_and_certificate():
    s = ev.random_schedule(4, 8)
    p = make_plan(5e-4, 5e-4, 1.0, s.L1_norm_L())
    q = ev.assemble_Ih(p, s)
    assert q.ref_error <= 1e-3
    assert q.alpha_Rh == pytest.approx(p.alpha_Rh, rel=1e-12)
    assert q.budget.total <= p.eps_lchs
    np.testing.assert_allclose(q.I_h, ev.trapezoid_sum(p.spec, s, p.R, p.h), atol=1e-14)


def test_plan_mismatch():
    s = ev.random_schedule(3, 9)
    p = make_plan(1e-3, 1e-3, 1.0, 2.0 * s.L1_norm_L())
    with pytest.raises(PlanMismatch):
        ev.assemble_Ih(p, s)


def test_truncated_integral_within_certificate():
    s = ev.random_schedule(3, 10, t=1.5)
    spec = KernelSpec.generalized(2, 1, 2.0, 1.0)
    O = ev.integrate_O(spec, s, 8.0)
    err = np.linalg.norm(O - ev.reference_U0(s), 2)
    assert err <= truncation_budget(spec, 8.0, 8.0).total


def test_shift_default_and_full():
    s = ev.random_schedule(3, 11, shift=-0.4)
    sh, acc = ev.shift_to_psd(s)
    assert sh.is_psd() and acc < 0
    np.testing.assert_allclose(math.exp(-acc) * ev.reference_U0(sh), ev.reference_U0(s), atol=1e-12)
    pos = ev.random_schedule(3, 12, shift=0.5)
    assert ev.shift_to_psd(pos)[1] == 0.0
    full, acc2 = ev.shift_to_psd(pos, full=True)
    assert acc2 > 0
    np.testing.assert_allclose(math.exp(-acc2) * ev.reference_U0(full), ev.reference_U0(pos), atol=1e-12)


def test_inhomogeneous_converges_to_exact():
    s = ev.random_schedule(3, 13, t=1.0)
    g = s.segments[0]
    A = g.L + 1j * g.H
    u0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    b = np.array([0.3, -0.2, 0.1], dtype=complex)
    exact = sla.expm(-A) @ u0 + np.linalg.solve(A, (np.eye(3) - sla.expm(-A)) @ b)
    errs = [np.linalg.norm(ev.inhomogeneous_solve(s, 1.0, u0, lambda _: b, M) - exact) for M in (20, 40, 80)]
    assert errs[2] < errs[1] < errs[0]
    assert errs[1] / errs[2] == pytest.approx(2.0, rel=0.1)
    with pytest.raises(ValueError):
        ev.inhomogeneous_solve(s, 1.0, u0, lambda _: b, 0)


@pytest.mark.parametrize("N,K", [(64, 5), (256, 6), (1024, 8)])
def test_search_instance_spectrum(N, K):
    inst = ev.search_instance(N, K, seed=1)
    w = np.linalg.eigvalsh(inst.L)
    d = N ** ((-1 + 1 / K) / 2)
    r = math.sqrt(1 / N - d * d / N + d * d)
    assert abs(w[0]) <= 1e-10
    assert abs(w[1] - 2 * r) <= 1e-10
    assert inst.E1 == pytest.approx(2 * r, abs=1e-15)


def test_search_amplification():
    inst = ev.search_instance(1024, 8, seed=0)
    _, p = inst.evolve()
    assert p >= 0.5


def test_search_instance_validates():
    with pytest.raises(ValueError):
        ev.search_instance(1, 8)
    with pytest.raises(ValueError):
        ev.search_instance(64, 4)


def test_search_instance_delta_override():
    inst = ev.search_instance(4, 8, seed=0, delta=0.1)
    w = np.linalg.eigvalsh(inst.L)
    assert inst.E_shift == pytest.approx(1 + math.sqrt(0.2575), abs=1e-12)
    assert abs(w[0]) <= 1e-12
    assert w[1] == pytest.approx(2 * math.sqrt(0.2575), abs=1e-12)
    assert w[1] == pytest.approx(1.014889, abs=1e-6)
