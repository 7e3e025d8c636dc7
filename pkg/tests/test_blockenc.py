import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from lchs import blockenc as be
from lchs.errors import CapExceeded, DegenerateState, DilationError
from lchs.evolution import CartesianSchedule, assemble_Ih, random_schedule
from lchs.kernels import INF, KernelSpec
from lchs.planner import LchsPlan, make_plan


@given(st.integers(-10**6, 10**6))
def test_label_bijection(j):
    assert be.j_of(be.label_of(j)) == j
    assert be.label_of(j) >= 0


def test_label_order():
    assert [be.j_of(i) for i in range(5)] == [0, 1, -1, 2, -2]


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=1, max_size=12))
@example([1 + 0j, 2.05e-12 + 0j])
@settings(max_examples=60, deadline=None)
def test_householder_first_column(v):
    v = np.array(v)
    if np.linalg.norm(v) < 1e-6:
        return
    p = v / np.linalg.norm(v)
    Q = be.unitary_with_first_column(p)
    np.testing.assert_allclose(Q[:, 0], p, atol=1e-12)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(len(p)), atol=1e-12)


def test_lcu_block_reproduces_quadrature_sum():
    s = random_schedule(8, 0)
    p = make_plan(5e-4, 5e-4, 1.0, s.L1_norm_L())
    f = be.build_lcu(p, s)
    assert f.alpha == pytest.approx(p.alpha_Rh, rel=1e-12)
    assert be.verify_block(f, assemble_Ih(p, s)) <= 1e-10
    _, W = be.lcu_block(f)
    np.testing.assert_allclose(W.conj().T @ W, np.eye(W.shape[0]), atol=1e-10)


def test_cap_exceeded():
    s = random_schedule(2, 1)
    p = make_plan(5e-4, 5e-4, 1.0, s.L1_norm_L())
    with pytest.raises(CapExceeded):
        be.build_lcu(p, s, cap=2 * p.M)


def test_dilation_is_unitary():
    rng = np.random.default_rng(2)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    A /= 1.1 * np.linalg.norm(A, 2)
    U = be.dilation(A)
    np.testing.assert_allclose(U[:3, :3], A)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(6), atol=1e-10)


def _fixture():
    L = np.array([[0.5, 0.2], [0.2, 0.3]])
    H = np.array([[0.1, 0.4j], [-0.4j, -0.2]])
    return L, H


def test_mul_blocks_match_target():
    L, H = _fixture()
    rep = be.build_mul(L, H, 1.0, 1.0, 2.0, 1.0)
    assert rep.M == 2
    assert rep.max_residual <= 1e-12
    assert rep.product_unitarity <= 1e-12
    assert max(rep.constituent_unitarity.values()) <= 1e-10
    assert rep.alpha == pytest.approx(2.0 * 1.0 + 1.0)
    for j, B in rep.blocks.items():
        np.testing.assert_allclose(B, (j * L + H) / rep.alpha, atol=1e-12)


def test_mul_rejects_bad_inputs():
    L, H = _fixture()
    with pytest.raises(DilationError):
        be.build_mul(L, H, 0.1, 1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        be.build_mul(L, H, 1.0, 1.0, 2.0, 0.7)


def test_success_stats():
    Ih = np.diag([0.5, 0.1])
    p, r = be.success_stats(Ih, np.array([1.0, 0.0]), 1.0)
    assert p == pytest.approx(0.25)
    assert r == math.ceil(math.pi / (4 * math.asin(0.5)))
    assert be.success_stats(np.eye(2), np.array([1.0, 0.0]), 1.0) == (1.0, 1)
    with pytest.raises(DegenerateState):
        be.success_stats(np.zeros((2, 2)), np.array([1.0, 0.0]), 1.0)
    with pytest.raises(ValueError):
        be.success_stats(Ih, np.array([1.0, 1.0]), 1.0)


def test_asymmetric_block_exact_and_ratio_above_one():
    spec = KernelSpec.generalized(2, 1, INF, 0.5)
    plan = LchsPlan(spec, 20.0, 0.1, 20.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5)
    sched = CartesianSchedule.constant(np.array([[0.3]]), np.array([[0.2]]), 1.0)
    rep = be.schro_block(plan, sched)
    assert rep.residual <= 1e-10
    assert rep.alpha_eff_sym <= rep.alpha_asym * (1 + 1e-12)
    assert rep.alpha_asym / rep.alpha_sym > 1.0
