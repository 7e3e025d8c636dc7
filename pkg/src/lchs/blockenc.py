"""Matrix-level checks of the LCU block encoding, the multiplexed Mul unitary,
success probabilities and the asymmetric (Schrodingerization) encoding."""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import CapExceeded, DegenerateState, DilationError
from .evolution import lchs_weights, unitary_U
from .kernels import SQRT2PI, eval_fhat

ANCILLA_CAP = 2**14


## ancilla addressing: j <-> label, 0, 1, -1, 2, -2, ...


def label_of(j):
    return 2 * abs(j) - (1 if j > 0 else 0)


def j_of(label):
    return (label + 1) // 2 if label % 2 else -(label // 2)


def unitary_with_first_column(p):
    """Householder-based unitary whose first column is the unit vector p."""
    p = np.asarray(p, dtype=complex)
    n = p.size
    theta = p[0] / abs(p[0]) if abs(p[0]) > 0 else 1.0
    u = np.conj(theta) * p
    # reflect u onto -e0; v[0] = 1 + |p0| >= 1 avoids cancellation
    v = u.copy()
    v[0] += 1.0
    Q = np.eye(n, dtype=complex) - 2.0 * np.outer(v, v.conj()) / np.vdot(v, v).real
    return -theta * Q


@dataclass
class LcuFactors:
    prep: np.ndarray
    prep_bar: np.ndarray
    sel: list = field(repr=False)
    alpha: float
    js: np.ndarray
    coeffs: np.ndarray = field(repr=False, default=None)

    @property
    def dim(self):
        return self.sel[0].shape[0]

    def sel_matrix(self):
        """Block-diagonal sum_j |j><j| (x) U_j in label order."""
        blocks = [None] * len(self.sel)
        for j, U in zip(self.js, self.sel):
            blocks[label_of(int(j))] = U
        return sla.block_diag(*blocks)

    def label_vector(self, v):
        out = np.zeros(len(v), dtype=complex)
        for j, x in zip(self.js, v):
            out[label_of(int(j))] = x
        return out


def build_lcu(plan, sched, t=None, cap=ANCILLA_CAP):
    """Prep, Prep-bar and Sel with a_j = h fhat(h j)/sqrt(2 pi)."""
    n_anc = 2 * plan.M + 1
    if n_anc > cap:
        raise CapExceeded(f"{n_anc} ancilla labels exceed the cap {cap}")
    k, a = lchs_weights(plan)
    return factors_from_coeffs(k, a, [unitary_U(sched, t, kj) for kj in k], plan.h)


def factors_from_coeffs(k, a, units, h):
    alpha = float(np.sum(np.abs(a)))
    mag = np.sqrt(np.abs(a) / alpha)
    js = np.rint(k / h).astype(int) if h > 0 else np.zeros(len(k), dtype=int)
    return LcuFactors(mag.astype(complex), mag * np.exp(1j * np.angle(a)), units, alpha, js, a)


def lcu_block(factors):
    """Dense Prep^dag . Sel . Prep-bar on ancilla (x) system; returns the <0|.|0> block."""
    n = factors.dim
    P = unitary_with_first_column(factors.label_vector(factors.prep))
    Pb = unitary_with_first_column(factors.label_vector(factors.prep_bar))
    I = np.eye(n)
    W = np.kron(P.conj().T, I) @ factors.sel_matrix() @ np.kron(Pb, I)
    return W[:n, :n], W


def verify_block(factors, target):
    """|| alpha * block - I_h || in spectral norm. target may be a matrix or a QuadratureResult."""
    Ih = getattr(target, "I_h", target)
    block, _ = lcu_block(factors)
    return float(np.linalg.norm(factors.alpha * block - Ih, 2))


## Mul: multiplexed block encoding of (h j L + H)/(R alpha_L + alpha_H)


def dilation(A):
    """Unitary [[A, sqrt(I - A A^dag)], [sqrt(I - A^dag A), -A^dag]] of a contraction A."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    I = np.eye(n)
    top = sla.sqrtm(I - A @ A.conj().T)
    bot = sla.sqrtm(I - A.conj().T @ A)
    return np.block([[A, top], [bot, -A.conj().T]])


class _Circuit:
    """Dense gates on a tensor product of registers with given dimensions."""

    def __init__(self, dims):
        self.names = list(dims)
        self.dims = [dims[k] for k in self.names]
        self.ops = []

    def add(self, name, U, regs):
        self.ops.append((name, np.asarray(U, dtype=complex), [self.names.index(r) for r in regs]))

    def apply(self, psi, ops=None):
        # psi has shape dims + (ncols,)
        for _, U, axes in ops if ops is not None else self.ops:
            psi = _apply(U, axes, psi)
        return psi

    def total_dim(self):
        return int(np.prod(self.dims))


def _apply(U, axes, psi):
    nd = psi.ndim
    rest = [a for a in range(nd) if a not in axes]
    perm = list(axes) + rest
    t = np.transpose(psi, perm)
    shp = t.shape
    m = int(np.prod(shp[: len(axes)]))
    t = (U @ t.reshape(m, -1)).reshape(shp)
    return np.transpose(t, np.argsort(perm))


def _controlled0(U, dim_ctrl=2):
    # |0><0| (x) U + |1><1| (x) I
    n = U.shape[0]
    out = np.eye(dim_ctrl * n, dtype=complex)
    out[:n, :n] = U
    return out


def mul_constituents(L, H, alpha_L, alpha_H, R, h):
    L = np.asarray(L, dtype=complex)
    H = np.asarray(H, dtype=complex)
    n = L.shape[0]
    if np.linalg.norm(L, 2) > alpha_L * (1 + 1e-12) or np.linalg.norm(H, 2) > alpha_H * (1 + 1e-12):
        raise DilationError("block-encoding normalization below operator norm")
    M = int(round(R / h))
    if M < 1 or abs(R / h - M) > 1e-9 * M:
        raise ValueError("R/h must be a positive integer")
    alpha = R * alpha_L + alpha_H
    m1 = M + 1
    C = _Circuit({"abs": m1, "sgn": 2, "gb": m1, "a": 2, "c": 2, "d": 2, "f": 2, "sys": n})

    Ua = np.array([[math.sqrt(R * alpha_L / alpha), -math.sqrt(alpha_H / alpha)],
                   [math.sqrt(alpha_H / alpha), math.sqrt(R * alpha_L / alpha)]], dtype=complex)
    u = np.zeros(m1)
    u[1:] = 1.0 / math.sqrt(M)
    Uni = unitary_with_first_column(u)
    # comparator |a>|c>|x> -> |a>|c xor [x > a]>|x>
    Comp = np.zeros((m1 * 2 * m1,) * 2)
    for a_ in range(m1):
        for c_ in range(2):
            for x in range(m1):
                src = (a_ * 2 + c_) * m1 + x
                dst = (a_ * 2 + (c_ ^ int(x > a_))) * m1 + x
                Comp[dst, src] = 1.0
    Ur = Comp @ np.kron(np.eye(2 * m1), Uni)
    CUr = _controlled0(Ur)
    swap = np.eye(4)[[0, 2, 1, 3]]
    CSwap = _controlled0(swap)
    CZ = _controlled0(np.diag([1.0, -1.0]))
    BL = dilation(L / alpha_L)
    BH = dilation(H / alpha_H)
    Sel = sla.block_diag(BL, BH)

    C.add("U_alpha", Ua, ["a"])
    C.add("CU_r", CUr, ["a", "abs", "c", "gb"])
    C.add("CSwap", CSwap, ["a", "c", "d"])
    C.add("CZ", CZ, ["a", "sgn"])
    C.add("Sel_LH", Sel, ["a", "f", "sys"])
    C.add("CU_r_dag", CUr.conj().T, ["a", "abs", "c", "gb"])
    C.add("U_alpha_dag", Ua.conj().T, ["a"])
    return C, M, alpha, {"Uni": Uni, "Comp": Comp, "U_r": Ur, "dilation_L": BL, "dilation_H": BH}


@dataclass
class MulReport:
    max_residual: float
    residuals: dict
    blocks: dict = field(repr=False)
    constituent_unitarity: dict
    product_unitarity: float
    alpha: float
    M: int


def build_mul(L, H, alpha_L, alpha_H, R, h, full_product_limit=4096):
    """Compose Mul from explicit unitaries and check every j block against (h j L + H)/alpha."""
    C, M, alpha, extra = mul_constituents(L, H, alpha_L, alpha_H, R, h)
    n = np.asarray(L).shape[0]
    dims = C.dims
    unit = {}
    for name, U, _ in C.ops:
        unit[name] = float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2))
    for name, U in extra.items():
        if name != "Comp":
            unit[name] = float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2))
    unit["Comp"] = float(np.linalg.norm(extra["Comp"].T @ extra["Comp"] - np.eye(extra["Comp"].shape[0]), 2))

    res, blocks = {}, {}
    L = np.asarray(L, dtype=complex)
    H = np.asarray(H, dtype=complex)
    for j in range(-M, M + 1):
        psi = np.zeros(dims[:-1] + [n, n], dtype=complex)
        idx = (abs(j), int(j < 0), 0, 0, 0, 0, 0)
        psi[idx] = np.eye(n)
        out = C.apply(psi)
        B = out[idx]
        blocks[j] = B
        res[j] = float(np.linalg.norm(B - (h * j * L + H) / alpha, 2))

    D = C.total_dim()
    prod_unit = math.nan
    if D <= full_product_limit:
        psi = np.eye(D, dtype=complex).reshape(dims + [D])
        W = C.apply(psi).reshape(D, D)
        prod_unit = float(np.linalg.norm(W.conj().T @ W - np.eye(D), 2))
    return MulReport(max(res.values()), res, blocks, unit, prod_unit, alpha, M)


## success probability


def success_stats(I_h, u0, alpha):
    """p = (||I_h u0|| / alpha)^2 and ceil(pi / (4 asin sqrt p)) amplification rounds."""
    u0 = np.asarray(u0, dtype=complex)
    if abs(np.linalg.norm(u0) - 1.0) > 1e-10:
        raise ValueError("u0 must be a unit vector")
    amp = float(np.linalg.norm(np.asarray(I_h) @ u0))
    if amp < 1e-14:
        raise DegenerateState("evolved state has vanishing norm")
    p = min((amp / alpha) ** 2, 1.0)
    rounds = int(math.ceil(math.pi / (4.0 * math.asin(math.sqrt(p))) - 1e-12))
    return p, max(rounds, 1)


## asymmetric encoding with the recovery-map kernel 2/(1 - i k)


def recovery_kernel(k):
    return 2.0 / (1.0 - 1j * np.asarray(k))


@dataclass
class SchroReport:
    alpha_asym: float
    alpha_sym: float
    alpha_eff_sym: float
    residual: float


def schro_block(plan, sched, t=None, cap=ANCILLA_CAP):
    """Asymmetric LCU with left kernel 2/(1-ik) and right kernel fhat on the plan grid.

    The block reconstructs sum_j h conj(fl_j) fr_j U_j / sqrt(2 pi), i.e. the
    LCHS sum of the effective kernel 2 fhat/(1+ik). Returns alpha values of the
    asymmetric split, the symmetric split of fhat, the symmetric split of the
    effective kernel, and the block residual.
    """
    n_anc = 2 * plan.M + 1
    if n_anc > cap:
        raise CapExceeded(f"{n_anc} ancilla labels exceed the cap {cap}")
    k = plan.nodes
    h = plan.h
    fl = recovery_kernel(k)
    fr = eval_fhat(plan.spec, k.astype(complex))
    a_eff = h * np.conj(fl) * fr / SQRT2PI
    nl, nr = np.linalg.norm(fl), np.linalg.norm(fr)
    alpha_asym = float(h * nl * nr / SQRT2PI)
    units = [unitary_U(sched, t, kj) for kj in k]
    js = np.rint(k / h).astype(int)
    f = LcuFactors(fl / nl, fr / nr, units, alpha_asym, js, a_eff)
    block, _ = lcu_block(f)
    target = sum(aj * U for aj, U in zip(a_eff, units))
    resid = float(np.linalg.norm(alpha_asym * block - target, 2))
    alpha_sym = float(h * np.sum(np.abs(fr)) / SQRT2PI)
    alpha_eff = float(np.sum(np.abs(a_eff)))
    return SchroReport(alpha_asym, alpha_sym, alpha_eff, resid)
