"""Witness-based entanglement measures: closed forms and SDP optimizations.

Every SDP-backed value is reported from a rescaled, certifiably feasible
witness, so values never exceed the true optimum; quoted tolerance 1e-6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    Cut,
    HermitianMatrix,
    SystemShape,
    _pt_array,
    _ptrace_array,
    eig_hermitian,
    hs_inner,
    partial_transpose,
)
from .sdp import HermitianSdp
from .states import DensityMatrix
from .witnesses import (
    DECOMPOSABLE_BIPARTITE,
    DECOMPOSABLE_MULTI,
    DPS2_CERTIFIED,
    OP_LEQ_I,
    SSR_DIAGONAL,
    TRACE_EQUALS_D,
    MixingCertificate,
    Witness,
)

SDP_TOL = 1e-6
NEG_EIG_CUT = -1e-10
DPS2_DIM_CAP = 9


@dataclass
class MeasureResult:
    value: float
    tolerance: float
    witness: Witness | None = None
    certificate: MixingCertificate | None = None


def _to_density(mat: np.ndarray, shape: SystemShape) -> DensityMatrix:
    """Clip solver-level negative eigenvalues and renormalize the trace."""
    w, v = np.linalg.eigh((mat + mat.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    tr = w.sum()
    if tr <= 1e-9:
        return DensityMatrix(np.eye(mat.shape[0]) / mat.shape[0], shape)
    return DensityMatrix((v * (w / tr)) @ v.conj().T, shape)


def _neg_decomposition(rho: DensityMatrix, cut: Cut):
    shape = rho.require_shape()
    cut.validate(shape)
    rt = partial_transpose(rho, cut)
    w, v = eig_hermitian(rt)
    neg = w < NEG_EIG_CUT
    value = float(-w[neg].sum())
    vn = v[:, neg]
    proj = vn @ vn.conj().T
    return value, HermitianMatrix(proj, shape)


def negativity(rho: DensityMatrix, cut: Cut) -> MeasureResult:
    """Sum of |negative eigenvalues| of the partial transpose.

    The witness is the partially transposed projector onto the negative
    eigenspace; it reproduces the value exactly.
    """
    value, proj = _neg_decomposition(rho, cut)
    witness = Witness(
        op=partial_transpose(proj, cut),
        kind=DECOMPOSABLE_BIPARTITE,
        bounds=(math.inf, math.inf),
        parts={"P": None, "Q": [proj]},
        cuts=[cut],
    )
    return MeasureResult(value=value, tolerance=1e-12, witness=witness)


def rg_ppt_closed(rho: DensityMatrix, cut: Cut) -> MeasureResult:
    """Certified robustness lower bound from the negative-eigenspace witness.

    Scales that projector witness to satisfy W <= I and evaluates it:
    value = negativity / lambda_max(proj^{T_cut}). Two eigendecompositions,
    no SDP.
    """
    nval, proj = _neg_decomposition(rho, cut)
    shape = rho.require_shape()
    if nval == 0.0:
        zero = HermitianMatrix(np.zeros_like(rho.mat), shape)
        w = Witness(op=zero, kind=DECOMPOSABLE_BIPARTITE, bounds=(math.inf, 1.0),
                    parts={"P": None, "Q": [zero]}, cuts=[cut],
                    trace_norm_choice=OP_LEQ_I)
        return MeasureResult(value=0.0, tolerance=1e-12, witness=w)
    op = partial_transpose(proj, cut)
    lam = float(np.linalg.eigvalsh(op.mat)[-1])
    witness = Witness(
        op=HermitianMatrix(op.mat / lam, shape),
        kind=DECOMPOSABLE_BIPARTITE,
        bounds=(math.inf, 1.0),
        parts={"P": None, "Q": [HermitianMatrix(proj.mat / lam, shape)]},
        cuts=[cut],
        trace_norm_choice=OP_LEQ_I,
    )
    return MeasureResult(value=nval / lam, tolerance=1e-12, witness=witness)


def _check_schmidt(cs) -> np.ndarray:
    c = np.asarray(cs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("schmidt coefficients must form a nonempty vector")
    if np.any(c < -1e-12) or np.any(np.diff(c) > 1e-10):
        raise ValueError("schmidt coefficients must be nonnegative and descending")
    if abs(np.sum(c * c) - 1.0) > 1e-8:
        raise ValueError("schmidt coefficients must have unit square sum")
    return c


def pure_rg(schmidt) -> float:
    """(sum of coefficients)^2 - 1 for a pure bipartite state."""
    c = _check_schmidt(schmidt)
    return float(np.sum(c) ** 2 - 1.0)


def pure_rr(schmidt) -> float:
    """Product of the two largest coefficients (0 for product states)."""
    c = _check_schmidt(schmidt)
    return float(c[0] * c[1]) if c.size > 1 else 0.0


def isotropic_e_n1(d: int, p: float, n: float) -> float:
    """Closed form for the n:1 family on isotropic states.

    max{0, min(n/(d-1), 1) * (d p + (1-p)/d - 1)}: linear growth in n up
    to n = d-1, constant beyond.
    """
    if d < 2 or not 0.0 <= p <= 1.0 or n < 0:
        raise ValueError("need d >= 2, p in [0,1], n >= 0")
    slope = min(n / (d - 1), 1.0)
    return max(0.0, slope * (d * p + (1.0 - p) / d - 1.0))


def _as_cut_list(cuts) -> list:
    if isinstance(cuts, Cut):
        return [cuts]
    return list(cuts)


def e_nm_ppt(rho: DensityMatrix, cuts, n: float, m: float) -> MeasureResult:
    """Optimal decomposable witness with bound box -nI <= W <= mI.

    value = max{0, -min Tr(W rho)} over W = P + sum_c Q_c^{T_c}, all
    parts psd. An infinite bound drops its constraint (and P, which no
    longer helps, when n is infinite). n=inf, m=1 is the PPT generalized
    robustness; m=inf gives n times the PPT best-separable-approximation
    weight. The mixing certificate comes from the SDP duals.
    """
    shape = rho.require_shape()
    cut_list = _as_cut_list(cuts)
    if not cut_list:
        raise ValueError("need at least one cut")
    for c in cut_list:
        c.validate(shape)
    n = float(n)
    m = float(m)
    if math.isinf(n) and math.isinf(m):
        raise ValueError("n and m cannot both be infinite")
    if n < 0 or m <= 0:
        raise ValueError("need n >= 0 and m > 0")
    dims = shape.local_dims
    dd = shape.total_dim
    eye = np.eye(dd)

    if n == 0.0:
        # nonnegative operators detect nothing
        zero = HermitianMatrix(np.zeros((dd, dd)), shape)
        w = Witness(op=zero, kind=_decomp_kind(cut_list), bounds=(n, m),
                    parts={"P": zero, "Q": [zero] * len(cut_list)}, cuts=cut_list)
        cert = MixingCertificate(
            0.0, 0.0, _to_density(rho.mat, shape),
            _to_density(eye, shape), _to_density(eye, shape))
        return MeasureResult(0.0, SDP_TOL, w, cert)

    hs = HermitianSdp()
    has_p = math.isfinite(n)
    if has_p:
        hs.add_psd_var("P", dd)
    qnames = []
    for i in range(len(cut_list)):
        qnames.append(f"Q{i}")
        hs.add_psd_var(f"Q{i}", dd)
    if math.isfinite(m):
        hs.add_psd_var("S", dd)
    if math.isfinite(n):
        hs.add_psd_var("T", dd)

    cost = {}
    if has_p:
        cost["P"] = rho.mat
    for name, c in zip(qnames, cut_list):
        cost[name] = _pt_array(rho.mat, dims, c.party_set)
    hs.set_cost(cost)

    def pt_adj(c):
        return lambda e: _pt_array(e, dims, c.party_set)

    if math.isfinite(m):
        terms = {"S": lambda e: e}
        if has_p:
            terms["P"] = lambda e: e
        for name, c in zip(qnames, cut_list):
            terms[name] = pt_adj(c)
        hs.add_matrix_equality("m-bound", terms, m * eye)
    if math.isfinite(n):
        terms = {"T": lambda e: e, "P": lambda e: -e}
        for name, c in zip(qnames, cut_list):
            adj = pt_adj(c)
            terms[name] = (lambda f: (lambda e: -f(e)))(adj)
        hs.add_matrix_equality("n-bound", terms, n * eye)

    sol = hs.solve()

    p_mat = hs.value(sol, "P") if has_p else np.zeros((dd, dd), dtype=complex)
    q_mats = [hs.value(sol, name) for name in qnames]
    w_raw = p_mat.copy()
    for q, c in zip(q_mats, cut_list):
        w_raw = w_raw + _pt_array(q, dims, c.party_set)
    eigs = np.linalg.eigvalsh((w_raw + w_raw.conj().T) / 2)
    scale = 1.0
    if math.isfinite(m):
        scale = max(scale, eigs[-1] / m)
    if math.isfinite(n) and n > 0:
        scale = max(scale, -eigs[0] / n)
    w_op = HermitianMatrix(w_raw / scale, shape)
    witness = Witness(
        op=w_op,
        kind=_decomp_kind(cut_list),
        bounds=(n, m),
        parts={
            "P": HermitianMatrix(_psd_clip(p_mat / scale), shape),
            "Q": [HermitianMatrix(_psd_clip(q / scale), shape) for q in q_mats],
        },
        cuts=cut_list,
        trace_norm_choice=OP_LEQ_I if (math.isinf(n) and m == 1.0) else None,
    )
    value = max(0.0, -hs_inner(w_op, rho))

    u = hs.dual_slack(sol, "S") if math.isfinite(m) else np.zeros((dd, dd))
    v = hs.dual_slack(sol, "T") if math.isfinite(n) else np.zeros((dd, dd))
    s = max(0.0, float(np.trace(u).real))
    t = max(0.0, float(np.trace(v).real))
    sigma_raw = hs.dual_slack(sol, "P") if has_p else rho.mat + u
    cert = MixingCertificate(
        s=s,
        t=t,
        sigma=_to_density(sigma_raw, shape),
        pi1=_to_density(u, shape) if s > 1e-9 else _to_density(eye, shape),
        pi2=_to_density(v, shape) if t > 1e-9 else _to_density(eye, shape),
    )
    return MeasureResult(value=value, tolerance=SDP_TOL, witness=witness,
                         certificate=cert)


def _decomp_kind(cut_list) -> str:
    return DECOMPOSABLE_BIPARTITE if len(cut_list) == 1 else DECOMPOSABLE_MULTI


def _psd_clip(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((mat + mat.conj().T) / 2)
    return (v * np.clip(w, 0.0, None)) @ v.conj().T


def rg_ppt(rho: DensityMatrix, cut: Cut) -> MeasureResult:
    """PPT generalized robustness: e_nm_ppt with n infinite, m = 1."""
    return e_nm_ppt(rho, [cut], math.inf, 1.0)


def rr_ppt(rho: DensityMatrix, cut: Cut) -> MeasureResult:
    """Optimal decomposable witness normalized by Tr W = D (total dim)."""
    shape = rho.require_shape()
    cut.validate(shape)
    dims = shape.local_dims
    dd = shape.total_dim
    hs = HermitianSdp()
    hs.add_psd_var("P", dd)
    hs.add_psd_var("Q", dd)
    hs.set_cost({"P": rho.mat, "Q": _pt_array(rho.mat, dims, cut.party_set)})
    hs.add_scalar_equality({"P": np.eye(dd), "Q": np.eye(dd)}, float(dd))
    sol = hs.solve()
    p_mat = hs.value(sol, "P")
    q_mat = hs.value(sol, "Q")
    w_raw = p_mat + _pt_array(q_mat, dims, cut.party_set)
    tr = float(np.trace(w_raw).real)
    scale = tr / dd
    w_op = HermitianMatrix(w_raw / scale, shape)
    witness = Witness(
        op=w_op,
        kind=DECOMPOSABLE_BIPARTITE,
        bounds=(math.inf, math.inf),
        parts={
            "P": HermitianMatrix(_psd_clip(p_mat / scale), shape),
            "Q": [HermitianMatrix(_psd_clip(q_mat / scale), shape)],
        },
        cuts=[cut],
        trace_norm_choice=TRACE_EQUALS_D,
    )
    value = max(0.0, -hs_inner(w_op, rho))
    return MeasureResult(value=value, tolerance=SDP_TOL, witness=witness)


def rains_fidelity(rho: DensityMatrix, cut: Cut) -> float:
    """Best singlet fraction reachable by PPT-preserving maps.

    max Tr(F rho) over 0 <= F <= I with -I/d <= F^{T_cut} <= I/d, for a
    d x d bipartite state. The reported value comes from the rescaled
    feasible F, clamped below by the always-feasible F = I/d.
    """
    shape = rho.require_shape()
    cut.validate(shape)
    dims = shape.local_dims
    if len(dims) != 2 or dims[0] != dims[1]:
        raise ValueError("need a d x d bipartite state")
    d = dims[0]
    dd = shape.total_dim
    eye = np.eye(dd)
    hs = HermitianSdp()
    for name in ("F", "S", "G1", "G2"):
        hs.add_psd_var(name, dd)
    hs.set_cost({"F": -rho.mat})

    def pt(e):
        return _pt_array(e, dims, cut.party_set)

    hs.add_matrix_equality("cap", {"F": lambda e: e, "S": lambda e: e}, eye)
    hs.add_matrix_equality("pt-hi", {"F": pt, "G1": lambda e: e}, eye / d)
    hs.add_matrix_equality("pt-lo", {"F": lambda e: -pt(e), "G2": lambda e: e},
                           eye / d)
    sol = hs.solve()
    f_mat = hs.value(sol, "F")
    ft = _pt_array(f_mat, dims, cut.party_set)
    eig_f = np.linalg.eigvalsh((f_mat + f_mat.conj().T) / 2)
    eig_ft = np.linalg.eigvalsh((ft + ft.conj().T) / 2)
    scale = max(1.0, eig_f[-1], d * eig_ft[-1], -d * eig_ft[0])
    value = float(np.real(np.trace(f_mat @ rho.mat))) / scale
    return max(value, 1.0 / d)


def concurrence_2q(rho: DensityMatrix) -> float:
    """Two-qubit concurrence via the spin-flip spectrum.

    Uses eigenvalues of the Hermitian sqrt(rho) rho~ sqrt(rho) rather than
    the non-Hermitian product, which keeps full double accuracy.
    """
    shape = rho.require_shape()
    if shape.local_dims != (2, 2):
        raise ValueError("concurrence_2q needs a 2 x 2 qubit pair")
    yy = np.kron(
        np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])
    )
    flipped = yy @ rho.mat.conj() @ yy
    w, v = np.linalg.eigh(rho.mat)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    inner = root @ flipped @ root
    sq = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    # rank-deficient states leave noise-level eigenvalues whose square
    # roots would pollute the alternating sum
    sq[sq < 1e-13 * max(sq[-1], 0.0)] = 0.0
    lam = np.sqrt(np.clip(sq, 0.0, None))[::-1]
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def ssr_nonlocality(rho: DensityMatrix) -> MeasureResult:
    """Witness optimization over G <= I with nonnegative diagonal.

    Detects states that need coherence between local particle-number
    sectors; separable states can score nonzero here.
    """
    shape = rho.require_shape()
    dd = shape.total_dim
    hs = HermitianSdp()
    hs.add_psd_var("S", dd)
    for i in range(dd):
        hs.add_scalar_var(f"t{i}")
    hs.set_cost({"S": -rho.mat})
    for i in range(dd):
        e = np.zeros((dd, dd))
        e[i, i] = 1.0
        hs.add_scalar_equality({"S": e, f"t{i}": 1.0}, 1.0)
    sol = hs.solve()
    s_mat = hs.value(sol, "S")
    g_op = HermitianMatrix(np.eye(dd) - s_mat, shape)
    witness = Witness(op=g_op, kind=SSR_DIAGONAL, bounds=(math.inf, 1.0))
    value = max(0.0, -hs_inner(g_op, rho))
    return MeasureResult(value=value, tolerance=SDP_TOL, witness=witness)


def _sym_isometry(b: int) -> np.ndarray:
    cols = []
    for i in range(b):
        for j in range(i, b):
            v = np.zeros(b * b)
            if i == j:
                v[i * b + j] = 1.0
            else:
                v[i * b + j] = v[j * b + i] = 1.0 / np.sqrt(2.0)
            cols.append(v)
    return np.array(cols).T


def rg_dps2(rho: DensityMatrix, cut: Cut) -> MeasureResult:
    """Robustness-type bound from witnesses certified at extension level 2.

    Searches W <= I together with a certificate (H0, M1, M2 >= 0) that W
    is nonnegative on every state with a PPT 2-symmetric extension of the
    non-cut side, so the bound can be nonzero on PPT entangled states.
    """
    shape = rho.require_shape()
    cut.validate(shape)
    if len(shape) != 2:
        raise ValueError("need a bipartite state")
    if shape.total_dim > DPS2_DIM_CAP:
        raise ValueError(f"total dimension exceeds cap {DPS2_DIM_CAP}")
    mat = rho.mat
    dims = shape.local_dims
    if cut.party_set == (1,):
        mat = (
            mat.reshape(dims * 2).transpose(1, 0, 3, 2).reshape(mat.shape)
        )
        dims = (dims[1], dims[0])
    a, b = dims
    dd = a * b
    e_b = _sym_isometry(b)
    ns = e_b.shape[1]
    # isometry from A (x) sym^2(B) into the extension space A (x) B1 (x) B2
    iso = np.kron(np.eye(a), e_b)
    ds = a * ns
    ext_dims = (a, b, b)

    hs = HermitianSdp()
    hs.add_psd_var("Sw", dd)
    hs.add_psd_var("H0", ds)
    hs.add_psd_var("M1", a * b * b)
    hs.add_psd_var("M2", a * b * b)
    hs.set_cost({"Sw": -mat})

    def lift(e):
        return iso @ e @ iso.conj().T

    def adj_sw(e):
        full = lift(e)
        return _ptrace_array(full, ext_dims, (0, 1))

    def adj_m1(e):
        return _pt_array(lift(e), ext_dims, (0,))

    def adj_m2(e):
        return _pt_array(lift(e), ext_dims, (2,))

    hs.add_matrix_equality(
        "cert",
        {"Sw": adj_sw, "M1": adj_m1, "M2": adj_m2, "H0": lambda e: e},
        np.eye(ds, dtype=complex),
    )
    sol = hs.solve()
    s_mat = hs.value(sol, "Sw")
    if cut.party_set == (1,):
        s_mat = (
            s_mat.reshape((b, a) * 2).transpose(1, 0, 3, 2).reshape(dd, dd)
        )
    w_op = HermitianMatrix(np.eye(dd) - s_mat, shape)
    witness = Witness(op=w_op, kind=DPS2_CERTIFIED, bounds=(math.inf, 1.0),
                      trace_norm_choice=OP_LEQ_I)
    value = max(0.0, -hs_inner(w_op, rho))
    return MeasureResult(value=value, tolerance=SDP_TOL, witness=witness)
