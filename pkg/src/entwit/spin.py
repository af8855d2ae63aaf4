"""Heisenberg chains: Hamiltonian, thermal witness bound, thermodynamic proxies.

Units: hbar = k = 1 and g^2 mu_B^2 = 1; sigma are Pauli operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Cut, HermitianMatrix, SystemShape
from .states import thermal
from .witnesses import DECOMPOSABLE_MULTI, OP_LEQ_I, Witness, evaluate

N_CAP = 8

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class ChainSpec:
    """Geometry and parameters of one spin chain run."""

    n_sites: int
    coupling: float
    field: float = 0.0
    beta: float = 0.0
    periodic: bool = False

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("chain needs at least 2 sites")
        if self.n_sites > N_CAP:
            raise ValueError(f"chain length {self.n_sites} exceeds cap {N_CAP}")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")


def bonds(n_sites: int, periodic: bool) -> list:
    """Nearest-neighbor bonds; the wrap bond is dropped at N = 2."""
    out = [(i, i + 1) for i in range(n_sites - 1)]
    if periodic and n_sites > 2:
        out.append((n_sites - 1, 0))
    return out


def _op_at(op: np.ndarray, i: int, n: int) -> np.ndarray:
    return np.kron(np.kron(np.eye(2**i), op), np.eye(2 ** (n - i - 1)))


def _bond_term(i: int, j: int, n: int) -> np.ndarray:
    out = np.zeros((2**n, 2**n), dtype=complex)
    for s in (_SX, _SY, _SZ):
        out += _op_at(s, i, n) @ _op_at(s, j, n)
    return out


def _total_sz(n: int) -> np.ndarray:
    return sum(_op_at(_SZ, i, n) for i in range(n))


def xxx_hamiltonian(spec: ChainSpec) -> HermitianMatrix:
    """H = J sum_bonds sigma_i . sigma_j + B sum_i sigma_i^z."""
    n = spec.n_sites
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i, j in bonds(n, spec.periodic):
        h += spec.coupling * _bond_term(i, j, n)
    h += spec.field * _total_sz(n)
    return HermitianMatrix(h, SystemShape([2] * n))


def toth_witness(n_sites: int, periodic: bool) -> Witness:
    """W = (N I + sum_bonds sigma.sigma) / (2N); satisfies W <= I.

    Decomposes as P + sum_b Q_b^{T_i} with P a multiple of the identity
    and each Q_b proportional to a two-site maximally entangled projector,
    so the witness is blind to PPT states across every bond cut.
    """
    if n_sites < 2 or n_sites > N_CAP:
        raise ValueError("unsupported chain length")
    n = n_sites
    bond_list = bonds(n, periodic)
    dim = 2**n
    shape = SystemShape([2] * n)
    op = n * np.eye(dim, dtype=complex)
    for i, j in bond_list:
        op += _bond_term(i, j, n)
    op /= 2 * n
    p = HermitianMatrix(np.eye(dim) * (n - len(bond_list)) / (2 * n), shape)
    qs = []
    cuts = []
    for i, j in bond_list:
        swap = (_bond_term(i, j, n) + np.eye(dim)) / 2
        qs.append(HermitianMatrix(_pt(swap, [2] * n, i) / n, shape))
        cuts.append(Cut([i]))
    return Witness(
        op=HermitianMatrix(op, shape),
        kind=DECOMPOSABLE_MULTI,
        bounds=(np.inf, 1.0),
        parts={"P": p, "Q": qs},
        cuts=cuts,
        trace_norm_choice=OP_LEQ_I,
    )


def _pt(mat: np.ndarray, dims: list, site: int) -> np.ndarray:
    k = len(dims)
    t = mat.reshape(tuple(dims) * 2)
    t = np.swapaxes(t, site, site + k)
    return t.reshape(mat.shape)


def rg_witness_lower_thermal(spec: ChainSpec) -> float:
    """max{0, -Tr(W rho_beta)} with the fixed witness; lower-bounds R_G."""
    rho = thermal(xxx_hamiltonian(spec), spec.beta)
    w = toth_witness(spec.n_sites, spec.periodic)
    return max(0.0, -evaluate(w, rho))


def thermo_estimate(spec: ChainSpec):
    """Witness bound rebuilt from energy U and magnetization M.

    Returns (estimate, U, M) with estimate = -(U - B M)/(2 N J) - 1/2,
    which equals -Tr(W rho) exactly at B = 0.
    """
    if spec.coupling == 0:
        raise ValueError("coupling must be nonzero")
    h = xxx_hamiltonian(spec)
    rho = thermal(h, spec.beta)
    u = float(np.real(np.trace(h.mat @ rho.mat)))
    m = float(np.real(np.trace(_total_sz(spec.n_sites) @ rho.mat)))
    estimate = -(u - spec.field * m) / (2 * spec.n_sites * spec.coupling) - 0.5
    return estimate, u, m


def susceptibility(spec: ChainSpec):
    """Zero-field susceptibility, exact and in witness form.

    chi_exact is the fluctuation formula beta (<Mz^2> - <Mz>^2);
    chi_witness_form is beta (N + (1/3) sum_bonds <sigma.sigma>).
    """
    if spec.field != 0:
        raise ValueError("susceptibility is defined at zero field")
    if spec.beta <= 0:
        raise ValueError("beta must be positive")
    n = spec.n_sites
    rho = thermal(xxx_hamiltonian(spec), spec.beta).mat
    mz = _total_sz(n)
    m1 = float(np.real(np.trace(mz @ rho)))
    m2 = float(np.real(np.trace(mz @ mz @ rho)))
    chi_exact = spec.beta * (m2 - m1 * m1)
    corr = sum(
        float(np.real(np.trace(_bond_term(i, j, n) @ rho)))
        for i, j in bonds(n, spec.periodic)
    )
    chi_witness_form = spec.beta * (n + corr / 3.0)
    return chi_exact, chi_witness_form
