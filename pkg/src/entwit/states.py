"""Density matrices, pure states, and generators for the test families."""

from __future__ import annotations

import json

import numpy as np

from .linalg import Cut, HermitianMatrix, SystemShape, partial_trace

EIG_ATOL = 1e-10
TRACE_ATOL = 1e-10


class DensityMatrix(HermitianMatrix):
    """Hermitian, unit-trace, positive semidefinite (up to small tolerance)."""

    def __init__(self, entries, shape: SystemShape | None = None):
        super().__init__(entries, shape)
        tr = np.trace(self.mat).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace {tr!r} is not 1")
        lo = np.linalg.eigvalsh(self.mat)[0]
        if lo < -EIG_ATOL:
            raise ValueError(f"negative eigenvalue {lo:.3e}")


class PureState:
    """Unit vector; ``density()`` builds its projector."""

    def __init__(self, amplitudes, shape: SystemShape | None = None):
        v = np.array(amplitudes, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"norm {n!r} is not 1")
        if shape is not None and shape.total_dim != v.size:
            raise ValueError("shape does not match vector length")
        self.vec = v
        self.shape = shape

    @property
    def dim(self) -> int:
        return self.vec.size

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.vec, self.vec.conj()), self.shape)


def rng_stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for ``seed`` and an optional branch path."""
    return np.random.default_rng(np.random.SeedSequence((seed,) + path))


def max_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_i |ii> on d x d."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(v, SystemShape([d, d]))


def isotropic(d: int, p: float) -> DensityMatrix:
    """p |phi+><phi+| + (1-p) I/d^2."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    phi = max_entangled(d).density().mat
    m = p * phi + (1.0 - p) * np.eye(d * d) / (d * d)
    return DensityMatrix(m, SystemShape([d, d]))


def horodecki_3x3(a: float) -> DensityMatrix:
    """The 3x3 bound entangled one-parameter family, a in (0, 1)."""
    if not 0.0 < a < 1.0:
        raise ValueError("a must lie strictly inside (0, 1)")
    m = np.zeros((9, 9))
    for i in (0, 1, 2, 3, 4, 5, 7):
        m[i, i] = a
    m[0, 4] = m[4, 0] = a
    m[0, 8] = m[8, 0] = a
    m[4, 8] = m[8, 4] = a
    m[6, 6] = m[8, 8] = (1.0 + a) / 2.0
    m[6, 8] = m[8, 6] = np.sqrt(1.0 - a * a) / 2.0
    return DensityMatrix(m / (8.0 * a + 1.0), SystemShape([3, 3]))


def w_ghz_mix(q: float) -> DensityMatrix:
    """q |W><W| + (1-q) |GHZ><GHZ| on three qubits."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1.0 / np.sqrt(2.0)
    w = np.zeros(8, dtype=complex)
    w[1] = w[2] = w[4] = 1.0 / np.sqrt(3.0)
    m = q * np.outer(w, w.conj()) + (1.0 - q) * np.outer(ghz, ghz.conj())
    return DensityMatrix(m, SystemShape([2, 2, 2]))


def vc_ssr_state() -> DensityMatrix:
    """Two-qubit mixture of |00>, |11> and the symmetric one-excitation state.

    Every entry is an exact quarter, so witness traces against it stay
    exact; composing 0.5 |psi+><psi+| from 1/sqrt(2) amplitudes would be
    one ulp off.
    """
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[1, 1] = m[2, 2] = m[3, 3] = 0.25
    m[1, 2] = m[2, 1] = 0.25
    return DensityMatrix(m, SystemShape([2, 2]))


def random_density(d: int, seed, shape: SystemShape | None = None) -> DensityMatrix:
    """Hilbert-Schmidt random state: G G† / tr for a d x d Ginibre G.

    ``seed`` is anything ``default_rng`` accepts (int or SeedSequence).
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, shape or SystemShape([d]))


def random_pure(d: int, seed, shape: SystemShape | None = None) -> PureState:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v), shape or SystemShape([d]))


def thermal(h: HermitianMatrix, beta: float) -> DensityMatrix:
    """exp(-beta H) / Z, computed in the eigenbasis with a max-shift."""
    w, v = np.linalg.eigh(h.mat)
    e = np.exp(-beta * (w - w.min()))
    e /= e.sum()
    return DensityMatrix((v * e) @ v.conj().T, h.shape)


def schmidt(psi: PureState, cut: Cut):
    """Schmidt coefficients (descending) across ``cut``."""
    shape = psi.shape
    if shape is None:
        raise ValueError("pure state needs subsystem shape metadata")
    cut.validate(shape)
    rho = psi.density()
    ra = partial_trace(rho, cut)
    w = np.linalg.eigvalsh(ra.mat)[::-1]
    return np.sqrt(np.clip(w, 0.0, None))


def state_to_json(rho: HermitianMatrix) -> str:
    dims = list(rho.shape.local_dims) if rho.shape else [rho.dim]
    doc = {
        "dims": dims,
        "re": rho.mat.real.tolist(),
        "im": rho.mat.imag.tolist(),
    }
    return json.dumps(doc, indent=2)


def state_from_json(text: str) -> DensityMatrix:
    doc = json.loads(text)
    m = np.array(doc["re"], dtype=float) + 1j * np.array(doc["im"], dtype=float)
    return DensityMatrix(m, SystemShape(doc["dims"]))
