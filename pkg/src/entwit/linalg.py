"""Dense complex Hermitian linear algebra with multipartite index bookkeeping.

Subsystem ordering is row-major throughout: the first subsystem is the
slowest index of the flattened matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERM_ATOL = 1e-9


@dataclass(frozen=True)
class SystemShape:
    """Ordered local dimensions of a multipartite operator."""

    local_dims: tuple

    def __init__(self, local_dims):
        dims = tuple(int(d) for d in local_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("local dimensions must be positive integers")
        object.__setattr__(self, "local_dims", dims)

    @property
    def total_dim(self) -> int:
        out = 1
        for d in self.local_dims:
            out *= d
        return out

    def __len__(self):
        return len(self.local_dims)


@dataclass(frozen=True)
class Cut:
    """A bipartition A|B given by the subsystem indices on the A side."""

    party_set: tuple

    def __init__(self, party_set):
        parties = tuple(sorted(set(int(i) for i in party_set)))
        if not parties:
            raise ValueError("cut must contain at least one subsystem")
        object.__setattr__(self, "party_set", parties)

    def validate(self, shape: SystemShape):
        k = len(shape)
        if any(i < 0 or i >= k for i in self.party_set):
            raise IndexError("cut index out of range")
        if len(self.party_set) >= k:
            raise ValueError("cut must be a proper subset of the subsystems")


class HermitianMatrix:
    """Dense complex Hermitian operator with optional subsystem shape.

    The constructor symmetrizes (m + m†)/2 and rejects inputs whose
    anti-Hermitian part exceeds ``HERM_ATOL`` in any entry.
    """

    def __init__(self, entries, shape: SystemShape | None = None):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("entries must form a square matrix")
        asym = np.abs(m - m.conj().T).max() if m.size else 0.0
        if asym > HERM_ATOL:
            raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
        self.mat = (m + m.conj().T) / 2
        if shape is not None and shape.total_dim != m.shape[0]:
            raise ValueError("shape does not match matrix dimension")
        self.shape = shape

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def require_shape(self) -> SystemShape:
        if self.shape is None:
            raise ValueError("operation requires subsystem shape metadata")
        return self.shape

    def __repr__(self):
        dims = self.shape.local_dims if self.shape else None
        return f"HermitianMatrix(dim={self.dim}, dims={dims})"


def identity(shape: SystemShape) -> HermitianMatrix:
    return HermitianMatrix(np.eye(shape.total_dim), shape)


def tensor(a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    """Kronecker product with concatenated subsystem shapes."""
    sa = a.shape.local_dims if a.shape else (a.dim,)
    sb = b.shape.local_dims if b.shape else (b.dim,)
    return HermitianMatrix(np.kron(a.mat, b.mat), SystemShape(sa + sb))


def _pt_array(mat: np.ndarray, dims, parties) -> np.ndarray:
    k = len(dims)
    t = mat.reshape(tuple(dims) * 2)
    for ax in parties:
        t = np.swapaxes(t, ax, ax + k)
    d = mat.shape[0]
    return t.reshape(d, d)


def _ptrace_array(mat: np.ndarray, dims, keep) -> np.ndarray:
    k = len(dims)
    keep = sorted(keep)
    t = mat.reshape(tuple(dims) * 2)
    traced = 0
    for ax in range(k):
        if ax not in keep:
            t = np.trace(t, axis1=ax - traced, axis2=ax - traced + k - traced)
            traced += 1
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d, d)


def partial_transpose(m: HermitianMatrix, cut: Cut) -> HermitianMatrix:
    """Transpose the indices of the subsystems in ``cut``. Involutive."""
    shape = m.require_shape()
    cut.validate(shape)
    return HermitianMatrix(_pt_array(m.mat, shape.local_dims, cut.party_set), shape)


def partial_trace(m: HermitianMatrix, keep: Cut) -> HermitianMatrix:
    """Trace out every subsystem not listed in ``keep``."""
    shape = m.require_shape()
    k = len(shape)
    if any(i < 0 or i >= k for i in keep.party_set):
        raise IndexError("cut index out of range")
    out = _ptrace_array(m.mat, shape.local_dims, keep.party_set)
    kept = SystemShape([shape.local_dims[i] for i in keep.party_set])
    return HermitianMatrix(out, kept)


def eig_hermitian(m: HermitianMatrix):
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""
    w, v = np.linalg.eigh(m.mat)
    return w[::-1].copy(), v[:, ::-1].copy()


def trace_norm(m: HermitianMatrix) -> float:
    return float(np.abs(np.linalg.eigvalsh(m.mat)).sum())


def hs_inner(a: HermitianMatrix, b: HermitianMatrix) -> float:
    """Tr(a b), real for Hermitian arguments."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    return float(np.real(np.einsum("ij,ji->", a.mat, b.mat)))
