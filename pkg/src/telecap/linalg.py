"""Dense complex linear algebra for desk-scale multi-qubit systems.

Everything works on plain numpy arrays of complex128.  Matrices are dense;
the hard ceiling is 16 qubits (dimension 65536), which keeps every routine
runnable on a laptop without sparse machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_DIM",
    "DEFAULT_CLUSTER_EPS",
    "EigenvalueCluster",
    "SpectrumClusters",
    "kron",
    "partial_trace",
    "hermitian_eig",
    "cluster_spectrum",
    "schmidt_decompose",
    "is_unitary",
]

MAX_DIM = 1 << 16           # 16-qubit cap on any matrix or product
DEFAULT_CLUSTER_EPS = 1e-9  # absolute, on trace-one spectra

_HERMITIAN_TOL = 1e-9
_PHASE_TOL = 1e-12


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product, rejecting outputs above the 16-qubit cap."""
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    if a.shape[0] * b.shape[0] > MAX_DIM or a.shape[1] * b.shape[1] > MAX_DIM:
        raise ValueError("kron output would exceed the 2**16 dimension cap")
    return np.kron(a, b)


def is_unitary(u, tol: float = 1e-9) -> bool:
    """Max-norm test of U†U = I."""
    u = _as_matrix(u, "u")
    if u.shape[0] != u.shape[1]:
        raise ValueError("u must be square")
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def partial_trace(rho, qubit_count: int, traced_out) -> np.ndarray:
    """Trace the given qubits out of a density matrix.

    Kept qubits keep their ascending order.  Qubit 0 is the most significant
    bit of the basis index (big-endian, as everywhere in this package).
    """
    rho = _as_matrix(rho, "rho")
    dim = 1 << qubit_count
    if rho.shape != (dim, dim):
        raise ValueError(f"rho must be {dim}x{dim} for {qubit_count} qubits")
    if np.max(np.abs(rho - rho.conj().T)) > _HERMITIAN_TOL:
        raise ValueError("rho is not Hermitian within 1e-9")
    traced = sorted(set(int(q) for q in traced_out))
    if traced and (traced[0] < 0 or traced[-1] >= qubit_count):
        raise ValueError("traced_out qubits outside range")
    kept = [q for q in range(qubit_count) if q not in set(traced)]
    t = rho.reshape((2,) * (2 * qubit_count))
    order = kept + traced + [qubit_count + q for q in kept] + [qubit_count + q for q in traced]
    t = np.transpose(t, order).reshape(
        1 << len(kept), 1 << len(traced), 1 << len(kept), 1 << len(traced)
    )
    return np.einsum("aibi->ab", t)


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Column phases are fixed so the first component above 1e-12 in magnitude
    is real positive; repeated runs on identical input are bit-identical.
    Returns (eigenvalues, eigenvector matrix with eigenvectors as columns).
    """
    h = _as_matrix(h, "h")
    if h.shape[0] != h.shape[1]:
        raise ValueError("h must be square")
    if np.max(np.abs(h - h.conj().T)) > _HERMITIAN_TOL:
        raise ValueError("h is not Hermitian within 1e-9")
    w, v = np.linalg.eigh(h)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    for k in range(v.shape[1]):
        idx = np.flatnonzero(np.abs(v[:, k]) > _PHASE_TOL)
        if idx.size:
            ph = v[idx[0], k]
            v[:, k] *= ph.conjugate() / abs(ph)
    return w, v


@dataclass(frozen=True)
class EigenvalueCluster:
    """One (near-)degenerate group of a descending spectrum.

    value is the cluster anchor (its largest member, clamped into [0, 1]);
    basis, when present, carries the matching eigenvectors as columns.
    """

    value: float
    multiplicity: int
    basis: np.ndarray | None = None


@dataclass(frozen=True)
class SpectrumClusters:
    clusters: tuple[EigenvalueCluster, ...]

    @property
    def dimension(self) -> int:
        return sum(c.multiplicity for c in self.clusters)

    def values(self) -> list[float]:
        return [c.value for c in self.clusters]

    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.clusters]


def cluster_spectrum(eigenvalues, eps: float = DEFAULT_CLUSTER_EPS,
                     eigenvectors: np.ndarray | None = None) -> SpectrumClusters:
    """Greedy degeneracy clustering of a descending spectrum.

    Walking from the largest value, a value joins the current cluster when it
    lies within eps of the cluster's first (anchor) value; otherwise it opens
    a new cluster.  Anchors of consecutive clusters therefore differ by more
    than eps.
    """
    w = np.asarray(eigenvalues, dtype=float).ravel()
    if eps <= 0:
        raise ValueError("eps must be positive")
    if w.size == 0:
        raise ValueError("empty spectrum")
    if np.any(np.diff(w) > 1e-12):
        raise ValueError("eigenvalues must be sorted descending")
    clusters = []
    start = 0
    while start < w.size:
        anchor = w[start]
        stop = start + 1
        while stop < w.size and anchor - w[stop] <= eps:
            stop += 1
        basis = None
        if eigenvectors is not None:
            basis = np.array(eigenvectors[:, start:stop])
        value = float(min(max(anchor, 0.0), 1.0))
        clusters.append(EigenvalueCluster(value, stop - start, basis))
        start = stop
    return SpectrumClusters(tuple(clusters))


def schmidt_decompose(state, dim_a: int, dim_b: int):
    """Schmidt form of a bipartite pure state.

    Returns (coefficients, a_vectors, b_vectors) with coefficients descending
    and the orthonormal frames as matrix columns, so that
    state = sum_k s_k * a_k (x) b_k.  Phases follow the first-component
    convention of hermitian_eig.
    """
    v = np.asarray(state, dtype=np.complex128).ravel()
    if v.size != dim_a * dim_b:
        raise ValueError("state length does not match dim_a * dim_b")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("state is not unit norm within 1e-9")
    u, s, vh = np.linalg.svd(v.reshape(dim_a, dim_b), full_matrices=False)
    u = u.copy()
    vh = vh.copy()
    for k in range(s.size):
        idx = np.flatnonzero(np.abs(u[:, k]) > _PHASE_TOL)
        if idx.size:
            ph = u[idx[0], k]
            u[:, k] *= ph.conjugate() / abs(ph)
            vh[k, :] *= ph / abs(ph)
    return s, u, vh.T
