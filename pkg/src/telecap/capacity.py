"""Channel analysis: entanglement entropy, faithful-teleportation capacity,
and synthesis of the canonicalizing local unitaries.

The receiving side's reduced density matrix decides everything.  A channel
teleports d qubits faithfully exactly when some local unitary on that side
factors the reduced density into (residual density) (x) I/2**d, which the
spectrum permits iff every eigenvalue multiplicity is divisible by 2**d.
The sending side's unitary then follows from the freedom of purification:
two pure states with the same reduced density on one side differ only by a
unitary on the other side.

Conventions fixed here and relied on by the teleport module:

* The structural (factoring) unitary acts on the smaller party; when the
  sender holds fewer qubits the roles are swapped internally and the report
  says so.
* After canonicalization, Bob's halves of the d Bell pairs sit on the last d
  qubits of his list, so his reduced density is eta (x) I/2**d with eta on
  the leading qubits.  Alice's halves sit on her first d qubits (last d when
  swapped).  Pair i uses the singlet (|01> - |10>)/sqrt(2).
* The residual factor is the canonical purification of eta: spectral values
  descending, purifying labels running through the leftover ancilla qubits
  of the purifying side in computational order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import SpectrumClusters, cluster_spectrum, hermitian_eig
from .states import ChannelState, PureState

__all__ = [
    "DEFAULT_EPS",
    "ZERO_EIGENVALUE",
    "AnalysisReport",
    "bipartition_matrix",
    "reduced_density",
    "entanglement_entropy",
    "max_capacity",
    "synthesize_u_b",
    "verify_condition",
    "synthesize_u_a",
    "analyze",
    "canonical_state",
]

DEFAULT_EPS = 1e-9
ZERO_EIGENVALUE = 1e-12  # branch weight below this is treated as absent

_GS_ACCEPT = 1e-7


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the analyzer decides about one channel.

    u_a acts on the sender's local space (big-endian over the alice list),
    u_b on the receiver's.  eta is the residual density on the structural
    side's leading qubits: Bob's unless swapped, in which case the structural
    side is Alice and eta lives on her leading m-d qubits.  bob_relabeling
    lists, role by role (Bell halves first, then residual), which slot of
    Bob's list plays that role after canonicalization.  pairs gives the
    global qubit labels (alice_qubit, bob_qubit) of the d Bell pairs.
    """

    entropy_bits: float
    capacity: int
    u_a: np.ndarray
    u_b: np.ndarray
    eta: np.ndarray | None
    clusters: SpectrumClusters
    bob_relabeling: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    swapped: bool

    def __post_init__(self):
        for name in ("u_a", "u_b", "eta"):
            m = getattr(self, name)
            if m is not None:
                m = np.asarray(m, dtype=np.complex128)
                m.setflags(write=False)
                object.__setattr__(self, name, m)
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))
        object.__setattr__(self, "bob_relabeling", tuple(int(q) for q in self.bob_relabeling))


def bipartition_matrix(channel: ChannelState) -> np.ndarray:
    """Amplitudes reshaped to a (sender x receiver) matrix in list order."""
    st = channel.state
    psi = st.amplitudes.reshape((2,) * st.n_qubits)
    psi = np.transpose(psi, channel.alice + channel.bob)
    return psi.reshape(1 << len(channel.alice), 1 << len(channel.bob))


def reduced_density(channel: ChannelState, side: str = "bob") -> np.ndarray:
    """Reduced density matrix of one party, basis ordered by its qubit list."""
    m = bipartition_matrix(channel)
    if side == "bob":
        return m.T @ m.conj()
    if side == "alice":
        return m @ m.conj().T
    raise ValueError("side must be 'alice' or 'bob'")


def entanglement_entropy(channel: ChannelState) -> float:
    """Von Neumann entropy of either party's reduced state, in bits.

    Computed from the singular values of the bipartition matrix, which are
    the shared spectrum of both reduced densities.
    """
    s = np.linalg.svd(bipartition_matrix(channel), compute_uv=False)
    return _spectrum_entropy(s * s)


def _spectrum_entropy(p: np.ndarray) -> float:
    p = p[p > 1e-18]
    return float(-(p @ np.log2(p)))


def _two_adic(k: int) -> int:
    return (k & -k).bit_length() - 1


def max_capacity(clusters: SpectrumClusters, m: int, n: int) -> int:
    """Largest d such that every eigenvalue multiplicity is divisible by
    2**d, capped by the smaller party size."""
    d = min(_two_adic(c.multiplicity) for c in clusters.clusters)
    return min(d, m, n)


def synthesize_u_b(channel: ChannelState, clusters: SpectrumClusters, d: int):
    """Receiver-side unitary factoring the reduced density at capacity d.

    Eigenvectors (descending eigenvalue) are mapped onto the computational
    basis in order, which lays each cluster out as consecutive residual
    labels times a full uniform block on the trailing d qubits.  Returns
    (u_b, eta, relabeling); eta is the diagonal residual density (cluster
    values scaled by 2**d), absent when d equals the receiver's qubit count.
    The relabeling tuple records which of Bob's slots ends up playing each
    canonical role (d Bell halves first, then the residual).

    When the receiver's density is already the maximally mixed state and
    d is maximal, the identity is returned.
    """
    m, n = len(channel.alice), len(channel.bob)
    if not 0 <= d <= max_capacity(clusters, m, n):
        raise ValueError("d is not admissible for this spectrum")
    relabeling = tuple(range(n - d, n)) + tuple(range(n - d))
    if d == n:
        # single flat cluster: the density already factors as I/2**n
        return np.eye(1 << n, dtype=complex), None, relabeling
    rho_b = reduced_density(channel, "bob")
    _, v = hermitian_eig(rho_b)
    u_b = v.conj().T
    block = 1 << d
    diag = np.concatenate(
        [np.full(c.multiplicity // block, c.value * block) for c in clusters.clusters]
    )
    eta = np.diag(diag.astype(complex))
    return u_b, eta, relabeling


def verify_condition(channel: ChannelState, u_b, d: int, eps: float = DEFAULT_EPS) -> bool:
    """Check the factorization certificate at capacity d.

    After u_b, the receiver's density must equal (residual density) (x)
    I/2**d with the uniform block on the trailing d qubits, within eps in
    max norm.  The residual is read off the transformed density itself by
    tracing out the uniform qubits, so the test has no free parameters.
    d = 0 always passes.
    """
    n = len(channel.bob)
    if not 0 <= d <= n:
        raise ValueError("d outside 0..n")
    u_b = np.asarray(u_b, dtype=np.complex128)
    if u_b.shape != (1 << n, 1 << n) or not linalg.is_unitary(u_b, 1e-9):
        raise ValueError("u_b is not a receiver-side unitary")
    rho = u_b @ reduced_density(channel, "bob") @ u_b.conj().T
    dr, du = 1 << (n - d), 1 << d
    t = rho.reshape(dr, du, dr, du)
    eta_hat = np.einsum("aibi->ab", t)
    return bool(np.max(np.abs(rho - np.kron(eta_hat, np.eye(du) / du))) <= eps)


def _residual_frame(channel: ChannelState, u_b, d: int):
    """Descending eigensystem of the post-u_b residual density."""
    n = len(channel.bob)
    u_b = np.asarray(u_b, dtype=np.complex128)
    rho = u_b @ reduced_density(channel, "bob") @ u_b.conj().T
    dr, du = 1 << (n - d), 1 << d
    eta_hat = np.einsum("aibi->ab", rho.reshape(dr, du, dr, du))
    eta_hat = (eta_hat + eta_hat.conj().T) / 2
    mu, basis = hermitian_eig(eta_hat)
    return np.clip(mu, 0.0, None), basis


def _bell_sign(i: int, d: int) -> float:
    # singlet component signs: + where Bob's bit is 1, - where it is 0
    return -1.0 if (d - bin(i).count("1")) % 2 else 1.0


def _target_columns(mu, basis, m: int, n: int, d: int, bell_high: bool) -> np.ndarray:
    """Sender-side vectors of the canonical state, one column per receiver
    basis index (residual bits high, Bell bits low).

    Column (j', i) of the canonical state  prod_t singlet_t (x) purification
    is sign(i)/sqrt(2**d) * sum_j sqrt(mu_j) basis[j', j] |a(i, j)>, where
    the sender index a(i, j) packs the complemented Bell bits next to the
    purifying label j: Bell bits high when the sender keeps her Bell halves
    on her leading qubits (bell_high), low otherwise.
    """
    dim_a, dim_b = 1 << m, 1 << n
    da_res = 1 << (m - d)
    cols = np.zeros((dim_a, dim_b), dtype=complex)
    mask = (1 << d) - 1
    scale = 2.0 ** (-d / 2.0)
    dr = 1 << (n - d)
    col_idx = np.arange(dr) << d
    for j in range(mu.size):
        w = mu[j]
        if w <= ZERO_EIGENVALUE:
            continue
        if j >= da_res:
            raise ArithmeticError("residual rank exceeds the sender's ancilla space")
        amp = np.sqrt(w) * scale
        for i in range(1 << d):
            a_bell = (~i) & mask
            a_idx = a_bell * da_res + j if bell_high else (j << d) + a_bell
            cols[a_idx, col_idx + i] += _bell_sign(i, d) * amp * basis[:, j]
    return cols


def _gs_extend(q: np.ndarray, filled: int, candidates, want: int, strict: bool) -> int:
    """Ordered Gram-Schmidt: extend the orthonormal columns q[:, :filled].

    Candidates are orthogonalized (twice, for stability) against everything
    accepted so far; residuals below the acceptance threshold are rejected,
    which strict mode treats as an error.  Returns the new filled count.
    """
    target = filled + want
    for v in candidates:
        if filled == target:
            break
        w = np.array(v, dtype=complex)
        for _ in range(2):
            if filled:
                w -= q[:, :filled] @ (q[:, :filled].conj().T @ w)
        nw = np.linalg.norm(w)
        if nw <= _GS_ACCEPT:
            if strict:
                raise ArithmeticError("relative-vector frame is rank deficient")
            continue
        q[:, filled] = w / nw
        filled += 1
    if filled != target:
        raise ArithmeticError("could not complete an orthonormal frame")
    return filled


def synthesize_u_a(channel: ChannelState, u_b, d: int, eps: float = DEFAULT_EPS,
                   _bell_high: bool = True) -> np.ndarray:
    """Sender-side unitary finishing the canonicalization.

    Writing the post-u_b state as sum_k |a_k>_A (x) |k>_B over the
    receiver's computational basis, the vectors a_k are orthogonal with
    norms given by the (factorized) receiver spectrum; the canonical state
    expands the same way with target vectors t_k.  u_a is the unitary
    carrying each a_k to t_k, built by ordered Gram-Schmidt over the
    nonzero-weight indices on both sides and completed deterministically
    against the computational basis.  Zero-weight indices never occur in
    the state and are covered by the completion.
    """
    if not verify_condition(channel, u_b, d, eps):
        raise ValueError("factorization condition fails at this d")
    m, n = len(channel.alice), len(channel.bob)
    dim_a = 1 << m
    source = bipartition_matrix(channel) @ np.asarray(u_b, dtype=np.complex128).T
    mu, basis = _residual_frame(channel, u_b, d)
    targets = _target_columns(mu, basis, m, n, d, _bell_high)
    weights = np.einsum("ak,ak->k", source.conj(), source).real
    keep = [k for k in range(source.shape[1]) if weights[k] > ZERO_EIGENVALUE]

    q_src = np.zeros((dim_a, dim_a), dtype=complex)
    q_tgt = np.zeros((dim_a, dim_a), dtype=complex)
    kcount = _gs_extend(q_src, 0, (source[:, k] for k in keep), len(keep), strict=True)
    _gs_extend(q_tgt, 0, (targets[:, k] for k in keep), len(keep), strict=True)
    eye = np.eye(dim_a, dtype=complex)
    _gs_extend(q_src, kcount, (eye[:, j] for j in range(dim_a)), dim_a - kcount, strict=False)
    _gs_extend(q_tgt, kcount, (eye[:, j] for j in range(dim_a)), dim_a - kcount, strict=False)
    u_a = q_tgt @ q_src.conj().T
    if not linalg.is_unitary(u_a, 1e-9):
        raise ArithmeticError("synthesized sender unitary failed the unitarity check")
    return u_a


def analyze(channel: ChannelState, eps: float = DEFAULT_EPS) -> AnalysisReport:
    """Full pipeline: reduced density, spectrum clustering, capacity, and
    both canonicalizing unitaries.

    The structural unitary always acts on the smaller party, so when the
    sender holds fewer qubits the roles are swapped internally and the
    report's swapped flag is set; u_a and u_b still act on the sender and
    receiver respectively.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    m_out, n_out = len(channel.alice), len(channel.bob)
    swapped = m_out < n_out
    oriented = channel.swapped() if swapped else channel
    m, n = len(oriented.alice), len(oriented.bob)

    rho = reduced_density(oriented, "bob")
    w, v = hermitian_eig(rho)
    clusters = cluster_spectrum(w, eps, eigenvectors=v)
    d = max_capacity(clusters, m, n)
    u_struct, eta, _ = synthesize_u_b(oriented, clusters, d)
    if not verify_condition(oriented, u_struct, d, eps):
        raise ArithmeticError("factorization condition failed after synthesis")
    u_purif = synthesize_u_a(oriented, u_struct, d, eps, _bell_high=not swapped)

    entropy = _spectrum_entropy(np.clip(w, 0.0, None))
    a_slots = range(d) if not swapped else range(m_out - d, m_out)
    b_slots = range(n_out - d, n_out)
    pairs = tuple(
        (channel.alice[ai], channel.bob[bi]) for ai, bi in zip(a_slots, b_slots)
    )
    relabeling = tuple(range(n_out - d, n_out)) + tuple(range(n_out - d))
    u_a, u_b = (u_struct, u_purif) if swapped else (u_purif, u_struct)
    return AnalysisReport(
        entropy_bits=entropy,
        capacity=d,
        u_a=u_a,
        u_b=u_b,
        eta=eta,
        clusters=clusters,
        bob_relabeling=relabeling,
        pairs=pairs,
        swapped=swapped,
    )


def canonical_state(channel: ChannelState, report: AnalysisReport) -> PureState:
    """The Bell canonical state that (u_a (x) u_b) applied to the channel
    reaches: d singlets on report.pairs times the canonical purification of
    the residual density."""
    oriented = channel.swapped() if report.swapped else channel
    u_struct = report.u_a if report.swapped else report.u_b
    d = report.capacity
    m, n = len(oriented.alice), len(oriented.bob)
    mu, basis = _residual_frame(oriented, u_struct, d)
    cols = _target_columns(mu, basis, m, n, d, bell_high=not report.swapped)
    cols = cols / np.linalg.norm(cols)
    psi = cols.reshape((2,) * (m + n))
    psi = np.transpose(psi, np.argsort(oriented.alice + oriented.bob))
    return PureState(psi.reshape(-1))
