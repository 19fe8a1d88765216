"""Reference channels and generators used by the experiments and tests.

Three families matter:

* stacks of Bell pairs, the exactly canonical channels;
* GHZ states under arbitrary bipartitions, the classic capacity-one family
  whose canonicalizing unitaries are plain CNOT chains;
* planted channels: a Bell stack times a generic residual, scrambled by
  local Haar unitaries so nothing about the construction is visible in the
  amplitudes, while the capacity stays exactly the planted d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import MAX_DIM
from .states import (
    MAX_QUBITS,
    ChannelState,
    PureState,
    apply_unitary,
    basis_state,
    bell_state,
    ghz_state,
    permute_qubits,
    random_pure_state,
    tensor,
)

__all__ = [
    "haar_unitary",
    "controlled_not",
    "n_bell_channel",
    "ghz_channel",
    "ghz_cnot_chain",
    "ghz_canonical_form",
    "random_channel",
    "PlantedChannel",
    "generate_planted",
]


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix.

    The R factor's diagonal phases are absorbed into Q, which removes the
    QR gauge and makes the distribution exactly Haar.
    """
    if not 2 <= dim <= MAX_DIM:
        raise ValueError(f"dimension must be 2..{MAX_DIM}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def controlled_not(num_qubits: int, control: int, target: int) -> np.ndarray:
    """Full-register CNOT as a permutation matrix, big-endian bit positions."""
    if not 0 <= control < num_qubits or not 0 <= target < num_qubits:
        raise ValueError("control/target outside the register")
    if control == target:
        raise ValueError("control and target must differ")
    if num_qubits > MAX_QUBITS:
        raise ValueError(f"register capped at {MAX_QUBITS} qubits")
    dim = 1 << num_qubits
    cbit = 1 << (num_qubits - 1 - control)
    tbit = 1 << (num_qubits - 1 - target)
    u = np.zeros((dim, dim), dtype=complex)
    src = np.arange(dim)
    dst = np.where(src & cbit, src ^ tbit, src)
    u[dst, src] = 1.0
    return u


def n_bell_channel(n: int, k: int = 1) -> ChannelState:
    """n Bell pairs; pair i joins sender qubit i to receiver qubit n + i."""
    if not 1 <= n <= MAX_QUBITS // 2:
        raise ValueError(f"need 1..{MAX_QUBITS // 2} pairs")
    state = tensor([bell_state(k)] * n)
    order = tuple(range(0, 2 * n, 2)) + tuple(range(1, 2 * n, 2))
    state = permute_qubits(state, order)
    return ChannelState(state, tuple(range(n)), tuple(range(n, 2 * n)))


def ghz_channel(n: int, m: int) -> ChannelState:
    """GHZ state of n qubits, the first m held by the sender."""
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    return ChannelState(ghz_state(n), tuple(range(m)), tuple(range(m, n)))


def ghz_cnot_chain(n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Local CNOT chains carrying the m|n-m GHZ split to a Bell pair.

    The sender fans out of her first qubit, the receiver out of his last;
    together they leave (|00> + |11>)/sqrt(2) between global qubits 0 and
    n-1 with |0> everywhere else.
    """
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    u_a = np.eye(1 << m, dtype=complex)
    for t in range(1, m):
        u_a = controlled_not(m, 0, t) @ u_a
    nb = n - m
    u_b = np.eye(1 << nb, dtype=complex)
    for t in range(nb - 1):
        u_b = controlled_not(nb, nb - 1, t) @ u_b
    return u_a, u_b


def ghz_canonical_form(n: int) -> PureState:
    """(|00> + |11>)/sqrt(2) between qubits 0 and n-1, |0> in between."""
    v = np.zeros(1 << n, dtype=complex)
    v[0] = v[(1 << (n - 1)) + 1] = 1.0 / np.sqrt(2.0)
    return PureState(v)


def random_channel(m: int, n: int, seed) -> ChannelState:
    """Haar-random pure state split m | n in label order."""
    state = random_pure_state(m + n, seed)
    return ChannelState(state, tuple(range(m)), tuple(range(m, m + n)))


@dataclass(frozen=True)
class PlantedChannel:
    """A scrambled channel with known ground truth.

    reference is the pre-scramble state: d singlets on (sender qubit i,
    receiver qubit m + i) times the residual factor on the leftover qubits.
    The scrambling is local, so capacity and entropy match the reference.
    """

    channel: ChannelState
    capacity: int
    seed: int
    reference: PureState


def generate_planted(m: int, n: int, d: int, seed: int,
                     eps: float = 1e-9) -> PlantedChannel:
    """Channel of known capacity d: Bell stack times generic residual,
    hidden behind independent Haar unitaries on each side.

    The residual is redrawn until its receiver-side spectrum is simple with
    gaps above 10 * eps * 2**d and no weight within that margin of zero, so
    clustering at eps recovers multiplicities of exactly 2**d and analysis
    must report exactly d.
    """
    if not (1 <= m <= MAX_QUBITS and 1 <= n <= MAX_QUBITS and m + n <= MAX_QUBITS):
        raise ValueError("party sizes must be positive with at most 16 qubits total")
    if not 0 <= d <= min(m, n):
        raise ValueError("planted capacity must lie in 0..min(m, n)")
    root = np.random.SeedSequence(seed)
    residual_seq, scramble_a, scramble_b = root.spawn(3)

    factors = [bell_state(1)] * d
    ra, rb = m - d, n - d
    if ra + rb:
        factors.append(_gapped_residual(ra, rb, d, eps, residual_seq))
    reference = tensor(factors)
    order = tuple(range(0, 2 * d, 2)) + tuple(2 * d + j for j in range(ra)) \
        + tuple(range(1, 2 * d, 2)) + tuple(2 * d + ra + j for j in range(rb))
    reference = permute_qubits(reference, order)

    alice = tuple(range(m))
    bob = tuple(range(m, m + n))
    state = apply_unitary(reference, haar_unitary(1 << m, scramble_a), alice)
    state = apply_unitary(state, haar_unitary(1 << n, scramble_b), bob)
    return PlantedChannel(ChannelState(state, alice, bob), d, seed, reference)


def _gapped_residual(ra: int, rb: int, d: int, eps: float, seq) -> PureState:
    """Residual factor whose receiver-side spectrum is eps-simple.

    When either side is empty the residual is the other side's |0...0>,
    which needs no gap condition: it contributes a single weight-one value.
    """
    if ra == 0 or rb == 0:
        return basis_state((0,) * (ra + rb))
    margin = 10.0 * eps * (1 << d)
    for child in seq.spawn(256):
        candidate = random_pure_state(ra + rb, child)
        s = np.linalg.svd(
            candidate.amplitudes.reshape(1 << ra, 1 << rb), compute_uv=False
        )
        p = np.sort(s * s)[::-1]
        if p[-1] <= margin:
            continue
        if p.size > 1 and np.min(-np.diff(p)) <= margin:
            continue
        return candidate
    raise ArithmeticError("could not draw a gapped residual spectrum")
