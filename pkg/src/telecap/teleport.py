"""End-to-end teleportation over an analyzed channel, with exact branch
accounting.

Both protocol flavours consume a channel together with its analysis report:
the local unitaries are applied first, turning the channel into singlet
pairs plus a residual factor, then each payload qubit is pushed through one
pair.  The Bell flavour measures (payload qubit, sender half) directly in
the Bell basis; the circuit flavour first applies the standard two-qubit
measurement circuit and reads both qubits in the computational basis.  The
two differ only in how the classical two-bit message is labeled.

Outcome index conventions, per pair:

* Bell method: raw outcome r in 0..3 means Bell state r+1 was found, and
  the receiver corrects with operator r+1.
* Circuit method: raw outcome r packs the two measured bits (payload bit
  high), and the receiver corrects with operator 4 - r.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .capacity import DEFAULT_EPS, AnalysisReport, analyze
from .linalg import schmidt_decompose
from .states import (
    UNREACHABLE_PROBABILITY,
    ChannelState,
    PureState,
    apply_unitary,
    basis_state,
    bell_state,
    permute_qubits,
    project_and_collapse,
    tensor,
)

__all__ = [
    "CapacityShortfall",
    "BranchOutcome",
    "TeleportResult",
    "correction_operator",
    "circuit_unitary",
    "bell_round",
    "circuit_round",
    "teleport_bell",
    "teleport_circuit",
    "received_state",
    "expansion_identity_defect",
]


class CapacityShortfall(ValueError):
    """Payload needs more faithful qubits than the channel provides."""


_CORRECTIONS = (
    np.array([[1, 0], [0, 1]], dtype=complex),    # 1: identity
    np.array([[1, 0], [0, -1]], dtype=complex),   # 2: sigma_z
    np.array([[0, -1], [-1, 0]], dtype=complex),  # 3: -sigma_x
    np.array([[0, 1], [-1, 0]], dtype=complex),   # 4: i sigma_y
)
for _c in _CORRECTIONS:
    _c.setflags(write=False)


def correction_operator(i: int) -> np.ndarray:
    """Receiver correction for Bell outcome i in 1..4.

    Each operator squares to a sign, so it undoes itself up to global
    phase; the receiver applies it as-is.
    """
    if i not in (1, 2, 3, 4):
        raise ValueError("correction index must be 1..4")
    return _CORRECTIONS[i - 1].copy()


def circuit_unitary() -> np.ndarray:
    """Two-qubit measurement circuit: CNOT (control = second qubit,
    target = first), then H on the second qubit.

    It carries Bell state i to the computational state with index 4 - i,
    with a factor -1 on the singlet branch only; reading both qubits in
    the computational basis is therefore a relabeled Bell measurement.
    """
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
    cnot = np.zeros((4, 4), dtype=complex)
    for a, b in ((0, 0), (1, 3), (2, 2), (3, 1)):
        cnot[b, a] = 1.0
    return np.kron(np.eye(2, dtype=complex), h) @ cnot


_BELL_BASIS = tuple(bell_state(i) for i in (1, 2, 3, 4))
_COMPUTATIONAL_2 = tuple(basis_state(((r >> 1) & 1, r & 1)) for r in range(4))


@dataclass(frozen=True)
class BranchOutcome:
    """One classical branch of a protocol run.

    outcomes holds the raw per-pair measurement results (0..3), corrections
    the matching correction indices (1..4); probability is the joint branch
    probability and fidelity compares the receiver's qubits against the
    payload.
    """

    outcomes: tuple[int, ...]
    corrections: tuple[int, ...]
    probability: float
    fidelity: float

    @property
    def bits(self) -> str:
        """Classical message: two bits per pair, in measurement order."""
        return "".join(f"{r:02b}" for r in self.outcomes)


@dataclass(frozen=True)
class TeleportResult:
    method: str
    capacity: int
    payload_qubits: int
    branches: tuple[BranchOutcome, ...]

    @property
    def min_fidelity(self) -> float:
        return min(b.fidelity for b in self.branches)

    @property
    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches)


def bell_round(state: PureState, message_qubit: int, alice_qubit: int,
               bob_qubit: int, outcome: int | None = None, rng=None):
    """One Bell-measurement round: measure (message, sender half) in the
    Bell basis, correct the receiver half.

    outcome forces raw result 0..3; otherwise it is sampled from rng.
    Returns (raw outcome, probability, state after correction); the state
    is None when the forced outcome is unreachable.
    """
    return _round(state, (message_qubit, alice_qubit), bob_qubit,
                  _BELL_BASIS, None, _bell_correction, outcome, rng)


def circuit_round(state: PureState, message_qubit: int, alice_qubit: int,
                  bob_qubit: int, outcome: int | None = None, rng=None):
    """One circuit round: run the measurement circuit on (message, sender
    half), read both in the computational basis, correct the receiver."""
    return _round(state, (message_qubit, alice_qubit), bob_qubit,
                  _COMPUTATIONAL_2, circuit_unitary(), _circuit_correction,
                  outcome, rng)


def _bell_correction(raw: int) -> int:
    return raw + 1


def _circuit_correction(raw: int) -> int:
    return 4 - raw


def _round(state, targets, bob_qubit, basis, pre_unitary, to_correction,
           outcome, rng):
    if pre_unitary is not None:
        state = apply_unitary(state, pre_unitary, targets)
    if outcome is None:
        if rng is None:
            raise ValueError("sampling a round needs an rng")
        probs = np.array([
            project_and_collapse(state, targets, basis, r)[0] for r in range(4)
        ])
        outcome = int(rng.choice(4, p=probs / probs.sum()))
    elif outcome not in (0, 1, 2, 3):
        raise ValueError("raw outcome must be 0..3")
    probability, collapsed = project_and_collapse(state, targets, basis, outcome)
    if collapsed is None:
        return outcome, probability, None
    corrected = apply_unitary(
        collapsed, correction_operator(to_correction(outcome)), [bob_qubit]
    )
    return outcome, probability, corrected


def _prepare(channel: ChannelState, payload: PureState, report: AnalysisReport):
    """Canonicalized joint state (payload qubits first) and the shifted
    (message, sender half, receiver half) triple per used pair."""
    k = payload.n_qubits
    if k > report.capacity:
        raise CapacityShortfall(
            f"payload has {k} qubits but the channel teleports {report.capacity}"
        )
    joint = tensor([payload, channel.state])
    joint = apply_unitary(joint, report.u_a, [q + k for q in channel.alice])
    joint = apply_unitary(joint, report.u_b, [q + k for q in channel.bob])
    triples = [(t, a + k, b + k) for t, (a, b) in enumerate(report.pairs[:k])]
    receiving = [b for _, _, b in triples]
    return joint, triples, receiving


def _received_fidelity(state: PureState, receiving, payload: PureState) -> float:
    """Fidelity <payload| rho |payload> of the receiver's marginal."""
    n = state.n_qubits
    rest = [q for q in range(n) if q not in set(receiving)]
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.transpose(psi, list(receiving) + rest).reshape(1 << len(receiving), -1)
    vec = payload.amplitudes.conj() @ psi
    return float(np.real(np.vdot(vec, vec)))


def received_state(state: PureState, qubits) -> tuple[PureState, float]:
    """Dominant factor on the given qubits and its Schmidt weight.

    The weight is 1 exactly when those qubits are unentangled with the
    rest; the factor's phase follows the package-wide first-component
    convention.
    """
    qubits = [int(q) for q in qubits]
    n = state.n_qubits
    rest = [q for q in range(n) if q not in set(qubits)]
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.transpose(psi, qubits + rest).reshape(-1)
    s, u, _ = schmidt_decompose(psi, 1 << len(qubits), 1 << len(rest))
    return PureState(u[:, 0] / np.linalg.norm(u[:, 0])), float(s[0] ** 2)


def _run_exhaustive(joint, triples, round_fn):
    for combo in itertools.product(range(4), repeat=len(triples)):
        state, probability = joint, 1.0
        dead = False
        for (msg, a, b), raw in zip(triples, combo):
            _, p, state = round_fn(state, msg, a, b, outcome=raw)
            probability *= p
            if state is None:
                dead = True
                break
        if not dead and probability > UNREACHABLE_PROBABILITY:
            yield combo, probability, state


def _run_sampled(joint, triples, round_fn, seed, trials):
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    for child in seed.spawn(trials):
        rng = np.random.default_rng(child)
        state, probability, combo = joint, 1.0, []
        for msg, a, b in triples:
            raw, p, state = round_fn(state, msg, a, b, rng=rng)
            probability *= p
            combo.append(raw)
        yield tuple(combo), probability, state


def _teleport(channel, payload, report, round_fn, method, mode, seed, trials, eps):
    if report is None:
        report = analyze(channel, eps)
    joint, triples, receiving = _prepare(channel, payload, report)
    to_correction = _bell_correction if method == "bell" else _circuit_correction
    if mode == "exhaustive":
        runs = _run_exhaustive(joint, triples, round_fn)
    elif mode == "sample":
        if trials < 1:
            raise ValueError("trials must be at least 1")
        runs = _run_sampled(joint, triples, round_fn, seed, trials)
    else:
        raise ValueError("mode must be 'exhaustive' or 'sample'")
    branches = tuple(
        BranchOutcome(
            combo,
            tuple(to_correction(r) for r in combo),
            probability,
            _received_fidelity(state, receiving, payload),
        )
        for combo, probability, state in runs
    )
    return TeleportResult(method, report.capacity, payload.n_qubits, branches)


def teleport_bell(channel: ChannelState, payload: PureState,
                  report: AnalysisReport | None = None, mode: str = "exhaustive",
                  seed=None, trials: int = 1, eps: float = DEFAULT_EPS) -> TeleportResult:
    """Teleport the payload with per-pair Bell measurements.

    Exhaustive mode walks all 4**k classical branches (omitting those with
    probability below 1e-12); sample mode draws `trials` runs from the seeded
    generator, one branch record per run.  The payload may use any number of
    qubits up to the channel capacity; an oversized payload raises
    CapacityShortfall.
    """
    return _teleport(channel, payload, report, bell_round, "bell", mode,
                     seed, trials, eps)


def teleport_circuit(channel: ChannelState, payload: PureState,
                     report: AnalysisReport | None = None, mode: str = "exhaustive",
                     seed=None, trials: int = 1, eps: float = DEFAULT_EPS) -> TeleportResult:
    """Teleport the payload with the measurement circuit on each pair.

    Equivalent to teleport_bell branch by branch under the raw-outcome
    relabeling r -> 4 - r (multi-qubit payloads go through one pair at a
    time, so the relabeling applies per pair).
    """
    return _teleport(channel, payload, report, circuit_round, "circuit", mode,
                     seed, trials, eps)


def expansion_identity_defect(psi: PureState) -> float:
    """Max-norm defect of the singlet expansion identity.

    With qubit 0 of psi as the message leg and a fresh singlet on (a, b),
    the product psi (x) singlet_ab must equal
    -1/2 sum_i bell_i on (message, a) (x) correction_i applied to the
    message leg now living on b.  Returns the largest amplitude deviation;
    exact arithmetic gives 0.
    """
    n = psi.n_qubits
    lhs = tensor([psi, bell_state(1)])
    acc = np.zeros_like(lhs.amplitudes)
    order = (0, *range(3, n + 2), 1, 2)
    for i in (1, 2, 3, 4):
        chi = apply_unitary(psi, correction_operator(i), [0])
        piece = permute_qubits(tensor([bell_state(i), chi]), order)
        acc = acc + piece.amplitudes
    return float(np.max(np.abs(lhs.amplitudes + 0.5 * acc)))
