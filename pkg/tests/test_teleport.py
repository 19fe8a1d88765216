import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from telecap.capacity import analyze
from telecap.corpus import generate_planted, ghz_channel, n_bell_channel
from telecap.states import (
    basis_state,
    bell_state,
    fidelity,
    random_pure_state,
    tensor,
)
from telecap.teleport import (
    CapacityShortfall,
    bell_round,
    circuit_round,
    circuit_unitary,
    correction_operator,
    expansion_identity_defect,
    received_state,
    teleport_bell,
    teleport_circuit,
)


class TestCorrections:
    def test_frozen_matrices(self):
        assert np.array_equal(correction_operator(1), np.eye(2))
        assert np.array_equal(correction_operator(2), np.diag([1, -1]))
        assert np.array_equal(correction_operator(3), [[0, -1], [-1, 0]])
        assert np.array_equal(correction_operator(4), [[0, 1], [-1, 0]])

    def test_each_squares_to_a_sign(self):
        for i in (1, 2, 3, 4):
            u = correction_operator(i)
            sq = u @ u
            assert np.allclose(sq, np.eye(2)) or np.allclose(sq, -np.eye(2))

    def test_index_guard(self):
        with pytest.raises(ValueError):
            correction_operator(0)


class TestCircuitUnitary:
    def test_maps_bell_to_computational_with_frozen_signs(self):
        u = circuit_unitary()
        signs = {1: -1.0, 2: 1.0, 3: 1.0, 4: 1.0}
        for i in (1, 2, 3, 4):
            got = u @ bell_state(i).amplitudes
            want = np.zeros(4)
            want[4 - i] = signs[i]
            assert np.max(np.abs(got - want)) < 1e-12

    def test_unitary(self):
        u = circuit_unitary()
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12


class TestExpansionIdentity:
    def test_basis_payloads_exact(self):
        assert expansion_identity_defect(basis_state((0,))) == 0.0
        assert expansion_identity_defect(basis_state((1,))) == 0.0

    @settings(max_examples=30)
    @given(st.integers(0, 10_000))
    def test_random_single_qubit(self, seed):
        assert expansion_identity_defect(random_pure_state(1, seed)) < 1e-12

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10_000), st.integers(2, 4))
    def test_entangled_message_leg(self, seed, n):
        # the identity holds with spectators hanging off the message qubit
        assert expansion_identity_defect(random_pure_state(n, seed)) < 1e-12


class TestRounds:
    def test_bell_round_outcomes_uniform_on_singlet(self):
        joint = tensor([random_pure_state(1, 3), bell_state(1)])
        for raw in range(4):
            _, p, out = bell_round(joint, 0, 1, 2, outcome=raw)
            assert p == pytest.approx(0.25, abs=1e-12)
            got, _ = received_state(out, [2])
            assert fidelity(got, random_pure_state(1, 3)) > 1 - 1e-12

    def test_unreachable_outcome_returns_none(self):
        joint = tensor([basis_state((0,)), basis_state((0,)), basis_state((0,))])
        raw, p, out = bell_round(joint, 0, 1, 2, outcome=0)
        assert p < 1e-12 and out is None

    def test_sampling_needs_rng(self):
        joint = tensor([random_pure_state(1, 3), bell_state(1)])
        with pytest.raises(ValueError, match="rng"):
            bell_round(joint, 0, 1, 2)

    def test_circuit_round_matches_bell_round(self):
        payload = random_pure_state(1, 8)
        joint = tensor([payload, bell_state(1)])
        for raw in range(4):
            _, pb, outb = bell_round(joint, 0, 1, 2, outcome=3 - raw)
            _, pc, outc = circuit_round(joint, 0, 1, 2, outcome=raw)
            assert pb == pytest.approx(pc, abs=1e-12)
            sb, _ = received_state(outb, [2])
            sc, _ = received_state(outc, [2])
            assert fidelity(sb, sc) > 1 - 1e-12


class TestTeleportBell:
    def test_single_pair_all_branches_faithful(self):
        ch = n_bell_channel(1)
        payload = random_pure_state(1, 11)
        res = teleport_bell(ch, payload)
        assert res.capacity == 1 and res.payload_qubits == 1
        assert len(res.branches) == 4
        for b in res.branches:
            assert b.probability == pytest.approx(0.25, abs=1e-12)
            assert b.fidelity > 1 - 1e-12
        assert res.total_probability == pytest.approx(1.0, abs=1e-12)

    def test_message_bits_enumerate_branches(self):
        res = teleport_bell(n_bell_channel(1), random_pure_state(1, 12))
        assert sorted(b.bits for b in res.branches) == ["00", "01", "10", "11"]
        for b in res.branches:
            assert b.corrections == (b.outcomes[0] + 1,)

    def test_entangled_payload_two_pairs(self):
        ch = n_bell_channel(2)
        payload = random_pure_state(2, 13)   # generically entangled
        res = teleport_bell(ch, payload)
        assert len(res.branches) == 16
        assert res.min_fidelity > 1 - 1e-12
        assert res.total_probability == pytest.approx(1.0, abs=1e-12)

    def test_payload_smaller_than_capacity(self):
        ch = n_bell_channel(2)
        res = teleport_bell(ch, random_pure_state(1, 14))
        assert res.payload_qubits == 1 and len(res.branches) == 4
        assert res.min_fidelity > 1 - 1e-12

    def test_payload_larger_than_capacity_raises(self):
        with pytest.raises(CapacityShortfall):
            teleport_bell(n_bell_channel(1), random_pure_state(2, 15))

    def test_over_planted_channel(self):
        p = generate_planted(3, 3, 2, seed=16)
        rep = analyze(p.channel)
        res = teleport_bell(p.channel, random_pure_state(2, 17), rep)
        assert res.min_fidelity > 1 - 1e-9
        assert res.total_probability == pytest.approx(1.0, abs=1e-9)

    def test_over_swapped_channel(self):
        p = generate_planted(1, 2, 1, seed=18)
        rep = analyze(p.channel)
        assert rep.swapped
        res = teleport_bell(p.channel, random_pure_state(1, 19), rep)
        assert res.min_fidelity > 1 - 1e-9

    def test_ghz_teleports_one_qubit(self):
        ch = ghz_channel(5, 2)
        res = teleport_bell(ch, random_pure_state(1, 20))
        assert res.capacity == 1
        assert res.min_fidelity > 1 - 1e-10

    def test_received_state_is_payload(self):
        payload = random_pure_state(1, 21)
        joint = tensor([payload, bell_state(1)])
        _, _, out = bell_round(joint, 0, 1, 2, outcome=2)
        got, weight = received_state(out, [2])
        assert weight == pytest.approx(1.0, abs=1e-12)
        assert fidelity(got, payload) > 1 - 1e-12


class TestSampling:
    def test_deterministic_per_seed(self):
        ch = n_bell_channel(1)
        payload = random_pure_state(1, 22)
        a = teleport_bell(ch, payload, mode="sample", seed=5, trials=6)
        b = teleport_bell(ch, payload, mode="sample", seed=5, trials=6)
        assert [x.outcomes for x in a.branches] == [x.outcomes for x in b.branches]

    def test_seed_changes_outcomes(self):
        ch = n_bell_channel(1)
        payload = random_pure_state(1, 22)
        runs = {
            tuple(x.outcomes for x in
                  teleport_bell(ch, payload, mode="sample", seed=s, trials=8).branches)
            for s in range(4)
        }
        assert len(runs) > 1

    def test_sampled_branches_faithful(self):
        p = generate_planted(2, 2, 1, seed=23)
        res = teleport_bell(p.channel, random_pure_state(1, 24),
                            mode="sample", seed=1, trials=5)
        assert len(res.branches) == 5
        assert res.min_fidelity > 1 - 1e-9
        for b in res.branches:
            assert b.probability == pytest.approx(0.25, abs=1e-9)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError, match="mode"):
            teleport_bell(n_bell_channel(1), random_pure_state(1, 1), mode="blend")

    def test_bad_trials_rejected(self):
        with pytest.raises(ValueError, match="trials"):
            teleport_bell(n_bell_channel(1), random_pure_state(1, 1),
                          mode="sample", trials=0)


class TestMethodEquivalence:
    @pytest.mark.parametrize("case", [(1, 1, 1, 30), (2, 2, 1, 31), (3, 2, 2, 32)])
    def test_branch_bijection(self, case):
        m, n, d, seed = case
        ch = generate_planted(m, n, d, seed).channel
        rep = analyze(ch)
        payload = random_pure_state(d, seed + 1)
        rb = teleport_bell(ch, payload, rep)
        rc = teleport_circuit(ch, payload, rep)
        by_outcome = {b.outcomes: b for b in rb.branches}
        assert len(rc.branches) == len(rb.branches)
        for cb in rc.branches:
            twin = by_outcome[tuple(3 - r for r in cb.outcomes)]
            assert twin.corrections == cb.corrections
            assert cb.probability == pytest.approx(twin.probability, abs=1e-10)
            assert cb.fidelity == pytest.approx(twin.fidelity, abs=1e-10)
