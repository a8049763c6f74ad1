import numpy as np
import pytest

from spinsim.compiler import (
    Circuit,
    GateSet,
    circuit_unitary,
    controlled_circuit,
    decompose_multi_pauli,
    decompose_pauli_pair,
    dumps_circuit,
    embed_unitary,
    equal_up_to_global_phase,
    heisenberg2_circuit,
    inverse_circuit,
    loads_circuit,
    run_circuit,
)
from spinsim.errors import InputError, ResourceError
from spinsim.gates import GateOp, PAULI, gate_matrix, hadamard, hermitian_expm, pauli_pair_exponential
from spinsim.statevector import basis_state

RNG = np.random.default_rng(2024)


def heis2_target(d):
    gen = sum(np.kron(PAULI[a], PAULI[a]) for a in "XYZ")
    return hermitian_expm(d * gen)


class TestEmbedUnitary:
    def test_adjacent_targets_match_kron(self):
        u = gate_matrix(GateOp("CPhase", (0.7,), (1, 2)))
        full = embed_unitary(u, (1, 2), 3)
        assert np.allclose(full, np.kron(u, np.eye(2)))

    def test_trailing_targets_match_kron(self):
        u = gate_matrix(GateOp("Uxy", (0.4,), (2, 3)))
        full = embed_unitary(u, (2, 3), 3)
        assert np.allclose(full, np.kron(np.eye(2), u))

    def test_reversed_target_order(self):
        # CNOT with control on qubit 2, target on qubit 1
        full = embed_unitary(gate_matrix(GateOp("CNOT", (), (2, 1))), (2, 1), 2)
        expected = np.array(
            [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
        )
        assert np.allclose(full, expected)

    def test_non_adjacent(self):
        z1z3 = embed_unitary(np.diag([1, -1, -1, 1]).astype(complex), (1, 3), 3)
        expected = np.kron(np.kron(PAULI["Z"], np.eye(2)), PAULI["Z"])
        assert np.allclose(z1z3, expected)


class TestCircuitUnitary:
    def test_empty_identity(self):
        assert np.allclose(circuit_unitary(Circuit(2, ())), np.eye(4))

    def test_single_hadamard(self):
        c = Circuit(1, (GateOp("H", (), (1,)),))
        assert np.allclose(circuit_unitary(c), hadamard())

    def test_cnot_involution(self):
        c = Circuit(2, (GateOp("CNOT", (), (1, 2)), GateOp("CNOT", (), (1, 2))))
        assert np.allclose(circuit_unitary(c), np.eye(4))

    def test_temporal_order(self):
        # X then H on one qubit: matrix is H @ X
        c = Circuit(1, (GateOp("X", (), (1,)), GateOp("H", (), (1,))))
        assert np.allclose(circuit_unitary(c), hadamard() @ PAULI["X"])

    def test_global_phase(self):
        c = Circuit(1, (), global_phase=0.5)
        assert np.allclose(circuit_unitary(c), np.exp(0.5j) * np.eye(2))

    def test_register_limit(self):
        with pytest.raises(ResourceError):
            circuit_unitary(Circuit(13, ()))

    def test_unitary_for_random_circuits(self):
        for _ in range(5):
            ops = []
            for _ in range(12):
                d = float(RNG.uniform(-3, 3))
                ops.append(GateOp("Rz", (d,), (int(RNG.integers(1, 4)),)))
                q1, q2 = RNG.choice(3, size=2, replace=False) + 1
                ops.append(GateOp("CNOT", (), (int(q1), int(q2))))
            u = circuit_unitary(Circuit(3, tuple(ops)))
            assert np.max(np.abs(u.conj().T @ u - np.eye(8))) <= 1e-10


class TestEqualUpToGlobalPhase:
    def test_pure_phase(self):
        assert equal_up_to_global_phase(np.eye(4), np.exp(1j * np.pi / 7) * np.eye(4))

    def test_different_gates(self):
        x1 = np.kron(PAULI["X"], np.eye(2))
        assert not equal_up_to_global_phase(np.eye(4), x1)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            equal_up_to_global_phase(np.eye(2), np.eye(4))


class TestDecomposePauliPair:
    def test_s1_zz_structure(self):
        c = decompose_pauli_pair("z", "z", 0.3, (1, 2), GateSet.S1)
        kinds = [op.kind for op in c.ops]
        assert kinds == ["CNOT", "Rz", "CNOT"]
        assert c.ops[1].params == (0.6,)
        assert c.ops[1].targets == (2,)

    @pytest.mark.parametrize("gs", list(GateSet))
    @pytest.mark.parametrize("alpha", "xyz")
    @pytest.mark.parametrize("beta", "xyz")
    def test_soundness_all_sets(self, gs, alpha, beta):
        for d in RNG.uniform(-np.pi, np.pi, 5):
            c = decompose_pauli_pair(alpha, beta, float(d), (1, 2), gs)
            target = pauli_pair_exponential(alpha, beta, float(d))
            assert equal_up_to_global_phase(circuit_unitary(c), target, 1e-10)

    def test_delta_zero_identity(self):
        for gs in GateSet:
            c = decompose_pauli_pair("z", "z", 0.0, (1, 2), gs)
            assert equal_up_to_global_phase(circuit_unitary(c), np.eye(4), 1e-10)

    def test_nonadjacent_and_reversed_qubits(self):
        for qubits in ((1, 3), (3, 1), (2, 1)):
            n = max(qubits)
            c = decompose_pauli_pair("x", "y", 0.7, qubits, GateSet.S1)
            i, j = qubits
            gen = np.zeros((2**n, 2**n), dtype=complex)
            letters = ["I"] * n
            letters[i - 1], letters[j - 1] = "X", "Y"
            m = np.eye(1, dtype=complex)
            for ch in letters:
                m = np.kron(m, PAULI[ch])
            target = hermitian_expm(0.7 * m)
            assert equal_up_to_global_phase(circuit_unitary(c), target, 1e-10)

    def test_s2_gate_budget(self):
        c = decompose_pauli_pair("x", "x", 0.9, (1, 2), GateSet.S2)
        assert c.two_qubit_count("Uxy") == 2
        assert c.two_qubit_count() == 2

    def test_s3_single_cphase_exact_with_phase(self):
        # elementwise equality once the accumulated global phase is included
        d = 0.42
        c = decompose_pauli_pair("z", "z", d, (1, 2), GateSet.S3)
        assert c.two_qubit_count("CPhase") == 1
        assert np.max(np.abs(circuit_unitary(c) - pauli_pair_exponential("z", "z", d))) <= 1e-12

    def test_s3_negative_delta_uses_two_cphase_with_positive_angles(self):
        d = -0.42
        c = decompose_pauli_pair("z", "z", d, (1, 2), GateSet.S3)
        cps = [op for op in c.ops if op.kind == "CPhase"]
        assert len(cps) == 2
        assert all(op.params[0] > 0 for op in cps)
        assert np.max(np.abs(circuit_unitary(c) - pauli_pair_exponential("z", "z", d))) <= 1e-12

    def test_s4_single_collective(self):
        c = decompose_pauli_pair("y", "z", 0.31, (1, 2), GateSet.S4)
        assert c.two_qubit_count("MS_T4") == 1
        assert all(op.kind.startswith("MS_") for op in c.ops)

    def test_same_qubit_rejected(self):
        with pytest.raises(InputError):
            decompose_pauli_pair("x", "x", 0.1, (2, 2), GateSet.S1)

    def test_bad_axis(self):
        with pytest.raises(InputError):
            decompose_pauli_pair("a", "x", 0.1, (1, 2), GateSet.S1)


class TestDecomposeMultiPauli:
    def test_zzz_structure(self):
        c = decompose_multi_pauli(["z", "z", "z"], 0.2, (1, 2, 3))
        assert c.two_qubit_count("CNOT") == 4
        rz = [op for op in c.ops if op.kind == "Rz"]
        assert len(rz) == 1 and rz[0].params == (0.4,)

    @pytest.mark.parametrize("axes", [("z", "z", "z"), ("x", "y", "z"), ("y", "y", "x")])
    def test_oracle_equality(self, axes):
        for d in RNG.uniform(-np.pi, np.pi, 5):
            c = decompose_multi_pauli(list(axes), float(d), (1, 2, 3))
            gen = np.eye(1, dtype=complex)
            for a in axes:
                gen = np.kron(gen, PAULI[a.upper()])
            assert equal_up_to_global_phase(
                circuit_unitary(c), hermitian_expm(float(d) * gen), 1e-10
            )

    def test_four_qubits(self):
        c = decompose_multi_pauli(["x", "z", "z", "y"], 0.37, (1, 2, 3, 4))
        gen = np.eye(1, dtype=complex)
        for a in "XZZY":
            gen = np.kron(gen, PAULI[a])
        assert equal_up_to_global_phase(circuit_unitary(c), hermitian_expm(0.37 * gen), 1e-10)
        assert c.two_qubit_count("CNOT") == 6

    def test_delta_zero(self):
        c = decompose_multi_pauli(["x", "y", "z"], 0.0, (1, 2, 3))
        assert equal_up_to_global_phase(circuit_unitary(c), np.eye(8), 1e-10)

    def test_too_few_qubits(self):
        with pytest.raises(InputError):
            decompose_multi_pauli(["z", "z"], 0.1, (1, 2))

    def test_non_s1_rejected(self):
        with pytest.raises(InputError):
            decompose_multi_pauli(["z", "z", "z"], 0.1, (1, 2, 3), GateSet.S4)


class TestHeisenberg2Variants:
    @pytest.mark.parametrize("variant", ["6cnot", "3cnot", "3uxy", "s4"])
    def test_oracle_equality(self, variant):
        for d in RNG.uniform(-np.pi, np.pi, 8):
            c = heisenberg2_circuit(float(d), (1, 2), variant)
            assert equal_up_to_global_phase(circuit_unitary(c), heis2_target(float(d)), 1e-10)

    def test_gate_counts(self):
        assert heisenberg2_circuit(0.5, (1, 2), "6cnot").two_qubit_count("CNOT") == 6
        assert heisenberg2_circuit(0.5, (1, 2), "3cnot").two_qubit_count("CNOT") == 3
        assert heisenberg2_circuit(0.5, (1, 2), "3uxy").two_qubit_count("Uxy") == 3
        assert heisenberg2_circuit(0.5, (1, 2), "s4").two_qubit_count("MS_T4") == 3

    def test_variants_agree_pairwise(self):
        d = 0.77
        us = [
            circuit_unitary(heisenberg2_circuit(d, (1, 2), v))
            for v in ("6cnot", "3cnot", "3uxy", "s4")
        ]
        for u in us[1:]:
            assert equal_up_to_global_phase(us[0], u, 1e-10)

    def test_delta_zero(self):
        for v in ("6cnot", "3cnot", "3uxy", "s4"):
            c = heisenberg2_circuit(0.0, (1, 2), v)
            assert equal_up_to_global_phase(circuit_unitary(c), np.eye(4), 1e-10)

    def test_weyl_chamber_corners(self):
        # delta values where the canonical class degenerates
        for d in (np.pi / 8, np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi, -np.pi / 8):
            c = heisenberg2_circuit(float(d), (1, 2), "3cnot")
            assert c.two_qubit_count("CNOT") == 3
            assert equal_up_to_global_phase(circuit_unitary(c), heis2_target(float(d)), 1e-10)

    def test_reversed_qubit_pair(self):
        c = heisenberg2_circuit(0.3, (2, 1), "3cnot")
        assert equal_up_to_global_phase(circuit_unitary(c), heis2_target(0.3), 1e-10)

    def test_unknown_variant(self):
        with pytest.raises(InputError):
            heisenberg2_circuit(0.5, (1, 2), "2cnot")


class TestInverseCircuit:
    def test_inverse_is_adjoint(self):
        for _ in range(5):
            ops = []
            for _ in range(10):
                choice = RNG.integers(0, 4)
                if choice == 0:
                    ops.append(GateOp("U3", tuple(RNG.uniform(-3, 3, 3)), (1,)))
                elif choice == 1:
                    ops.append(GateOp("CNOT", (), (1, 2)))
                elif choice == 2:
                    ops.append(GateOp("Uxy", (float(RNG.uniform(-2, 2)),), (1, 2)))
                else:
                    ops.append(GateOp("H", (), (2,)))
            c = Circuit(2, tuple(ops), global_phase=float(RNG.uniform(-1, 1)))
            u = circuit_unitary(c)
            uinv = circuit_unitary(inverse_circuit(c))
            assert np.max(np.abs(uinv - u.conj().T)) <= 1e-10


class TestControlledCircuit:
    @pytest.mark.parametrize(
        "op",
        [
            GateOp("X", (), (1,)),
            GateOp("H", (), (1,)),
            GateOp("Phase", (0.73,), (1,)),
            GateOp("Rx", (1.3,), (2,)),
            GateOp("Ry", (-0.4,), (1,)),
            GateOp("Rz", (2.1,), (2,)),
            GateOp("U3", (0.5, 1.5, -0.7), (1,)),
            GateOp("CNOT", (), (1, 2)),
            GateOp("CNOT", (), (2, 1)),
            GateOp("CPhase", (0.9,), (1, 2)),
            GateOp("ZZ", (0.6,), (1, 2)),
            GateOp("XX", (-0.6,), (1, 2)),
            GateOp("YY", (0.25,), (1, 2)),
            GateOp("Uxy", (0.8,), (1, 2)),
        ],
    )
    def test_single_gate_against_dense_control(self, op):
        base = Circuit(2, (op,))
        ctrl = controlled_circuit(base, 3)
        u_sys = circuit_unitary(base)
        # control qubit 3 is the least significant bit
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        expected = np.kron(np.eye(4), p0) + np.kron(u_sys, p1)
        assert np.max(np.abs(circuit_unitary(ctrl) - expected)) <= 1e-10

    def test_global_phase_becomes_controlled_phase(self):
        base = Circuit(2, (), global_phase=0.81)
        ctrl = controlled_circuit(base, 3)
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        expected = np.kron(np.eye(4), p0) + np.exp(0.81j) * np.kron(np.eye(4), p1)
        assert np.max(np.abs(circuit_unitary(ctrl) - expected)) <= 1e-10

    def test_whole_circuit(self):
        base = Circuit(
            2,
            (
                GateOp("H", (), (1,)),
                GateOp("CNOT", (), (1, 2)),
                GateOp("Rz", (0.37,), (2,)),
                GateOp("Uxy", (0.21,), (1, 2)),
            ),
            global_phase=0.11,
        )
        ctrl = controlled_circuit(base, 3)
        u_sys = circuit_unitary(base)
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        expected = np.kron(np.eye(4), p0) + np.kron(u_sys, p1)
        assert np.max(np.abs(circuit_unitary(ctrl) - expected)) <= 1e-10

    def test_ms_rejected(self):
        with pytest.raises(InputError):
            controlled_circuit(Circuit(2, (GateOp("MS_T4", (0.1, 0.0), (1, 2)),)), 3)

    def test_control_collision(self):
        with pytest.raises(InputError):
            controlled_circuit(Circuit(2, (GateOp("X", (), (2,)),)), 2)


class TestSerialization:
    def test_roundtrip(self):
        c = heisenberg2_circuit(0.4, (1, 2), "3cnot")
        text = dumps_circuit(c)
        c2 = loads_circuit(text)
        assert c2.n_qubits == c.n_qubits
        assert c2.ops == c.ops
        assert c2.global_phase == pytest.approx(c.global_phase)
        assert np.max(np.abs(circuit_unitary(c2) - circuit_unitary(c))) <= 1e-12

    def test_format_shape(self):
        c = Circuit(2, (GateOp("Rz", (0.5,), (2,)), GateOp("CNOT", (), (1, 2))), 0.25)
        text = dumps_circuit(c)
        lines = text.strip().splitlines()
        assert lines[0] == "qubits 2"
        assert lines[1] == "Rz(0.5) 2"
        assert lines[2] == "CNOT() 1 2"
        assert lines[3] == "phase 0.25"

    def test_parse_error(self):
        with pytest.raises(InputError):
            loads_circuit("qubits 2\nnot a gate line\n")


class TestRunCircuit:
    def test_matches_unitary(self):
        c = heisenberg2_circuit(0.9, (1, 2), "6cnot")
        state = run_circuit(basis_state(2, "01"), c)
        expected = circuit_unitary(c) @ np.array([0, 1, 0, 0], dtype=complex)
        assert np.max(np.abs(state.amplitudes - expected)) <= 1e-12
