"""State-vector kernels, the clean-qubit output distribution, and sampling."""

import numpy as np
import pytest

import dqc1sim.simulator as sim
from dqc1sim.circuits import Circuit, cx, h, mcx, rz, s, t, x, z
from dqc1sim.ensembles import random_circuit
from dqc1sim.oracles import circuit_unitary
from dqc1sim.simulator import (
    Distribution,
    StateVector,
    amplitude_zero,
    apply_circuit,
    bits_to_index,
    dqc1_distribution,
    f_value,
    index_to_bits,
    sample,
)

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class TestIndexConvention:
    def test_qubit_zero_is_most_significant(self):
        # '10' means qubit 0 = 1, qubit 1 = 0, i.e. basis index 2 on two qubits.
        assert bits_to_index("10", 2) == 2
        assert bits_to_index("01", 2) == 1
        assert bits_to_index((1, 0, 1), 3) == 5

    def test_round_trip(self):
        for width in (1, 2, 5):
            for i in range(1 << width):
                assert bits_to_index(index_to_bits(i, width), width) == i

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            bits_to_index("012", 3)
        with pytest.raises(ValueError):
            bits_to_index("01", 3)
        with pytest.raises(ValueError):
            index_to_bits(4, 2)

    def test_basis_state(self):
        psi = StateVector.basis(2, "01")
        assert psi.amplitudes[1] == 1.0
        assert np.count_nonzero(psi.amplitudes) == 1


class TestSingleGates:
    def test_h_on_zero(self):
        out = apply_circuit(StateVector.zero(1), Circuit(1, (h(0),)))
        assert np.allclose(out.amplitudes, [_INV_SQRT2, _INV_SQRT2])

    def test_h_twice_is_identity(self):
        out = apply_circuit(StateVector.basis(1, 1), Circuit(1, (h(0), h(0))))
        assert np.allclose(out.amplitudes, [0.0, 1.0], atol=1e-15)

    def test_x_flips(self):
        out = apply_circuit(StateVector.zero(2), Circuit(2, (x(1),)))
        assert out.amplitudes[1] == 1.0

    def test_phase_family(self):
        # Z, S, T on |1> multiply by -1, i, exp(i pi/4).
        for gate, phase in ((z(0), -1.0), (s(0), 1j), (t(0), np.exp(1j * np.pi / 4))):
            out = apply_circuit(StateVector.basis(1, 1), Circuit(1, (gate,)))
            assert abs(out.amplitudes[1] - phase) < 1e-15

    def test_rz_phases(self):
        theta = 0.37
        c = Circuit(1, (rz(theta, 0),))
        lo = apply_circuit(StateVector.basis(1, 0), c).amplitudes[0]
        hi = apply_circuit(StateVector.basis(1, 1), c).amplitudes[1]
        assert abs(lo - np.exp(-0.5j * theta)) < 1e-15
        assert abs(hi - np.exp(+0.5j * theta)) < 1e-15

    def test_cx_truth_table(self):
        c = Circuit(2, (cx(0, 1),))
        for src, dst in ((0, 0), (1, 1), (2, 3), (3, 2)):
            out = apply_circuit(StateVector.basis(2, src), c)
            assert out.amplitudes[dst] == 1.0


class TestMcxPolarity:
    def test_anti_control_fires_on_zero(self):
        c = Circuit(2, (mcx(1, (0,), (0,)),))
        assert apply_circuit(StateVector.basis(2, "00"), c).amplitudes[bits_to_index("01", 2)] == 1.0
        assert apply_circuit(StateVector.basis(2, "10"), c).amplitudes[bits_to_index("10", 2)] == 1.0

    def test_plain_control_matches_cx(self):
        a = Circuit(2, (mcx(1, (0,), (1,)),))
        b = Circuit(2, (cx(0, 1),))
        for i in range(4):
            psi = StateVector.basis(2, i)
            assert np.array_equal(apply_circuit(psi, a).amplitudes, apply_circuit(psi, b).amplitudes)

    def test_mixed_polarities(self):
        # Fires only when control 1 is 0 and control 2 is 1.
        c = Circuit(3, (mcx(0, (1, 2), (0, 1)),))
        assert apply_circuit(StateVector.basis(3, "001"), c).amplitudes[bits_to_index("101", 3)] == 1.0
        assert apply_circuit(StateVector.basis(3, "011"), c).amplitudes[bits_to_index("011", 3)] == 1.0
        assert apply_circuit(StateVector.basis(3, "000"), c).amplitudes[bits_to_index("000", 3)] == 1.0


class TestAgainstDenseUnitary:
    @pytest.mark.parametrize("seed", range(4))
    def test_random_circuits(self, seed):
        rng = np.random.default_rng(100 + seed)
        for _ in range(15):
            w = int(rng.integers(1, 7))
            c = random_circuit(w, int(rng.integers(1, 40)), rng)
            mat = circuit_unitary(c)
            psi0 = rng.standard_normal(1 << w) + 1j * rng.standard_normal(1 << w)
            psi0 /= np.linalg.norm(psi0)
            fast = apply_circuit(StateVector(w, psi0.copy()), c).amplitudes
            assert np.abs(fast - mat @ psi0).max() < 1e-12

    def test_unitarity_at_width(self):
        rng = np.random.default_rng(7)
        c = random_circuit(12, 200, rng)
        psi = rng.standard_normal(1 << 12) + 1j * rng.standard_normal(1 << 12)
        psi /= np.linalg.norm(psi)
        out = apply_circuit(StateVector(12, psi), c)
        assert abs(out.norm() - 1.0) < 1e-10


class TestApplyCircuit:
    def test_pure(self):
        psi = StateVector.zero(1)
        before = psi.amplitudes.copy()
        apply_circuit(psi, Circuit(1, (h(0),)))
        assert np.array_equal(psi.amplitudes, before)

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="width"):
            apply_circuit(StateVector.zero(2), Circuit(3))

    def test_amplitudes_read_only(self):
        psi = StateVector.zero(1)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.0


class TestFValue:
    def test_identity_circuit(self):
        u = Circuit(3)
        assert f_value(u, "000") == pytest.approx(1.0, abs=1e-15)
        assert f_value(u, "100") == pytest.approx(0.0, abs=1e-15)
        assert f_value(u, "010") == pytest.approx(1.0, abs=1e-15)

    def test_z_argument_forms(self):
        u = random_circuit(4, 30, np.random.default_rng(3))
        want = f_value(u, "0110")
        assert f_value(u, 6) == pytest.approx(want, abs=1e-15)
        assert f_value(u, (0, 1, 1, 0)) == pytest.approx(want, abs=1e-15)

    def test_z_out_of_range(self):
        with pytest.raises(ValueError):
            f_value(Circuit(2), 4)
        with pytest.raises(ValueError):
            f_value(Circuit(2), "011")

    def test_matches_distribution(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            u = random_circuit(4, 25, rng)
            d = dqc1_distribution(u)
            scale = float(1 << d.n)
            for idx in range(16):
                assert f_value(u, idx) == pytest.approx(scale * d.probs[idx], abs=5e-14)


class TestDqc1Distribution:
    def test_identity(self):
        d = dqc1_distribution(Circuit(3))
        want = np.zeros(8)
        want[:4] = 0.25
        assert np.abs(d.probs - want).max() < 1e-15

    def test_hadamard_on_clean(self):
        d = dqc1_distribution(Circuit(2, (h(0),)))
        assert np.abs(d.probs - 0.25).max() < 1e-15

    def test_normalized_and_bounded(self):
        rng = np.random.default_rng(23)
        for _ in range(8):
            n = int(rng.integers(1, 6))
            d = dqc1_distribution(random_circuit(n + 1, 30, rng))
            assert abs(d.probs.sum() - 1.0) < 1e-9
            assert d.probs.max() <= 2.0 ** (-n) + 1e-12

    def test_threads_give_identical_bytes(self):
        u = random_circuit(6, 40, np.random.default_rng(5))
        d1 = dqc1_distribution(u, threads=1)
        d4 = dqc1_distribution(u, threads=4)
        assert np.array_equal(d1.probs, d4.probs)

    def test_chunked_path_matches(self, monkeypatch):
        u = random_circuit(7, 40, np.random.default_rng(9))
        whole = dqc1_distribution(u)
        monkeypatch.setattr(sim, "_CHUNK_ENTRIES", 1 << 8)
        pieces = dqc1_distribution(u)
        assert np.array_equal(whole.probs, pieces.probs)

    def test_width_cap(self):
        with pytest.raises(ValueError, match="mixed qubits"):
            dqc1_distribution(Circuit(6), max_n=4)

    def test_degenerate_no_mixed_qubits(self):
        # Width 1 is just the clean qubit: n=0, two outcomes.
        d = dqc1_distribution(Circuit(1, (h(0),)))
        assert np.allclose(d.probs, [0.5, 0.5])


class TestDistributionType:
    def test_validation(self):
        with pytest.raises(ValueError):
            Distribution(1, np.array([0.5, 0.5]))  # wrong length
        with pytest.raises(ValueError):
            Distribution(1, np.array([0.7, 0.5, 0.0, 0.0]))  # not normalized
        with pytest.raises(ValueError):
            Distribution(1, np.array([-0.1, 0.55, 0.55, 0.0]))  # negative

    def test_outcome_bits(self):
        d = Distribution(1, np.array([0.25, 0.25, 0.25, 0.25]))
        assert [d.outcome_bits(i) for i in range(4)] == ["00", "01", "10", "11"]


class TestSample:
    def test_deterministic(self):
        d = dqc1_distribution(Circuit(2, (h(0), cx(0, 1))))
        assert sample(d, 50, seed=42) == sample(d, 50, seed=42)
        assert sample(d, 50, seed=42) != sample(d, 50, seed=43)

    def test_point_mass(self):
        probs = np.zeros(8)
        probs[:4] = [0.0, 1.0, 0.0, 0.0]
        d = Distribution(2, probs)
        assert sample(d, 20, seed=0) == ["001"] * 20

    def test_shape(self):
        d = dqc1_distribution(Circuit(3))
        draws = sample(d, 100, seed=1)
        assert len(draws) == 100
        assert all(len(b) == 3 and set(b) <= {"0", "1"} for b in draws)

    def test_frequencies_track_probs(self):
        d = dqc1_distribution(Circuit(2, (h(0),)))  # uniform on 4 outcomes
        draws = sample(d, 8000, seed=7)
        counts = np.bincount([int(b, 2) for b in draws], minlength=4)
        assert np.abs(counts / 8000 - 0.25).max() < 0.03

    def test_negative_count(self):
        d = dqc1_distribution(Circuit(2))
        with pytest.raises(ValueError):
            sample(d, -1, seed=0)
