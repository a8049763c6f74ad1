import numpy as np
import pytest

from spinsim.compiler import GateSet
from spinsim.errors import InputError
from spinsim.observables import (
    CorrelationSpec,
    SpectrumSpec,
    correlation_ancilla,
    correlation_direct,
    magnetization,
    spectrum_from_series,
    spin_correlation,
    unitary_expectation_series,
)
from spinsim.pauli import PauliHamiltonian, PauliString, heisenberg_chain
from spinsim.statevector import basis_state, product_state
from spinsim.trotter import TrotterPlan, exact_propagator

RNG = np.random.default_rng(60)


def fig6_system():
    return heisenberg_chain(3, [1.0, 1.0], 20.0)


class TestMagnetization:
    def test_up_state(self):
        assert magnetization(basis_state(1, "0"), 1) == pytest.approx(0.5)

    def test_fig4a_initial(self):
        s = product_state(2, "0+")
        assert magnetization(s, 1) == pytest.approx(0.5)
        assert magnetization(s, 2) == pytest.approx(0.0)

    def test_evolved_against_dense_oracle(self):
        h = heisenberg_chain(2, [1.0], 0.0)
        t = np.pi / 4
        amps = exact_propagator(h, t) @ product_state(2, "0+").amplitudes
        s = product_state(2, "0+")
        s.amplitudes[:] = amps
        z1 = np.kron(np.diag([1.0, -1.0]), np.eye(2))
        expected = 0.5 * np.real(np.vdot(amps, z1 @ amps))
        assert magnetization(s, 1) == pytest.approx(expected, abs=1e-12)

    def test_site_range(self):
        with pytest.raises(InputError):
            magnetization(basis_state(2, "00"), 3)


class TestCorrelationDirect:
    def test_identity_pair_is_one(self):
        spec = CorrelationSpec(
            v="I", w="I", vq=1, wq=1, initial="111",
            hamiltonian=fig6_system(), times=np.linspace(0, 2, 5),
        )
        assert np.allclose(correlation_direct(spec), 1.0)

    def test_equal_time_xx_autocorrelation(self):
        spec = CorrelationSpec(
            v="X", w="X", vq=1, wq=1, initial="111",
            hamiltonian=fig6_system(), times=[0.0],
        )
        raw = correlation_direct(spec)
        assert raw[0] == pytest.approx(1.0)
        assert spin_correlation(raw)[0] == pytest.approx(0.25)

    def test_hermitian_symmetry(self):
        # C_VV(-t) = conj(C_VV(t)) under exact evolution
        ts = np.linspace(0.1, 1.5, 6)
        fwd = CorrelationSpec(
            v="X", w="X", vq=2, wq=2, initial="111",
            hamiltonian=fig6_system(), times=ts,
        )
        bwd = CorrelationSpec(
            v="X", w="X", vq=2, wq=2, initial="111",
            hamiltonian=fig6_system(), times=-ts,
        )
        assert np.max(np.abs(correlation_direct(bwd) - np.conj(correlation_direct(fwd)))) <= 1e-10

    def test_bounded_by_one(self):
        for v, w in (("X", "Y"), ("Z", "X"), ("Y", "Y")):
            spec = CorrelationSpec(
                v=v, w=w, vq=1, wq=3, initial="100",
                hamiltonian=fig6_system(), times=np.linspace(0, 3, 7),
            )
            assert np.all(np.abs(correlation_direct(spec)) <= 1.0 + 1e-12)

    def test_conservation_witness(self):
        # <s_z1 + s_z2> constant under the 2-qubit Heisenberg evolution
        h = heisenberg_chain(2, [1.0], 0.0)
        total = []
        for t in np.linspace(0, 3, 9):
            s = product_state(2, "0+")
            s.amplitudes[:] = exact_propagator(h, float(t)) @ s.amplitudes
            total.append(magnetization(s, 1) + magnetization(s, 2))
        assert np.max(np.abs(np.array(total) - total[0])) <= 1e-10


class TestRouteEquivalence:
    def test_ancilla_identity_pair(self):
        spec = CorrelationSpec(
            v="I", w="I", vq=1, wq=1, initial="111",
            hamiltonian=fig6_system(), times=np.linspace(0, 2, 4),
            evolution="trotter", plan=TrotterPlan.fixed_n(5),
        )
        assert np.allclose(correlation_ancilla(spec), 1.0)

    def test_fig6_autocorrelation_t0(self):
        spec = CorrelationSpec(
            v="X", w="X", vq=1, wq=1, initial="111",
            hamiltonian=fig6_system(), times=[0.0],
            evolution="trotter", plan=TrotterPlan.fixed_n(5),
        )
        assert spin_correlation(correlation_ancilla(spec))[0] == pytest.approx(0.25, abs=1e-10)

    @pytest.mark.parametrize("v", "XYZ")
    @pytest.mark.parametrize("w", "XYZ")
    def test_all_pauli_pairs_all_sites(self, v, w):
        times = np.linspace(0.0, 1.4, 8)
        h = fig6_system()
        for vq in (1, 2, 3):
            for wq in (1, 2, 3):
                spec = CorrelationSpec(
                    v=v, w=w, vq=vq, wq=wq, initial="111",
                    hamiltonian=h, times=times,
                    evolution="trotter", plan=TrotterPlan.fixed_n(5),
                )
                direct = correlation_direct(spec)
                ancilla = correlation_ancilla(spec)
                assert np.max(np.abs(direct - ancilla)) <= 1e-10

    def test_exact_evolution_routes_agree(self):
        spec_kwargs = dict(
            v="Y", w="X", vq=3, wq=1, initial="111",
            hamiltonian=fig6_system(), times=np.linspace(0, 2, 5),
        )
        d = correlation_direct(CorrelationSpec(evolution="exact", **spec_kwargs))
        a = correlation_ancilla(CorrelationSpec(evolution="exact", **spec_kwargs))
        assert np.max(np.abs(d - a)) <= 1e-10


class TestSpecValidation:
    def test_bad_letter(self):
        with pytest.raises(InputError):
            CorrelationSpec(
                v="Q", w="X", vq=1, wq=1, initial="111",
                hamiltonian=fig6_system(), times=[0.0],
            )

    def test_bad_site(self):
        with pytest.raises(InputError):
            CorrelationSpec(
                v="X", w="X", vq=4, wq=1, initial="111",
                hamiltonian=fig6_system(), times=[0.0],
            )

    def test_bad_initial(self):
        with pytest.raises(InputError):
            CorrelationSpec(
                v="X", w="X", vq=1, wq=1, initial="11",
                hamiltonian=fig6_system(), times=[0.0],
            )


class TestUnitaryExpectationSeries:
    def test_sigma_z_on_plus_gives_cosine(self):
        q = PauliHamiltonian(1, [PauliString(1.0, "Z")])
        spec = SpectrumSpec(operator=q, initial="+", m=64, dtheta=0.1)
        series = unitary_expectation_series(spec)
        thetas = np.arange(64) * 0.1
        assert np.max(np.abs(series - np.cos(thetas))) <= 1e-10

    def test_eigenstate_pure_phase(self):
        # |00> is an eigenstate of Z1 + Z2 with eigenvalue 2
        q = PauliHamiltonian(2, [PauliString(1.0, "ZI"), PauliString(1.0, "IZ")])
        spec = SpectrumSpec(operator=q, initial="00", m=32, dtheta=0.05)
        series = unitary_expectation_series(spec)
        thetas = np.arange(32) * 0.05
        assert np.max(np.abs(series - np.exp(-2j * thetas))) <= 1e-10

    def test_theta_zero_is_one(self):
        q = heisenberg_chain(2, [1.0], 0.0)
        spec = SpectrumSpec(operator=q, initial="01", m=16, dtheta=0.3)
        series = unitary_expectation_series(spec)
        assert series[0] == pytest.approx(1.0, abs=1e-10)

    def test_matches_dense_oracle(self):
        q = heisenberg_chain(2, [1.0], 0.0)
        spec = SpectrumSpec(operator=q, initial="01", m=16, dtheta=0.22)
        series = unitary_expectation_series(spec)
        psi = product_state(2, "01").amplitudes
        for k in range(16):
            u = exact_propagator(q, k * 0.22)
            assert series[k] == pytest.approx(complex(np.vdot(psi, u @ psi)), abs=1e-10)


class TestSpectrumFromSeries:
    def test_cosine_two_lines(self):
        m = 256
        dtheta = 2 * np.pi / 256
        thetas = np.arange(m) * dtheta
        peaks = spectrum_from_series(np.cos(thetas), dtheta)
        assert len(peaks) == 2
        (q1, w1), (q2, w2) = peaks
        bin_width = 2 * np.pi / (m * dtheta)
        assert abs(q1 - (-1.0)) <= bin_width
        assert abs(q2 - 1.0) <= bin_width
        assert w1 == pytest.approx(0.5, abs=1e-6)
        assert w2 == pytest.approx(0.5, abs=1e-6)

    def test_eigenstate_single_line(self):
        m, dtheta, q0 = 128, 0.11, 1.37
        thetas = np.arange(m) * dtheta
        peaks = spectrum_from_series(np.exp(-1j * q0 * thetas), dtheta)
        assert len(peaks) == 1
        q, w = peaks[0]
        assert abs(q - q0) <= 2 * np.pi / (m * dtheta)
        assert w == pytest.approx(1.0, abs=1e-6)

    def test_heisenberg_singlet_triplet(self):
        # |01> splits evenly over the eigenvalues -3J and +J
        q = heisenberg_chain(2, [1.0], 0.0)
        spec = SpectrumSpec(operator=q, initial="01", m=1024)
        series = unitary_expectation_series(spec)
        peaks = spectrum_from_series(series, spec.spacing())
        assert len(peaks) == 2
        bin_width = 2 * np.pi / (spec.m * spec.spacing())
        (qa, wa), (qb, wb) = peaks
        assert abs(qa - (-3.0)) <= bin_width
        assert abs(qb - 1.0) <= bin_width
        assert wa == pytest.approx(0.5, abs=0.02)
        assert wb == pytest.approx(0.5, abs=0.02)

    def test_completeness_with_field(self):
        # every eigenvalue with weight >= 0.05 recovered within a bin, weight to 0.02
        h = heisenberg_chain(2, [1.0], 0.7)
        from spinsim.pauli import dense_matrix

        w, vecs = np.linalg.eigh(dense_matrix(h))
        psi = product_state(2, "01").amplitudes
        exact_weights = np.abs(vecs.conj().T @ psi) ** 2
        spec = SpectrumSpec(operator=h, initial="01", m=1024)
        peaks = spectrum_from_series(unitary_expectation_series(spec), spec.spacing())
        bin_width = 2 * np.pi / (spec.m * spec.spacing())
        for ev, ew in zip(w, exact_weights):
            if ew < 0.05:
                continue
            match = [pk for pk in peaks if abs(pk[0] - ev) <= bin_width]
            assert match, f"eigenvalue {ev} not recovered"
            assert match[0][1] == pytest.approx(ew, abs=0.02)

    def test_weights_sum_bounded(self):
        m, dtheta = 256, 0.07
        thetas = np.arange(m) * dtheta
        series = 0.6 * np.exp(-1j * 0.9 * thetas) + 0.4 * np.exp(1j * 2.2 * thetas)
        peaks = spectrum_from_series(series, dtheta)
        assert sum(w for _, w in peaks) <= 1.0 + 1e-6

    def test_non_power_of_two_rejected(self):
        with pytest.raises(InputError):
            spectrum_from_series(np.ones(100), 0.1)


class TestSpectrumSpecValidation:
    def test_power_of_two(self):
        with pytest.raises(InputError):
            SpectrumSpec(operator=heisenberg_chain(2, [1.0], 0.0), initial="01", m=100)

    def test_default_spacing_covers_spectrum(self):
        h = heisenberg_chain(2, [1.0], 0.0)
        spec = SpectrumSpec(operator=h, initial="01")
        # sum |coef| = 3; Nyquist must reach 1.5 * 3
        assert np.pi / spec.spacing() >= 1.5 * 3 - 1e-12
