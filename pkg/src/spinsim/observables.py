"""Physical quantities from simulated evolutions: site magnetizations, two-point
dynamical correlation functions (direct statevector route and the ancilla
protocol), and operator spectra via FFT of a phase-swept expectation series.

Series points (time or theta) are independent; each evaluation owns its
StateVector, so grids can be distributed across workers if desired.  Results
are always assembled in grid order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .compiler import Circuit, GateSet, controlled_circuit, run_circuit
from .errors import InputError
from .gates import GateOp, PAULI
from .pauli import PauliHamiltonian, PauliString
from .statevector import (
    StateVector,
    apply_dense_unitary,
    pauli_expectation,
    product_state,
)
from .trotter import TrotterPlan, exact_propagator, trotterize

_PAULI_LETTERS = ("I", "X", "Y", "Z")


def magnetization(state: StateVector, site: int) -> float:
    """<s_z> = (1/2) <sigma_z> at the given site, in [-1/2, 1/2]."""
    n = state.n_qubits
    if not 1 <= site <= n:
        raise InputError(f"site {site} out of range for {n} qubits")
    probs = np.abs(state.amplitudes) ** 2
    bits = (np.arange(2**n) >> (n - site)) & 1
    return float(0.5 * np.sum(probs * (1.0 - 2.0 * bits)))


@dataclass(frozen=True)
class CorrelationSpec:
    """Inputs of a dynamical correlation C_VW(t) = <V^dag(t) W> on |initial>.

    ``v``/``w`` are Pauli letters (I allowed) acting on sites ``vq``/``wq``;
    ``evolution`` is "exact" or "trotter" (then ``plan`` and ``gate_set`` are
    used for the propagator circuit).
    """

    v: str
    w: str
    vq: int
    wq: int
    initial: str
    hamiltonian: PauliHamiltonian
    times: tuple[float, ...]
    evolution: str = "exact"
    plan: TrotterPlan = field(default_factory=lambda: TrotterPlan.fixed_n(5))
    gate_set: GateSet = GateSet.S1

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        n = self.hamiltonian.n_qubits
        if self.v not in _PAULI_LETTERS or self.w not in _PAULI_LETTERS:
            raise InputError(f"V/W must be Pauli letters, got {self.v!r}, {self.w!r}")
        for q, name in ((self.vq, "V"), (self.wq, "W")):
            if not 1 <= q <= n:
                raise InputError(f"{name} site {q} out of range for {n} qubits")
        if len(self.initial) != n:
            raise InputError(
                f"initial state {self.initial!r} does not match {n} qubits"
            )
        if self.evolution not in ("exact", "trotter"):
            raise InputError(f"evolution must be exact or trotter, got {self.evolution}")


def _evolver(spec) -> "callable":
    """Returns evolve(state, t) applying U(t) in place per the spec's route."""
    h = spec.hamiltonian
    n = h.n_qubits
    targets = tuple(range(1, n + 1))
    if spec.evolution == "exact":
        def evolve(state: StateVector, t: float) -> StateVector:
            return apply_dense_unitary(state, exact_propagator(h, t), targets)
    else:
        def evolve(state: StateVector, t: float) -> StateVector:
            return run_circuit(state, trotterize(h, t, spec.plan, spec.gate_set).circuit)
    return evolve


def _apply_pauli_letter(state: StateVector, letter: str, site: int) -> StateVector:
    if letter != "I":
        apply_dense_unitary(state, PAULI[letter], (site,))
    return state


def correlation_direct(spec: CorrelationSpec) -> np.ndarray:
    """C_VW(t) by pure statevector algebra: <V U psi | U W psi>."""
    n = spec.hamiltonian.n_qubits
    evolve = _evolver(spec)
    out = np.empty(len(spec.times), dtype=complex)
    for k, t in enumerate(spec.times):
        right = product_state(n, spec.initial)
        _apply_pauli_letter(right, spec.w, spec.wq)
        evolve(right, t)
        left = product_state(n, spec.initial)
        evolve(left, t)
        _apply_pauli_letter(left, spec.v, spec.vq)
        out[k] = np.vdot(left.amplitudes, right.amplitudes)
    return out


def _controlled_pauli_ops(letter: str, ancilla: int, site: int) -> list[GateOp]:
    if letter == "I":
        return []
    if letter == "X":
        return [GateOp("CNOT", (), (ancilla, site))]
    if letter == "Y":
        return [
            GateOp("Phase", (-np.pi / 2,), (site,)),
            GateOp("CNOT", (), (ancilla, site)),
            GateOp("Phase", (np.pi / 2,), (site,)),
        ]
    if letter == "Z":
        return [
            GateOp("H", (), (site,)),
            GateOp("CNOT", (), (ancilla, site)),
            GateOp("H", (), (site,)),
        ]
    raise InputError(f"not a Pauli letter: {letter!r}")


def _ancilla_readout(state: StateVector, ancilla: int) -> complex:
    """<2 sigma_+> on the ancilla: Re from <sigma_x>, Im from <sigma_y>."""
    n = state.n_qubits
    sx = "I" * (ancilla - 1) + "X" + "I" * (n - ancilla)
    sy = "I" * (ancilla - 1) + "Y" + "I" * (n - ancilla)
    return complex(
        pauli_expectation(state, PauliString(1.0, sx)),
        pauli_expectation(state, PauliString(1.0, sy)),
    )


def correlation_ancilla(spec: CorrelationSpec) -> np.ndarray:
    """C_VW(t) via the ancilla protocol.

    The register gains one ancilla (last qubit) prepared in |+>; W is applied
    controlled on the ancilla, the evolution runs uncontrolled on the system,
    V is applied anti-controlled (X-conjugated control), and C is read off the
    ancilla as <sigma_x> + i <sigma_y>.  Expectations are evaluated exactly on
    the final statevector; there is no shot sampling.
    """
    n = spec.hamiltonian.n_qubits
    ancilla = n + 1
    evolve = _evolver(spec)
    ctrl_w = _controlled_pauli_ops(spec.w, ancilla, spec.wq)
    ctrl_v = _controlled_pauli_ops(spec.v, ancilla, spec.vq)
    x_a = GateOp("X", (), (ancilla,))
    out = np.empty(len(spec.times), dtype=complex)
    for k, t in enumerate(spec.times):
        state = product_state(n + 1, spec.initial + "+")
        run_circuit(state, Circuit(n + 1, tuple(ctrl_w)))
        # the evolver applies gates by absolute qubit index, so it acts on the
        # system qubits of the extended register unchanged
        evolve(state, t)
        run_circuit(state, Circuit(n + 1, (x_a, *ctrl_v, x_a)))
        out[k] = _ancilla_readout(state, ancilla)
    return out


def spin_correlation(series: np.ndarray) -> np.ndarray:
    """Spin-operator scaling: <s_a(t) s_b> = (1/4) <sigma_a(t) sigma_b>."""
    return 0.25 * np.asarray(series)


@dataclass(frozen=True)
class SpectrumSpec:
    """Inputs for spectrum extraction of a Hermitian operator Q.

    The series <U_Q(theta)> is measured on the grid theta_k = k * dtheta for
    k = 0..m-1 via the ancilla protocol with W = U_Q(theta) and no time
    evolution; ``dtheta = None`` picks a spacing whose Nyquist range covers
    1.5x the sum of |coefficients| of Q (a spectral bound), so no builder
    Hamiltonian can alias.
    """

    operator: PauliHamiltonian
    initial: str
    m: int = 1024
    dtheta: float | None = None
    plan: TrotterPlan = field(default_factory=lambda: TrotterPlan.fixed_eps(0.1))
    gate_set: GateSet = GateSet.S1

    def __post_init__(self):
        if self.m < 2 or self.m & (self.m - 1):
            raise InputError(f"m must be a power of two, got {self.m}")
        if self.dtheta is not None and self.dtheta <= 0:
            raise InputError(f"dtheta must be positive, got {self.dtheta}")
        if len(self.initial) != self.operator.n_qubits:
            raise InputError("initial state does not match operator register")

    def spacing(self) -> float:
        if self.dtheta is not None:
            return self.dtheta
        bound = sum(abs(t.coef.real) for t in self.operator.terms)
        if bound <= 0:
            return 2 * np.pi / self.m
        return float(np.pi / (1.5 * bound))


def unitary_expectation_series(spec: SpectrumSpec) -> np.ndarray:
    """<psi| exp(-i Q theta) |psi> over the theta grid, via the ancilla route.

    Each controlled exp(-i Q theta) is compiled by trotterizing Q at phase
    theta and mechanically controlling every gate of the resulting circuit.
    """
    n = spec.operator.n_qubits
    ancilla = n + 1
    dtheta = spec.spacing()
    out = np.empty(spec.m, dtype=complex)
    for k in range(spec.m):
        theta = k * dtheta
        evol = trotterize(spec.operator, theta, spec.plan, spec.gate_set)
        ctrl = controlled_circuit(evol.circuit, ancilla)
        state = product_state(n + 1, spec.initial + "+")
        run_circuit(state, ctrl)
        out[k] = _ancilla_readout(state, ancilla)
    return out


def _refine_peak(series: np.ndarray, dtheta: float, q0: float, half_width: float) -> float:
    """Golden-section maximization of the matched-filter response |DTFT(q)|."""
    thetas = np.arange(len(series)) * dtheta

    def response(q: float) -> float:
        return abs(np.sum(series * np.exp(1j * q * thetas)))

    lo, hi = q0 - half_width, q0 + half_width
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = response(c), response(d)
    for _ in range(70):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = response(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = response(d)
    return 0.5 * (a + b)


def spectrum_from_series(
    series: Sequence[complex], dtheta: float, threshold: float = 0.01
) -> list[tuple[float, float]]:
    """Eigenvalue/weight estimates from an expectation series.

    FFT peaks above ``threshold`` (relative to the strongest bin) are merged
    into clusters of adjacent bins and reported at their modulus-weighted
    centroids.  Weights come from a joint least-squares fit of complex
    exponentials at the detected lines, with each line's location refined
    against the residual of the others; for a noiseless series of isolated
    lines this recovers the exact weights.  Results are sorted by eigenvalue.
    """
    series = np.asarray(series, dtype=complex)
    m = len(series)
    if m < 2 or m & (m - 1):
        raise InputError(f"series length must be a power of two, got {m}")
    if dtheta <= 0:
        raise InputError(f"dtheta must be positive, got {dtheta}")
    qvals = -2 * np.pi * np.fft.fftfreq(m, d=dtheta)
    bin_width = 2 * np.pi / (m * dtheta)
    thetas = np.arange(m) * dtheta
    base = float(np.max(np.abs(np.fft.fft(series))) / m)
    if base == 0.0:
        return []

    # iterative extraction: take the strongest spectral line, refine its
    # location with the matched filter, subtract, and repeat; robust when
    # leakage tails of distinct lines overlap
    residual = series.copy()
    locations: list[float] = []
    for _ in range(64):
        mags = np.abs(np.fft.fft(residual)) / m
        k = int(np.argmax(mags))
        if mags[k] < threshold * base:
            break
        q_hat = _refine_peak(residual, dtheta, float(qvals[k]), 1.5 * bin_width)
        amp = np.sum(residual * np.exp(1j * q_hat * thetas)) / m
        residual = residual - amp * np.exp(-1j * q_hat * thetas)
        locations.append(q_hat)

    if not locations:
        return []

    def model(qlist):
        return np.exp(-1j * np.outer(thetas, qlist))

    def fit(qlist):
        return np.linalg.lstsq(model(qlist), series, rcond=None)[0]

    # alternate: merge sub-resolution duplicates at their modulus-weighted
    # centroid, drop lines below the relative threshold, and re-converge the
    # survivors by residual-refinement + joint least squares
    q_hat = sorted(locations)
    amps = fit(q_hat)
    for _ in range(4):
        pairs = sorted(zip(q_hat, amps), key=lambda p: p[0])
        merged: list[tuple[float, complex]] = []
        for q, a in pairs:
            if merged and q - merged[-1][0] <= bin_width:
                q0, a0 = merged[-1]
                wsum = abs(a0) + abs(a)
                q_new = (abs(a0) * q0 + abs(a) * q) / wsum if wsum > 0 else q0
                merged[-1] = (q_new, a0 + a)
            else:
                merged.append((q, a))
        wmax = max(abs(a) for _, a in merged)
        q_hat = [q for q, a in merged if abs(a) >= threshold * wmax]
        amps = fit(q_hat)
        for _ in range(2):
            for l in range(len(q_hat)):
                others = [k for k in range(len(q_hat)) if k != l]
                res_l = series - model([q_hat[k] for k in others]) @ amps[others] \
                    if others else series
                q_hat[l] = _refine_peak(res_l, dtheta, q_hat[l], bin_width)
            amps = fit(q_hat)

    weights = np.abs(amps)
    return sorted((float(q), float(w)) for q, w in zip(q_hat, weights))
