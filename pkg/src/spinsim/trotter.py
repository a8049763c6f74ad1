"""Suzuki-Trotter synthesis of time-evolution circuits and digital-error analysis.

First- and second-order splittings with two step schedules: a fixed step count,
or a fixed digital-error budget with the step count growing linearly or
quadratically in the accumulated phase.  When every Hamiltonian term commutes
the splitting is exact and a single step is emitted.  Single-qubit field terms
whose sum commutes with the interaction part are hoisted in front of the
Trotter loop and applied once with the full angle.

Backward evolution (t < 0) emits the exact mirror of the forward circuit, so a
forward run followed by a backward run with the same plan is an exact identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .compiler import (
    Circuit,
    GateSet,
    decompose_multi_pauli,
    decompose_pauli_pair,
    inverse_circuit,
    run_circuit,
    _su2_ops,
)
from .errors import InputError, ResourceError
from .gates import GateOp, hermitian_expm, PAULI
from .pauli import PauliHamiltonian, PauliString, commutes, dense_matrix, mul_letters
from .statevector import StateVector, inner_product


@dataclass(frozen=True)
class TrotterPlan:
    """Splitting order (1 or 2) plus a step schedule.

    Exactly one of ``n_steps`` (fixed-n) or ``eps`` (fixed digital error with
    ``growth`` in {linear, quadratic}) must be set.
    """

    order: int = 1
    n_steps: int | None = None
    eps: float | None = None
    growth: str = "quadratic"

    def __post_init__(self):
        if self.order not in (1, 2):
            raise InputError(f"order must be 1 or 2, got {self.order}")
        if (self.n_steps is None) == (self.eps is None):
            raise InputError("set exactly one of n_steps or eps")
        if self.n_steps is not None and self.n_steps < 1:
            raise InputError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.eps is not None and not 0.0 < self.eps < 1.0:
            raise InputError(f"eps must lie in (0, 1), got {self.eps}")
        if self.growth not in ("linear", "quadratic"):
            raise InputError(f"growth must be linear or quadratic, got {self.growth}")

    @classmethod
    def fixed_n(cls, n: int, order: int = 1) -> "TrotterPlan":
        return cls(order=order, n_steps=n)

    @classmethod
    def fixed_eps(cls, eps: float, growth: str = "quadratic", order: int = 1) -> "TrotterPlan":
        return cls(order=order, eps=eps, growth=growth)


@dataclass(frozen=True)
class EvolutionResult:
    circuit: Circuit
    n_steps_used: int
    phase: float  # dimensionless delta = (coupling scale) * |t|


def steps_for_phase(delta: float, eps: float, growth: str = "quadratic") -> int:
    """Step count keeping the digital-error ratio fixed.

    quadratic: n = max(1, ceil(delta^2 / 2 eps)); linear: n = max(1,
    ceil(delta / 2 eps)).
    """
    if delta < 0:
        raise InputError(f"phase must be nonnegative, got {delta}")
    if not 0.0 < eps < 1.0:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    if growth == "quadratic":
        return max(1, math.ceil(delta**2 / (2 * eps)))
    if growth == "linear":
        return max(1, math.ceil(delta / (2 * eps)))
    raise InputError(f"growth must be linear or quadratic, got {growth}")


def _sum_commutator_is_zero(fields: list[PauliString], rest: list[PauliString]) -> bool:
    """[sum(fields), sum(rest)] == 0, computed symbolically."""
    acc: dict[str, complex] = {}
    for f in fields:
        for r in rest:
            ph_fr, letters = mul_letters(f.letters, r.letters)
            ph_rf, _ = mul_letters(r.letters, f.letters)
            acc[letters] = acc.get(letters, 0.0) + f.coef * r.coef * (ph_fr - ph_rf)
    return all(abs(v) < 1e-12 for v in acc.values())


def _layer_terms(terms: list[PauliString]) -> list[list[PauliString]]:
    layers: list[list[PauliString]] = []
    supports: list[set[int]] = []
    for term in terms:
        sup = set(term.support)
        for k, used in enumerate(supports):
            if not (used & sup):
                layers[k].append(term)
                used |= sup
                break
        else:
            layers.append([term])
            supports.append(sup)
    return layers


def _single_rotation_ops(axis: str, angle: float, q: int, gate_set: GateSet) -> list[GateOp]:
    """exp(-i (angle/2) sigma_axis) on one qubit, in the given set's gates."""
    if gate_set is GateSet.S4:
        if axis == "z":
            return [GateOp("MS_T1", (angle / 2,), (q,))]
        phi = 0.0 if axis == "x" else np.pi / 2
        return [GateOp("MS_T3", (angle / 2, phi), (q,))]
    return [GateOp("R" + axis, (angle,), (q,))]


def _term_circuit(term: PauliString, angle: float, gate_set: GateSet) -> Circuit:
    """Circuit for exp(-i angle P) with P the (unweighted) Pauli pattern."""
    sites = sorted(term.support)
    letters = term.letters
    if len(sites) == 1:
        q = sites[0]
        axis = letters[q - 1].lower()
        return Circuit(q, _single_rotation_ops(axis, 2 * angle, q, gate_set))
    if len(sites) == 2:
        i, j = sites
        return decompose_pauli_pair(
            letters[i - 1].lower(), letters[j - 1].lower(), angle, (i, j), gate_set
        )
    axes = [letters[q - 1].lower() for q in sites]
    return decompose_multi_pauli(axes, angle, tuple(sites), gate_set)


def _field_circuit(
    fields: list[PauliString], t: float, n_qubits: int, gate_set: GateSet
) -> Circuit:
    """Exact evolution of mutually-disjoint single-qubit field terms."""
    by_qubit: dict[int, dict[str, float]] = {}
    for f in fields:
        q = next(iter(f.support))
        axis = f.letters[q - 1].lower()
        by_qubit.setdefault(q, {})[axis] = by_qubit.setdefault(q, {}).get(axis, 0.0) + f.coef.real
    ops: list[GateOp] = []
    phase = 0.0
    for q in sorted(by_qubit):
        comps = by_qubit[q]
        if len(comps) == 1:
            ((axis, h),) = comps.items()
            ops += _single_rotation_ops(axis, 2 * h * t, q, gate_set)
        else:
            gen = sum(h * PAULI[a.upper()] for a, h in comps.items())
            u = hermitian_expm(t * gen)
            sub, ph = _su2_ops(u, q)
            if gate_set is GateSet.S4:
                sub = [
                    GateOp("MS_T1" if g.kind == "Rz" else "MS_T3",
                           (g.params[0] / 2,) if g.kind == "Rz" else (g.params[0] / 2, np.pi / 2),
                           g.targets)
                    for g in sub
                ]
            ops += sub
            phase += ph
    return Circuit(n_qubits, ops, phase)


def trotterize(
    h: PauliHamiltonian,
    t: float,
    plan: TrotterPlan,
    gate_set: GateSet = GateSet.S1,
) -> EvolutionResult:
    """Compile exp(-i H t) into a circuit per the plan's splitting and schedule."""
    if len(h.terms) == 0:
        raise InputError("cannot trotterize an empty Hamiltonian")
    if t < 0:
        fwd = trotterize(h, -t, plan, gate_set)
        return EvolutionResult(inverse_circuit(fwd.circuit), fwd.n_steps_used, fwd.phase)

    identity_phase = 0.0
    working: list[PauliString] = []
    for term in h.terms:
        if not term.support:
            identity_phase += -term.coef.real * t
        else:
            working.append(term)

    n_q = h.n_qubits
    if not working:
        return EvolutionResult(Circuit(n_q, (), identity_phase), 1, 0.0)

    all_commute = all(
        commutes(a, b) for k, a in enumerate(working) for b in working[k + 1:]
    )

    hoisted: list[PauliString] = []
    rest = working
    if not all_commute:
        fields = [term for term in working if len(term.support) == 1]
        others = [term for term in working if len(term.support) > 1]
        if fields and others and _sum_commutator_is_zero(fields, others):
            hoisted, rest = fields, others
            all_commute = all(
                commutes(a, b) for k, a in enumerate(rest) for b in rest[k + 1:]
            )

    scale = max(abs(term.coef.real) for term in rest)
    delta = scale * t
    if all_commute:
        n = 1
    elif plan.n_steps is not None:
        n = plan.n_steps
    else:
        n = steps_for_phase(delta, plan.eps, plan.growth)

    ops: list[GateOp] = []
    phase = identity_phase
    if hoisted:
        fc = _field_circuit(hoisted, t, n_q, gate_set)
        ops += fc.ops
        phase += fc.global_phase

    layers = _layer_terms(rest)
    if plan.order == 1 or all_commute:
        step_sequences = [(layers, t / n)]
    else:
        reversed_layers = [list(reversed(layer)) for layer in reversed(layers)]
        step_sequences = [(layers, t / (2 * n)), (reversed_layers, t / (2 * n))]

    for _ in range(n):
        for seq, dt in step_sequences:
            for layer in seq:
                for term in layer:
                    tc = _term_circuit(term, term.coef.real * dt, gate_set)
                    ops += tc.ops
                    phase += tc.global_phase

    return EvolutionResult(Circuit(n_q, ops, phase), n, delta)


def exact_propagator(h: PauliHamiltonian, t: float) -> np.ndarray:
    """exp(-i H t) via Hermitian eigendecomposition of the dense Hamiltonian."""
    if h.n_qubits > 12:
        raise ResourceError(f"exact propagator limited to 12 qubits, got {h.n_qubits}")
    w, v = np.linalg.eigh(dense_matrix(h))
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def digital_fidelity(
    psi0: StateVector,
    h: PauliHamiltonian,
    t: float,
    plan: TrotterPlan,
    gate_set: GateSet = GateSet.S1,
) -> float:
    """|<psi_exact(t) | psi_trotter(t)>| on the statevector backend."""
    if psi0.n_qubits != h.n_qubits:
        raise InputError("state and Hamiltonian register sizes differ")
    exact = StateVector(psi0.n_qubits, exact_propagator(h, t) @ psi0.amplitudes)
    digital = run_circuit(psi0.copy(), trotterize(h, t, plan, gate_set).circuit)
    return float(abs(inner_product(exact, digital)))


def commutator_error_bound(
    o1: PauliHamiltonian, o2: PauliHamiltonian, delta: float, n: int
) -> float:
    """First-order Trotter remainder bound (delta^2 / 2n) ||[O1, O2]|| (spectral)."""
    if o1.n_qubits != o2.n_qubits:
        raise InputError("operators act on different register sizes")
    if o1.n_qubits > 8:
        raise ResourceError("commutator bound limited to 8 qubits")
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    m1, m2 = dense_matrix(o1), dense_matrix(o2)
    comm = m1 @ m2 - m2 @ m1
    return float(delta**2 / (2 * n) * np.linalg.norm(comm, 2))
