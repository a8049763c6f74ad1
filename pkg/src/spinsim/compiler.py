"""Lowering of Pauli-exponential evolution terms into circuits over a chosen
universal gate set, plus dense-unitary verification utilities.

Gate sets:

* S1: single-qubit rotations + CNOT
* S2: single-qubit rotations + the XX+YY exchange gate Uxy(delta)
* S3: single-qubit rotations + controlled phase CPhase(delta)
* S4: trapped-ion family T1..T4 (individual z rotations, collective rotations,
  Moelmer-Soerensen entangler)

Circuit order convention: list order = temporal order = right-to-left matrix
order.  Global phases produced by decompositions are accumulated in
``Circuit.global_phase`` rather than discarded, so elementwise verification is
possible where an identity is exact.  Circuits are immutable values after
construction; all functions here are pure.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import kak
from .errors import InputError, ResourceError
from .gates import GateOp, gate_matrix, zyz_angles
from .statevector import StateVector, apply_gate

_UNITARY_QUBIT_LIMIT = 12

AXES = ("x", "y", "z")


class GateSet(enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"


TWO_QUBIT_KINDS = ("CNOT", "CPhase", "ZZ", "XX", "YY", "Uxy", "MS_T4")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence on a declared register; leftmost op acts first."""

    n_qubits: int
    ops: tuple[GateOp, ...]
    global_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for q in op.targets:
                if not 1 <= q <= self.n_qubits:
                    raise InputError(
                        f"gate {op.kind} targets qubit {q}, register has "
                        f"{self.n_qubits}"
                    )

    def two_qubit_count(self, kind: str | None = None) -> int:
        if kind is not None:
            return sum(1 for op in self.ops if op.kind == kind)
        return sum(1 for op in self.ops if op.kind in TWO_QUBIT_KINDS)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise InputError("cannot concatenate circuits on different registers")
        return Circuit(
            self.n_qubits,
            self.ops + other.ops,
            self.global_phase + other.global_phase,
        )


def run_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Execute a circuit on the statevector backend, in place."""
    if circuit.n_qubits > state.n_qubits:
        raise InputError(
            f"circuit needs {circuit.n_qubits} qubits, register has {state.n_qubits}"
        )
    for op in circuit.ops:
        apply_gate(state, op)
    if circuit.global_phase != 0.0:
        state.amplitudes *= np.exp(1j * circuit.global_phase)
    return state


def embed_unitary(u: np.ndarray, targets: tuple[int, ...], n_qubits: int) -> np.ndarray:
    """Dense 2^N x 2^N embedding of a 2^k x 2^k gate on the given qubits.

    Built by index permutation of kron(u, I); independent of the strided
    statevector kernel so the two can verify each other.
    """
    k = len(targets)
    if u.shape != (2**k, 2**k):
        raise InputError(f"matrix shape {u.shape} does not match {k} targets")
    full = np.kron(u, np.eye(2 ** (n_qubits - k), dtype=complex))
    qubit_order = list(targets) + [q for q in range(1, n_qubits + 1) if q not in targets]
    m = np.arange(2**n_qubits)
    nat = np.zeros_like(m)
    for slot, q in enumerate(qubit_order):
        bit = (m >> (n_qubits - 1 - slot)) & 1
        nat |= bit << (n_qubits - q)
    inv = np.argsort(nat)
    return full[np.ix_(inv, inv)]


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense product of embedded gate matrices times e^{i global_phase}."""
    if c.n_qubits > _UNITARY_QUBIT_LIMIT:
        raise ResourceError(
            f"dense circuit unitary limited to {_UNITARY_QUBIT_LIMIT} qubits, "
            f"got {c.n_qubits}"
        )
    u = np.eye(2**c.n_qubits, dtype=complex)
    for op in c.ops:
        u = embed_unitary(gate_matrix(op), op.targets, c.n_qubits) @ u
    return np.exp(1j * c.global_phase) * u


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff |trace(U^dag V)| >= dim (1 - tol); symmetric in its arguments."""
    if u.shape != v.shape:
        raise InputError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return bool(abs(np.trace(u.conj().T @ v)) >= u.shape[0] * (1.0 - tol))


# --- frame changes ------------------------------------------------------------
# sigma_alpha = V sigma_z V^dag with V = _Z_FRAME[alpha]; likewise for the
# X-based sets (S2, S4).

def _rot(axis: str, theta: float, q: int) -> GateOp:
    return GateOp("R" + axis, (theta,), (q,))


_Z_FRAME = {"x": ("y", np.pi / 2), "y": ("x", -np.pi / 2), "z": None}
_X_FRAME = {"x": None, "y": ("z", np.pi / 2), "z": ("y", -np.pi / 2)}


def _frame_ops(frame, alpha: str, q: int, adjoint: bool) -> list[GateOp]:
    spec = frame[alpha]
    if spec is None:
        return []
    axis, theta = spec
    return [_rot(axis, -theta if adjoint else theta, q)]


def _ms_frame_ops(alpha: str, q: int, adjoint: bool) -> list[GateOp]:
    # same rotations as _X_FRAME but spelled with the trapped-ion gates:
    # Rz(phi) = T1(phi/2), Ry(phi) = T3(phi/2, pi/2)
    spec = _X_FRAME[alpha]
    if spec is None:
        return []
    axis, theta = spec
    if adjoint:
        theta = -theta
    if axis == "z":
        return [GateOp("MS_T1", (theta / 2,), (q,))]
    return [GateOp("MS_T3", (theta / 2, np.pi / 2), (q,))]


def _check_axis(*axes: str):
    for a in axes:
        if a not in AXES:
            raise InputError(f"axis must be one of {AXES}, got {a!r}")


def decompose_pauli_pair(
    alpha: str,
    beta: str,
    delta: float,
    qubits: tuple[int, int],
    gate_set: GateSet = GateSet.S1,
    s3_phase_floor: float = 0.0,
) -> Circuit:
    """Circuit for exp(-i delta sigma_alpha^(i) sigma_beta^(j)) in the given set.

    The S3 route uses the single-CPhase form unless ``delta`` lies below
    ``s3_phase_floor`` (default 0: negative angles switch to the two-CPhase
    form, which only needs positive hardware phases).
    """
    _check_axis(alpha, beta)
    i, j = qubits
    if i == j:
        raise InputError("pauli pair needs two distinct qubits")
    n = max(i, j)
    ops: list[GateOp] = []
    phase = 0.0

    if gate_set in (GateSet.S1, GateSet.S3):
        ops += _frame_ops(_Z_FRAME, alpha, i, adjoint=True)
        ops += _frame_ops(_Z_FRAME, beta, j, adjoint=True)
        if gate_set is GateSet.S1:
            ops += [
                GateOp("CNOT", (), (i, j)),
                _rot("z", 2 * delta, j),
                GateOp("CNOT", (), (i, j)),
            ]
        elif delta >= s3_phase_floor:
            # ZZ(d) = e^{i d} (Rz(2d) x Rz(2d)) CPhase(-4d)
            ops += [
                GateOp("CPhase", (-4 * delta,), (i, j)),
                _rot("z", 2 * delta, i),
                _rot("z", 2 * delta, j),
            ]
            phase += delta
        else:
            # ZZ(d) = e^{i d} CPhase(-2d) (X x X) CPhase(-2d) (X x X)
            ops += [
                _rot("x", np.pi, i),
                _rot("x", np.pi, j),
                GateOp("CPhase", (-2 * delta,), (i, j)),
                _rot("x", np.pi, i),
                _rot("x", np.pi, j),
                GateOp("CPhase", (-2 * delta,), (i, j)),
            ]
            phase += delta
        ops += _frame_ops(_Z_FRAME, alpha, i, adjoint=False)
        ops += _frame_ops(_Z_FRAME, beta, j, adjoint=False)
    elif gate_set is GateSet.S2:
        # XX(d) = e^{i pi} Uxy(d/2) (I x Rx(pi)) Uxy(d/2) (I x Rx(pi))
        ops += _frame_ops(_X_FRAME, alpha, i, adjoint=True)
        ops += _frame_ops(_X_FRAME, beta, j, adjoint=True)
        ops += [
            _rot("x", np.pi, j),
            GateOp("Uxy", (delta / 2,), (i, j)),
            _rot("x", np.pi, j),
            GateOp("Uxy", (delta / 2,), (i, j)),
        ]
        phase += np.pi
        ops += _frame_ops(_X_FRAME, alpha, i, adjoint=False)
        ops += _frame_ops(_X_FRAME, beta, j, adjoint=False)
    elif gate_set is GateSet.S4:
        ops += _ms_frame_ops(alpha, i, adjoint=True)
        ops += _ms_frame_ops(beta, j, adjoint=True)
        ops.append(GateOp("MS_T4", (delta, 0.0), (i, j)))
        ops += _ms_frame_ops(alpha, i, adjoint=False)
        ops += _ms_frame_ops(beta, j, adjoint=False)
    else:
        raise InputError(f"unsupported gate set {gate_set}")
    return Circuit(n, ops, phase)


def decompose_multi_pauli(
    axes: list[str],
    delta: float,
    qubits: tuple[int, ...],
    gate_set: GateSet = GateSet.S1,
) -> Circuit:
    """CNOT-ladder circuit for exp(-i delta tensor_i sigma_{axes[i]}).

    Frames rotate every qubit into the z basis, a CNOT ladder folds the joint
    parity onto the last qubit, Rz(2 delta) applies the phase, and the ladder
    and frames are undone.
    """
    if len(qubits) < 3:
        raise InputError("use decompose_pauli_pair for fewer than 3 qubits")
    if len(axes) != len(qubits):
        raise InputError(f"{len(axes)} axes for {len(qubits)} qubits")
    if len(set(qubits)) != len(qubits):
        raise InputError(f"duplicate qubits {qubits}")
    _check_axis(*axes)
    if gate_set is not GateSet.S1:
        raise InputError(
            "multi-qubit Pauli exponentials are compiled in the CNOT set (S1); "
            f"got {gate_set}"
        )
    ops: list[GateOp] = []
    for a, q in zip(axes, qubits):
        ops += _frame_ops(_Z_FRAME, a, q, adjoint=True)
    ladder = [GateOp("CNOT", (), (qubits[k], qubits[k + 1])) for k in range(len(qubits) - 1)]
    ops += ladder
    ops.append(_rot("z", 2 * delta, qubits[-1]))
    ops += reversed(ladder)
    for a, q in zip(axes, qubits):
        ops += _frame_ops(_Z_FRAME, a, q, adjoint=False)
    return Circuit(max(qubits), ops)


def _su2_ops(m: np.ndarray, q: int) -> tuple[list[GateOp], float]:
    """Gate list (time order) and phase with m = e^{i phase} [emitted rotations]."""
    phase, a, b, c = zyz_angles(m)
    ops = []
    for axis, theta in (("z", c), ("y", b), ("z", a)):
        if abs(theta) > 1e-14:
            ops.append(_rot(axis, theta, q))
    return ops, phase


def heisenberg2_circuit(
    delta: float, qubits: tuple[int, int], variant: str = "6cnot"
) -> Circuit:
    """Two-qubit Heisenberg bond evolution exp(-i delta (XX + YY + ZZ)).

    Variants: ``6cnot`` (three juxtaposed pair blocks), ``3cnot`` (canonical
    two-qubit synthesis, exactly three CNOTs), ``3uxy`` (three exchange gates
    via the pairwise-commuting splitting of 2 H = H_xxyy + H_xxzz + H_zzyy),
    and ``s4`` (the Moelmer-Soerensen sequence A B C A C^dag).
    """
    i, j = qubits
    if i == j:
        raise InputError("need two distinct qubits")
    n = max(i, j)
    if variant == "6cnot":
        c = Circuit(n, ())
        for axis in ("x", "y", "z"):
            c = c + decompose_pauli_pair(axis, axis, delta, qubits, GateSet.S1)
        return c
    if variant == "3cnot":
        pre1, pre2, (p1, p2, p3), post1, post2, phase = kak.canonical_3cnot(
            delta, delta, delta
        )
        ops: list[GateOp] = []
        for m, q in ((pre1, i), (pre2, j)):
            sub, ph = _su2_ops(m, q)
            ops += sub
            phase += ph
        ops += [
            GateOp("CNOT", (), (j, i)),
            _rot("y", p1, j),
            GateOp("CNOT", (), (i, j)),
            _rot("z", p2, i),
            _rot("y", p3, j),
            GateOp("CNOT", (), (j, i)),
        ]
        for m, q in ((post1, i), (post2, j)):
            sub, ph = _su2_ops(m, q)
            ops += sub
            phase += ph
        return Circuit(n, ops, phase)
    if variant == "3uxy":
        half = delta / 2
        ops = [GateOp("Uxy", (half,), (i, j))]
        for axis in ("x", "y"):
            ops += [_rot(axis, -np.pi / 2, i), _rot(axis, -np.pi / 2, j)]
            ops.append(GateOp("Uxy", (half,), (i, j)))
            ops += [_rot(axis, np.pi / 2, i), _rot(axis, np.pi / 2, j)]
        return Circuit(n, ops)
    if variant == "s4":
        ops = [
            GateOp("MS_T3", (-np.pi / 4, np.pi / 2), (i, j)),  # C^dag
            GateOp("MS_T4", (delta, 0.0), (i, j)),             # A
            GateOp("MS_T3", (np.pi / 4, np.pi / 2), (i, j)),   # C
            GateOp("MS_T4", (delta, np.pi / 2), (i, j)),       # B
            GateOp("MS_T4", (delta, 0.0), (i, j)),             # A
        ]
        return Circuit(n, ops)
    raise InputError(f"unknown variant {variant!r}; use 6cnot, 3cnot, 3uxy or s4")


_INVERT_PARAMS = {
    "Phase", "Rx", "Ry", "Rz", "CPhase", "ZZ", "XX", "YY", "Uxy",
    "MS_T1", "MS_T2", "MS_T3", "MS_T4",
}
_SELF_INVERSE = {"H", "X", "CNOT"}


def _inverse_op(op: GateOp) -> GateOp:
    if op.kind in _SELF_INVERSE:
        return op
    if op.kind == "U3":
        theta, phi, lam = op.params
        return GateOp("U3", (-theta, -lam, -phi), op.targets)
    if op.kind in _INVERT_PARAMS:
        params = (-op.params[0],) + op.params[1:]
        return GateOp(op.kind, params, op.targets)
    raise InputError(f"cannot invert gate kind {op.kind}")


def inverse_circuit(c: Circuit) -> Circuit:
    """Exact inverse: reversed op order, negated angles and global phase."""
    return Circuit(
        c.n_qubits,
        tuple(_inverse_op(op) for op in reversed(c.ops)),
        -c.global_phase,
    )


# --- controlled expansion -----------------------------------------------------

def _ctrl_rz(theta: float, c: int, t: int) -> list[GateOp]:
    return [
        _rot("z", theta / 2, t),
        GateOp("CNOT", (), (c, t)),
        _rot("z", -theta / 2, t),
        GateOp("CNOT", (), (c, t)),
    ]


def _ctrl_ry(theta: float, c: int, t: int) -> list[GateOp]:
    return [_rot("x", np.pi / 2, t), *_ctrl_rz(theta, c, t), _rot("x", -np.pi / 2, t)]


def _ctrl_rx(theta: float, c: int, t: int) -> list[GateOp]:
    return [GateOp("H", (), (t,)), *_ctrl_rz(theta, c, t), GateOp("H", (), (t,))]


def _toffoli(c1: int, c2: int, t: int) -> list[GateOp]:
    tg = lambda q: GateOp("Phase", (np.pi / 4,), (q,))
    tdg = lambda q: GateOp("Phase", (-np.pi / 4,), (q,))
    return [
        GateOp("H", (), (t,)),
        GateOp("CNOT", (), (c2, t)),
        tdg(t),
        GateOp("CNOT", (), (c1, t)),
        tg(t),
        GateOp("CNOT", (), (c2, t)),
        tdg(t),
        GateOp("CNOT", (), (c1, t)),
        tg(c2),
        tg(t),
        GateOp("H", (), (t,)),
        GateOp("CNOT", (), (c1, c2)),
        tg(c1),
        tdg(c2),
        GateOp("CNOT", (), (c1, c2)),
    ]


def _ctrl_pair_core(
    alpha: str, beta: str, delta: float, c: int, i: int, j: int
) -> list[GateOp]:
    # controlled exp(-i d sigma sigma): frames and CNOT conjugation cancel when
    # the control is off, so only the central Rz needs the control
    ops = _frame_ops(_Z_FRAME, alpha, i, adjoint=True)
    ops += _frame_ops(_Z_FRAME, beta, j, adjoint=True)
    ops.append(GateOp("CNOT", (), (i, j)))
    ops += _ctrl_rz(2 * delta, c, j)
    ops.append(GateOp("CNOT", (), (i, j)))
    ops += _frame_ops(_Z_FRAME, alpha, i, adjoint=False)
    ops += _frame_ops(_Z_FRAME, beta, j, adjoint=False)
    return ops


def _controlled_op(op: GateOp, c: int) -> list[GateOp]:
    k, p, tg = op.kind, op.params, op.targets
    if c in tg:
        raise InputError(f"control qubit {c} collides with targets of {k}")
    if k == "X":
        return [GateOp("CNOT", (), (c, tg[0]))]
    if k == "Phase":
        return [GateOp("CPhase", (p[0],), (c, tg[0]))]
    if k == "Rz":
        return _ctrl_rz(p[0], c, tg[0])
    if k == "Rx":
        return _ctrl_rx(p[0], c, tg[0])
    if k == "Ry":
        return _ctrl_ry(p[0], c, tg[0])
    if k == "H":
        # H = e^{i pi/2} Ry(pi/2) Rz(pi)
        return [
            GateOp("Phase", (np.pi / 2,), (c,)),
            *_ctrl_rz(np.pi, c, tg[0]),
            *_ctrl_ry(np.pi / 2, c, tg[0]),
        ]
    if k == "U3":
        theta, phi, lam = p
        # u3 = e^{i (phi + lam)/2} Rz(phi) Ry(theta) Rz(lam)
        return [
            GateOp("Phase", ((phi + lam) / 2,), (c,)),
            *_ctrl_rz(lam, c, tg[0]),
            *_ctrl_ry(theta, c, tg[0]),
            *_ctrl_rz(phi, c, tg[0]),
        ]
    if k == "CNOT":
        return _toffoli(c, tg[0], tg[1])
    if k == "CPhase":
        d = p[0]
        return [
            GateOp("CPhase", (d / 2,), (tg[0], tg[1])),
            GateOp("CNOT", (), (c, tg[0])),
            GateOp("CPhase", (-d / 2,), (tg[0], tg[1])),
            GateOp("CNOT", (), (c, tg[0])),
            GateOp("CPhase", (d / 2,), (c, tg[1])),
        ]
    if k in ("ZZ", "XX", "YY"):
        a = k[0].lower()
        return _ctrl_pair_core(a, a, p[0], c, tg[0], tg[1])
    if k == "Uxy":
        return _ctrl_pair_core("x", "x", p[0], c, *tg) + _ctrl_pair_core(
            "y", "y", p[0], c, *tg
        )
    raise InputError(f"controlled expansion not supported for gate kind {k}")


def controlled_circuit(circuit: Circuit, control: int) -> Circuit:
    """Mechanically controlled version of every gate (and the global phase)."""
    n = max(circuit.n_qubits, control)
    ops: list[GateOp] = []
    if circuit.global_phase != 0.0:
        ops.append(GateOp("Phase", (circuit.global_phase,), (control,)))
    for op in circuit.ops:
        ops += _controlled_op(op, control)
    return Circuit(n, ops)


# --- serialization: one op per line, `NAME(params) targets...` + phase footer --

_OP_RE = re.compile(r"^(\w+)\(([^)]*)\)((?:\s+\d+)+)$")


def dumps_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"]
    for op in c.ops:
        params = ",".join(f"{p:.17g}" for p in op.params)
        targets = " ".join(str(q) for q in op.targets)
        lines.append(f"{op.kind}({params}) {targets}")
    lines.append(f"phase {c.global_phase:.17g}")
    return "\n".join(lines) + "\n"


def loads_circuit(text: str) -> Circuit:
    n_qubits = None
    phase = 0.0
    ops: list[GateOp] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("qubits"):
            n_qubits = int(line.split()[1])
            continue
        if line.startswith("phase"):
            phase = float(line.split()[1])
            continue
        m = _OP_RE.match(line)
        if not m:
            raise InputError(f"line {ln}: cannot parse {raw!r}")
        kind, params_s, targets_s = m.groups()
        params = tuple(float(x) for x in params_s.split(",") if x.strip())
        targets = tuple(int(x) for x in targets_s.split())
        ops.append(GateOp(kind, params, targets))
    if n_qubits is None:
        n_qubits = max((max(op.targets) for op in ops), default=1)
    return Circuit(n_qubits, ops, phase)
