"""Exact complex statevector of an N-qubit register with in-place gate application.

Conventions:

* Qubits are 1-based; qubit 1 is the most significant bit of the amplitude
  index, so ``|b_1 b_2 ... b_N>`` sits at index ``sum(b_i * 2**(N-i))``.
* ``|0> = |up>`` with ``sigma_z |0> = +|0>``.

Gate application is strided and in-place over amplitude pairs/quadruples;
dense matrices are only used for k-qubit collective gates and verification.
A StateVector is a single-writer value: at most one mutating operation at a
time.  Distinct instances are independent and safe on different threads.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import InputError, ResourceError
from .gates import GateOp, gate_matrix, hadamard
from .pauli import PauliString

_DENSE_LIMIT = 26  # 2**26 complex amplitudes == 1 GiB


class StateVector:
    """Normalized array of 2**n_qubits complex amplitudes."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        if n_qubits < 1:
            raise InputError(f"n_qubits must be >= 1, got {n_qubits}")
        if n_qubits > _DENSE_LIMIT:
            raise ResourceError(f"statevector with {n_qubits} qubits is too large")
        self.n_qubits = int(n_qubits)
        if amplitudes is None:
            amplitudes = np.zeros(2**n_qubits, dtype=complex)
            amplitudes[0] = 1.0
        else:
            amplitudes = np.asarray(amplitudes, dtype=complex)
            if amplitudes.shape != (2**n_qubits,):
                raise InputError(
                    f"amplitude array must have length {2**n_qubits}, "
                    f"got {amplitudes.shape}"
                )
        self.amplitudes = amplitudes

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


def basis_state(n_qubits: int, bits: str) -> StateVector:
    """Computational basis state |b_1 b_2 ... b_N> (qubit 1 leftmost)."""
    if len(bits) != n_qubits:
        raise InputError(f"bitstring {bits!r} does not match {n_qubits} qubits")
    if any(b not in "01" for b in bits):
        raise InputError(f"bitstring may contain only 0/1, got {bits!r}")
    state = StateVector(n_qubits)
    state.amplitudes[0] = 0.0
    state.amplitudes[int(bits, 2)] = 1.0
    return state


def product_state(n_qubits: int, spec: str) -> StateVector:
    """Product state from per-qubit characters 0, 1, + or -."""
    if len(spec) != n_qubits:
        raise InputError(f"state spec {spec!r} does not match {n_qubits} qubits")
    if any(ch not in "01+-" for ch in spec):
        raise InputError(f"state spec may contain only 0/1/+/-, got {spec!r}")
    bits = "".join("0" if ch in "0+" else "1" for ch in spec)
    state = basis_state(n_qubits, bits)
    h = hadamard()
    for i, ch in enumerate(spec, start=1):
        if ch in "+-":
            _apply_1q(state.amplitudes, n_qubits, i, h)
    return state


def _check_targets(n_qubits: int, targets: tuple[int, ...]):
    for q in targets:
        if not 1 <= q <= n_qubits:
            raise InputError(f"qubit {q} out of range for {n_qubits}-qubit register")
    if len(set(targets)) != len(targets):
        raise InputError(f"duplicate targets {targets}")


def _apply_1q(amps: np.ndarray, n: int, q: int, u: np.ndarray):
    # batched 2x2 matmul over the strided (left, 2, right) view: two memory
    # passes per gate
    view = amps.reshape(2 ** (q - 1), 2, 2 ** (n - q))
    np.copyto(view, np.matmul(u, view))


def _apply_2q(amps: np.ndarray, n: int, q1: int, q2: int, u: np.ndarray):
    # reorder so the gate matrix indexes (hi, lo) = sorted qubit positions
    if q1 > q2:
        perm = [0, 2, 1, 3]
        u = u[np.ix_(perm, perm)]
        q1, q2 = q2, q1
    view = amps.reshape(2 ** (q1 - 1), 2, 2 ** (q2 - q1 - 1), 2, 2 ** (n - q2))
    moved = view.transpose(1, 3, 0, 2, 4).reshape(4, -1)
    out = np.matmul(u, moved)
    np.copyto(view, out.reshape(2, 2, *view.shape[::2]).transpose(2, 0, 3, 1, 4))


def _apply_dense(amps: np.ndarray, n: int, targets: tuple[int, ...], u: np.ndarray):
    k = len(targets)
    tensor = amps.reshape((2,) * n)
    axes = [t - 1 for t in targets]
    rest = [i for i in range(n) if i not in axes]
    moved = tensor.transpose(axes + rest).reshape(2**k, -1)
    out = u @ moved
    inv = np.argsort(axes + rest)
    np.copyto(tensor, out.reshape((2,) * n).transpose(inv))


@lru_cache(maxsize=8192)
def _cached_matrix(kind: str, params: tuple, k_targets: int) -> np.ndarray:
    # the dense matrix is independent of which qubits the gate addresses
    return gate_matrix(GateOp(kind, params, tuple(range(1, k_targets + 1))))


def _apply_diag_1q(amps, n, q, d0, d1):
    view = amps.reshape(2 ** (q - 1), 2, 2 ** (n - q))
    if d0 != 1.0:
        view[:, 0, :] *= d0
    if d1 != 1.0:
        view[:, 1, :] *= d1


def _apply_x_gate(amps, n, q):
    view = amps.reshape(2 ** (q - 1), 2, 2 ** (n - q))
    tmp = view[:, 0, :].copy()
    view[:, 0, :] = view[:, 1, :]
    view[:, 1, :] = tmp


def _view_2q(amps, n, q1, q2):
    return amps.reshape(2 ** (q1 - 1), 2, 2 ** (q2 - q1 - 1), 2, 2 ** (n - q2))


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Apply ``gate`` in place; returns the same (mutated) StateVector.

    Diagonal and permutation gates take strided fast paths touching only the
    amplitude pairs/quadruples they act on; other gates go through the batched
    small-matrix kernels.
    """
    n = state.n_qubits
    amps = state.amplitudes
    _check_targets(n, gate.targets)
    kind = gate.kind
    if kind == "Rz":
        half = 0.5j * gate.params[0]
        _apply_diag_1q(amps, n, gate.targets[0], np.exp(-half), np.exp(half))
        return state
    if kind == "Phase":
        _apply_diag_1q(amps, n, gate.targets[0], 1.0, np.exp(1j * gate.params[0]))
        return state
    if kind == "X":
        _apply_x_gate(amps, n, gate.targets[0])
        return state
    if kind in ("CNOT", "CPhase", "ZZ"):
        q1, q2 = gate.targets
        lo, hi = (q1, q2) if q1 < q2 else (q2, q1)
        view = _view_2q(amps, n, lo, hi)
        if kind == "CNOT":
            # control axis depends on the target order
            if q1 < q2:
                tmp = view[:, 1, :, 0, :].copy()
                view[:, 1, :, 0, :] = view[:, 1, :, 1, :]
                view[:, 1, :, 1, :] = tmp
            else:
                tmp = view[:, 0, :, 1, :].copy()
                view[:, 0, :, 1, :] = view[:, 1, :, 1, :]
                view[:, 1, :, 1, :] = tmp
        elif kind == "CPhase":
            view[:, 1, :, 1, :] *= np.exp(1j * gate.params[0])
        else:  # ZZ, symmetric in its qubits
            ph = np.exp(1j * gate.params[0])
            view[:, 0, :, 0, :] *= ph.conjugate()
            view[:, 0, :, 1, :] *= ph
            view[:, 1, :, 0, :] *= ph
            view[:, 1, :, 1, :] *= ph.conjugate()
        return state
    u = _cached_matrix(kind, gate.params, len(gate.targets))
    k = len(gate.targets)
    if k == 1:
        _apply_1q(amps, n, gate.targets[0], u)
    elif k == 2:
        _apply_2q(amps, n, *gate.targets, u)
    else:
        _apply_dense(amps, n, gate.targets, u)
    return state


def apply_dense_unitary(
    state: StateVector, u: np.ndarray, targets: tuple[int, ...]
) -> StateVector:
    """Apply an explicit 2^k x 2^k unitary to the given target qubits, in place."""
    _check_targets(state.n_qubits, targets)
    if u.shape != (2 ** len(targets), 2 ** len(targets)):
        raise InputError(f"matrix shape {u.shape} does not match {len(targets)} targets")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
        raise InputError("matrix is not unitary within 1e-10")
    if len(targets) == 1:
        _apply_1q(state.amplitudes, state.n_qubits, targets[0], u)
    elif len(targets) == 2:
        _apply_2q(state.amplitudes, state.n_qubits, *targets, u)
    else:
        _apply_dense(state.amplitudes, state.n_qubits, targets, u)
    return state


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.n_qubits != b.n_qubits:
        raise InputError(
            f"register size mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def probability(state: StateVector, bits: str) -> float:
    """|<bits|state>|^2."""
    if len(bits) != state.n_qubits:
        raise InputError(f"bitstring {bits!r} does not match register size")
    return float(abs(state.amplitudes[int(bits, 2)]) ** 2)


def pauli_expectation(state: StateVector, p: PauliString) -> float:
    """<state| P |state> for a Hermitian Pauli string (real coefficient)."""
    coef = complex(p.coef)
    if abs(coef.imag) > 1e-12:
        raise InputError(f"Pauli expectation needs a real coefficient, got {p.coef}")
    if len(p.letters) != state.n_qubits:
        raise InputError(
            f"Pauli string length {len(p.letters)} does not match register size"
        )
    phi = state.copy()
    from .gates import PAULI

    for q, letter in enumerate(p.letters, start=1):
        if letter != "I":
            _apply_1q(phi.amplitudes, state.n_qubits, q, PAULI[letter])
    value = coef.real * inner_product(state, phi)
    if abs(value.imag) > 1e-10:
        raise InputError(f"expectation came out non-real: {value}")
    return float(value.real)
