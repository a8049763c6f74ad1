"""Gate definitions: named gate operations and their dense unitary matrices.

Matrices are stored with the exact phase of their defining formula; use
:func:`spinsim.compiler.equal_up_to_global_phase` for phase-insensitive
comparisons.  Angles are unrestricted reals (no normalization into [0, 2pi)).
All functions here are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

SQRT2 = math.sqrt(2.0)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

AXES = ("x", "y", "z")

# kind -> (number of params, number of targets; None = variable (>=1))
GATE_SIGNATURES = {
    "U3": (3, 1),
    "H": (0, 1),
    "Phase": (1, 1),
    "Rx": (1, 1),
    "Ry": (1, 1),
    "Rz": (1, 1),
    "X": (0, 1),
    "CNOT": (0, 2),
    "CPhase": (1, 2),
    "ZZ": (1, 2),
    "XX": (1, 2),
    "YY": (1, 2),
    "Uxy": (1, 2),
    "MS_T1": (1, 1),
    "MS_T2": (1, None),
    "MS_T3": (2, None),
    "MS_T4": (2, None),
}


@dataclass(frozen=True)
class GateOp:
    """A named parameterized gate bound to an ordered list of 1-based qubits."""

    kind: str
    params: tuple[float, ...] = ()
    targets: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_SIGNATURES:
            raise InputError(f"unknown gate kind {self.kind!r}")
        n_params, n_targets = GATE_SIGNATURES[self.kind]
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        if len(self.params) != n_params:
            raise InputError(
                f"{self.kind} takes {n_params} parameter(s), got {len(self.params)}"
            )
        if n_targets is None:
            if len(self.targets) < 1:
                raise InputError(f"{self.kind} needs at least one target")
        elif len(self.targets) != n_targets:
            raise InputError(
                f"{self.kind} takes {n_targets} target(s), got {len(self.targets)}"
            )
        if self.kind == "MS_T4" and len(self.targets) < 2:
            raise InputError("MS_T4 needs at least two targets")
        if len(set(self.targets)) != len(self.targets):
            raise InputError(f"duplicate targets in {self.kind}: {self.targets}")
        if any(q < 1 for q in self.targets):
            raise InputError(f"qubit indices are 1-based, got {self.targets}")


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    """Most general single-qubit gate U(theta, phi, lambda)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (lam + phi)) * c],
        ]
    )


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2


def phase_gate(delta: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * delta)]])


def rotation(axis: str, theta: float) -> np.ndarray:
    """R_axis(theta) = exp(-i theta sigma_axis / 2)."""
    if axis not in AXES:
        raise InputError(f"axis must be one of {AXES}, got {axis!r}")
    sigma = PAULI[axis.upper()]
    return math.cos(theta / 2) * PAULI["I"] - 1j * math.sin(theta / 2) * sigma


def cnot() -> np.ndarray:
    """CNOT with the first qubit as control."""
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )


def cphase(delta: float) -> np.ndarray:
    """Controlled phase: diag(1, 1, 1, e^{i delta})."""
    return np.diag([1, 1, 1, np.exp(1j * delta)])


def hermitian_expm(generator: np.ndarray) -> np.ndarray:
    """exp(-i G) for Hermitian G, via eigendecomposition."""
    w, v = np.linalg.eigh(generator)
    return (v * np.exp(-1j * w)) @ v.conj().T


def pauli_pair_exponential(alpha: str, beta: str, delta: float) -> np.ndarray:
    """exp(-i delta sigma_alpha (x) sigma_beta) as a 4x4 unitary."""
    if alpha not in AXES or beta not in AXES:
        raise InputError(f"axes must be in {AXES}, got ({alpha!r}, {beta!r})")
    gen = np.kron(PAULI[alpha.upper()], PAULI[beta.upper()])
    return hermitian_expm(delta * gen)


def uxy(delta: float) -> np.ndarray:
    """exp(-i delta (XX + YY)); acts nontrivially only on span{|01>, |10>}."""
    gen = np.kron(PAULI["X"], PAULI["X"]) + np.kron(PAULI["Y"], PAULI["Y"])
    return hermitian_expm(delta * gen)


def _sigma_phi(phi: float) -> np.ndarray:
    return math.cos(phi) * PAULI["X"] + math.sin(phi) * PAULI["Y"]


def ms_generator(kind: str, theta: float, phi: float, n: int) -> np.ndarray:
    """Hermitian generator G of the collective gate exp(-i G) on n addressed qubits."""
    if kind in ("MS_T1", "MS_T2"):
        single = PAULI["Z"]
    elif kind == "MS_T3":
        single = _sigma_phi(phi)
    elif kind == "MS_T4":
        if n < 2:
            raise InputError("MS_T4 needs at least two addressed qubits")
        sp = _sigma_phi(phi)
        gen = np.zeros((2**n, 2**n), dtype=complex)
        for i in range(n):
            for j in range(i + 1, n):
                term = np.eye(1, dtype=complex)
                for k in range(n):
                    term = np.kron(term, sp if k in (i, j) else PAULI["I"])
                gen += term
        return theta * gen
    else:
        raise InputError(f"not a collective gate kind: {kind}")
    gen = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        term = np.eye(1, dtype=complex)
        for k in range(n):
            term = np.kron(term, single if k == i else PAULI["I"])
        gen += term
    return theta * gen


def gate_matrix(op: GateOp) -> np.ndarray:
    """Dense unitary of ``op`` on its own targets, ordered as ``op.targets``."""
    k = op.kind
    p = op.params
    if k == "U3":
        return u3(*p)
    if k == "H":
        return hadamard()
    if k == "Phase":
        return phase_gate(p[0])
    if k in ("Rx", "Ry", "Rz"):
        return rotation(k[1].lower(), p[0])
    if k == "X":
        return PAULI["X"].copy()
    if k == "CNOT":
        return cnot()
    if k == "CPhase":
        return cphase(p[0])
    if k in ("ZZ", "XX", "YY"):
        a = k[0].lower()
        return pauli_pair_exponential(a, a, p[0])
    if k == "Uxy":
        return uxy(p[0])
    if k.startswith("MS_"):
        theta = p[0]
        phi = p[1] if len(p) > 1 else 0.0
        return hermitian_expm(ms_generator(k, theta, phi, len(op.targets)))
    raise InputError(f"unknown gate kind {k!r}")


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    return m.shape[0] == m.shape[1] and bool(
        np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol
    )


def zyz_angles(m: np.ndarray) -> tuple[float, float, float, float]:
    """Euler angles of a 2x2 unitary: m = e^{i phase} Rz(a) Ry(b) Rz(c)."""
    det = np.linalg.det(m)
    u = m / np.sqrt(det)
    phase = 0.5 * np.angle(det)
    b = 2.0 * math.atan2(abs(u[1, 0]), abs(u[0, 0]))
    if abs(u[0, 0]) < 1e-12:
        # anti-diagonal: only a - c is determined
        a = 2.0 * np.angle(u[1, 0])
        c = 0.0
    elif abs(u[1, 0]) < 1e-12:
        a = 2.0 * np.angle(u[1, 1])
        c = 0.0
    else:
        half_sum = np.angle(u[1, 1])
        half_diff = np.angle(u[1, 0])
        a = half_sum + half_diff
        c = half_sum - half_diff
    return phase, a, b, c
