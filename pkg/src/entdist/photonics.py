"""Polarization states, Bell basis, optical gates and correlated rotations.

Conventions: ``|H>`` is the computational ``|0>``, ``|V>`` is ``|1>``.  The
diagonal family is ``psi_k = (|H> + e^{i k pi/2} |V>) / sqrt(2)`` with
D, R, A, L at k = 0, 1, 2, 3.  Bloch rotations use
``R(axis, theta) = exp(-i theta sigma_axis / 2)``; where a protocol calls for
a "pi rotation" realised by a Pauli matrix we use the Pauli itself, since the
global phase is unobservable on density matrices.

The Bell basis is ordered ``(phi_plus, phi_minus, psi_plus, psi_minus)``
everywhere; distillation coefficient bookkeeping depends on that order.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .qstate import DensityMatrix, apply_unitary, mix

__all__ = [
    "H_KET", "V_KET", "D_KET", "R_KET", "A_KET", "L_KET",
    "psi_k", "polarization_ket",
    "BELL_ORDER", "bell_ket",
    "ID2", "X", "Y", "Z", "HADAMARD",
    "CNOT", "CPHASE", "rotation",
    "DEJMPS_ROTATION_A", "DEJMPS_ROTATION_B",
    "MFI_ROTATION_1", "MFI_ROTATION_2",
    "TWIRL_ROTATIONS",
    "HV_PROJECTORS", "DA_PROJECTORS",
    "trilocal_rotation_set", "bilocal_twirl", "werner_state",
]

H_KET = np.array([1.0, 0.0], dtype=complex)
V_KET = np.array([0.0, 1.0], dtype=complex)


def psi_k(k: int) -> np.ndarray:
    """(|H> + e^{i k pi/2} |V>) / sqrt(2)."""
    return (H_KET + np.exp(1j * k * np.pi / 2) * V_KET) / np.sqrt(2)


D_KET = psi_k(0)
R_KET = psi_k(1)
A_KET = psi_k(2)
L_KET = psi_k(3)

_POLARIZATIONS = {"H": H_KET, "V": V_KET, "D": D_KET, "R": R_KET, "A": A_KET, "L": L_KET}


def polarization_ket(name: str) -> np.ndarray:
    try:
        return _POLARIZATIONS[name].copy()
    except KeyError:
        raise ValueError(f"unknown polarization {name!r}") from None


ID2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

# control qubit first (owns the most significant bit)
CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=complex)
CPHASE = np.diag([1, 1, 1, -1]).astype(complex)

_AXES = {"x": X, "y": Y, "z": Z}


def rotation(axis: str, theta: float) -> np.ndarray:
    """Bloch-sphere rotation exp(-i theta sigma_axis / 2)."""
    sigma = _AXES[axis.lower()]
    return np.cos(theta / 2) * ID2 - 1j * np.sin(theta / 2) * sigma


# half/quarter-wave-plate rotations used before the bilateral CNOT in the
# recurrence distillation step
DEJMPS_ROTATION_A = np.array([[1, -1j], [-1j, 1]], dtype=complex) / np.sqrt(2)
DEJMPS_ROTATION_B = np.array([[1, 1j], [1j, 1]], dtype=complex) / np.sqrt(2)

# outcome-conditioned corrections of the measurement-interaction protocol
MFI_ROTATION_1 = np.array([[1j, 0], [0, 1]], dtype=complex)
MFI_ROTATION_2 = np.array([[0, 1j], [1, 0]], dtype=complex)

# generators of the random bilocal rotation: pi/2 about X, Y, Z
TWIRL_ROTATIONS = (rotation("x", np.pi / 2), rotation("y", np.pi / 2), rotation("z", np.pi / 2))


def _proj(ket: np.ndarray) -> np.ndarray:
    return np.outer(ket, ket.conj())


HV_PROJECTORS = (("H", _proj(H_KET)), ("V", _proj(V_KET)))
DA_PROJECTORS = (("D", _proj(D_KET)), ("A", _proj(A_KET)))

BELL_ORDER = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")

_BELL_KETS = {
    "phi_plus": (np.kron(H_KET, H_KET) + np.kron(V_KET, V_KET)) / np.sqrt(2),
    "phi_minus": (np.kron(H_KET, H_KET) - np.kron(V_KET, V_KET)) / np.sqrt(2),
    "psi_plus": (np.kron(H_KET, V_KET) + np.kron(V_KET, H_KET)) / np.sqrt(2),
    "psi_minus": (np.kron(H_KET, V_KET) - np.kron(V_KET, H_KET)) / np.sqrt(2),
}


def bell_ket(name: str) -> np.ndarray:
    try:
        return _BELL_KETS[name].copy()
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}; choose from {BELL_ORDER}") from None


def trilocal_rotation_set() -> list[np.ndarray]:
    """The six correlated three-qubit rotations that prepare the classically
    correlated carrier state from |D>|D>|H>, as 8x8 unitaries U_a x U_b x U_c."""
    half_pi = np.pi / 2
    rows = [
        (ID2, ID2, ID2),
        (rotation("z", half_pi), rotation("z", -half_pi), ID2),
        (Z, Z, ID2),
        (rotation("z", -half_pi), rotation("z", half_pi), ID2),
        (rotation("y", -half_pi), rotation("y", -half_pi), X),
        (rotation("y", half_pi), rotation("y", half_pi), X),
    ]
    return [np.kron(np.kron(ua, ub), uc) for ua, ub, uc in rows]


def bilocal_twirl(rho: DensityMatrix) -> DensityMatrix:
    """Average of the three correlated (U x U) conjugations on a two-qubit
    state; maps any Bell-diagonal state onto the isotropic mixture that keeps
    its singlet weight."""
    if rho.num_qubits != 2:
        raise ValueError("the bilocal twirl is defined for two-qubit states")
    terms = []
    for u in TWIRL_ROTATIONS:
        terms.append((1 / 3, apply_unitary(rho, np.kron(u, u), rho.labels)))
    return mix(terms)


def werner_state(f: float, labels: Sequence[str] = ("a", "b")) -> DensityMatrix:
    """f |psi-><psi-| + (1 - f) I/4 on two qubits."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"mixing parameter must lie in [0, 1], got {f}")
    ket = _BELL_KETS["psi_minus"]
    matrix = f * np.outer(ket, ket.conj()) + (1.0 - f) * np.eye(4) / 4
    return DensityMatrix(matrix, tuple(labels))
