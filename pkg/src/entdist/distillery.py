"""Recurrence entanglement distillation by explicit two-copy simulation.

Every round consumes two copies of a two-qubit state shared between nodes a
and b and, on success, returns one (hopefully better) pair plus the success
probability of the required measurement outcomes.  All rounds are computed on
the full 16x16 two-copy density matrix; one mechanism covers every protocol,
including the branch mixing of the measurement-interaction scheme, and the
same machinery doubles as an oracle for the Bell-diagonal recurrence maps.

Frame convention: the distribution pipelines emit states dominated by the
phi+ component, and the fidelity target is phi+.  Protocols whose textbook
form tracks the singlet are conjugated into this frame by the fixed local
rotation Y on node a's photon, which swaps the phi+ and psi- weights; that
shows up below in ``wernerize`` (align, twirl, align back) and in the
deterministic final rotation of the improved matching-outcome variant.

Yield bookkeeping: each round consumes two pairs to make one, so the yield
after k rounds is the product of p_i / 2, the expected surviving pairs per
input pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import photonics as ph
from .correlations import bell_fidelity, negativity
from .qstate import (
    DensityMatrix,
    apply_unitary,
    mix,
    partial_trace,
    project,
    relabel,
    tensor,
)

__all__ = [
    "BellDiagonalCoeffs",
    "DistillationReport",
    "NotDistillableError",
    "REPEATABLE_PROTOCOLS",
    "wernerize",
    "dejmps_round",
    "bbpssw_round",
    "cnot_based_round",
    "mfi_round",
    "epl_d",
    "distill_to_threshold",
    "best_protocol",
]

# tie-break order for best_protocol
REPEATABLE_PROTOCOLS = ("dejmps", "bbpssw_improved", "bbpssw", "cnot_based", "mfi")

_PAIR_ONE = ("a1", "b1")
_PAIR_TWO = ("a2", "b2")


class NotDistillableError(ValueError):
    """Raised when the input state has no distillable entanglement."""


@dataclass(frozen=True)
class BellDiagonalCoeffs:
    """Weights over the ordered Bell basis (phi+, phi-, psi+, psi-)."""

    phi_plus: float
    phi_minus: float
    psi_plus: float
    psi_minus: float

    def __post_init__(self) -> None:
        values = self.as_tuple()
        if any(v < -1e-12 for v in values):
            raise ValueError("Bell-diagonal coefficients must be nonnegative")
        if abs(sum(values) - 1.0) > 1e-12:
            raise ValueError("Bell-diagonal coefficients must sum to 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.phi_plus, self.phi_minus, self.psi_plus, self.psi_minus)

    @classmethod
    def from_state(cls, rho: DensityMatrix) -> "BellDiagonalCoeffs":
        """Diagonal Bell-basis weights; faithful only for Bell-diagonal input."""
        weights = []
        for name in ph.BELL_ORDER:
            ket = ph.bell_ket(name)
            weights.append(float(np.real(ket.conj() @ rho.matrix @ ket)))
        return cls(*weights)

    def to_state(self, labels=("a", "b")) -> DensityMatrix:
        matrix = np.zeros((4, 4), dtype=complex)
        for weight, name in zip(self.as_tuple(), ph.BELL_ORDER):
            ket = ph.bell_ket(name)
            matrix += weight * np.outer(ket, ket.conj())
        return DensityMatrix(matrix, tuple(labels))


@dataclass(frozen=True)
class DistillationReport:
    protocol_id: str
    rounds: int
    per_round_success: tuple[float, ...]
    final_fidelity: float
    ebit_yield: float
    converged: bool


def _two_copies(rho: DensityMatrix) -> DensityMatrix:
    if rho.num_qubits != 2:
        raise ValueError("distillation rounds take two-qubit states")
    first = relabel(rho, _PAIR_ONE)
    second = relabel(rho, _PAIR_TWO)
    return tensor(first, second)


def _bilateral_cnot(state: DensityMatrix, controls, targets) -> DensityMatrix:
    for control, target in zip(controls, targets):
        state = apply_unitary(state, ph.CNOT, [control, target])
    return state


def _rotate_sides(state: DensityMatrix, node_a_rotation, node_b_rotation) -> DensityMatrix:
    for label in ("a1", "a2"):
        state = apply_unitary(state, node_a_rotation, [label])
    for label in ("b1", "b2"):
        state = apply_unitary(state, node_b_rotation, [label])
    return state


def _pair_branches(state: DensityMatrix, labels=("a2", "b2")):
    """All four H/V branch projections of the measured pair."""
    branches = {}
    for first in "HV":
        for second in "HV":
            ket = np.kron(ph.polarization_ket(first), ph.polarization_ket(second))
            projector = np.outer(ket, ket.conj())
            probability, post = project(state, projector, labels)
            branches[first + second] = (probability, post)
    return branches


def _keep_branches(state: DensityMatrix, outcome_pairs) -> tuple[DensityMatrix, float]:
    branches = _pair_branches(state)
    total = sum(branches[o][0] for o in outcome_pairs)
    if total < 1e-12:
        raise NotDistillableError("measurement branch has vanishing probability")
    kept = []
    for outcome in outcome_pairs:
        probability, post = branches[outcome]
        if post is not None:
            kept.append((probability / total, partial_trace(post, _PAIR_ONE)))
    return mix(kept), total


def _restore_labels(rho: DensityMatrix, like: DensityMatrix) -> DensityMatrix:
    return relabel(rho, like.labels)


def wernerize(rho: DensityMatrix) -> DensityMatrix:
    """Project onto the Werner family while keeping the phi+ weight.

    Unilateral Y moves the phi+ weight onto the twirl-invariant singlet slot,
    the three correlated rotations average the rest flat, and the inverse
    rotation brings the state back to the phi+ frame.
    """
    aligned = apply_unitary(rho, ph.Y, [rho.labels[0]])
    twirled = ph.bilocal_twirl(aligned)
    return apply_unitary(twirled, ph.Y, [rho.labels[0]])


def dejmps_round(rho: DensityMatrix) -> tuple[DensityMatrix, float]:
    """One matching-outcome round with the asymmetric wave-plate rotations.

    Rotations on each node's photons, bilateral CNOT with the second pair as
    target, H/V measurement of the target pair, keep equal outcomes.
    """
    state = _two_copies(rho)
    state = _rotate_sides(state, ph.DEJMPS_ROTATION_A, ph.DEJMPS_ROTATION_B)
    state = _bilateral_cnot(state, _PAIR_ONE, _PAIR_TWO)
    kept, probability = _keep_branches(state, ("HH", "VV"))
    return _restore_labels(kept, rho), probability


def bbpssw_round(rho: DensityMatrix, improved: bool = False) -> tuple[DensityMatrix, float]:
    """One matching-outcome round on Werner-form input.

    The original variant re-Wernerizes every round: twirl going in, bilateral
    CNOT, keep equal H/V outcomes, then the closing rotation-plus-twirl.  The
    improved variant replaces the closing twirl with one deterministic
    bilateral rotation (a pi/2 X-axis pair, frame-aligned to phi+) and does
    not re-twirl going in; callers Wernerize once at entry instead.
    """
    working = wernerize(rho) if not improved else rho
    state = _two_copies(working)
    state = _bilateral_cnot(state, _PAIR_ONE, _PAIR_TWO)
    kept, probability = _keep_branches(state, ("HH", "VV"))
    kept = _restore_labels(kept, rho)
    if improved:
        final = np.kron(ph.DEJMPS_ROTATION_B, ph.DEJMPS_ROTATION_A)
        return apply_unitary(kept, final, kept.labels), probability
    return wernerize(kept), probability


def cnot_based_round(rho: DensityMatrix) -> tuple[DensityMatrix, float]:
    """Like the matching-outcome rounds but keeps only the VV branch; works
    on any entangled input without Werner or Bell-diagonal preparation."""
    state = _two_copies(rho)
    state = _rotate_sides(state, ph.DEJMPS_ROTATION_A, ph.DEJMPS_ROTATION_B)
    state = _bilateral_cnot(state, _PAIR_ONE, _PAIR_TWO)
    kept, probability = _keep_branches(state, ("VV",))
    return _restore_labels(kept, rho), probability


_MFI_PROJECTOR = (
    np.outer(ph.bell_ket("psi_minus"), ph.bell_ket("psi_minus").conj())
    + np.outer(ph.bell_ket("phi_minus"), ph.bell_ket("phi_minus").conj())
)

# outcome-conditioned corrections: node a uses R1 on H and R2 on V, node b
# the opposite assignment
_MFI_CORRECTIONS = {
    ("H", "H"): (ph.MFI_ROTATION_1, ph.MFI_ROTATION_2),
    ("H", "V"): (ph.MFI_ROTATION_1, ph.MFI_ROTATION_1),
    ("V", "H"): (ph.MFI_ROTATION_2, ph.MFI_ROTATION_2),
    ("V", "V"): (ph.MFI_ROTATION_2, ph.MFI_ROTATION_1),
}


def mfi_round(rho: DensityMatrix) -> tuple[DensityMatrix, float]:
    """Measurement-interaction round: project each node's photon pair onto
    the sum of the two minus Bell states, measure one pair in H/V, and keep
    every branch after an outcome-conditioned rotation."""
    state = _two_copies(rho)
    probability_a, projected = project(state, _MFI_PROJECTOR, ("a1", "a2"))
    if projected is None:
        raise NotDistillableError("node-a projection has vanishing probability")
    probability_b, projected = project(projected, _MFI_PROJECTOR, ("b1", "b2"))
    if projected is None:
        raise NotDistillableError("node-b projection has vanishing probability")
    branches = _pair_branches(projected)
    components = []
    for (outcome_a, outcome_b), (rot_a, rot_b) in _MFI_CORRECTIONS.items():
        weight, post = branches[outcome_a + outcome_b]
        if post is None:
            continue
        pair = partial_trace(post, _PAIR_ONE)
        pair = apply_unitary(pair, rot_a, ["a1"])
        pair = apply_unitary(pair, rot_b, ["b1"])
        components.append((weight, pair))
    total = sum(w for w, _ in components)
    mixed = mix([(w / total, s) for w, s in components])
    return _restore_labels(mixed, rho), probability_a * probability_b


def epl_d(rho: DensityMatrix) -> tuple[DensityMatrix, float]:
    """Single-shot filter: bilateral CNOT with the measured pair as control,
    post-select both outcomes vertical.  Cannot be repeated; on depolarized
    Bell pairs it leaves entanglement unchanged (the kept pair comes back as
    a fixed local rotation of the input)."""
    state = _two_copies(rho)
    state = _bilateral_cnot(state, _PAIR_TWO, _PAIR_ONE)
    kept, probability = _keep_branches(state, ("VV",))
    return _restore_labels(kept, rho), probability


_ROUNDS = {
    "dejmps": dejmps_round,
    "bbpssw": lambda rho: bbpssw_round(rho, improved=False),
    "bbpssw_improved": lambda rho: bbpssw_round(rho, improved=True),
    "cnot_based": cnot_based_round,
    "mfi": mfi_round,
}


def distill_to_threshold(
    rho: DensityMatrix,
    protocol_id: str,
    threshold: float = 0.998,
    max_rounds: int = 20,
) -> DistillationReport:
    """Iterate one protocol until the phi+ fidelity reaches the threshold.

    Inputs whose fidelity is not above 1/2 carry no distillable entanglement
    for these recurrence protocols and are rejected.  Hitting ``max_rounds``
    yields a non-convergent report rather than an error.
    """
    if protocol_id not in _ROUNDS:
        raise ValueError(
            f"unknown repeatable protocol {protocol_id!r}; choose from {REPEATABLE_PROTOCOLS}"
        )
    if not 0.5 < threshold < 1.0:
        raise ValueError("threshold must lie in (0.5, 1)")
    fidelity = bell_fidelity(rho)
    if fidelity >= threshold:
        return DistillationReport(protocol_id, 0, (), fidelity, 1.0, True)
    if fidelity <= 0.5:
        raise NotDistillableError(
            f"input fidelity {fidelity:.4f} is not above 1/2; nothing to distil"
        )
    if protocol_id in ("bbpssw", "bbpssw_improved"):
        rho = wernerize(rho)  # the matching-outcome protocols start from Werner form
    round_fn = _ROUNDS[protocol_id]
    successes: list[float] = []
    ebit_yield = 1.0
    for _ in range(max_rounds):
        rho, probability = round_fn(rho)
        successes.append(probability)
        ebit_yield *= probability / 2.0
        fidelity = bell_fidelity(rho)
        if fidelity >= threshold:
            return DistillationReport(
                protocol_id, len(successes), tuple(successes), fidelity, ebit_yield, True
            )
    return DistillationReport(
        protocol_id, len(successes), tuple(successes), fidelity, 0.0, False
    )


def best_protocol(rho: DensityMatrix, threshold: float = 0.998, max_rounds: int = 20) -> str:
    """The repeatable protocol with the highest yield, ties resolved by the
    fixed order of ``REPEATABLE_PROTOCOLS``."""
    best_id = None
    best_yield = -1.0
    for protocol_id in REPEATABLE_PROTOCOLS:
        report = distill_to_threshold(rho, protocol_id, threshold, max_rounds)
        candidate = report.ebit_yield if report.converged else 0.0
        if candidate > best_yield + 1e-15:
            best_id, best_yield = protocol_id, candidate
    return best_id
