"""End-to-end state pipelines for the three distribution protocols.

All three pipelines produce the two-qubit state shared by nodes a and b after
one protocol attempt over a fiber span, together with the probability of the
post-selected carrier outcome (1 for direct distribution, which measures
nothing).  Gate success probability is *not* simulated here: a failed optical
gate destroys the attempt and is accounted for in the rate model as the P^2
factor, keeping state quality and throughput separate.

The carrier-based pipelines expose their intermediate states so tests can
assert that the carrier stays separable from the node photons at every stage,
including halfway down the fiber.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import photonics as ph
from .correlations import DiscordConfig, discord
from .fiberchannel import FiberSegment, depolarizing_kraus
from .qstate import (
    DensityMatrix,
    MeasurementOutcome,
    apply_channel,
    apply_unitary,
    measure,
    partial_trace,
    pure_state,
    tensor,
)

__all__ = [
    "ProtocolOutcome",
    "PipelineTrace",
    "edss1_initial_state",
    "edss2_initial_states",
    "run_ded",
    "run_edss1",
    "run_edss2",
    "edss1_pipeline",
    "edss2_pipeline",
    "carrier_discord_checkpoint",
]

NODE_LABELS = ("a", "b")
CARRIER_LABEL = "c"


@dataclass(frozen=True)
class ProtocolOutcome:
    """Post-selected two-qubit state plus the probability of obtaining it.

    ``success_probability`` covers measurement post-selection only; photon
    loss lives in the rate model.
    """

    final_state: DensityMatrix
    success_probability: float
    protocol_id: str
    lambda_l: float


@dataclass(frozen=True)
class PipelineTrace:
    """Intermediate three-qubit states of a carrier protocol run."""

    after_encode: DensityMatrix
    mid_fiber: DensityMatrix
    after_fiber: DensityMatrix
    outcomes: tuple[MeasurementOutcome, ...]


def edss1_initial_state() -> DensityMatrix:
    """Three-qubit start state of the CNOT-based carrier scheme.

    An equal mixture of (|HH><HH| + |VV><VV|) on the node photons with a
    vertically polarized carrier, and the four psi_k x psi_{-k} node products
    with a horizontal carrier, all weighted 1/6.  Fully separable; the carrier
    is only classically correlated with the nodes.
    """
    dim = 8
    acc = np.zeros((dim, dim), dtype=complex)
    v_proj = np.outer(ph.V_KET, ph.V_KET.conj())
    h_proj = np.outer(ph.H_KET, ph.H_KET.conj())
    for ket in (np.kron(ph.H_KET, ph.H_KET), np.kron(ph.V_KET, ph.V_KET)):
        acc += np.kron(np.outer(ket, ket.conj()), v_proj) / 6.0
    for k in range(4):
        ket = np.kron(ph.psi_k(k), ph.psi_k(-k))
        acc += np.kron(np.outer(ket, ket.conj()), h_proj) / 6.0
    return DensityMatrix(acc, NODE_LABELS + (CARRIER_LABEL,))


def edss2_initial_states() -> tuple[DensityMatrix, DensityMatrix]:
    """Node-pair state and carrier state of the CPHASE-based scheme.

    The node photons carry a separable discordant state; the carrier starts
    completely uncorrelated in (|D><D| + 3 |A><A|)/4.
    """
    acc = np.zeros((4, 4), dtype=complex)
    for ket_pair in (("H", "H"), ("V", "V")):
        ket = np.kron(ph.polarization_ket(ket_pair[0]), ph.polarization_ket(ket_pair[1]))
        acc += np.outer(ket, ket.conj()) / 4.0
    for ket_pair in (("D", "D"), ("A", "A"), ("R", "L"), ("L", "R")):
        ket = np.kron(ph.polarization_ket(ket_pair[0]), ph.polarization_ket(ket_pair[1]))
        acc += np.outer(ket, ket.conj()) / 8.0
    nodes = DensityMatrix(acc, NODE_LABELS)
    carrier_matrix = (
        np.outer(ph.D_KET, ph.D_KET.conj()) + 3.0 * np.outer(ph.A_KET, ph.A_KET.conj())
    ) / 4.0
    carrier = DensityMatrix(carrier_matrix, (CARRIER_LABEL,))
    return nodes, carrier


def run_ded(segment: FiberSegment) -> ProtocolOutcome:
    """Direct distribution: one photon of a phi+ pair rides the fiber."""
    state = pure_state(ph.bell_ket("phi_plus"), NODE_LABELS)
    noisy = apply_channel(state, depolarizing_kraus(segment), ["b"])
    return ProtocolOutcome(noisy, 1.0, "ded", segment.loss_exponent)


def _carrier_pipeline(
    initial: DensityMatrix,
    gate: np.ndarray,
    segment: FiberSegment,
    basis,
) -> PipelineTrace:
    # encode at node a, send c, decode at node b, measure c
    after_encode = apply_unitary(initial, gate, ["a", CARRIER_LABEL])
    half = FiberSegment(segment.length_km / 2, segment.lambda_per_km)
    mid_fiber = apply_channel(after_encode, depolarizing_kraus(half), [CARRIER_LABEL])
    after_fiber = apply_channel(mid_fiber, depolarizing_kraus(half), [CARRIER_LABEL])
    decoded = apply_unitary(after_fiber, gate, ["b", CARRIER_LABEL])
    outcomes = tuple(measure(decoded, basis, CARRIER_LABEL))
    return PipelineTrace(after_encode, mid_fiber, after_fiber, outcomes)


def edss1_pipeline(segment: FiberSegment) -> PipelineTrace:
    return _carrier_pipeline(edss1_initial_state(), ph.CNOT, segment, ph.HV_PROJECTORS)


def edss2_pipeline(segment: FiberSegment) -> PipelineTrace:
    nodes, carrier = edss2_initial_states()
    return _carrier_pipeline(tensor(nodes, carrier), ph.CPHASE, segment, ph.DA_PROJECTORS)


def _post_selected(trace: PipelineTrace, wanted: str) -> tuple[DensityMatrix, float]:
    for outcome in trace.outcomes:
        if outcome.outcome_label == wanted:
            if outcome.post_state is None:
                raise ValueError(f"outcome {wanted!r} has zero probability")
            return partial_trace(outcome.post_state, NODE_LABELS), outcome.probability
    raise ValueError(f"no measurement outcome labelled {wanted!r}")


def run_edss1(segment: FiberSegment) -> ProtocolOutcome:
    """CNOT encode, noisy carrier transit, CNOT decode, keep the H outcome."""
    trace = edss1_pipeline(segment)
    state, probability = _post_selected(trace, "H")
    return ProtocolOutcome(state, probability, "edss1", segment.loss_exponent)


def run_edss2(segment: FiberSegment) -> ProtocolOutcome:
    """CPHASE encode/decode with a D/A carrier measurement, keep the A outcome."""
    trace = edss2_pipeline(segment)
    state, probability = _post_selected(trace, "A")
    return ProtocolOutcome(state, probability, "edss2", segment.loss_exponent)


def carrier_discord_checkpoint(
    state: DensityMatrix, config: DiscordConfig | None = None
) -> float:
    """Discord between the node pair and the carrier of a post-encode state,
    maximised over projective carrier measurements."""
    return discord(state, CARRIER_LABEL, config or DiscordConfig())
