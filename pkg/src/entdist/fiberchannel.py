"""Depolarizing fiber model: Kraus operators and carrier-measurement odds.

A span is characterised by its length L in km and the inverse length scale
Lambda of the depolarizing mechanism; everything depends on them only through
the decay factor ``q = exp(-Lambda L)``.  Only fibers are noisy; intermediate
nodes contribute loss (handled in :mod:`entdist.lossnet`) but no
depolarization, and noise accumulates over the full routed path length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .photonics import ID2, X, Y, Z
from .qstate import KrausSet

__all__ = ["FiberSegment", "depolarizing_kraus", "p_meas_edss1", "p_meas_edss2"]


@dataclass(frozen=True)
class FiberSegment:
    length_km: float
    lambda_per_km: float

    def __post_init__(self) -> None:
        if self.length_km < 0:
            raise ValueError("fiber length must be nonnegative")
        if self.lambda_per_km < 0:
            raise ValueError("the depolarizing rate must be nonnegative")

    @property
    def loss_exponent(self) -> float:
        """Dimensionless Lambda * L controlling all noise formulas."""
        return self.lambda_per_km * self.length_km

    @property
    def decay(self) -> float:
        """q = exp(-Lambda L), in (0, 1]."""
        return math.exp(-self.loss_exponent)


def depolarizing_kraus(segment: FiberSegment) -> KrausSet:
    """Four Kraus operators of the single-qubit depolarizing channel.

    Three are Pauli matrices weighted by sqrt(1 - q)/2 and the fourth is the
    identity weighted by sqrt(1 + 3q)/2; the channel acts as
    ``rho -> q rho + (1 - q) I/2``.
    """
    q = segment.decay
    pauli_weight = math.sqrt(1.0 - q) / 2
    identity_weight = math.sqrt(1.0 + 3.0 * q) / 2
    return KrausSet((
        pauli_weight * X,
        pauli_weight * Y,
        pauli_weight * Z,
        identity_weight * np.asarray(ID2),
    ))


def p_meas_edss1(segment: FiberSegment) -> float:
    """Probability of the successful carrier outcome in the CNOT scheme:
    1/2 - exp(-Lambda L)/6, rising from 1/3 (noiseless) towards 1/2."""
    return 0.5 - segment.decay / 6.0


def p_meas_edss2(segment: FiberSegment) -> float:
    """Probability of the successful carrier outcome in the CPHASE scheme:
    1/2 + exp(-Lambda L)/8, falling from 5/8 (noiseless) towards 1/2."""
    return 0.5 + segment.decay / 8.0
