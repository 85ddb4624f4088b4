"""Entanglement-distribution simulator and rate calculator for lossy,
depolarizing optical-fiber networks."""

from .fiberchannel import FiberSegment, depolarizing_kraus, p_meas_edss1, p_meas_edss2
from .lossnet import (
    LossParameters,
    NetworkTopology,
    RouteSummary,
    crossover_gate_p,
    db_to_linear,
    ded_pair_rate,
    edss_pair_rate,
    route,
)
from .protocols import (
    ProtocolOutcome,
    carrier_discord_checkpoint,
    edss1_initial_state,
    edss2_initial_states,
    run_ded,
    run_edss1,
    run_edss2,
)
from .qstate import DensityMatrix, KrausSet, MeasurementOutcome

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "KrausSet",
    "MeasurementOutcome",
    "FiberSegment",
    "depolarizing_kraus",
    "p_meas_edss1",
    "p_meas_edss2",
    "LossParameters",
    "NetworkTopology",
    "RouteSummary",
    "db_to_linear",
    "route",
    "ded_pair_rate",
    "edss_pair_rate",
    "crossover_gate_p",
    "ProtocolOutcome",
    "run_ded",
    "run_edss1",
    "run_edss2",
    "edss1_initial_state",
    "edss2_initial_states",
    "carrier_discord_checkpoint",
    "__version__",
]
