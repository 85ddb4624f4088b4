"""Network topology, routing, and the photon-loss / pair-rate model.

Rates follow the dual-source heralded architecture for direct distribution
and the carrier architecture for the separable-state schemes.  All decibel
figures are converted to linear power factors before any rate math.  Node
bypass costs two wavelength-selective switches, so ``L_node = L_wss**2``.

Topology is an input, not a constant: the file format is one undirected edge
per line, ``<nodeA> <nodeB> <length_km>``, with ``#`` comments.  Parameter
overrides use ``key=value`` lines mirroring :class:`LossParameters` fields.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from pathlib import Path

__all__ = [
    "LossParameters",
    "NetworkTopology",
    "RouteSummary",
    "RouteNotFoundError",
    "db_to_linear",
    "route",
    "ded_pair_rate",
    "edss_pair_rate",
    "crossover_gate_p",
]


class RouteNotFoundError(ValueError):
    """No path exists between the requested nodes."""


def db_to_linear(x_db: float) -> float:
    """Convert a dB loss figure to the linear power factor 10**(x/10)."""
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class LossParameters:
    """Hardware constants of the loss model; defaults are the reference
    values used throughout the rate calculations."""

    n: float = 2.87e7              # photon-pair generation rate, pairs/s
    eta_coup: float = 0.85         # free-space-to-fiber coupling efficiency
    p_bsm: float = 0.5             # Bell-state-measurement success probability
    l_demux_db: float = 3.0
    l_wss_db: float = 3.5
    l_sw_db: float = 1.0
    alpha_db_per_km: float = 0.17  # fiber attenuation

    def __post_init__(self) -> None:
        for name in ("n", "eta_coup", "p_bsm", "l_demux_db", "l_wss_db", "l_sw_db", "alpha_db_per_km"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if not 0 < self.eta_coup <= 1:
            raise ValueError("eta_coup must lie in (0, 1]")
        if not 0 <= self.p_bsm <= 1:
            raise ValueError("p_bsm must be a probability")

    @classmethod
    def from_text(cls, text: str) -> "LossParameters":
        """Defaults overridden by key=value lines; '#' starts a comment."""
        params = cls()
        valid = set(cls.__dataclass_fields__)
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"parameter line {lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in valid:
                raise ValueError(f"parameter line {lineno}: unknown key {key!r}")
            params = replace(params, **{key: float(value)})
        return params

    @classmethod
    def from_file(cls, path) -> "LossParameters":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def fiber_loss_linear(self, distance_km: float) -> float:
        return db_to_linear(self.alpha_db_per_km * distance_km)

    @property
    def node_loss_linear(self) -> float:
        """An intermediate bypass node costs two WSS traversals."""
        return db_to_linear(self.l_wss_db) ** 2


@dataclass(frozen=True)
class RouteSummary:
    path: tuple[str, ...]
    total_length_km: float

    @property
    def intermediate_node_count(self) -> int:
        return len(self.path) - 2


class NetworkTopology:
    """Undirected weighted graph of nodes and fiber spans in km."""

    def __init__(self, edges) -> None:
        self._adjacency: dict[str, dict[str, float]] = {}
        for a, b, length in edges:
            a, b = str(a), str(b)
            length = float(length)
            if a == b:
                raise ValueError(f"self-loop on node {a!r}")
            if length <= 0:
                raise ValueError(f"edge {a}-{b} must have positive length")
            if b in self._adjacency.get(a, {}):
                raise ValueError(f"duplicate edge {a}-{b}")
            self._adjacency.setdefault(a, {})[b] = length
            self._adjacency.setdefault(b, {})[a] = length
        if not self._adjacency:
            raise ValueError("topology has no edges")

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self._adjacency))

    @property
    def edges(self) -> tuple[tuple[str, str, float], ...]:
        seen = []
        for a in self.nodes:
            for b, length in sorted(self._adjacency[a].items()):
                if a < b:
                    seen.append((a, b, length))
        return tuple(seen)

    def neighbors(self, node: str) -> dict[str, float]:
        if node not in self._adjacency:
            raise ValueError(f"unknown node {node!r}")
        return dict(self._adjacency[node])

    def unordered_pairs(self) -> tuple[tuple[str, str], ...]:
        nodes = self.nodes
        return tuple(
            (nodes[i], nodes[j]) for i in range(len(nodes)) for j in range(i + 1, len(nodes))
        )

    @classmethod
    def from_text(cls, text: str) -> "NetworkTopology":
        edges = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(
                    f"topology line {lineno}: expected '<nodeA> <nodeB> <length_km>', got {raw!r}"
                )
            edges.append((parts[0], parts[1], float(parts[2])))
        return cls(edges)

    @classmethod
    def from_file(cls, path) -> "NetworkTopology":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def route(topology: NetworkTopology, a: str, b: str) -> RouteSummary:
    """Minimum-total-length path, ties broken by lexicographic node order."""
    if a == b:
        raise ValueError("route endpoints must differ")
    for node in (a, b):
        topology.neighbors(node)
    # heap entries carry the whole path so equal-length candidates compare
    # lexicographically, which pins down the tie-break deterministically
    queue: list[tuple[float, tuple[str, ...]]] = [(0.0, (a,))]
    settled: set[str] = set()
    while queue:
        length, path = heapq.heappop(queue)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == b:
            return RouteSummary(path, length)
        for neighbor, span in topology.neighbors(node).items():
            if neighbor not in settled:
                heapq.heappush(queue, (length + span, path + (neighbor,)))
    raise RouteNotFoundError(f"no path between {a!r} and {b!r}")


def ded_pair_rate(summary: RouteSummary, params: LossParameters) -> float:
    """Expected distributed pairs/s for direct entanglement distribution.

    The product of the swap success (two couplings, the Bell measurement and
    two demultiplexer losses), the travelling photon's odds through three
    switches, the fiber and any bypass nodes, and the stored photon's single
    switch, scaled by the source pair rate.
    """
    l_wss = db_to_linear(params.l_wss_db)
    l_demux = db_to_linear(params.l_demux_db)
    p_swap = params.eta_coup**2 * params.p_bsm / l_demux**2
    p_travel = params.eta_coup / (
        l_wss**3
        * params.fiber_loss_linear(summary.total_length_km)
        * params.node_loss_linear**summary.intermediate_node_count
    )
    p_stored = params.eta_coup / l_wss
    return params.n * p_travel * p_stored * p_swap


def edss_pair_rate(
    summary: RouteSummary,
    params: LossParameters,
    gate_p: float,
    p_meas: float,
    demux_db=None,
) -> float:
    """Carrier-scheme pairs/s: the worst demultiplexer output rate, scaled by
    the squared gate success, the carrier-measurement odds, and the switch,
    WSS, bypass-node and fiber losses.

    ``demux_db`` optionally lists per-demultiplexer losses; the rate takes
    the minimum output.  The default is the single uniform value in
    ``params``, which makes the minimum degenerate.
    """
    if not 0 <= gate_p <= 1:
        raise ValueError("gate_p must be a probability")
    if not 0 <= p_meas <= 1:
        raise ValueError("p_meas must be a probability")
    losses = tuple(demux_db) if demux_db is not None else (params.l_demux_db,)
    demux_rate = min(params.n * params.eta_coup / db_to_linear(db) for db in losses)
    l_sw = db_to_linear(params.l_sw_db)
    l_wss = db_to_linear(params.l_wss_db)
    denominator = (
        l_sw**2
        * l_wss**2
        * params.node_loss_linear**summary.intermediate_node_count
        * params.fiber_loss_linear(summary.total_length_km)
    )
    return demux_rate * gate_p**2 * p_meas / denominator


def crossover_gate_p(summary: RouteSummary, params: LossParameters, p_meas: float) -> float:
    """Gate success probability at which the carrier scheme's pair rate
    matches direct distribution: sqrt(E / R(P=1)).  Independent of the route,
    since fiber and bypass losses enter both rates identically."""
    unit_rate = edss_pair_rate(summary, params, 1.0, p_meas)
    if unit_rate <= 0:
        raise ValueError("carrier rate at P=1 is zero; crossover undefined")
    return math.sqrt(ded_pair_rate(summary, params) / unit_rate)
