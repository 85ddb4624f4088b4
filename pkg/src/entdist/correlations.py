"""Correlation measures: negativity, Bell fidelity, mutual information and
quantum discord.

Discord is maximised over rank-1 projective measurements of a single qubit,
parametrised by Bloch angles: a uniform (theta, phi) grid search followed by
deterministic coordinate-descent refinement.  Restricting to projective
measurements makes the classical-correlation term a lower bound of its true
maximum, so the returned discord is an upper bound; on two-qubit states the
restriction is harmless.  All entropies are base 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .photonics import bell_ket
from .qstate import DensityMatrix, partial_trace, partial_transpose, trace_norm

__all__ = [
    "DiscordConfig",
    "negativity",
    "bell_fidelity",
    "mutual_information",
    "classical_correlation",
    "discord",
]


@dataclass(frozen=True)
class DiscordConfig:
    """Search parameters for the projective-measurement maximisation."""

    resolution: int = 64          # grid points per angle (theta uses resolution + 1)
    refine_iterations: int = 60
    tolerance: float = 1e-6       # convergence threshold on the objective

    def __post_init__(self) -> None:
        if self.resolution < 16:
            raise ValueError("grid resolution below 16 is too coarse to trust")
        if self.tolerance > 1e-3:
            raise ValueError("tolerance above 1e-3 defeats the optimiser")
        if self.refine_iterations < 0:
            raise ValueError("refine_iterations must be nonnegative")


def negativity(rho: DensityMatrix, partition) -> float:
    """(||rho^{T_A}||_1 - 1) / 2 for the given partition labels."""
    partition = list(partition)
    if not partition:
        raise ValueError("negativity needs a nonempty partition")
    transposed = partial_transpose(rho, partition)
    return max(0.0, (trace_norm(transposed) - 1.0) / 2.0)


def bell_fidelity(rho: DensityMatrix, target: str | np.ndarray = "phi_plus") -> float:
    """Overlap <B| rho |B> with a Bell state given by name or ket."""
    if rho.num_qubits != 2:
        raise ValueError("Bell fidelity is defined for two-qubit states")
    ket = bell_ket(target) if isinstance(target, str) else np.asarray(target, dtype=complex)
    return float(np.real(ket.conj() @ rho.matrix @ ket))


def _entropy_from_eigenvalues(eigenvalues: np.ndarray) -> np.ndarray:
    clipped = np.where(eigenvalues > 1e-15, eigenvalues, 1.0)
    return -np.sum(np.where(eigenvalues > 1e-15, eigenvalues * np.log2(clipped), 0.0), axis=-1)


def _entropy(matrix: np.ndarray) -> float:
    return float(_entropy_from_eigenvalues(np.linalg.eigvalsh(matrix)))


def mutual_information(rho: DensityMatrix, first) -> float:
    """S(A) + S(B) - S(AB) in bits across the bipartition (first | rest)."""
    first = list(first)
    rest = [l for l in rho.labels if l not in first]
    if not first or not rest:
        raise ValueError("mutual information needs a nontrivial bipartition")
    s_first = _entropy(partial_trace(rho, first).matrix)
    s_rest = _entropy(partial_trace(rho, rest).matrix)
    return s_first + s_rest - _entropy(rho.matrix)


def _measured_last(rho: DensityMatrix, measured: str) -> np.ndarray:
    """State as a (dA, 2, dA, 2) tensor with the measured qubit's index last."""
    n = rho.num_qubits
    pos = rho.position(measured)
    tensor_form = rho.matrix.reshape((2,) * (2 * n))
    row_axes = [i for i in range(n) if i != pos] + [pos]
    col_axes = [i + n for i in row_axes]
    rearranged = tensor_form.transpose(row_axes + col_axes)
    d_rest = 2 ** (n - 1)
    return rearranged.reshape(d_rest, 2, d_rest, 2)


def _conditional_objective(blocks: np.ndarray, kets: np.ndarray, s_rest: float) -> np.ndarray:
    """Classical-correlation objective for a batch of measurement directions.

    ``blocks`` is the (dA, 2, dA, 2) tensor, ``kets`` an (n, 2) batch of
    measurement kets; the orthogonal complement ket completes each projector.
    """
    results = np.empty(kets.shape[0])
    complements = np.stack([-kets[:, 1].conj(), kets[:, 0].conj()], axis=1)
    for vectors in (kets, complements):
        # unnormalised conditional states <m| rho |m> on the unmeasured part
        conditionals = np.einsum("aibj,ni,nj->nab", blocks, vectors.conj(), vectors)
        probabilities = np.real(np.trace(conditionals, axis1=1, axis2=2))
        eigenvalues = np.linalg.eigvalsh(conditionals)
        safe = np.where(probabilities[:, None] > 1e-15, eigenvalues / np.maximum(probabilities[:, None], 1e-300), 0.0)
        entropies = _entropy_from_eigenvalues(safe)
        if vectors is kets:
            results = -probabilities * entropies
        else:
            results -= probabilities * entropies
    return s_rest + results


def _bloch_kets(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    return np.stack(
        [np.cos(thetas / 2) + 0j, np.exp(1j * phis) * np.sin(thetas / 2)], axis=1
    )


def classical_correlation(
    rho: DensityMatrix, measured: str, config: DiscordConfig | None = None
) -> float:
    """max over projective measurements of S(rest) - sum_i p_i S(rest | i)."""
    config = config or DiscordConfig()
    if rho.num_qubits < 2:
        raise ValueError("need at least two qubits")
    blocks = _measured_last(rho, measured)
    rest = [l for l in rho.labels if l != measured]
    s_rest = _entropy(partial_trace(rho, rest).matrix)

    resolution = config.resolution
    thetas = np.linspace(0.0, np.pi, resolution + 1)
    phis = np.arange(resolution) * (2 * np.pi / resolution)
    theta_grid, phi_grid = np.meshgrid(thetas, phis, indexing="ij")
    flat_thetas = theta_grid.ravel()
    flat_phis = phi_grid.ravel()
    values = _conditional_objective(blocks, _bloch_kets(flat_thetas, flat_phis), s_rest)
    best = int(np.argmax(values))
    best_value = float(values[best])
    theta, phi = float(flat_thetas[best]), float(flat_phis[best])

    # coordinate descent with step halving around the best grid point
    step = np.pi / resolution
    for _ in range(config.refine_iterations):
        improved = False
        for d_theta, d_phi in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            candidate_theta = min(max(theta + d_theta, 0.0), np.pi)
            candidate_phi = (phi + d_phi) % (2 * np.pi)
            value = float(
                _conditional_objective(
                    blocks, _bloch_kets(np.array([candidate_theta]), np.array([candidate_phi])), s_rest
                )[0]
            )
            if value > best_value + 1e-15:
                best_value, theta, phi = value, candidate_theta, candidate_phi
                improved = True
        if not improved:
            step /= 2
            if step < config.tolerance / 10:
                break
    return best_value


def discord(rho: DensityMatrix, measured: str, config: DiscordConfig | None = None) -> float:
    """Mutual information minus the maximal classical correlation obtained by
    measuring the given qubit."""
    rho.position(measured)
    total = mutual_information(rho, [l for l in rho.labels if l != measured])
    return total - classical_correlation(rho, measured, config)
