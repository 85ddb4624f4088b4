"""Dense linear algebra for small labelled multi-qubit density matrices.

States are exact complex matrices over a labelled tensor product of qubits.
The first label owns the most significant bit of the computational index, so
for labels ``(a, b)`` the basis state ``|HV>`` sits at index ``0b01``.  All
values are immutable after construction and every operation is a pure
function returning a new value, so everything in this module is safe to share
across threads.

Dimensions stay tiny (at most four qubits, 16x16), so every spectral quantity
is computed by a dense Hermitian eigendecomposition rather than anything
clever.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TOLERANCES",
    "Tolerances",
    "DensityMatrix",
    "KrausSet",
    "MeasurementOutcome",
    "pure_state",
    "maximally_mixed",
    "mix",
    "relabel",
    "tensor",
    "partial_trace",
    "partial_transpose",
    "trace_norm",
    "apply_unitary",
    "apply_channel",
    "project",
    "measure",
    "von_neumann_entropy",
]


@dataclass(frozen=True)
class Tolerances:
    """Global numeric tolerances, the single source of truth for all checks."""

    equality: float = 1e-12      # Hermiticity and trace deviations
    psd_slack: float = 1e-10     # how negative an eigenvalue may be
    cptp: float = 1e-10          # trace preservation of a Kraus set
    unitarity: float = 1e-10
    probability_floor: float = 1e-14  # below this a branch has no post-state


TOLERANCES = Tolerances()


def _as_matrix(value, name: str = "matrix") -> np.ndarray:
    m = np.array(value, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix over an ordered tuple of qubit labels.

    Invariants enforced on construction: Hermitian and unit trace within
    ``TOLERANCES.equality``, eigenvalues above ``-TOLERANCES.psd_slack``, and
    a dimension of exactly ``2 ** len(labels)``.
    """

    matrix: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        m = _as_matrix(self.matrix, "density matrix")
        labels = tuple(str(l) for l in self.labels)
        if not labels:
            raise ValueError("at least one qubit label is required")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate qubit labels: {labels}")
        if m.shape[0] != 2 ** len(labels):
            raise ValueError(
                f"dimension {m.shape[0]} does not match {len(labels)} qubit labels"
            )
        if np.max(np.abs(m - m.conj().T)) > TOLERANCES.equality:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > TOLERANCES.equality or abs(np.trace(m).imag) > TOLERANCES.equality:
            raise ValueError(f"density matrix trace {np.trace(m)} is not 1")
        if np.linalg.eigvalsh(m).min() < -TOLERANCES.psd_slack:
            raise ValueError("density matrix has a negative eigenvalue beyond tolerance")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def position(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown qubit label {label!r}; have {self.labels}") from None


@dataclass(frozen=True)
class KrausSet:
    """A trace-preserving set of Kraus operators of equal dimension."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        ops = tuple(_as_matrix(op, "Kraus operator") for op in self.operators)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        dim = ops[0].shape[0]
        if any(op.shape[0] != dim for op in ops):
            raise ValueError("Kraus operators must share one dimension")
        total = sum(op.conj().T @ op for op in ops)
        if np.max(np.abs(total - np.eye(dim))) > TOLERANCES.cptp:
            raise ValueError("Kraus set is not trace preserving within tolerance")
        frozen = []
        for op in ops:
            op = op.copy()
            op.flags.writeable = False
            frozen.append(op)
        object.__setattr__(self, "operators", tuple(frozen))

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True)
class MeasurementOutcome:
    """One branch of a projective measurement.

    ``post_state`` is None when the branch probability is numerically zero.
    """

    probability: float
    post_state: DensityMatrix | None
    outcome_label: str


def pure_state(amplitudes, labels: Sequence[str]) -> DensityMatrix:
    """|psi><psi| from a state vector, normalising the vector first."""
    vec = np.array(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise ValueError("cannot build a state from the zero vector")
    vec = vec / norm
    return DensityMatrix(np.outer(vec, vec.conj()), tuple(labels))


def maximally_mixed(labels: Sequence[str]) -> DensityMatrix:
    labels = tuple(labels)
    dim = 2 ** len(labels)
    return DensityMatrix(np.eye(dim) / dim, labels)


def mix(components: Iterable[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex combination of states sharing one label tuple."""
    components = list(components)
    if not components:
        raise ValueError("mix of nothing")
    labels = components[0][1].labels
    total = 0.0
    acc = np.zeros_like(components[0][1].matrix)
    for weight, state in components:
        if state.labels != labels:
            raise ValueError("mixed states must share identical labels")
        if weight < -TOLERANCES.equality:
            raise ValueError("mixture weights must be nonnegative")
        acc = acc + weight * state.matrix
        total += weight
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"mixture weights sum to {total}, expected 1")
    return DensityMatrix(acc / total, labels)


def relabel(rho: DensityMatrix, labels: Sequence[str]) -> DensityMatrix:
    labels = tuple(labels)
    if len(labels) != rho.num_qubits:
        raise ValueError("relabel must keep the qubit count")
    return DensityMatrix(rho.matrix, labels)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Tensor product; labels concatenate in order and must be disjoint."""
    if set(a.labels) & set(b.labels):
        raise ValueError(f"label clash between {a.labels} and {b.labels}")
    return DensityMatrix(np.kron(a.matrix, b.matrix), a.labels + b.labels)


def _positions(rho: DensityMatrix, labels: Iterable[str]) -> list[int]:
    return [rho.position(l) for l in labels]


def partial_trace(rho: DensityMatrix, keep: Iterable[str]) -> DensityMatrix:
    """Trace out everything but ``keep``; kept labels stay in state order."""
    keep = set(keep)
    if not keep:
        raise ValueError("must keep at least one qubit")
    for label in keep:
        rho.position(label)
    n = rho.num_qubits
    kept_positions = [i for i, l in enumerate(rho.labels) if l in keep]
    dropped = [i for i in range(n) if i not in kept_positions]
    tensor_form = rho.matrix.reshape((2,) * (2 * n))
    # collapse dropped row/column index pairs, highest position first so the
    # remaining axis numbers stay valid
    remaining = n
    for pos in sorted(dropped, reverse=True):
        tensor_form = np.trace(tensor_form, axis1=pos, axis2=pos + remaining)
        remaining -= 1
    dim = 2 ** len(kept_positions)
    out_labels = tuple(rho.labels[i] for i in kept_positions)
    return DensityMatrix(tensor_form.reshape(dim, dim), out_labels)


def partial_transpose(rho: DensityMatrix, subsystem: Iterable[str]) -> np.ndarray:
    """Transpose the given subsystem's indices; returns a bare matrix since
    the result is generally not positive."""
    positions = _positions(rho, subsystem)
    if not positions:
        raise ValueError("partial transpose needs a nonempty subsystem")
    n = rho.num_qubits
    tensor_form = rho.matrix.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for pos in positions:
        axes[pos], axes[pos + n] = axes[pos + n], axes[pos]
    return tensor_form.transpose(axes).reshape(rho.dim, rho.dim)


def trace_norm(matrix) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    m = _as_matrix(matrix)
    if np.max(np.abs(m - m.conj().T)) > TOLERANCES.equality:
        raise ValueError("trace norm here is defined for Hermitian matrices only")
    return float(np.sum(np.abs(np.linalg.eigvalsh(m))))


def _basis_permutation(order: Sequence[int], num_qubits: int) -> np.ndarray:
    """Permutation matrix moving qubit ``order[j]`` to position j (MSB first)."""
    dim = 2 ** num_qubits
    perm = np.zeros((dim, dim))
    for index in range(dim):
        bits = [(index >> (num_qubits - 1 - q)) & 1 for q in range(num_qubits)]
        new_index = 0
        for j, q in enumerate(order):
            new_index |= bits[q] << (num_qubits - 1 - j)
        perm[new_index, index] = 1.0
    return perm


def _embed(op: np.ndarray, num_qubits: int, positions: Sequence[int]) -> np.ndarray:
    """Embed a k-qubit operator acting on ``positions`` (operator's first
    target owns its most significant bit, mirroring the state convention)."""
    if len(set(positions)) != len(positions):
        raise ValueError("target labels must be distinct")
    if op.shape[0] != 2 ** len(positions):
        raise ValueError(
            f"operator dimension {op.shape[0]} does not match {len(positions)} targets"
        )
    rest = [i for i in range(num_qubits) if i not in positions]
    perm = _basis_permutation(list(positions) + rest, num_qubits)
    full = np.kron(op, np.eye(2 ** len(rest)))
    return perm.conj().T @ full @ perm


def apply_unitary(rho: DensityMatrix, u, targets: Sequence[str]) -> DensityMatrix:
    """Conjugate the state by a unitary embedded on the target qubits."""
    u = _as_matrix(u, "unitary")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > TOLERANCES.unitarity:
        raise ValueError("operator is not unitary within tolerance")
    full = _embed(u, rho.num_qubits, _positions(rho, targets))
    return DensityMatrix(full @ rho.matrix @ full.conj().T, rho.labels)


def apply_channel(rho: DensityMatrix, kraus: KrausSet, targets: Sequence[str]) -> DensityMatrix:
    """Apply sum_i K_i rho K_i^dagger on the target qubits.

    The result is re-symmetrised to kill accumulated round-off, keeping the
    Hermiticity invariant meaningful over long pipelines.
    """
    positions = _positions(rho, targets)
    if kraus.dim != 2 ** len(positions):
        raise ValueError("Kraus dimension does not match the target count")
    out = np.zeros_like(rho.matrix)
    for op in kraus.operators:
        full = _embed(op, rho.num_qubits, positions)
        out = out + full @ rho.matrix @ full.conj().T
    out = (out + out.conj().T) / 2
    return DensityMatrix(out, rho.labels)


def project(rho: DensityMatrix, projector, targets: Sequence[str]) -> tuple[float, DensityMatrix | None]:
    """Probability and renormalised post-state for one projector branch."""
    p_op = _as_matrix(projector, "projector")
    full = _embed(p_op, rho.num_qubits, _positions(rho, targets))
    unnormalised = full @ rho.matrix @ full.conj().T
    probability = float(np.trace(unnormalised).real)
    if probability < TOLERANCES.probability_floor:
        return max(probability, 0.0), None
    post = (unnormalised + unnormalised.conj().T) / (2 * probability)
    return probability, DensityMatrix(post, rho.labels)


def measure(
    rho: DensityMatrix,
    projectors: Sequence[tuple[str, np.ndarray]],
    target: str,
) -> list[MeasurementOutcome]:
    """Projective measurement of one qubit with a complete orthogonal set.

    ``projectors`` is an ordered sequence of ``(outcome_label, 2x2 matrix)``.
    """
    ops = [(str(name), _as_matrix(op, f"projector {name}")) for name, op in projectors]
    total = sum(op for _, op in ops)
    if np.max(np.abs(total - np.eye(2))) > TOLERANCES.cptp:
        raise ValueError("projectors do not sum to the identity")
    for i, (_, a) in enumerate(ops):
        for j, (_, b) in enumerate(ops):
            expected = a if i == j else np.zeros((2, 2))
            if np.max(np.abs(a @ b - expected)) > TOLERANCES.cptp:
                raise ValueError("projectors are not orthogonal idempotents")
    outcomes = []
    for name, op in ops:
        probability, post = project(rho, op, [target])
        outcomes.append(MeasurementOutcome(probability, post, name))
    return outcomes


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits; zero eigenvalues contribute nothing."""
    eigenvalues = np.linalg.eigvalsh(rho.matrix)
    eigenvalues = eigenvalues[eigenvalues > 1e-15]
    return float(-np.sum(eigenvalues * np.log2(eigenvalues)))
