"""Dense complex linear algebra for finite-dimensional quantum states.

Pure and mixed states live on an explicitly factorized Hilbert space
described by a :class:`HilbertPartition`.  Everything here is immutable
after construction and every operation is a pure function, so values can
be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Dense storage only; anything larger than this is almost certainly a
# mistake at desk scale.  Override per-partition via ``max_dim``.
DEFAULT_MAX_DIM = 2**14

NORM_TOL = 1e-10
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
PURITY_TOL = 1e-8
ENTROPY_EIGENVALUE_CUTOFF = 1e-12


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class HilbertPartition:
    """Subsystem dimensions plus unique labels defining the tensor factors."""

    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __init__(self, dims, labels, max_dim: int | None = None):
        dims = tuple(int(d) for d in dims)
        labels = tuple(str(name) for name in labels)
        if len(dims) != len(labels):
            raise ValueError("dims and labels must have the same length")
        if not dims:
            raise ValueError("partition needs at least one subsystem")
        if any(d < 1 for d in dims):
            raise ValueError("every subsystem dimension must be >= 1")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be unique, got {labels}")
        total = math.prod(dims)
        cap = DEFAULT_MAX_DIM if max_dim is None else int(max_dim)
        if total > cap:
            raise ValueError(
                f"total dimension {total} exceeds the dense-storage cap {cap}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def positions(self, labels) -> tuple[int, ...]:
        """Indices of the given labels, in partition order."""
        wanted = set(labels)
        unknown = wanted - set(self.labels)
        if unknown:
            raise KeyError(f"unknown labels {sorted(unknown)}")
        return tuple(i for i, name in enumerate(self.labels) if name in wanted)

    def restrict(self, labels) -> "HilbertPartition":
        keep = self.positions(labels)
        return HilbertPartition(
            [self.dims[i] for i in keep], [self.labels[i] for i in keep]
        )

    def concat(self, other: "HilbertPartition") -> "HilbertPartition":
        return HilbertPartition(self.dims + other.dims, self.labels + other.labels)


def qubits(*labels) -> HilbertPartition:
    return HilbertPartition([2] * len(labels), labels)


def single(label: str, dim: int) -> HilbertPartition:
    return HilbertPartition([dim], [label])


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector over a factorized Hilbert space."""

    amplitudes: np.ndarray
    partition: HilbertPartition

    def __init__(self, amplitudes, partition: HilbertPartition):
        amplitudes = _freeze(np.asarray(amplitudes).reshape(-1))
        if amplitudes.shape[0] != partition.total_dim:
            raise ValueError(
                f"amplitude length {amplitudes.shape[0]} does not match "
                f"total dimension {partition.total_dim}"
            )
        norm_sq = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |psi|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "partition", partition)

    def density_matrix(self) -> "DensityMatrix":
        psi = self.amplitudes
        return DensityMatrix(np.outer(psi, psi.conj()), self.partition)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def normalized(amplitudes, partition: HilbertPartition) -> StateVector:
    """Build a StateVector from an unnormalized amplitude vector."""
    amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(amplitudes)
    if norm < 1e-300:
        raise ValueError("cannot normalize the zero vector")
    return StateVector(amplitudes / norm, partition)


def basis_state(partition: HilbertPartition, index: int) -> StateVector:
    amplitudes = np.zeros(partition.total_dim, dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(amplitudes, partition)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive, unit-trace state operator."""

    matrix: np.ndarray
    partition: HilbertPartition

    def __init__(self, matrix, partition: HilbertPartition):
        matrix = _freeze(np.asarray(matrix))
        n = partition.total_dim
        if matrix.shape != (n, n):
            raise ValueError(f"matrix shape {matrix.shape} does not match dim {n}")
        herm_defect = float(np.max(np.abs(matrix - matrix.conj().T)))
        if herm_defect > HERMITICITY_TOL:
            raise ValueError(f"matrix not Hermitian (defect {herm_defect:.3e})")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {trace!r}")
        eigenvalues = np.linalg.eigvalsh(matrix)
        if eigenvalues.min() < EIGENVALUE_FLOOR:
            raise ValueError(
                f"matrix not positive semidefinite (min eigenvalue "
                f"{eigenvalues.min():.3e})"
            )
        eigenvalues = _freeze(eigenvalues).real
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "_eigenvalues", eigenvalues)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigenvalues

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        # tr(rho^2) < 1 marks a mixed state
        return abs(self.purity() - 1.0) < tol


OPERATOR_KINDS = ("hermitian", "unitary", "projector", "general")


@dataclass(frozen=True, eq=False)
class Operator:
    """Square operator on a factorized space, tagged by its algebraic kind."""

    matrix: np.ndarray
    partition: HilbertPartition
    kind: str = "general"

    def __init__(self, matrix, partition: HilbertPartition, kind: str = "general"):
        matrix = _freeze(np.asarray(matrix))
        n = partition.total_dim
        if matrix.shape != (n, n):
            raise ValueError(f"matrix shape {matrix.shape} does not match dim {n}")
        if kind not in OPERATOR_KINDS:
            raise ValueError(f"kind must be one of {OPERATOR_KINDS}, got {kind!r}")
        if kind in ("hermitian", "projector"):
            defect = float(np.max(np.abs(matrix - matrix.conj().T)))
            if defect > HERMITICITY_TOL:
                raise ValueError(f"{kind} operator not Hermitian (defect {defect:.3e})")
        if kind == "projector":
            defect = float(np.max(np.abs(matrix @ matrix - matrix)))
            if defect > HERMITICITY_TOL:
                raise ValueError(f"projector not idempotent (defect {defect:.3e})")
        if kind == "unitary":
            defect = float(
                np.max(np.abs(matrix.conj().T @ matrix - np.eye(n)))
            )
            if defect > HERMITICITY_TOL:
                raise ValueError(f"operator not unitary (defect {defect:.3e})")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "kind", kind)


def projector_onto(state: StateVector) -> Operator:
    psi = state.amplitudes
    return Operator(np.outer(psi, psi.conj()), state.partition, kind="projector")


def identity(partition: HilbertPartition) -> Operator:
    return Operator(np.eye(partition.total_dim), partition, kind="projector")


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def tensor(a, b):
    """Kronecker composition of two values of the same kind.

    Partitions concatenate; labels must stay unique across the product.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(
            np.kron(a.amplitudes, b.amplitudes), a.partition.concat(b.partition)
        )
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(
            np.kron(a.matrix, b.matrix), a.partition.concat(b.partition)
        )
    if isinstance(a, Operator) and isinstance(b, Operator):
        kind = a.kind if a.kind == b.kind else "general"
        return Operator(
            np.kron(a.matrix, b.matrix), a.partition.concat(b.partition), kind=kind
        )
    raise TypeError(
        f"cannot tensor mixed kinds {type(a).__name__} and {type(b).__name__}"
    )


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every factor not named in ``keep``.

    ``keep`` may be any nonempty subset of the partition labels (the full
    set is allowed and returns the state unchanged).  The result keeps the
    original factor order.
    """
    keep_positions = rho.partition.positions(keep)
    if not keep_positions:
        raise ValueError("keep must name at least one subsystem")
    dims = rho.partition.dims
    n_factors = len(dims)
    if len(keep_positions) == n_factors:
        return rho

    tensor_form = rho.matrix.reshape(dims + dims)
    row_idx = list(range(n_factors))
    col_idx = list(range(n_factors, 2 * n_factors))
    for pos in range(n_factors):
        if pos not in keep_positions:
            col_idx[pos] = row_idx[pos]  # contract bra against ket
    out_idx = [row_idx[p] for p in keep_positions] + [
        col_idx[p] for p in keep_positions
    ]
    reduced = np.einsum(tensor_form, row_idx + col_idx, out_idx)
    sub_partition = rho.partition.restrict(keep)
    d = sub_partition.total_dim
    return DensityMatrix(reduced.reshape(d, d), sub_partition)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S = -tr(rho log rho) in nats; 0 log 0 := 0."""
    eigenvalues = rho.eigenvalues
    # Diagonalization noise: tiny negatives are clamped, anything worse
    # already failed DensityMatrix validation.
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    support = eigenvalues[eigenvalues > ENTROPY_EIGENVALUE_CUTOFF]
    if support.size == 0:
        return 0.0
    return float(-np.sum(support * np.log(support)))


def mutual_information(rho: DensityMatrix, a_labels, b_labels) -> float:
    """I(A,B) = S_A + S_B - S_{A+B} for disjoint label sets."""
    a_set, b_set = set(a_labels), set(b_labels)
    if a_set & b_set:
        raise ValueError(f"label sets overlap: {sorted(a_set & b_set)}")
    s_a = von_neumann_entropy(partial_trace(rho, a_set))
    s_b = von_neumann_entropy(partial_trace(rho, b_set))
    s_ab = von_neumann_entropy(partial_trace(rho, a_set | b_set))
    return s_a + s_b - s_ab


def haar_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator keyed on (seed, index).

    Sample ``index`` of an ensemble is reproducible on its own, so Monte
    Carlo results do not depend on how samples are batched or parallelized.
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(sequence))


def haar_random_state(
    partition: HilbertPartition, seed: int, index: int = 0
) -> StateVector:
    """Haar-distributed pure state: normalized complex Gaussian vector."""
    rng = haar_rng(seed, index)
    n = partition.total_dim
    raw = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return normalized(raw, partition)


def random_unitary(dim: int, seed: int, index: int = 0) -> np.ndarray:
    """Haar-distributed unitary via QR with phase-fixed diagonal."""
    rng = haar_rng(seed, index)
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(raw)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def state_to_json(state: StateVector) -> dict:
    """Serialize as JSON-friendly [re, im] pairs for CLI round-trips."""
    return {
        "dims": list(state.partition.dims),
        "labels": list(state.partition.labels),
        "amplitudes": [[z.real, z.imag] for z in state.amplitudes],
    }


def state_from_json(payload: dict) -> StateVector:
    partition = HilbertPartition(payload["dims"], payload["labels"])
    amplitudes = np.array([complex(re, im) for re, im in payload["amplitudes"]])
    return StateVector(amplitudes, partition)


def matrix_to_json(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.partition.dims),
        "labels": list(rho.partition.labels),
        "matrix": [[[z.real, z.imag] for z in row] for row in rho.matrix],
    }


def matrix_from_json(payload: dict) -> DensityMatrix:
    partition = HilbertPartition(payload["dims"], payload["labels"])
    matrix = np.array(
        [[complex(re, im) for re, im in row] for row in payload["matrix"]]
    )
    return DensityMatrix(matrix, partition)
