"""Singlet correlations, the three-direction Bell inequality, deterministic
local-hidden-variable Monte Carlo baselines, the Venn counting inequality,
and GHZ reduction properties."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import (
    DensityMatrix,
    Operator,
    StateVector,
    haar_rng,
    normalized,
    partial_trace,
    qubits,
    von_neumann_entropy,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
)

CROSS_CHECK_TOL = 1e-10
VIOLATION_TOL = 1e-12

_PAULI = np.stack([PAULI_X, PAULI_Y, PAULI_Z])


@dataclass(frozen=True)
class Direction:
    """Unit vector on the Bloch sphere picking a spin-measurement axis."""

    vector: tuple[float, float, float]

    def __init__(self, vector):
        vec = np.asarray(vector, dtype=float).reshape(3)
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"direction must be a unit vector, |v| = {norm!r}")
        object.__setattr__(self, "vector", tuple(vec))

    @staticmethod
    def from_any(vector) -> "Direction":
        vec = np.asarray(vector, dtype=float).reshape(3)
        return Direction(vec / np.linalg.norm(vec))

    @staticmethod
    def in_plane(angle_rad: float) -> "Direction":
        """Direction at the given angle in the x-y measurement plane."""
        return Direction((math.cos(angle_rad), math.sin(angle_rad), 0.0))

    def spin_operator(self) -> np.ndarray:
        return np.einsum("i,ijk->jk", np.asarray(self.vector), _PAULI)


def singlet_state() -> StateVector:
    return normalized([0, 1, -1, 0], qubits("alice", "bob"))


def singlet_correlation(a: Direction, b: Direction) -> float:
    """Spin-product expectation in the singlet.

    Evaluated as <(sigma.a) x (sigma.b)> on the explicit two-qubit state and
    cross-checked against the closed form -a.b; the operator value is
    returned.
    """
    psi = singlet_state().amplitudes
    observable = np.kron(a.spin_operator(), b.spin_operator())
    value = float(np.vdot(psi, observable @ psi).real)
    closed_form = -float(np.dot(a.vector, b.vector))
    if abs(value - closed_form) > CROSS_CHECK_TOL:
        raise AssertionError(
            f"spin-operator correlator {value!r} disagrees with -a.b "
            f"{closed_form!r}"
        )
    return value


@dataclass(frozen=True)
class BellCheck:
    lhs: float
    rhs: float
    violated: bool
    sigma: float = 0.0  # combined standard error when the correlator is MC


def _as_value_err(result) -> tuple[float, float]:
    if isinstance(result, tuple):
        value, err = result
        return float(value), float(err)
    return float(result), 0.0


def bell_check(a: Direction, b: Direction, c: Direction, correlator) -> BellCheck:
    """Test |P(a,b) - P(a,c)| <= 1 + P(b,c) for the given correlator.

    The correlator may return a float or a (value, stderr) pair; standard
    errors are propagated in quadrature into ``sigma``.
    """
    p_ab, e_ab = _as_value_err(correlator(a, b))
    p_ac, e_ac = _as_value_err(correlator(a, c))
    p_bc, e_bc = _as_value_err(correlator(b, c))
    for name, value in (("P(a,b)", p_ab), ("P(a,c)", p_ac), ("P(b,c)", p_bc)):
        if abs(value) > 1.0 + 1e-9:
            raise ValueError(f"correlator out of range: {name} = {value!r}")
    lhs = abs(p_ab - p_ac)
    rhs = 1.0 + p_bc
    sigma = math.sqrt(e_ab**2 + e_ac**2 + e_bc**2)
    return BellCheck(lhs=lhs, rhs=rhs, violated=lhs > rhs + VIOLATION_TOL, sigma=sigma)


@dataclass(frozen=True)
class LhvModel:
    """Deterministic response rule f(direction, lambda) -> +-1 with the
    partner fixed to g = -f (perfect anti-correlation)."""

    name: str
    response: object  # callable (direction 3-array, lambdas (n,3)) -> (n,) of +-1

    def responses(self, direction: Direction, hidden: np.ndarray) -> np.ndarray:
        values = np.asarray(self.response(np.asarray(direction.vector), hidden))
        if not np.all(np.abs(values) == 1):
            raise ValueError(f"model {self.name!r} returned non +-1 responses")
        return values


def _sign(x: np.ndarray) -> np.ndarray:
    # measure-zero ties resolved to +1 so responses stay in {-1, +1}
    return np.where(x >= 0.0, 1.0, -1.0)


def sign_model() -> LhvModel:
    """Canonical deterministic rule f(a, lambda) = sign(a . lambda)."""
    return LhvModel("sign", lambda a, lam: _sign(lam @ a))


def rotated_sign_model(seed: int) -> LhvModel:
    """Sign rule with the hidden vector passed through a random rotation."""
    rng = haar_rng(seed, index=101)
    raw = rng.standard_normal((3, 3))
    q, r = np.linalg.qr(raw)
    q = q * np.sign(np.diagonal(r))
    return LhvModel(f"rotated-sign-{seed}", lambda a, lam: _sign((lam @ q) @ a))


def sample_hidden(samples: int, seed: int) -> np.ndarray:
    """Uniform unit vectors on the 2-sphere, deterministic in (seed, samples)."""
    rng = haar_rng(seed)
    raw = rng.standard_normal((samples, 3))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def lhv_correlation(
    model: LhvModel, a: Direction, b: Direction, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of P(a,b) = E[f(a,lambda) g(b,lambda)].

    Returns (mean, standard error); g = -f enforces anti-correlation.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    hidden = sample_hidden(samples, seed)
    f_values = model.responses(a, hidden)
    g_values = -model.responses(b, hidden)
    products = f_values * g_values
    mean = float(products.mean())
    stderr = float(products.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return mean, stderr


def sign_model_exact(a: Direction, b: Direction) -> float:
    """Closed form of the sign model: -1 + 2 theta / pi for angle theta.

    Independent oracle for the Monte Carlo estimator (sphere integration).
    """
    cosine = float(np.clip(np.dot(a.vector, b.vector), -1.0, 1.0))
    theta = math.acos(cosine)
    return -1.0 + 2.0 * theta / math.pi


@dataclass(frozen=True)
class VennCounts:
    """Populations of the eight regions of a three-set Venn diagram.

    ``n1`` counts members of A-only, ``n2`` of A-and-B-only, ``n3`` of
    A-and-B-and-C, ``n4`` of A-and-C-only, ``n5`` of B-only, ``n6`` of
    B-and-C-only, ``n7`` of C-only... region labels follow the counting
    convention where N1+N2 = (A not B), N7+N4 = (B not C), N1+N4 = (A not C).
    """

    counts: tuple[int, ...]

    def __init__(self, counts):
        values = tuple(int(n) for n in counts)
        if len(values) != 8:
            raise ValueError(f"need exactly 8 region counts, got {len(values)}")
        if any(n < 0 for n in values):
            raise ValueError("region counts must be non-negative")
        object.__setattr__(self, "counts", values)


@dataclass(frozen=True)
class VennInequality:
    n1: int  # members with property A but not B
    n2: int  # members with property B but not C
    n3: int  # members with property A but not C
    holds: bool
    slack: int


def venn_inequality(counts: VennCounts) -> VennInequality:
    """Counting identity N(A not B) + N(B not C) >= N(A not C)."""
    region = counts.counts
    script_n1 = region[0] + region[1]
    script_n2 = region[6] + region[3]
    script_n3 = region[0] + region[3]
    slack = script_n1 + script_n2 - script_n3  # = N2 + N7 >= 0
    return VennInequality(
        n1=script_n1,
        n2=script_n2,
        n3=script_n3,
        holds=slack >= 0,
        slack=slack,
    )


def ghz_state() -> StateVector:
    return normalized([1, 0, 0, 0, 0, 0, 0, 1], qubits("q1", "q2", "q3"))


@dataclass(frozen=True)
class GhzReduction:
    reduced: DensityMatrix
    entropy: float
    ppt_min_eigenvalue: float | None  # only for the two-qubit reduction
    separable: bool | None


def partial_transpose_2x2(rho: DensityMatrix) -> np.ndarray:
    """Partial transpose over the second qubit of a two-qubit state."""
    if rho.partition.dims != (2, 2):
        raise ValueError("partial transpose helper expects a 2x2 partition")
    blocks = rho.matrix.reshape(2, 2, 2, 2)
    return blocks.transpose(0, 3, 2, 1).reshape(4, 4)


def ghz_reductions(n_keep: int) -> GhzReduction:
    """Reduce the three-qubit GHZ state to one or two parties.

    Keeping one qubit yields the maximally mixed state; keeping two yields
    a separable mixture, certified by the positive partial transpose test
    (necessary and sufficient at 2x2).
    """
    if n_keep not in (1, 2):
        raise ValueError("n_keep must be 1 or 2")
    rho = ghz_state().density_matrix()
    if n_keep == 1:
        reduced = partial_trace(rho, {"q3"})
        return GhzReduction(
            reduced=reduced,
            entropy=von_neumann_entropy(reduced),
            ppt_min_eigenvalue=None,
            separable=None,
        )
    reduced = partial_trace(rho, {"q2", "q3"})
    pt_eigenvalues = np.linalg.eigvalsh(partial_transpose_2x2(reduced))
    min_eig = float(pt_eigenvalues.min())
    return GhzReduction(
        reduced=reduced,
        entropy=von_neumann_entropy(reduced),
        ppt_min_eigenvalue=min_eig,
        separable=min_eig > -1e-12,
    )


def marginal_after_remote_measurement(b: Direction) -> DensityMatrix:
    """Alice's reduced state after Bob measures spin along b on the singlet.

    No-signalling: the returned state is independent of b.
    """
    rho = singlet_state().density_matrix()
    spin_b = b.spin_operator()
    eye = np.eye(2)
    marginal = np.zeros((2, 2), dtype=complex)
    for sign in (+1.0, -1.0):
        proj_b = (eye + sign * spin_b) / 2.0
        kraus = np.kron(eye, proj_b)
        branch = kraus @ rho.matrix @ kraus
        branch_rho = branch.reshape(2, 2, 2, 2)
        marginal += np.einsum("ikjk->ij", branch_rho)
    return DensityMatrix(marginal, qubits("alice"))
