"""Unitary evolution, projective collapse, quantum histories, Zeno
dynamics, and the system+detector+environment decoherence chain."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import (
    DensityMatrix,
    HilbertPartition,
    Operator,
    StateVector,
    partial_trace,
    qubits,
    tensor,
)

ZERO_PROBABILITY_TOL = 1e-12


class ImpossibleBranchError(ValueError):
    """Collapse was requested onto an outcome of zero probability."""


def _require_kind(op: Operator, kind: str, what: str) -> None:
    if op.kind != kind:
        raise ValueError(f"{what} requires a {kind} operator, got kind={op.kind!r}")


def _propagator(hamiltonian: Operator, t: float) -> np.ndarray:
    """exp(-iHt) via Hermitian eigendecomposition (exact at desk scale)."""
    _require_kind(hamiltonian, "hermitian", "time evolution")
    energies, modes = np.linalg.eigh(hamiltonian.matrix)
    phases = np.exp(-1j * energies * t)
    return (modes * phases) @ modes.conj().T


def evolve(state: StateVector, hamiltonian: Operator, t: float) -> StateVector:
    """Schrodinger evolution |psi(t)> = exp(-iHt)|psi(0)>."""
    if hamiltonian.partition.total_dim != state.partition.total_dim:
        raise ValueError("state and Hamiltonian dimensions do not match")
    return StateVector(_propagator(hamiltonian, t) @ state.amplitudes, state.partition)


def born_probability(rho: DensityMatrix, projector: Operator) -> float:
    """Probability tr(P rho) of the projective outcome P."""
    _require_kind(projector, "projector", "born_probability")
    if projector.partition.total_dim != rho.partition.total_dim:
        raise ValueError("state and projector dimensions do not match")
    p = float(np.trace(projector.matrix @ rho.matrix).real)
    if p < -ZERO_PROBABILITY_TOL or p > 1.0 + ZERO_PROBABILITY_TOL:
        raise ValueError(f"Born probability {p!r} outside [0, 1] tolerance band")
    return min(max(p, 0.0), 1.0)


def collapse(rho: DensityMatrix, projector: Operator) -> DensityMatrix:
    """Projective state reduction P rho P / tr(P rho)."""
    _require_kind(projector, "projector", "collapse")
    p = float(np.trace(projector.matrix @ rho.matrix).real)
    if p <= ZERO_PROBABILITY_TOL:
        raise ImpossibleBranchError(
            f"outcome has probability {p!r}; cannot collapse onto an "
            "impossible branch"
        )
    reduced = projector.matrix @ rho.matrix @ projector.matrix / p
    return DensityMatrix(reduced, rho.partition)


def collapse_state(state: StateVector, projector: Operator) -> StateVector:
    """Convenience: collapse of a pure state stays pure."""
    _require_kind(projector, "projector", "collapse")
    projected = projector.matrix @ state.amplitudes
    norm = np.linalg.norm(projected)
    if norm**2 <= ZERO_PROBABILITY_TOL:
        raise ImpossibleBranchError("outcome has zero probability for this state")
    return StateVector(projected / norm, state.partition)


@dataclass(frozen=True)
class ProjectiveEvent:
    """One entry of a quantum history: a projector applied at a time."""

    projector: Operator
    time: float

    def __post_init__(self):
        if self.projector.kind != "projector":
            raise ValueError("ProjectiveEvent needs an operator of kind 'projector'")


def history_probability(
    rho0: DensityMatrix, hamiltonian: Operator, events: list[ProjectiveEvent]
) -> float:
    """Joint probability tr(P_n ... P_1 rho P_1 ... P_n) of a time-ordered
    sequence of Heisenberg-picture projectors P_i(t_i)."""
    if not events:
        return 1.0
    times = [event.time for event in events]
    if any(t2 < t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError(f"event times must be non-decreasing, got {times}")
    state = rho0.matrix
    for event in events:
        u = _propagator(hamiltonian, event.time)
        heisenberg = u.conj().T @ event.projector.matrix @ u
        state = heisenberg @ state @ heisenberg
    p = float(np.trace(state).real)
    return min(max(p, 0.0), 1.0)


def zeno_survival(
    psi0: StateVector, hamiltonian: Operator, t: float, n_measurements: int
) -> float:
    """Survival probability after N projective checks onto |psi0>.

    Exact value [|<psi0| exp(-iHt/N) |psi0>|^2]^N; the N -> infinity limit
    is 1 (evolution frozen by repeated measurement).
    """
    if n_measurements < 1:
        raise ValueError("need at least one measurement")
    _require_kind(hamiltonian, "hermitian", "zeno_survival")
    energies, modes = np.linalg.eigh(hamiltonian.matrix)
    weights = np.abs(modes.conj().T @ psi0.amplitudes) ** 2
    amplitude = np.sum(weights * np.exp(-1j * energies * (t / n_measurements)))
    single_step = abs(amplitude) ** 2
    return float(min(single_step, 1.0) ** n_measurements)


def zeno_timescale(psi0: StateVector, hamiltonian: Operator) -> float:
    """Quadratic short-time scale: 1/tau^2 = <H^2> - <H>^2 (hbar = 1).

    Returns ``math.inf`` when psi0 is an eigenstate (zero energy variance,
    nothing to freeze).
    """
    _require_kind(hamiltonian, "hermitian", "zeno_timescale")
    h = hamiltonian.matrix
    psi = psi0.amplitudes
    h_psi = h @ psi
    mean = float(np.vdot(psi, h_psi).real)
    second = float(np.vdot(h_psi, h_psi).real)
    variance = second - mean**2
    scale = max(second, 1.0)
    if variance <= 1e-14 * scale:
        return math.inf
    return 1.0 / math.sqrt(variance)


@dataclass(frozen=True)
class DecoherenceChain:
    """Pre-measurement chain: system amplitudes, detector pointer states,
    and environment states whose overlap kappa controls decoherence."""

    alpha: complex
    beta: complex
    detector_states: tuple[StateVector, StateVector]
    env_states: tuple[StateVector, StateVector]

    def __post_init__(self):
        weight = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(weight - 1.0) > 1e-10:
            raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {weight!r}")
        if abs(self.kappa) > 1.0 + 1e-10:
            raise ValueError("environment overlap magnitude exceeds 1")

    @property
    def kappa(self) -> complex:
        plus, minus = self.env_states
        return minus.overlap(plus)


def qubit_chain(
    alpha: complex, beta: complex, kappa: complex = 0.0
) -> DecoherenceChain:
    """Minimal chain: qubit detector pointers and a qubit environment with
    the requested overlap <E-|E+> = kappa."""
    kappa = complex(kappa)
    if abs(kappa) > 1.0:
        raise ValueError(f"|kappa| must be <= 1, got {abs(kappa)}")
    detector = qubits("detector")
    environment = qubits("environment")
    d_plus = StateVector([1, 0], detector)
    d_minus = StateVector([0, 1], detector)
    e_plus = StateVector([1, 0], environment)
    e_minus = StateVector(
        [kappa.conjugate(), math.sqrt(max(0.0, 1.0 - abs(kappa) ** 2))], environment
    )
    return DecoherenceChain(alpha, beta, (d_plus, d_minus), (e_plus, e_minus))


@dataclass(frozen=True)
class DecoherenceResult:
    joint_pure: DensityMatrix  # rho_e of the system+detector pure state
    reduced: DensityMatrix  # rho_SD after tracing the environment
    full_state: StateVector  # |Psi> over system+detector+environment


def decohere(chain: DecoherenceChain) -> DecoherenceResult:
    """Entangle system, detector, and environment, then trace the
    environment out.

    |Psi> = alpha|+>|D+>|E+> + beta|->|D->|E->; the coherence block of
    rho_SD is suppressed by the factor kappa = <E-|E+>.
    """
    d_plus, d_minus = chain.detector_states
    if abs(d_plus.overlap(d_minus)) > 1e-10:
        raise ValueError("detector states must be orthonormal")
    system = qubits("system")
    sys_plus = StateVector([1, 0], system)
    sys_minus = StateVector([0, 1], system)

    branch_plus = tensor(tensor(sys_plus, d_plus), chain.env_states[0])
    branch_minus = tensor(tensor(sys_minus, d_minus), chain.env_states[1])
    amplitudes = (
        chain.alpha * branch_plus.amplitudes + chain.beta * branch_minus.amplitudes
    )
    full = StateVector(amplitudes, branch_plus.partition)

    sd_plus = tensor(sys_plus, d_plus)
    sd_minus = tensor(sys_minus, d_minus)
    pre_measurement = (
        chain.alpha * sd_plus.amplitudes + chain.beta * sd_minus.amplitudes
    )
    joint_pure = StateVector(pre_measurement, sd_plus.partition).density_matrix()

    reduced = partial_trace(full.density_matrix(), {"system", "detector"})
    return DecoherenceResult(joint_pure=joint_pure, reduced=reduced, full_state=full)


def coherence_magnitude(result: DecoherenceResult) -> float:
    """Largest off-diagonal magnitude between the two pointer branches."""
    matrix = result.reduced.matrix
    dim = matrix.shape[0]
    mask = ~np.eye(dim, dtype=bool)
    return float(np.max(np.abs(matrix[mask]))) if dim > 1 else 0.0


def orch_or_lifetime(e_gravity: float, hbar: float = 1.0) -> float:
    """Objective-reduction lifetime tau = hbar / E_G."""
    if e_gravity <= 0:
        raise ValueError(f"gravitational self-energy must be positive, got {e_gravity}")
    return hbar / e_gravity
