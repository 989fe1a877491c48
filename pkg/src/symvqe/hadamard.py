"""Ancilla-based interferometric estimation of <X_0 X_1> on the 4-site ring.

The exact ground state of the 4-site Heisenberg ring is the equal-weight
superposition of the two nearest-neighbor dimer coverings,

    |G> = (|s01 s23> + |s30 s12>) / sqrt(3),

reachable from the dimer reference by two exchange gates with the fixed
angles below.  Because the ground state is spin symmetric and translation
invariant, <X_i X_{i+1}> = <Y_i Y_{i+1}> = <Z_i Z_{i+1}> = -2/3 for every
bond, and a single correlator fixes the energy, E = 3*N*(J/4)*<XX> = -2J.

The interferometric circuit prepares an ancilla in |+>, applies X_0 X_1 to
the register controlled on the ancilla, and measures the ancilla after a
final Hadamard; then p0 - p1 = Re<XX>.  Since X_0 X_1 commutes with the
exchange gate on qubits (2,3), that gate is dropped from the measured
register state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import OneQubit, StateVector, apply_gate, dimer_state, eswap_amps, inner, swap_bit_index

THETA_1 = 2.0 * np.arccos(-np.sqrt(2.0 / 3.0))  # = 1.6081734479693928 * pi
THETA_2 = 2.0 * np.arccos(-np.sqrt(1.0 / 3.0))  # = 1.3918265520306072 * pi
GLOBAL_PHASE = np.sqrt(2.0 / 3.0) - 1j * np.sqrt(1.0 / 3.0)

_HADAMARD = ((1 / np.sqrt(2), 1 / np.sqrt(2)), (1 / np.sqrt(2), -1 / np.sqrt(2)))


def n4_exact_ground() -> StateVector:
    """Equal superposition of the two dimer coverings, normalized."""
    a = dimer_state(4, [(0, 1), (2, 3)])
    b = dimer_state(4, [(3, 0), (1, 2)])
    return StateVector(4, (a.amplitudes + b.amplitudes) / np.sqrt(3.0))


def n4_ground_circuit() -> tuple[float, float, StateVector]:
    """Two-gate preparation of the 4-site ground state.

    Returns (theta1, theta2, state) with
    state = eswap(2,3,theta2) eswap(1,2,theta1) |s01 s23>, which equals
    GLOBAL_PHASE times the exact ground state.
    """
    amps = dimer_state(4, [(0, 1), (2, 3)]).amplitudes
    amps = eswap_amps(amps, swap_bit_index(4, 1, 2), THETA_1)
    amps = eswap_amps(amps, swap_bit_index(4, 2, 3), THETA_2)
    return THETA_1, THETA_2, StateVector(4, amps)


def measured_register_state() -> StateVector:
    """Register state actually interfered: eswap(1,2,theta1)|s01 s23>.

    The second gate acts on qubits (2,3) only and commutes with X_0 X_1,
    so it cannot change the measured correlator.
    """
    amps = dimer_state(4, [(0, 1), (2, 3)]).amplitudes
    return StateVector(4, eswap_amps(amps, swap_bit_index(4, 1, 2), THETA_1))


def pauli_xx_expectation(state: StateVector, i: int = 0, j: int = 1) -> float:
    """Direct statevector evaluation of Re<X_i X_j>."""
    x = ((0.0, 1.0), (1.0, 0.0))
    flipped = apply_gate(apply_gate(state, OneQubit(i, x)), OneQubit(j, x))
    return float(np.real(inner(state, flipped)))


def exact_probs() -> tuple[float, float]:
    """Exact ancilla outcome probabilities of the interference circuit.

    Builds the 5-qubit circuit (register qubits 0-3, ancilla qubit 4):
    H on the ancilla, controlled-X_0 X_1, H on the ancilla; returns
    (p0, p1) of the ancilla marginal, with p0 - p1 = Re<X_0 X_1>.
    """
    reg = measured_register_state().amplitudes
    full = np.zeros(32, dtype=np.complex128)
    full[:16] = reg  # ancilla |0>
    state = StateVector(5, full)
    state = apply_gate(state, OneQubit(4, _HADAMARD))
    # controlled-X0 X1: flip bits 0 and 1 on the ancilla=1 half
    amps = state.amplitudes.copy()
    idx = np.arange(32)
    hot = (idx >> 4) & 1 == 1
    src = np.where(hot, idx ^ 0b00011, idx)
    state = StateVector(5, amps[src])
    state = apply_gate(state, OneQubit(4, _HADAMARD))
    probs = np.abs(state.amplitudes) ** 2
    p0 = float(np.sum(probs[~hot]))
    p1 = float(np.sum(probs[hot]))
    return p0, p1


def energy_from_correlator(xx: float, n_sites: int = 4, coupling: float = 1.0) -> float:
    """Invert the isotropy relation <XX> = E / (3N(J/4))."""
    return 3.0 * n_sites * (coupling / 4.0) * xx


@dataclass
class ShotRecord:
    """Raw ancilla counts: counts0[s] zeros out of n_shots in sample s."""

    n_shots: int
    n_samples: int
    counts0: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if np.any(self.counts0 < 0) or np.any(self.counts0 > self.n_shots):
            raise ValueError("counts out of range")


@dataclass
class EstimateSummary:
    """Per-sample estimates p0 - p1, their mean and standard error."""

    estimates: np.ndarray
    mean: float
    sem: float


def sample(n_samples: int, n_shots: int, seed: int) -> tuple[ShotRecord, EstimateSummary]:
    """Sample the exact ancilla marginal and summarize the estimates.

    Each sample draws n_shots Bernoulli outcomes at the exact p0 from a
    deterministic per-sample stream split off the given seed; the estimate
    of each sample is p0_hat - p1_hat.
    """
    if n_samples < 1 or n_shots < 1:
        raise ValueError("n_samples and n_shots must be positive")
    p0, _ = exact_probs()
    streams = np.random.SeedSequence(seed).spawn(n_samples)
    counts0 = np.array(
        [np.random.default_rng(s).binomial(n_shots, p0) for s in streams], dtype=np.int64
    )
    record = ShotRecord(n_shots, n_samples, counts0, seed)
    estimates = 2.0 * counts0 / n_shots - 1.0
    mean = float(np.mean(estimates))
    sem = float(np.std(estimates, ddof=1) / np.sqrt(n_samples)) if n_samples > 1 else np.nan
    return record, EstimateSummary(estimates, mean, sem)


def summary_table(record: ShotRecord, summary: EstimateSummary) -> str:
    """Fixed-format report: one row per sample plus Mean and Ideal footers."""
    lines = [f"{'sample':>6}  {'p0(%)':>8}  {'p1(%)':>8}  {'estimate':>10}"]
    for k, c0 in enumerate(record.counts0, start=1):
        p0 = 100.0 * c0 / record.n_shots
        lines.append(
            f"{k:>6}  {p0:8.3f}  {100.0 - p0:8.3f}  {summary.estimates[k - 1]:10.5f}"
        )
    lines.append(
        f"{'Mean':>6}  {100.0 * (summary.mean + 1) / 2:8.3f}  "
        f"{100.0 * (1 - summary.mean) / 2:8.3f}  {summary.mean:10.5f} ({summary.sem:.5f})"
    )
    p0_ideal, p1_ideal = exact_probs()
    lines.append(
        f"{'Ideal':>6}  {100.0 * p0_ideal:8.3f}  {100.0 * p1_ideal:8.3f}  "
        f"{p0_ideal - p1_ideal:10.5f}"
    )
    return "\n".join(lines) + "\n"
