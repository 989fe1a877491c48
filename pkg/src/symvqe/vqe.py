"""Symmetry-projected variational eigensolver with natural-gradient descent.

Trial states are brick-wall circuits of exchange gates applied to a
singlet-pair (or triplet-tail) product reference.  With the momentum
projector P treated classically, the variational energy of the projected,
unnormalized state is

    E(t) = <Psi(t)| H P |Psi(t)> / n(t),      n(t) = <Psi(t)| P |Psi(t)>,

valid because [H, P] = 0 and P^2 = P.  The gradient and the metric tensor
of the normalized projected state follow from the overlap vector

    A_i = <Psi| P |d_i Psi> / n,
    d_i E = 2 Re[ <Psi| P H |d_i Psi> / n - A_i E ],
    G_ij = <d_i Psi| P |d_j Psi> / n - conj(A_i) A_j,

and parameters are updated by t <- t - alpha * [Re G]^(-1) grad.  Each
derivative state is exact through the parameter-shift rule for exchange
gates, |d_i Psi(t)> = |Psi(t + pi e_i)> / 2.

Everything is evaluated in the fixed-magnetization subspace of the
reference state; all gates, translations and H conserve it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hamiltonian import HeisenbergRing, apply_h_amps, lanczos_ground
from .sector import SectorSpace
from .statevector import (
    StateVector,
    singlet_product,
    swap_bit_index,
    triplet_tail_product,
)
from .symmetry import CyclicGroup, MomentumSector, ProjectionKernel, layer_bonds

NORM_FLOOR = 1e-12

REFERENCES = ("singlet", "triplet")


class NormFloorError(RuntimeError):
    """The projector annihilated the trial state (bad sector/reference combo)."""


@dataclass(frozen=True)
class Ansatz:
    """Brick-wall exchange-gate circuit: D layers of N gates on ring bonds.

    Within a layer the inter-dimer bonds (1,2),(3,4),...,(N-1,0) fire
    first, then the dimer bonds (0,1),(2,3),...,(N-2,N-1); each layer is
    two time steps deep.  The flat parameter vector is layer-major with
    that intra-layer order, giving N*D angles in total.
    """

    n_qubits: int
    n_layers: int

    def __post_init__(self) -> None:
        if self.n_qubits < 2 or self.n_qubits % 2:
            raise ValueError("ansatz needs an even number of qubits >= 2")
        if self.n_layers < 1:
            raise ValueError("ansatz needs at least one layer")

    @property
    def n_params(self) -> int:
        return self.n_qubits * self.n_layers

    def gate_bonds(self) -> list:
        """Bond of every gate in application order (length n_params)."""
        cross, dimer = layer_bonds(self.n_qubits)
        per_layer = cross + dimer
        return per_layer * self.n_layers


@dataclass(frozen=True)
class SectorSpec:
    """Reference state plus the momentum sector to project into.

    ``sector=None`` disables the projection entirely (the bare circuit
    state is used), which is the non-symmetrized control setup.
    """

    n_qubits: int
    reference: str = "singlet"
    sector: Optional[MomentumSector] = None

    def __post_init__(self) -> None:
        if self.reference not in REFERENCES:
            raise ValueError(f"reference must be one of {REFERENCES}")
        if self.sector is not None and self.sector.n_sites != self.n_qubits:
            raise ValueError("sector size differs from n_qubits")

    @property
    def projected(self) -> bool:
        return self.sector is not None

    def reference_state(self) -> StateVector:
        if self.reference == "singlet":
            return singlet_product(self.n_qubits)
        return triplet_tail_product(self.n_qubits)


def sector_spec(n_qubits: int, m: Optional[int], reference: str = "singlet") -> SectorSpec:
    """Convenience builder from a momentum index (None = no projection)."""
    sec = MomentumSector(n_qubits, m) if m is not None else None
    return SectorSpec(n_qubits, reference, sec)


@dataclass
class IterationQuantities:
    """Everything the optimizer needs at one parameter point."""

    energy: float
    norm: float
    grad: np.ndarray
    metric: Optional[np.ndarray]  # complex G; Re G preconditions the update
    fidelity: float  # nan when no oracle vector was supplied


class Workspace:
    """Gather tables and buffers for one (ansatz, sector spec, model) triple.

    All heavy arithmetic runs in the fixed-popcount subspace of the
    reference state.
    """

    def __init__(self, ansatz: Ansatz, spec: SectorSpec, model: Optional[HeisenbergRing]):
        if spec.n_qubits != ansatz.n_qubits:
            raise ValueError("spec and ansatz sizes differ")
        if model is not None and model.n_sites != ansatz.n_qubits:
            raise ValueError("model and ansatz sizes differ")
        n = ansatz.n_qubits
        self.ansatz = ansatz
        self.spec = spec
        self.model = model
        self.space = SectorSpace(n, n // 2)  # both references have S_z = 0
        self.reference = self.space.compress(spec.reference_state().amplitudes)
        self.bond_gathers = [
            self.space.gather(swap_bit_index(n, i, j)) for i, j in ansatz.gate_bonds()
        ]
        if spec.projected:
            group = CyclicGroup(n)
            self.projector = ProjectionKernel(
                group, spec.sector, lambda k: self.space.gather(group.gather(k))
            )
        else:
            self.projector = None
        if model is not None:
            self.h_gathers = [self.space.gather(swap_bit_index(n, i, j)) for i, j in model.bonds]
        else:
            self.h_gathers = []

    # -- kernels ---------------------------------------------------------

    def project(self, amps: np.ndarray) -> np.ndarray:
        """Momentum projector along the last axis (vector or batch)."""
        if self.projector is None:
            return amps
        return self.projector.apply(amps)

    def apply_h(self, amps: np.ndarray) -> np.ndarray:
        if self.model is None:
            raise ValueError("workspace was built without a model")
        half_j = 0.5 * self.model.coupling
        acc = np.zeros_like(amps)
        for g in self.h_gathers:
            acc += amps[..., g]
        return half_j * acc - (half_j * 0.5 * len(self.h_gathers)) * amps

    def trial(self, params: np.ndarray) -> np.ndarray:
        params = self._checked(params)
        psi = self.reference.copy()
        for g, theta in zip(self.bond_gathers, params):
            c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
            psi = c * psi - 1j * s * psi[g]
        return psi

    def trial_and_shifts(self, params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Circuit state and all parameter-shift derivative states.

        Returns (psi, dpsis) with dpsis[i] = |Psi(t + pi e_i)> / 2.  Row i
        is seeded with SWAP_bond(i) applied to the running forward state
        (the pi shift turns gate i into -i * SWAP times itself) and then
        carried through the remaining gates in one batched pass per gate.
        """
        params = self._checked(params)
        p = len(params)
        psi = self.reference.copy()
        dpsis = np.empty((p, self.space.dim), dtype=np.complex128)
        for k, (g, theta) in enumerate(zip(self.bond_gathers, params)):
            if theta != 0.0:
                c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
                if k:
                    rows = dpsis[:k]
                    swapped = rows[:, g]
                    rows *= c
                    swapped *= -1j * s
                    rows += swapped
                psi = c * psi - 1j * s * psi[g]
            dpsis[k] = psi[g]
        dpsis *= -0.5j
        return psi, dpsis

    def _checked(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (self.ansatz.n_params,):
            raise ValueError(
                f"parameter vector has shape {params.shape}, expected ({self.ansatz.n_params},)"
            )
        if not np.all(np.isfinite(params)):
            raise ValueError("parameters must be finite")
        return params

    # -- per-iteration quantities -----------------------------------------

    def energy_and_norm(self, params: np.ndarray) -> tuple[float, float]:
        psi = self.trial(params)
        psi_p = self.project(psi)
        norm = float(np.real(np.vdot(psi, psi_p)))
        self._check_norm(norm)
        num = complex(np.vdot(psi, self.apply_h(psi_p)))
        e = num.real / norm
        if abs(num.imag / norm) > 1e-9 * max(1.0, abs(e)):
            raise AssertionError(f"projected energy has imaginary residue {num.imag / norm}")
        return e, norm

    def quantities(
        self,
        params: np.ndarray,
        need_metric: bool = True,
        oracle: Optional[np.ndarray] = None,
    ) -> IterationQuantities:
        psi, dpsis = self.trial_and_shifts(params)
        psi_p = self.project(psi)
        norm = float(np.real(np.vdot(psi, psi_p)))
        self._check_norm(norm)
        h_psi_p = self.apply_h(psi_p)
        num = complex(np.vdot(psi, h_psi_p))
        e = num.real / norm
        berry = (dpsis @ np.conj(psi_p)) / norm
        grad_num = (dpsis @ np.conj(h_psi_p)) / norm
        grad = 2.0 * np.real(grad_num - berry * e)
        metric = None
        if need_metric:
            p_dpsis = self.project(dpsis)
            overlap = (np.conj(dpsis) @ p_dpsis.T) / norm
            metric = overlap - np.outer(np.conj(berry), berry)
        fid = np.nan
        if oracle is not None:
            fid = float(abs(np.vdot(oracle, psi_p)) ** 2 / norm)
        return IterationQuantities(e, norm, grad, metric, fid)

    def berry_vector(self, params: np.ndarray) -> np.ndarray:
        psi, dpsis = self.trial_and_shifts(params)
        psi_p = self.project(psi)
        norm = float(np.real(np.vdot(psi, psi_p)))
        self._check_norm(norm)
        return (dpsis @ np.conj(psi_p)) / norm

    @staticmethod
    def _check_norm(norm: float) -> None:
        if norm < NORM_FLOOR:
            raise NormFloorError(
                f"projected norm {norm:.3e} below floor {NORM_FLOOR:.0e}; "
                "the projector annihilates this trial state"
            )


# -- public operations ----------------------------------------------------


def trial_state(ansatz: Ansatz, params, spec: SectorSpec) -> StateVector:
    """Reference state evolved through the exchange-gate circuit (no projection)."""
    ws = Workspace(ansatz, spec, None)
    return StateVector(ansatz.n_qubits, ws.space.expand(ws.trial(np.asarray(params))))


def shifted_state(ansatz: Ansatz, params, i: int, spec: SectorSpec) -> StateVector:
    """Derivative state |d_i Psi> = |Psi(t + pi e_i)> / 2 (norm 1/2)."""
    params = np.asarray(params, dtype=np.float64)
    if not 0 <= i < ansatz.n_params:
        raise IndexError(f"parameter index {i} out of range [0, {ansatz.n_params})")
    shifted = params.copy()
    shifted[i] += np.pi
    out = trial_state(ansatz, shifted, spec)
    return StateVector(out.n_qubits, 0.5 * out.amplitudes)


def projected_energy(
    ansatz: Ansatz, params, spec: SectorSpec, model: HeisenbergRing
) -> tuple[float, float]:
    """(variational energy in the projected sector, projected norm)."""
    return Workspace(ansatz, spec, model).energy_and_norm(np.asarray(params))


def berry_a(ansatz: Ansatz, params, spec: SectorSpec) -> np.ndarray:
    """Overlap vector A_i = <Psi|P|d_i Psi>/n; 2*Re A_i = d_i ln n."""
    return Workspace(ansatz, spec, None).berry_vector(np.asarray(params))


def energy_gradient(
    ansatz: Ansatz, params, spec: SectorSpec, model: HeisenbergRing
) -> np.ndarray:
    """Exact gradient of the projected variational energy."""
    ws = Workspace(ansatz, spec, model)
    return ws.quantities(np.asarray(params), need_metric=False).grad


def metric_tensor(ansatz: Ansatz, params, spec: SectorSpec) -> np.ndarray:
    """Metric tensor of the normalized projected state (complex, Hermitian)."""
    ws = Workspace(ansatz, spec, None)
    psi, dpsis = ws.trial_and_shifts(np.asarray(params))
    psi_p = ws.project(psi)
    norm = float(np.real(np.vdot(psi, psi_p)))
    ws._check_norm(norm)
    berry = (dpsis @ np.conj(psi_p)) / norm
    p_dpsis = ws.project(dpsis)
    overlap = (np.conj(dpsis) @ p_dpsis.T) / norm
    return overlap - np.outer(np.conj(berry), berry)


# -- optimization loop -----------------------------------------------------


@dataclass
class TraceRow:
    k: int
    energy_per_site: float
    norm: float
    fidelity: float
    grad_norm: float


@dataclass
class OptState:
    """Iteration counter, current parameters and the accumulated trace."""

    k: int
    params: np.ndarray
    alpha: float
    trace: list = field(default_factory=list)


def solve_regularized(metric_re: np.ndarray, grad: np.ndarray, eps_reg: float) -> np.ndarray:
    """Solve (Re G + eps I) d = grad, escalating eps tenfold up to 1e-2."""
    eps = eps_reg
    eye = np.eye(len(grad))
    while True:
        try:
            delta = np.linalg.solve(metric_re + eps * eye, grad)
            if np.all(np.isfinite(delta)):
                return delta
        except np.linalg.LinAlgError:
            pass
        if eps >= 1e-2:
            raise RuntimeError(f"natural-gradient solve failed at eps_reg={eps:g}")
        eps = min(eps * 10.0, 1e-2)


def ngd_step(
    opt: OptState,
    ws: Workspace,
    eps_reg: float = 1e-6,
    oracle: Optional[np.ndarray] = None,
) -> OptState:
    """One natural-gradient update; appends the pre-update trace row."""
    if opt.alpha < 0:
        raise ValueError("learning rate must be non-negative")
    model = ws.model
    q = ws.quantities(opt.params, need_metric=True, oracle=oracle)
    row = TraceRow(
        k=opt.k,
        energy_per_site=q.energy / (model.coupling * model.n_sites),
        norm=q.norm,
        fidelity=q.fidelity,
        grad_norm=float(np.linalg.norm(q.grad)),
    )
    if opt.alpha == 0.0:
        new_params = opt.params.copy()
    else:
        delta = solve_regularized(np.real(q.metric), q.grad, eps_reg)
        new_params = opt.params - (opt.alpha / model.coupling) * delta
    return OptState(opt.k + 1, new_params, opt.alpha, opt.trace + [row])


@dataclass
class RunResult:
    """Finished optimization: trace plus the final-iteration snapshot."""

    trace: list
    params: np.ndarray
    energy: float  # E at the last recorded iteration, in units of J
    norm: float
    fidelity: float
    oracle_energy: Optional[float]


def initial_params(n_params: int, seed: int) -> np.ndarray:
    """Random start: i.i.d. uniform angles on [0, 2*pi)."""
    return np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, n_params)


def run_ground(
    n_sites: int,
    n_layers: int,
    m: Optional[int] = 0,
    reference: str = "singlet",
    coupling: float = 1.0,
    alpha: float = 0.1,
    k_max: int = 1000,
    seed: int = 1,
    eps_reg: float = 1e-6,
    oracle="auto",
    oracle_sector: tuple = (None, 0.0),
) -> RunResult:
    """Optimize the projected energy for k_max natural-gradient iterations.

    ``oracle="auto"`` computes the exact lowest state in ``oracle_sector``
    with the Lanczos solver and tracks the fidelity of the normalized
    projected state against it; the default sector (S_z = 0, momentum
    unrestricted) targets the global ground state, which is a unique
    singlet for any even ring size.  Pass None to skip.
    """
    model = HeisenbergRing(n_sites, coupling)
    ansatz = Ansatz(n_sites, n_layers)
    spec = sector_spec(n_sites, m, reference)
    ws = Workspace(ansatz, spec, model)

    oracle_energy = None
    oracle_comp = None
    if isinstance(oracle, str) and oracle == "auto":
        ref = lanczos_ground(model, sector=oracle_sector)
        oracle_energy = ref.energy
        oracle_comp = ws.space.compress(ref.state.amplitudes)
    elif isinstance(oracle, StateVector):
        oracle_comp = ws.space.compress(oracle.amplitudes)

    opt = OptState(k=1, params=initial_params(ansatz.n_params, seed), alpha=alpha)
    for _ in range(k_max):
        opt = ngd_step(opt, ws, eps_reg=eps_reg, oracle=oracle_comp)
    last = opt.trace[-1]
    return RunResult(
        trace=opt.trace,
        params=opt.params,
        energy=last.energy_per_site * coupling * n_sites,
        norm=last.norm,
        fidelity=last.fidelity,
        oracle_energy=oracle_energy,
    )


@dataclass
class ExcitationRow:
    m: int
    q_over_pi: float
    energy: float  # triplet-sector variational energy, units of J
    delta_e: float  # excitation energy above the variational ground state


@dataclass
class ExcitedResult:
    ground_energy: float
    rows: list


def run_excited(
    n_sites: int,
    n_layers: int,
    coupling: float = 1.0,
    alpha: float = 0.1,
    k_max: int = 1000,
    seed: int = 1,
    eps_reg: float = 1e-6,
    max_workers: int = 1,
) -> ExcitedResult:
    """Triplet excitation energies over every momentum sector.

    Runs one singlet-reference ground optimization at q=0 and one
    triplet-reference optimization per momentum sector, each from the same
    seeded random start, and reports dE(q) = E_q(S=1) - E_0 at the final
    iteration.  A sector that annihilates the whole triplet trial manifold
    (possible on very small rings, where some (S=1, q) subspaces are
    empty) yields a NaN row.  Sector runs are independent and may execute
    concurrently.
    """
    from concurrent.futures import ThreadPoolExecutor

    common = dict(
        n_sites=n_sites,
        n_layers=n_layers,
        coupling=coupling,
        alpha=alpha,
        k_max=k_max,
        seed=seed,
        eps_reg=eps_reg,
        oracle=None,
    )
    ground = run_ground(m=0, reference="singlet", **common)

    lo = -(n_sites // 2) + 1
    ms = list(range(lo, lo + n_sites))

    def one(m: int) -> ExcitationRow:
        try:
            res = run_ground(m=m, reference="triplet", **common)
        except NormFloorError:
            return ExcitationRow(m=m, q_over_pi=2.0 * m / n_sites,
                                 energy=np.nan, delta_e=np.nan)
        return ExcitationRow(
            m=m,
            q_over_pi=2.0 * m / n_sites,
            energy=res.energy,
            delta_e=res.energy - ground.energy,
        )

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(one, ms))
    else:
        rows = [one(m) for m in ms]
    return ExcitedResult(ground_energy=ground.energy, rows=rows)
