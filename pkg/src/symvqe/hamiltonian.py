"""Heisenberg-ring Hamiltonian, spin observables and a Lanczos eigensolver.

The antiferromagnetic Heisenberg Hamiltonian on the periodic ring,

    H = (J/4) * sum_<i,j> (X_i X_j + Y_i Y_j + Z_i Z_j)
      = (J/2) * sum_<i,j> (SWAP_ij - 1/2),

is applied through its SWAP form: every bond term only permutes amplitude
indices, which keeps the operator exactly magnetization conserving and
cheap to evaluate.  The same identity
XX + YY + ZZ = 2*SWAP - 1 (distinct sites) underlies the total-spin
operator S^2 = (3N/4) - N(N-1)/4 + sum_{i<j} SWAP_ij.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .sector import SectorSpace
from .statevector import StateVector, popcount_table, swap_bit_index
from .symmetry import CyclicGroup, MomentumSector, ProjectionKernel

LANCZOS_TOL = 1e-8


@dataclass(frozen=True)
class HeisenbergRing:
    """Spin-1/2 Heisenberg model on an N-site periodic chain, J > 0."""

    n_sites: int
    coupling: float = 1.0

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError("n_sites must be >= 2")
        if self.coupling <= 0:
            raise ValueError("coupling J must be positive")

    @property
    def bonds(self) -> list:
        """Distinct nearest-neighbor pairs; the 2-site ring has one bond."""
        if self.n_sites == 2:
            return [(0, 1)]
        return [(i, (i + 1) % self.n_sites) for i in range(self.n_sites)]


def apply_h_amps(model: HeisenbergRing, amps: np.ndarray, gathers=None) -> np.ndarray:
    """H kernel on raw amplitudes (last axis = basis index, any leading axes)."""
    if gathers is None:
        gathers = [swap_bit_index(model.n_sites, i, j) for i, j in model.bonds]
    acc = np.zeros_like(amps)
    for g in gathers:
        acc += amps[..., g]
    half_j = 0.5 * model.coupling
    return half_j * acc - (half_j * 0.5 * len(gathers)) * amps


def apply_h(model: HeisenbergRing, state: StateVector) -> StateVector:
    """H|psi>; linear, no normalization."""
    if state.n_qubits != model.n_sites:
        raise ValueError(f"state has {state.n_qubits} qubits, model has {model.n_sites} sites")
    return StateVector(state.n_qubits, apply_h_amps(model, state.amplitudes))


def energy(model: HeisenbergRing, state: StateVector) -> float:
    """<psi|H|psi> for a normalized state, in units of J."""
    nrm = state.norm()
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"state must be normalized (norm = {nrm})")
    val = complex(np.vdot(state.amplitudes, apply_h_amps(model, state.amplitudes)))
    if abs(val.imag) > 1e-10:
        raise AssertionError(f"energy has imaginary residue {val.imag}")
    return float(val.real)


def total_sz(state: StateVector) -> float:
    """<S_z> = (1/2) sum_i <Z_i>; bit value 0 is spin up."""
    szs = 0.5 * (state.n_qubits - 2.0 * popcount_table(state.n_qubits))
    return float(np.real(np.vdot(state.amplitudes, szs * state.amplitudes)))


def total_spin_sq(state: StateVector) -> float:
    """<S^2> via the all-pairs SWAP form (3N/4 from the i=j Pauli terms)."""
    n = state.n_qubits
    a = state.amplitudes
    pair_sum = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            pair_sum += np.real(np.vdot(a, a[swap_bit_index(n, i, j)]))
    const = 0.75 * n - 0.25 * n * (n - 1)
    return float(const * np.vdot(a, a).real + pair_sum)


@dataclass
class SpectrumResult:
    """Converged eigenpair with measured sector labels."""

    energy: float
    state: StateVector
    q_index: Optional[int]
    s_z: Optional[float]
    s_squared: float
    residual: float


class LanczosError(RuntimeError):
    pass


def lanczos_ground(
    model: HeisenbergRing,
    sector: Optional[tuple] = None,
    max_iter: int = 500,
    tol: float = LANCZOS_TOL,
    seed: int = 7,
    orthogonal_to: Optional[list] = None,
) -> SpectrumResult:
    """Lowest eigenpair of H, optionally restricted to a (q, S_z) sector.

    The start vector is random; with a sector it is restricted to the
    fixed-S_z popcount subspace and momentum projected.  Both restrictions
    commute with H, so the Krylov space stays in-sector up to roundoff;
    the momentum projection is re-applied every 10 iterations.  Full
    reorthogonalization is used throughout.  Converged when the true
    residual ||H v - E v|| <= tol.

    ``orthogonal_to`` deflates previously found eigenvectors (full-space
    amplitude arrays): the solve runs in their orthogonal complement,
    yielding the next state up when they span the sector's lowest levels.
    """
    n = model.n_sites
    if n > 20:
        raise ValueError("Lanczos oracle is limited to n_sites <= 20")
    q_index, s_z = sector if sector is not None else (None, None)

    space = None
    if s_z is not None:
        n_down = round(n / 2 - s_z)
        if not 0 <= n_down <= n:
            raise ValueError(f"S_z = {s_z} is impossible for {n} sites")
        space = SectorSpace(n, n_down)

    group = CyclicGroup(n)
    msector = MomentumSector(n, q_index) if q_index is not None else None

    if space is not None:
        h_gathers = [space.gather(swap_bit_index(n, i, j)) for i, j in model.bonds]
        gather_fn = lambda k: space.gather(group.gather(k))  # noqa: E731
        dim = space.dim
    else:
        h_gathers = [swap_bit_index(n, i, j) for i, j in model.bonds]
        gather_fn = group.gather
        dim = 1 << n
    kernel = ProjectionKernel(group, msector, gather_fn) if msector is not None else None

    half_j = 0.5 * model.coupling
    shift = half_j * 0.5 * len(h_gathers)

    def apply_op(v: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(v)
        for g in h_gathers:
            acc += v[g]
        return half_j * acc - shift * v

    def project_q(v: np.ndarray) -> np.ndarray:
        return v if kernel is None else kernel.apply(v)

    deflate = None
    if orthogonal_to:
        deflate = np.array(
            [space.compress(vec) if space is not None else vec for vec in orthogonal_to]
        )

    def deflate_out(v: np.ndarray) -> np.ndarray:
        if deflate is not None:
            v = v - deflate.T @ (deflate.conj() @ v)
        return v

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v = deflate_out(project_q(v))
    nrm = np.linalg.norm(v)
    if nrm < 1e-12:
        raise LanczosError("start vector vanishes in the requested sector")

    basis = np.empty((min(64, max_iter + 1), dim), dtype=np.complex128)
    basis[0] = v / nrm
    n_vecs = 1
    alphas: list[float] = []
    betas: list[float] = []
    eigvec = None
    eigval = np.nan
    for it in range(1, max_iter + 1):
        w = apply_op(basis[n_vecs - 1])
        a = float(np.real(np.vdot(basis[n_vecs - 1], w)))
        alphas.append(a)
        w -= a * basis[n_vecs - 1]
        if betas:
            w -= betas[-1] * basis[n_vecs - 2]
        # full reorthogonalization keeps the Krylov basis clean
        w -= basis[:n_vecs].T @ (basis[:n_vecs].conj() @ w)
        if it % 10 == 0:
            w = project_q(w)
        w = deflate_out(w)
        b = float(np.linalg.norm(w))
        vals, vecs = eigh_tridiagonal(
            np.asarray(alphas), np.asarray(betas), select="i", select_range=(0, 0)
        )
        eigval = float(vals[0])
        coeffs = vecs[:, 0]
        est = b * abs(coeffs[-1])
        if est <= 0.5 * tol or b < 1e-13 or it == max_iter:
            eigvec = basis[:n_vecs].T @ coeffs.astype(np.complex128)
            eigvec = deflate_out(project_q(eigvec))
            eigvec /= np.linalg.norm(eigvec)
            resid = float(np.linalg.norm(apply_op(eigvec) - eigval * eigvec))
            if resid <= tol:
                break
            eigvec = None
        if b < 1e-13:
            break
        betas.append(b)
        if n_vecs == basis.shape[0]:
            basis = np.vstack([basis, np.empty_like(basis)])[: max_iter + 1]
        basis[n_vecs] = w / b
        n_vecs += 1

    if eigvec is None:
        raise LanczosError(f"no convergence after {max_iter} iterations")

    full = space.expand(eigvec) if space is not None else eigvec
    state = StateVector(n, full)
    resid = float(np.linalg.norm(apply_h_amps(model, full) - eigval * full))
    return SpectrumResult(
        energy=eigval,
        state=state,
        q_index=q_index,
        s_z=s_z if s_z is not None else total_sz(state),
        s_squared=total_spin_sq(state),
        residual=resid,
    )


def lowest_in_spin_sector(
    model: HeisenbergRing,
    q_index: int,
    s_z: float = 1.0,
    total_spin: float = 1.0,
    max_levels: int = 8,
    seed: int = 7,
) -> SpectrumResult:
    """Lowest (q, S_z) eigenstate with the requested total spin.

    The (q, S_z) restriction alone can put a higher-spin multiplet below
    the wanted one (on rings this happens for the S=1 target at q=0, where
    an S=2 level intrudes), so mismatching eigenpairs are deflated until
    the lowest remaining state has S(S+1) matching ``total_spin``.
    """
    target = total_spin * (total_spin + 1.0)
    found: list[np.ndarray] = []
    for _ in range(max_levels):
        res = lanczos_ground(
            model, sector=(q_index, s_z), seed=seed, orthogonal_to=found
        )
        if abs(res.s_squared - target) < 1e-3:
            return res
        found.append(res.state.amplitudes)
    raise LanczosError(
        f"no S={total_spin} state within the lowest {max_levels} levels of "
        f"sector (q_index={q_index}, S_z={s_z})"
    )


def measured_momentum_phase(state: StateVector) -> complex:
    """<T> of a state; equals exp(i*q) for a momentum eigenstate."""
    group = CyclicGroup(state.n_qubits)
    return complex(np.vdot(state.amplitudes, state.amplitudes[group.gather(1)]))


def ground_state_fidelity(reference: StateVector, state: StateVector) -> float:
    """|<reference|state>|^2 after normalizing both arguments."""
    ref = reference.amplitudes / np.linalg.norm(reference.amplitudes)
    st = state.amplitudes / np.linalg.norm(state.amplitudes)
    return float(abs(np.vdot(ref, st)) ** 2)
