"""Cyclic translation group, momentum projection and SWAP-network compilation.

The translation group of an N-site ring has the N elements T^1 ... T^N with
T the one-lattice-space translation.  Its irreducible representations are
one dimensional and labeled by a momentum index m (q = 2*pi*m/N), with
character chi_q(T^n) = exp(i*q*n).  The projector onto momentum q is

    P_q = (1/N) * sum_n chi_q(T^n)^* T^n,

which is Hermitian, idempotent and positive semidefinite but not unitary.
Applied classically, each T^n is just a relabeling of amplitude indices.

Arbitrary site permutations compile to nearest-neighbor SWAP sequences by
the ladder-drawing construction: straight lines connect equal one-qubit
states between the initial and final orderings, and every line crossing
becomes one adjacent SWAP.  A brick-wall (odd-even) comparison-exchange
sort emits exactly that minimal crossing set in time-step order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from .statevector import StateVector, permutation_gather


@dataclass(frozen=True)
class CyclicGroup:
    """Translations of an N-site ring; group order equals n_sites."""

    n_sites: int

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")

    def translation_perm(self, n: int) -> np.ndarray:
        """Permutation sending the content of site i to site (i + n) mod N."""
        if not 1 <= n <= self.n_sites:
            raise ValueError(f"translation power must be in [1, {self.n_sites}], got {n}")
        sites = np.arange(self.n_sites, dtype=np.intp)
        return (sites + n) % self.n_sites

    def gather(self, n: int) -> np.ndarray:
        """Amplitude gather table for T^n (cached)."""
        key = n % self.n_sites
        table = _ROTATION_CACHE.get((self.n_sites, key))
        if table is None:
            idx = np.arange(1 << self.n_sites, dtype=np.intp)
            if key == 0:
                table = idx
            else:
                mask = (1 << self.n_sites) - 1
                # bit i of the source must come from bit (i + n) mod N
                table = ((idx >> key) | (idx << (self.n_sites - key))) & mask
            _ROTATION_CACHE[(self.n_sites, key)] = table
        return table


_ROTATION_CACHE: dict[tuple[int, int], np.ndarray] = {}


@dataclass(frozen=True)
class MomentumSector:
    """Momentum label q = 2*pi*m/N with m canonicalized into (-N/2, N/2]."""

    n_sites: int
    m: int

    def __post_init__(self) -> None:
        m = self.m % self.n_sites
        if m > self.n_sites // 2:
            m -= self.n_sites
        object.__setattr__(self, "m", m)

    @property
    def q(self) -> float:
        return 2.0 * np.pi * self.m / self.n_sites

    def character(self, n: int) -> complex:
        return complex(np.exp(1j * self.q * n))


def momentum_sectors(n_sites: int) -> list[MomentumSector]:
    """All N momentum sectors, m = -N/2+1 ... N/2 (m = 0 ... N-1 for odd N)."""
    lo = -(n_sites // 2) + 1 if n_sites % 2 == 0 else -((n_sites - 1) // 2)
    return [MomentumSector(n_sites, m) for m in range(lo, lo + n_sites)]


def character(sector: MomentumSector, n: int) -> complex:
    """chi_q(T^n) = exp(i*q*n)."""
    return sector.character(n)


def translation_perm(group: CyclicGroup, n: int) -> np.ndarray:
    return group.translation_perm(n)


class ProjectionKernel:
    """Factorized momentum projector.

    With z = chi_q(T)^*, the group sum factorizes as a geometric series,

        sum_{n=0}^{N-1} z^n T^n
            = [sum_{j<odd} (z^s T^s)^j] * prod_{k<a} (I + z^(2^k) T^(2^k)),

    where N = 2^a * odd and s = 2^a, so a projector application costs
    a + odd - 1 translation gathers instead of N.  ``gather_fn(k)`` must
    return the amplitude gather table of T^k in whatever index space the
    kernel operates on (full register or a fixed-S_z sector).
    """

    def __init__(self, group: CyclicGroup, sector: MomentumSector, gather_fn=None):
        if gather_fn is None:
            gather_fn = group.gather
        n = group.n_sites
        z = np.conj(sector.character(1))
        self.n_sites = n
        self.doubling: list[tuple[complex, np.ndarray]] = []
        step = 1
        while step < n and (n // step) % 2 == 0:
            self.doubling.append((z**step, gather_fn(step)))
            step *= 2
        self.odd = n // step
        self.odd_weight = z**step
        self.odd_gather = gather_fn(step) if self.odd > 1 else None

    def apply(self, amps: np.ndarray) -> np.ndarray:
        """P_q applied along the last axis; input is not modified."""
        acc = amps.copy()
        for weight, g in self.doubling:
            tmp = acc[..., g]
            tmp *= weight
            acc += tmp
        if self.odd > 1:
            total = acc.copy()
            cur = acc
            for _ in range(1, self.odd):
                cur = cur[..., self.odd_gather]
                cur *= self.odd_weight
                total += cur
            acc = total
        acc /= self.n_sites
        return acc


def project_amps(amps: np.ndarray, group: CyclicGroup, sector: MomentumSector) -> np.ndarray:
    """Momentum projector kernel on raw amplitudes (full space, last axis)."""
    return ProjectionKernel(group, sector).apply(amps)


def project(state: StateVector, group: CyclicGroup, sector: MomentumSector) -> StateVector:
    """Apply the momentum projector; the result is generally not normalized.

    The squared norm of the output equals <psi|P_q|psi> >= 0.
    """
    if state.n_qubits != group.n_sites:
        raise ValueError(f"state has {state.n_qubits} qubits, group has {group.n_sites} sites")
    return StateVector(state.n_qubits, project_amps(state.amplitudes, group, sector))


@dataclass
class SwapNetwork:
    """Ordered adjacent transpositions realizing a site permutation.

    ``transpositions[k] = (i, i+1)`` exchanges the contents of neighboring
    sites.  ``layers`` groups them into time steps of disjoint gates by
    greedy left-packing of the recorded order; ``depth`` is the number of
    time steps.
    """

    n_sites: int
    transpositions: list = field(default_factory=list)

    @property
    def n_swaps(self) -> int:
        return len(self.transpositions)

    @property
    def layers(self) -> list:
        slot_of = self.slots()
        if not slot_of:
            return []
        layers: list[list[tuple[int, int]]] = [[] for _ in range(max(slot_of) + 1)]
        for pair, slot in zip(self.transpositions, slot_of):
            layers[slot].append(pair)
        return layers

    @property
    def depth(self) -> int:
        slot_of = self.slots()
        return max(slot_of) + 1 if slot_of else 0

    def slots(self) -> list[int]:
        """Earliest time step of each transposition (greedy left-packing)."""
        last = [-1] * self.n_sites
        out = []
        for i, j in self.transpositions:
            slot = max(last[i], last[j]) + 1
            last[i] = last[j] = slot
            out.append(slot)
        return out

    def permutation(self) -> np.ndarray:
        """Composite permutation: destination of the content of each site."""
        pos = list(range(self.n_sites))  # pos[c] = current site of content c
        site = list(range(self.n_sites))  # site -> content
        for i, j in self.transpositions:
            ci, cj = site[i], site[j]
            site[i], site[j] = cj, ci
            pos[ci], pos[cj] = j, i
        return np.array(pos, dtype=np.intp)

    def to_text(self) -> str:
        """Plain-text listing: one ``swap i j`` per line, blank line between layers."""
        blocks = ["\n".join(f"swap {i} {j}" for i, j in layer) for layer in self.layers]
        return "\n\n".join(blocks) + ("\n" if blocks else "")


def amida_decompose(target, n_sites: int | None = None) -> SwapNetwork:
    """Compile a site permutation into nearest-neighbor transpositions.

    ``target[i]`` is the destination of the content of site ``i``.  The
    comparison-exchange order is a brick-wall sweep (even pairs, then odd
    pairs, repeated), which emits one transposition per line crossing of
    the ladder diagram; the count equals the inversion number of the
    permutation and is therefore minimal.
    """
    target = np.asarray(target, dtype=np.intp)
    n = len(target) if n_sites is None else n_sites
    if target.shape != (n,) or sorted(target.tolist()) != list(range(n)):
        raise ValueError(f"target {target.tolist()} is not a bijection on {n} sites")
    arr = list(range(n))  # arr[site] = content currently there
    swaps: list[tuple[int, int]] = []
    parity = 0
    idle_passes = 0
    while idle_passes < 2:
        moved = False
        for p in range(parity, n - 1, 2):
            if target[arr[p]] > target[arr[p + 1]]:
                arr[p], arr[p + 1] = arr[p + 1], arr[p]
                swaps.append((p, p + 1))
                moved = True
        idle_passes = 0 if moved else idle_passes + 1
        parity ^= 1
    return SwapNetwork(n, swaps)


def long_range_swap_perm(n_sites: int, r: int) -> np.ndarray:
    """Permutation exchanging sites 1 and r (0-based) on a chain of n_sites.

    Exchanging those two sites recombines the first dimer and the dimer at
    distance r into two singlets of reach r.
    """
    if not 2 <= r < n_sites:
        raise ValueError(f"need 2 <= r < n_sites, got r={r}, n_sites={n_sites}")
    perm = np.arange(n_sites, dtype=np.intp)
    perm[1], perm[r] = r, 1
    return perm


def swap_count_bound(r: int) -> tuple[int, int, int]:
    """(number of swaps, time steps, ansatz layers) to exchange sites 1 and r+1.

    A distance-r exchange crosses the r-2 intermediate lines twice and the
    partner line once: 2r-3 swaps in r-1 time steps, fitting in
    ceil((r-1)/2) brick-wall layers of two time steps each.
    """
    if r < 2 or r % 2:
        raise ValueError(f"r must be even and >= 2, got {r}")
    return 2 * r - 3, r - 1, ceil((r - 1) / 2)


def layer_bonds(n_sites: int) -> tuple[list, list]:
    """Bond order of one brick-wall ansatz layer.

    Returns (cross_bonds, dimer_bonds): the inter-dimer bonds
    (1,2),(3,4),...,(N-1,0) fire first within a layer, then the dimer bonds
    (0,1),(2,3),...,(N-2,N-1).  Gates on the dimer bonds only phase the
    dimerized reference state, so each layer starts with the bonds that
    recombine singlet pairs.
    """
    if n_sites % 2:
        raise ValueError("brick-wall layers need an even site count")
    cross = [(i, (i + 1) % n_sites) for i in range(1, n_sites, 2)]
    dimer = [(i, i + 1) for i in range(0, n_sites, 2)]
    return cross, dimer


def theta_swap_params(ansatz_shape: tuple[int, int], network: SwapNetwork) -> np.ndarray:
    """Embed a SWAP network into the brick-wall ansatz parameter grid.

    Returns a flat parameter vector (layer-major; within a layer the
    cross-bond angles come first) with pi on every link a network
    transposition uses and 0 elsewhere.  An exchange gate at angle pi
    equals -i * SWAP, so the circuit reproduces the network's permutation
    up to a global phase.
    """
    n_sites, n_layers = ansatz_shape
    cross, dimer = layer_bonds(n_sites)
    bond_slot: dict[tuple[int, int], tuple[int, int]] = {}
    for k, bond in enumerate(cross):
        bond_slot[bond] = (0, k)  # half 0 of each layer
    for k, bond in enumerate(dimer):
        bond_slot[bond] = (1, n_sites // 2 + k)  # half 1
    params = np.zeros(n_sites * n_layers)
    last = [-1] * n_sites  # last occupied half-slot per site
    for i, j in network.transpositions:
        half, offset = bond_slot[(i, j)]
        slot = max(last[i], last[j]) + 1
        if slot % 2 != half:
            slot += 1
        layer = slot // 2
        if layer >= n_layers:
            raise ValueError(
                f"network needs {layer + 1} layers, ansatz has only {n_layers}"
            )
        params[layer * n_sites + offset] = np.pi
        last[i] = last[j] = slot
    return params


def permutation_matrix(n_qubits: int, perm: np.ndarray) -> np.ndarray:
    """Dense unitary of a site permutation (test-scale oracle helper)."""
    g = permutation_gather(n_qubits, np.asarray(perm, dtype=np.intp))
    dim = 1 << n_qubits
    mat = np.zeros((dim, dim), dtype=np.complex128)
    mat[np.arange(dim), g] = 1.0
    return mat


def projector_matrix(group: CyclicGroup, sector: MomentumSector) -> np.ndarray:
    """Dense momentum projector (test-scale oracle helper)."""
    dim = 1 << group.n_sites
    out = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, group.n_sites + 1):
        out += np.conj(sector.character(n)) * permutation_matrix(
            group.n_sites, group.translation_perm(n)
        )
    return out / group.n_sites
