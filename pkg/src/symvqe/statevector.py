"""Dense statevector representation and exact gate application.

Conventions used throughout the package:

* Qubit ``i`` is bit ``i`` of the basis-state index (little endian) and
  ``|0>`` is bit value 0.  A basis bitstring lists qubit 0 first, so
  ``"01"`` means qubit 0 in ``|0>`` and qubit 1 in ``|1>``.
* Gate application is value-in / value-out; input vectors are never
  mutated.  Global phases are preserved.
* The exchange gate ``eswap(i, j, theta) = exp(-i*theta*SWAP_ij/2)`` is the
  only parametrized two-qubit primitive.  Because SWAP is involutory,
  ``eswap = I*cos(theta/2) - i*SWAP*sin(theta/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

MAX_QUBITS = 24

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# Reusable index tables, keyed by gate geometry.  Treated as read-only.
_SWAP_INDEX_CACHE: dict[tuple[int, int, int], np.ndarray] = {}


def _check_n_qubits(n_qubits: int) -> None:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")


def swap_bit_index(n_qubits: int, i: int, j: int) -> np.ndarray:
    """Index table ``t`` with ``t[x]`` = ``x`` with bits ``i`` and ``j`` exchanged."""
    key = (n_qubits, min(i, j), max(i, j))
    table = _SWAP_INDEX_CACHE.get(key)
    if table is None:
        idx = np.arange(1 << n_qubits, dtype=np.intp)
        diff = ((idx >> i) ^ (idx >> j)) & 1
        table = idx ^ ((diff << i) | (diff << j))
        _SWAP_INDEX_CACHE[key] = table
    return table


def permutation_gather(n_qubits: int, perm: np.ndarray) -> np.ndarray:
    """Gather table realizing a qubit permutation.

    ``perm[i]`` is the position that the one-qubit state at position ``i``
    is sent to.  For the returned table ``g``, ``new = amps[g]`` applies the
    permutation to a state vector.
    """
    idx = np.arange(1 << n_qubits, dtype=np.intp)
    g = np.zeros_like(idx)
    for site in range(n_qubits):
        g |= ((idx >> int(perm[site])) & 1) << site
    return g


def popcount_table(n_qubits: int) -> np.ndarray:
    """Number of 1-bits of every basis index (cached)."""
    key = (n_qubits, -1, -1)
    table = _SWAP_INDEX_CACHE.get(key)
    if table is None:
        idx = np.arange(1 << n_qubits, dtype=np.intp)
        table = np.zeros_like(idx)
        for b in range(n_qubits):
            table += (idx >> b) & 1
        _SWAP_INDEX_CACHE[key] = table
    return table


@dataclass(eq=False)
class StateVector:
    """Dense complex amplitudes over the 2**n_qubits computational basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        _check_n_qubits(self.n_qubits)
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"amplitude array has shape {self.amplitudes.shape}, "
                f"expected ({1 << self.n_qubits},)"
            )

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.n_qubits, self.amplitudes / n)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class ESwap:
    """exp(-i*theta*SWAP_ij/2) on qubits ``i`` and ``j``."""

    i: int
    j: int
    theta: float


@dataclass(frozen=True)
class Swap:
    i: int
    j: int


@dataclass(frozen=True)
class Permutation:
    """Relabeling of qubit contents; ``perm[i]`` is the destination of site ``i``."""

    perm: tuple[int, ...]


@dataclass(frozen=True)
class OneQubit:
    """Dense 2x2 matrix on qubit ``i`` (basis order |0>, |1>)."""

    i: int
    matrix: tuple = ()

    def as_array(self) -> np.ndarray:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError("OneQubit matrix must be 2x2")
        return m


@dataclass(frozen=True)
class TwoQubit:
    """Dense 4x4 matrix on qubits ``(i, j)``, basis |00>,|01>,|10>,|11>
    with qubit ``i`` the first slot."""

    i: int
    j: int
    matrix: tuple = ()

    def as_array(self) -> np.ndarray:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError("TwoQubit matrix must be 4x4")
        return m


GateOp = Union[ESwap, Swap, Permutation, OneQubit, TwoQubit]


@dataclass
class Circuit:
    """Ordered gate list; ops are applied left-to-right to the ket."""

    n_qubits: int
    ops: list = field(default_factory=list)

    def __post_init__(self) -> None:
        _check_n_qubits(self.n_qubits)
        for op in self.ops:
            _validate_gate(op, self.n_qubits)


def _validate_two_qubit_indices(i: int, j: int, n_qubits: int) -> None:
    if i == j:
        raise ValueError(f"two-qubit gate indices must differ, got ({i}, {j})")
    for q in (i, j):
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit index {q} out of range for {n_qubits} qubits")


def _validate_gate(gate: GateOp, n_qubits: int) -> None:
    if isinstance(gate, (ESwap, Swap, TwoQubit)):
        _validate_two_qubit_indices(gate.i, gate.j, n_qubits)
    elif isinstance(gate, OneQubit):
        if not 0 <= gate.i < n_qubits:
            raise ValueError(f"qubit index {gate.i} out of range")
    elif isinstance(gate, Permutation):
        perm = np.asarray(gate.perm, dtype=np.intp)
        if perm.shape != (n_qubits,) or sorted(perm.tolist()) != list(range(n_qubits)):
            raise ValueError(f"permutation {gate.perm} is not a bijection on {n_qubits} sites")
    else:
        raise TypeError(f"unknown gate {gate!r}")


def basis_state(n_qubits: int, bits: str) -> StateVector:
    """Computational basis state from a bitstring (character ``i`` = qubit ``i``)."""
    _check_n_qubits(n_qubits)
    if len(bits) != n_qubits or any(c not in "01" for c in bits):
        raise ValueError(f"bits must be a length-{n_qubits} string of 0/1, got {bits!r}")
    index = sum(1 << q for q, c in enumerate(bits) if c == "1")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def pair_product(n_qubits: int, pairs, kinds=None) -> StateVector:
    """Product of two-qubit Bell pairs covering all qubits.

    ``pairs`` is a sequence of ordered ``(i, j)`` tuples; ``kinds[k]`` is
    ``"singlet"`` for (|01>-|10>)/sqrt(2) on the k-th pair (the order of
    ``i`` and ``j`` fixes the sign) or ``"triplet"`` for (|01>+|10>)/sqrt(2).
    """
    _check_n_qubits(n_qubits)
    pairs = list(pairs)
    covered = [q for ij in pairs for q in ij]
    if sorted(covered) != list(range(n_qubits)):
        raise ValueError("pairs must cover every qubit exactly once")
    if kinds is None:
        kinds = ["singlet"] * len(pairs)
    idx = np.arange(1 << n_qubits)
    amps = np.ones(1 << n_qubits, dtype=np.complex128)
    for (i, j), kind in zip(pairs, kinds):
        bi = (idx >> i) & 1
        bj = (idx >> j) & 1
        lo_sign = -1.0 if kind == "singlet" else 1.0
        amps *= _SQRT_HALF * (((bi == 0) & (bj == 1)) + lo_sign * ((bi == 1) & (bj == 0)))
    return StateVector(n_qubits, amps)


def dimer_state(n_qubits: int, pairs) -> StateVector:
    """Product of spin singlets on the given ordered qubit pairs."""
    return pair_product(n_qubits, pairs)


def singlet_product(n_qubits: int) -> StateVector:
    """Singlet-pair product state: singlets on (0,1), (2,3), ..., (N-2,N-1)."""
    if n_qubits % 2:
        raise ValueError(f"singlet_product needs an even qubit count, got {n_qubits}")
    return dimer_state(n_qubits, [(2 * k, 2 * k + 1) for k in range(n_qubits // 2)])


def triplet_tail_product(n_qubits: int) -> StateVector:
    """Singlet pairs on (0,1)...(N-4,N-3) and the S_z=0 triplet on (N-2,N-1).

    Total spin quantum numbers: S = 1, S_z = 0.
    """
    if n_qubits % 2 or n_qubits < 4:
        raise ValueError(f"triplet_tail_product needs even n_qubits >= 4, got {n_qubits}")
    pairs = [(2 * k, 2 * k + 1) for k in range(n_qubits // 2)]
    kinds = ["singlet"] * (n_qubits // 2 - 1) + ["triplet"]
    return pair_product(n_qubits, pairs, kinds)


def eswap_amps(amps: np.ndarray, swap_index: np.ndarray, theta: float) -> np.ndarray:
    """Exchange-gate kernel on raw amplitudes (last axis = basis index)."""
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    return c * amps - 1j * s * amps[..., swap_index]


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Apply one gate; returns a new StateVector with the input untouched."""
    n = state.n_qubits
    _validate_gate(gate, n)
    a = state.amplitudes
    if isinstance(gate, ESwap):
        out = eswap_amps(a, swap_bit_index(n, gate.i, gate.j), gate.theta)
    elif isinstance(gate, Swap):
        out = a[swap_bit_index(n, gate.i, gate.j)]
    elif isinstance(gate, Permutation):
        out = a[permutation_gather(n, np.asarray(gate.perm, dtype=np.intp))]
    elif isinstance(gate, OneQubit):
        m = gate.as_array()
        i = gate.i
        flip = np.arange(1 << n) ^ (1 << i)
        bit = (np.arange(1 << n) >> i) & 1
        # row of m selected by the output bit; columns by (same, flipped) input
        diag = np.where(bit == 0, m[0, 0], m[1, 1])
        off = np.where(bit == 0, m[0, 1], m[1, 0])
        out = diag * a + off * a[flip]
    elif isinstance(gate, TwoQubit):
        m = gate.as_array()
        i, j = gate.i, gate.j
        idx = np.arange(1 << n)
        sub = 2 * ((idx >> i) & 1) + ((idx >> j) & 1)
        base = idx & ~(1 << i) & ~(1 << j)
        out = np.zeros_like(a)
        for col in range(4):
            src = base | ((col >> 1) << i) | ((col & 1) << j)
            out += m[sub, col] * a[src]
    else:  # pragma: no cover - guarded by _validate_gate
        raise TypeError(f"unknown gate {gate!r}")
    return StateVector(n, out)


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    if circuit.n_qubits != state.n_qubits:
        raise ValueError("circuit and state sizes differ")
    for op in circuit.ops:
        state = apply_gate(state, op)
    return state


def inner(a: StateVector, b: StateVector) -> complex:
    """Hermitian inner product <a|b>."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap |<a|b>|^2 of two normalized states."""
    return float(abs(inner(a, b)) ** 2)


def eswap_matrix(theta: float) -> np.ndarray:
    """4x4 matrix of the exchange gate in basis |00>,|01>,|10>,|11>."""
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    e = np.exp(-0.5j * theta)
    return np.array(
        [
            [e, 0.0, 0.0, 0.0],
            [0.0, c, -1j * s, 0.0],
            [0.0, -1j * s, c, 0.0],
            [0.0, 0.0, 0.0, e],
        ],
        dtype=np.complex128,
    )


def eswap_decomposition_matrix(theta: float) -> np.ndarray:
    """Exchange gate built from elementary gates.

    Product (left to right): CNOT, X(x)I, phase-shift(-theta/2)(x)I, X(x)I,
    controlled-R_X(theta), CNOT.  The CNOT is controlled on the second
    qubit, the phase shift and X act on the first qubit and the R_X
    rotation on the second, controlled on the first.
    """
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    e = np.exp(-0.5j * theta)
    cnot = np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
    )
    x_first = np.array(
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=np.complex128
    )
    phase_first = np.diag([1.0, 1.0, e, e]).astype(np.complex128)
    controlled_rx = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, c, -1j * s], [0, 0, -1j * s, c]],
        dtype=np.complex128,
    )
    return cnot @ x_first @ phase_first @ x_first @ controlled_rx @ cnot


def verify_eswap_decomposition(theta: float, tol: float = 1e-12) -> tuple[bool, float]:
    """Compare the direct exchange-gate matrix against its gate decomposition.

    Returns (matches within tol, max elementwise deviation).
    """
    dev = float(np.max(np.abs(eswap_matrix(theta) - eswap_decomposition_matrix(theta))))
    return dev <= tol, dev
