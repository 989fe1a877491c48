"""Fixed-magnetization index subspace.

Every primitive used by the solver (exchange gates, site permutations, the
Heisenberg Hamiltonian) maps basis states to basis states with the same
number of 1-bits, so states with definite S_z live in the subspace spanned
by basis indices of fixed popcount.  Restricting the simulation to that
subspace only relabels gather tables; the numerics are otherwise identical
to the full 2**N space.
"""

from __future__ import annotations

import numpy as np

from .statevector import popcount_table


class SectorSpace:
    """Compress/expand between the full register and one popcount sector."""

    def __init__(self, n_qubits: int, n_down: int):
        if not 0 <= n_down <= n_qubits:
            raise ValueError(f"n_down must be in [0, {n_qubits}], got {n_down}")
        self.n_qubits = n_qubits
        self.n_down = n_down
        self.indices = np.nonzero(popcount_table(n_qubits) == n_down)[0]
        self.dim = len(self.indices)
        self._lookup = np.full(1 << n_qubits, -1, dtype=np.intp)
        self._lookup[self.indices] = np.arange(self.dim, dtype=np.intp)

    def compress(self, full: np.ndarray) -> np.ndarray:
        """Restrict a full-space vector to the sector (drops the complement)."""
        return np.ascontiguousarray(full[..., self.indices])

    def expand(self, comp: np.ndarray) -> np.ndarray:
        full = np.zeros(comp.shape[:-1] + (1 << self.n_qubits,), dtype=comp.dtype)
        full[..., self.indices] = comp
        return full

    def gather(self, full_gather: np.ndarray) -> np.ndarray:
        """Translate a full-space gather table into sector coordinates.

        Requires the underlying map to preserve popcount (true for bit
        swaps and permutations).
        """
        comp = self._lookup[full_gather[self.indices]]
        if np.any(comp < 0):
            raise ValueError("gather table does not preserve the sector")
        return np.ascontiguousarray(comp)
