"""Shared dense-matrix oracles, built independently of the package kernels."""

import numpy as np
import pytest

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def kron_op(n_qubits, ops):
    """Dense operator with single-site factors at given qubits.

    ``ops`` maps qubit index -> Pauli label.  The register convention is
    little endian (qubit 0 = least significant bit), so qubit 0 is the
    rightmost Kronecker factor.
    """
    out = np.array([[1.0 + 0j]])
    for q in range(n_qubits):
        out = np.kron(PAULI[ops.get(q, "I")], out)
    return out


def dense_heisenberg(n_qubits, bonds, coupling=1.0):
    """H = (J/4) sum_bonds (XX + YY + ZZ), built from explicit Pauli products."""
    dim = 1 << n_qubits
    h = np.zeros((dim, dim), dtype=np.complex128)
    for i, j in bonds:
        for p in "XYZ":
            h += kron_op(n_qubits, {i: p, j: p})
    return 0.25 * coupling * h


def dense_total_spin_sq(n_qubits):
    """S^2 = (1/4) sum_ij (X_i X_j + Y_i Y_j + Z_i Z_j), all ordered pairs."""
    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    for p in "XYZ":
        tot = np.zeros((dim, dim), dtype=np.complex128)
        for i in range(n_qubits):
            tot += kron_op(n_qubits, {i: p})
        out += tot @ tot
    return 0.25 * out


def dense_translation(n_qubits, power=1):
    """Permutation matrix of T^power: content of site i moves to site i+power."""
    dim = 1 << n_qubits
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for x in range(dim):
        y = 0
        for site in range(n_qubits):
            bit = (x >> site) & 1
            y |= bit << ((site + power) % n_qubits)
        mat[y, x] = 1.0
    return mat


def dense_projector(n_qubits, m):
    """P_q = (1/N) sum_n exp(-i q n) T^n with q = 2 pi m / N."""
    dim = 1 << n_qubits
    q = 2.0 * np.pi * m / n_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, n_qubits + 1):
        out += np.exp(-1j * q * n) * dense_translation(n_qubits, n)
    return out / n_qubits


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


def random_state_amps(rng, n_qubits):
    v = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return v / np.linalg.norm(v)
