"""Shared oracles for the test suite.

The dense Jordan-Wigner construction below is deliberately independent
of the package's bitset path (kron chains instead of bit arithmetic),
so operator tests compare two routes to the same matrices.
"""

import numpy as np


def dense_jw_creation(n_modes):
    """Dense creation matrices via kron chains, mode 0 fastest index."""
    id2 = np.eye(2)
    z = np.diag([1.0, -1.0])
    u = np.array([[0.0, 0.0], [1.0, 0.0]])
    ops = []
    for i in range(n_modes):
        mats = [z if j < i else (u if j == i else id2) for j in range(n_modes)]
        acc = mats[0]
        for m in mats[1:]:
            acc = np.kron(m, acc)
        ops.append(acc.astype(complex))
    return ops


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def random_unitary(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
