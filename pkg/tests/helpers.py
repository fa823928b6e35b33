"""Random states for property tests (kept out of the public API)."""

import numpy as np
from scipy.stats import unitary_group

from qcorr.tensor import DensityMatrix


def random_density(rng, n_qubits=2, rank=None):
    d = 2**n_qubits
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure(rng, n_qubits=2):
    return random_density(rng, n_qubits, rank=1)


def random_unitary(rng, d=2):
    return unitary_group.rvs(d, random_state=rng)


def random_product(rng):
    a = random_density(rng, 1).matrix
    b = random_density(rng, 1).matrix
    return DensityMatrix(np.kron(a, b))


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return g + g.conj().T


BELL = DensityMatrix(np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2)
