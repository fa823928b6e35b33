"""Dense linear algebra on small multipartite systems.

Matrices are plain complex ``numpy`` arrays.  :class:`DensityMatrix` and
:class:`PureKet` wrap an array together with party labels so reductions can
be expressed in terms of the labels rather than axis positions.

Party labels are 1-based integers.  Party 1 is the most significant bit of a
computational-basis index, so ``|110>`` is index 6.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyKeep,
    InvalidDensityMatrix,
    InvalidKet,
    NotHermitian,
    SameParty,
    ShapeMismatch,
    UnknownParty,
    ZeroTrace,
)

__all__ = [
    "TOL_HERM",
    "TOL_TRACE",
    "TOL_PSD",
    "DensityMatrix",
    "PureKet",
    "EigenSystem",
    "kron",
    "partial_trace",
    "pair_contract",
    "eig_hermitian",
    "von_neumann_entropy",
    "entropy_of_spectrum",
    "frobenius_distance",
]

TOL_HERM = 1e-10
TOL_TRACE = 1e-9
TOL_PSD = 1e-9

# smallest acceptable trace of the unnormalized pair contraction
_ZERO_TRACE = 1e-12
# eigenvalues closer than this are treated as degenerate when ordering
_EIG_TIE = 1e-10


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, DensityMatrix):
        return a.matrix
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeMismatch(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def _hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive semidefinite operator over labeled parties.

    Parameters
    ----------
    matrix : array_like
        ``D x D`` complex matrix, ``D = prod(dims)``.
    parties : sequence of int, optional
        Party labels, defaults to ``1..N``.
    dims : sequence of int, optional
        Local dimensions, defaults to qubits.

    Validation uses the module tolerances ``TOL_HERM``, ``TOL_TRACE`` and
    ``TOL_PSD``.
    """

    matrix: np.ndarray
    parties: tuple = None
    dims: tuple = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f"density matrix must be square, got shape {m.shape}")
        dims = self.dims
        if dims is None:
            n = int(round(np.log2(m.shape[0])))
            if 2**n != m.shape[0]:
                raise ShapeMismatch(f"size {m.shape[0]} is not a power of two; pass dims")
            dims = (2,) * n
        dims = tuple(int(d) for d in dims)
        parties = tuple(range(1, len(dims) + 1)) if self.parties is None else tuple(int(p) for p in self.parties)
        if len(parties) != len(dims):
            raise ShapeMismatch("parties and dims differ in length")
        if len(set(parties)) != len(parties):
            raise ShapeMismatch(f"duplicate party labels in {parties}")
        if int(np.prod(dims)) != m.shape[0]:
            raise ShapeMismatch(f"dims {dims} do not match matrix size {m.shape[0]}")

        herm = _hermiticity_error(m)
        if herm > TOL_HERM:
            raise NotHermitian(f"max |rho - rho^dagger| = {herm:.3e} exceeds {TOL_HERM}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TOL_TRACE:
            raise InvalidDensityMatrix(f"trace {tr.real:.12g} differs from 1")
        lam_min = float(np.linalg.eigvalsh(m)[0])
        if lam_min < -TOL_PSD:
            raise InvalidDensityMatrix(f"negative eigenvalue {lam_min:.3e}")

        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    @property
    def shape(self):
        return self.matrix.shape

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def index_of(self, party: int) -> int:
        try:
            return self.parties.index(party)
        except ValueError:
            raise UnknownParty(f"party {party} not in {self.parties}") from None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class PureKet:
    """Normalized amplitude vector over N labeled qubits."""

    amplitudes: np.ndarray
    parties: tuple = None

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        n = int(round(np.log2(v.size))) if v.size else -1
        if n < 1 or 2**n != v.size:
            raise InvalidKet(f"amplitude count {v.size} is not 2^N with N >= 1")
        norm2 = float(np.vdot(v, v).real)
        if abs(norm2 - 1.0) > 1e-9:
            raise InvalidKet(f"squared norm {norm2:.12g} differs from 1")
        parties = tuple(range(1, n + 1)) if self.parties is None else tuple(self.parties)
        if len(parties) != n:
            raise InvalidKet("party label count does not match amplitude count")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "parties", parties)

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    @property
    def dims(self):
        return (2,) * self.n_parties


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices (or vectors)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _split(rho: DensityMatrix) -> np.ndarray:
    return rho.matrix.reshape(rho.dims + rho.dims)


def _keep_positions(rho: DensityMatrix, keep: Iterable[int]) -> list:
    keep = set(keep)
    if not keep:
        raise EmptyKeep("keep set is empty")
    for p in keep:
        rho.index_of(p)
    return [i for i, p in enumerate(rho.parties) if p in keep]


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every party not in ``keep``.

    Kept parties stay in their original relative order.
    """
    pos = _keep_positions(rho, keep)
    n = rho.n_parties
    if len(pos) == n:
        return rho
    t = _split(rho)
    traced = [i for i in range(n) if i not in pos]
    # contract matching row/column axes of the discarded parties
    row = list(range(n))
    col = list(range(n, 2 * n))
    for i in traced:
        col[i] = row[i]
    out_idx = [row[i] for i in pos] + [col[i] for i in pos]
    red = np.einsum(t, row + col, out_idx)
    d = int(np.prod([rho.dims[i] for i in pos]))
    return DensityMatrix(
        red.reshape(d, d),
        parties=[rho.parties[i] for i in pos],
        dims=[rho.dims[i] for i in pos],
    )


def pair_contract(rho: DensityMatrix, i1: int, i2: int) -> DensityMatrix:
    """Two-party state of ``(i1, i2)`` that keeps cross-configuration coherences.

    Row and column indices of every other party are summed independently,
    i.e. ``sigma = <u| rho |u>`` with ``|u>`` the unnormalized all-ones vector
    on the discarded parties, then ``sigma`` is normalized to unit trace.
    Unlike the partial trace this turns a pure GHZ or W state into a pure
    two-party state.

    Raises
    ------
    SameParty
        If ``i1 == i2``.
    ZeroTrace
        If the contraction annihilates the state.
    """
    if i1 == i2:
        raise SameParty(f"pair parties must differ, got ({i1}, {i2})")
    a, b = rho.index_of(i1), rho.index_of(i2)
    n = rho.n_parties
    if n == 2:
        if (a, b) == (0, 1):
            return rho
        return DensityMatrix(
            _split(rho).transpose(1, 0, 3, 2).reshape(rho.matrix.shape),
            parties=(i1, i2),
            dims=(rho.dims[b], rho.dims[a]),
        )
    rest = [i for i in range(n) if i not in (a, b)]
    t = _split(rho).transpose([a, b] + rest + [n + a, n + b] + [n + i for i in rest])
    da, db = rho.dims[a], rho.dims[b]
    dr = int(np.prod([rho.dims[i] for i in rest]))
    sigma = t.reshape(da, db, dr, da, db, dr).sum(axis=(2, 5)).reshape(da * db, da * db)
    tr = np.trace(sigma).real
    if tr < _ZERO_TRACE:
        raise ZeroTrace(f"contraction onto ({i1}, {i2}) has trace {tr:.3e}")
    sigma = sigma / tr
    # remove rounding asymmetry before validation
    sigma = 0.5 * (sigma + sigma.conj().T)
    return DensityMatrix(sigma, parties=(i1, i2), dims=(da, db))


def _phase_normalize(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size == 0:
        return v
    c = v[nz[0]]
    return v * (abs(c) / c)


def _lex_key(v: np.ndarray):
    r = np.round(v, 12)
    return tuple(x for c in r for x in (-c.real, -c.imag))


def eig_hermitian(a) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix.

    Eigenvalues come out in descending order.  Each eigenvector is rescaled so
    its first nonzero component is real positive, and eigenvectors sharing an
    eigenvalue are ordered lexicographically (larger first), so the result is
    reproducible across runs.
    """
    m = _as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"matrix must be square, got {m.shape}")
    herm = _hermiticity_error(m)
    if herm > TOL_HERM:
        raise NotHermitian(f"max |A - A^dagger| = {herm:.3e} exceeds {TOL_HERM}")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w, v = w[::-1], v[:, ::-1]
    cols = [_phase_normalize(v[:, k]) for k in range(v.shape[1])]

    order = []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[start] - w[k] > _EIG_TIE:
            group = list(range(start, k))
            order.extend(sorted(group, key=lambda j: _lex_key(cols[j])))
            start = k
    vecs = np.column_stack([cols[j] for j in order])
    return EigenSystem(np.array(w[order]), vecs)


def entropy_of_spectrum(eigenvalues) -> np.ndarray:
    """Shannon entropy in bits along the last axis, with ``0 log 0 = 0``."""
    lam = np.clip(np.real(eigenvalues), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0.0, -lam * np.log2(lam), 0.0)
    return terms.sum(axis=-1)


def von_neumann_entropy(rho) -> float:
    """``-Tr rho log2 rho`` in bits."""
    m = _as_matrix(rho)
    return float(entropy_of_spectrum(np.linalg.eigvalsh(m)))


def frobenius_distance(a, b) -> float:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2)))
