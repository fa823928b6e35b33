"""Rank-one projective qubit measurements and the channels they induce.

A qubit basis is fixed by two angles::

    b0 = ( cos(theta/2),               e^{i phi} sin(theta/2) )
    b1 = ( -e^{-i phi} sin(theta/2),   cos(theta/2)           )

``b0`` points along the Bloch direction ``(theta, phi)`` and ``b1`` along
its antipode.  The array kernels at the bottom of the module accept stacks of
angles so optimizers can evaluate whole grids in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import WrongArity
from .tensor import DensityMatrix

__all__ = [
    "MeasurementBasis",
    "PairBasis",
    "canonical_angles",
    "basis_unitaries",
    "projectors",
    "measure_one_side",
    "coherence_in_pair_basis",
    "dephase",
    "outcome_probabilities",
    "pair_coherence",
]

_TWO_PI = 2.0 * math.pi


def canonical_angles(theta, phi):
    """Map arbitrary angles to ``theta in [0, pi]``, ``phi in [0, 2 pi)``.

    The returned pair spans the same projector set.  Reflecting ``theta``
    through a pole moves the Bloch vector to the opposite meridian, hence the
    ``phi + pi`` companion shift.
    """
    theta = np.mod(np.asarray(theta, dtype=float), _TWO_PI)
    phi = np.asarray(phi, dtype=float)
    over = theta > math.pi
    theta = np.where(over, _TWO_PI - theta, theta)
    phi = np.mod(np.where(over, phi + math.pi, phi), _TWO_PI)
    # mod can return 2 pi exactly for tiny negative inputs
    phi = np.where(phi >= _TWO_PI, 0.0, phi)
    if theta.ndim == 0:
        return float(theta), float(phi)
    return theta, phi


@dataclass(frozen=True)
class MeasurementBasis:
    theta: float = 0.0
    phi: float = 0.0

    @classmethod
    def canonical(cls, theta, phi) -> "MeasurementBasis":
        return cls(*canonical_angles(theta, phi))

    def vectors(self):
        u = self.unitary()
        return u[:, 0], u[:, 1]

    def unitary(self) -> np.ndarray:
        """2x2 unitary whose columns are ``b0`` and ``b1``."""
        return basis_unitaries(self.theta, self.phi)

    def bloch(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def angle_to(self, other: "MeasurementBasis") -> float:
        """Angle between the two measurement axes, ignoring relabeling and phases.

        Zero iff both bases give the same pair of projectors.
        """
        c = abs(float(self.bloch() @ other.bloch()))
        return math.acos(min(1.0, c))

    def as_dict(self) -> dict:
        return {"theta": self.theta, "phi": self.phi}


@dataclass(frozen=True)
class PairBasis:
    measured: MeasurementBasis
    other: MeasurementBasis

    def unitary(self) -> np.ndarray:
        return np.kron(self.measured.unitary(), self.other.unitary())

    def as_dict(self) -> dict:
        return {"measured": self.measured.as_dict(), "other": self.other.as_dict()}


def basis_unitaries(theta, phi) -> np.ndarray:
    """Stack of basis unitaries, shape ``theta.shape + (2, 2)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    e = np.exp(1j * phi)
    u = np.empty(np.broadcast(theta, phi).shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 0] = e * s
    u[..., 0, 1] = -np.conj(e) * s
    u[..., 1, 1] = c
    return u


def projectors(b: MeasurementBasis):
    """The two rank-one projectors ``|b_k><b_k|``."""
    b0, b1 = b.vectors()
    return np.outer(b0, b0.conj()), np.outer(b1, b1.conj())


def _two_qubit(rho: DensityMatrix) -> np.ndarray:
    if rho.n_parties != 2 or rho.dims != (2, 2):
        raise WrongArity(f"expected a two-qubit state, got dims {rho.dims}")
    return rho.matrix


def _side_index(side) -> int:
    if side in ("first", 0):
        return 0
    if side in ("second", 1):
        return 1
    raise ValueError(f"side must be 'first' or 'second', got {side!r}")


def measure_one_side(rho: DensityMatrix, b: MeasurementBasis, side="first"):
    """Non-selective measurement of one party.

    Returns
    -------
    post_state : DensityMatrix
        ``sum_k (P_k x I) rho (P_k x I)`` (or ``I x P_k`` for ``side="second"``).
    probs : ndarray, shape (2,)
        Outcome probabilities.
    """
    m = _two_qubit(rho)
    k = _side_index(side)
    u = b.unitary()[None]
    post = dephase(m, u, k)[0]
    probs = outcome_probabilities(m, u, k)[0]
    post = 0.5 * (post + post.conj().T)
    return DensityMatrix(post, parties=rho.parties, dims=rho.dims), probs


def coherence_in_pair_basis(rho: DensityMatrix, pb: PairBasis) -> float:
    """Sum of ``|<i j'| rho |k l'>|`` over all entries with ``i != k``.

    ``i, k`` index the measured party's basis; ``j', l'`` run freely over the
    other party's basis, including ``j' != l'``.
    """
    m = _two_qubit(rho)
    u = pb.unitary()
    t = (u.conj().T @ m @ u).reshape(2, 2, 2, 2)
    total = 0.0
    for i in range(2):
        for k in range(2):
            if i != k:
                total += float(np.abs(t[i, :, k, :]).sum())
    return total


# -- batched kernels on raw 4x4 arrays ---------------------------------------


def dephase(m: np.ndarray, u: np.ndarray, side: int = 0) -> np.ndarray:
    """Post-measurement states for a stack of bases ``u`` (shape ``(s, 2, 2)``)."""
    r = m.reshape(2, 2, 2, 2)
    p = np.einsum("sak,sbk->skab", u, u.conj())
    if side == 0:
        out = np.einsum("skax,xbyd,skyc->sabcd", p, r, p)
    else:
        out = np.einsum("skbx,axcy,skyd->sabcd", p, r, p)
    return out.reshape(-1, 4, 4)


def outcome_probabilities(m: np.ndarray, u: np.ndarray, side: int = 0) -> np.ndarray:
    r = m.reshape(2, 2, 2, 2)
    red = np.einsum("ajcj->ac", r) if side == 0 else np.einsum("iaic->ac", r)
    return np.einsum("sak,ac,sck->sk", u.conj(), red, u).real


def pair_coherence(m: np.ndarray, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Batched :func:`coherence_in_pair_basis` with the first party measured.

    Uses Hermiticity: the ``(1, 0)`` block is the adjoint of the ``(0, 1)``
    block, so only the latter is formed.
    """
    # block[b, d] = sum_{a,c} conj(u1[a,0]) rho[a b, c d] u1[c,1]
    tmp = (u1[:, :, 0].conj() @ m.reshape(2, 8)).reshape(-1, 2, 2, 2)
    c = u1[:, :, 1]
    block = tmp[:, :, 0, :] * c[:, 0, None, None] + tmp[:, :, 1, :] * c[:, 1, None, None]
    rot = np.swapaxes(u2.conj(), 1, 2) @ block @ u2
    return 2.0 * np.abs(rot).sum(axis=(1, 2))
