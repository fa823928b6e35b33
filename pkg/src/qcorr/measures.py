"""Quantum discord, Hilbert-Schmidt distance, LMIMD and LEMID.

The two-qubit measures take a :class:`~qcorr.tensor.DensityMatrix` over two
parties.  :func:`measure_pair` and :func:`pair_symmetry_check` apply them to
the two-party states of a larger system built by
:func:`~qcorr.states.pair_state`.

Objectives are exposed through :func:`objective_for` so the same functions can
be handed to :func:`~qcorr.optimizer.oracle_minimize` for cross-checks.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import NotPure, SelfCheckFailed, WrongArity
from .measurement import (
    MeasurementBasis,
    PairBasis,
    basis_unitaries,
    coherence_in_pair_basis,
    dephase,
    outcome_probabilities,
    pair_coherence,
)
from .optimizer import OptimizerConfig, OptimizerReport, minimize
from .states import pair_state
from .tensor import (
    DensityMatrix,
    eig_hermitian,
    entropy_of_spectrum,
    partial_trace,
    von_neumann_entropy,
)

__all__ = [
    "MeasureKind",
    "MeasureResult",
    "DiscordObjective",
    "objective_for",
    "quantum_discord",
    "qd_pure_shortcut",
    "hsd",
    "lmimd",
    "lemid",
    "compute",
    "measure_pair",
    "SymmetryReport",
    "pair_symmetry_check",
    "IDENTITY_TOL",
    "DEGENERATE_GAP",
]

IDENTITY_TOL = 1e-9
DEGENERATE_GAP = 1e-9
_NEGATIVE_TOL = 1e-9
_PURITY_TOL = 1e-8


class MeasureKind(str, enum.Enum):
    QD = "qd"
    HSD = "hsd"
    LMIMD = "lmimd"
    LEMID = "lemid"

    @classmethod
    def parse(cls, s) -> "MeasureKind":
        if isinstance(s, cls):
            return s
        try:
            return cls(str(s).lower())
        except ValueError:
            raise ValueError(f"unknown measure kind {s!r}; choose from {[k.value for k in cls]}") from None


@dataclass(frozen=True)
class MeasureResult:
    """A measure value and where it was attained.

    ``argmin`` is a :class:`MeasurementBasis` for QD and HSD, a
    :class:`PairBasis` for LMIMD and LEMID.  ``report`` is ``None`` for LEMID,
    which involves no search.
    """

    kind: MeasureKind
    value: float
    argmin: Union[MeasurementBasis, PairBasis]
    report: Optional[OptimizerReport] = None
    parties: tuple = (1, 2)
    warnings: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "parties": list(self.parties),
            "argmin": self.argmin.as_dict(),
            "optimizer_report": None if self.report is None else self.report.as_dict(),
            "warnings": list(self.warnings),
            "diagnostics": dict(self.diagnostics),
        }


def _check_pair(rho: DensityMatrix) -> np.ndarray:
    if rho.n_parties != 2 or rho.dims != (2, 2):
        raise WrongArity(f"expected a two-qubit state, got dims {rho.dims}")
    return rho.matrix


def _side(side) -> int:
    if side in ("first", 0):
        return 0
    if side in ("second", 1):
        return 1
    raise ValueError(f"measured_side must be 'first' or 'second', got {side!r}")


def _clamp(v: float) -> float:
    if v < -_NEGATIVE_TOL:
        raise SelfCheckFailed(f"measure evaluated to {v:.3e} < 0")
    return max(0.0, float(v))


def _reduce(post: np.ndarray, side: int) -> np.ndarray:
    r = post.reshape(-1, 2, 2, 2, 2)
    return np.einsum("sajcj->sac", r) if side == 0 else np.einsum("siaic->sac", r)


class DiscordObjective:
    """Discord integrand ``S(rho_m) - S(rho) - S(rho_m^Pi) + S(rho^Pi)``.

    ``rho_m`` is the measured party's reduced state and the ``Pi`` superscript
    marks the post-measurement state.  Every evaluation also checks that
    ``S(rho^Pi) - S(rho_m^Pi)`` equals the average conditional entropy of the
    unmeasured party; the largest mismatch seen is kept in
    ``max_identity_residual``.
    """

    def __init__(self, rho: DensityMatrix, side=0):
        self.m = _check_pair(rho)
        self.side = _side(side)
        red = _reduce(self.m[None], self.side)[0]
        self.offset = von_neumann_entropy(red) - von_neumann_entropy(self.m)
        self.max_identity_residual = 0.0

    def __call__(self, angles) -> np.ndarray:
        angles = np.atleast_2d(angles)
        u = basis_unitaries(angles[:, 0], angles[:, 1])
        post = dephase(self.m, u, self.side)
        s_joint = entropy_of_spectrum(np.linalg.eigvalsh(post))
        s_meas = entropy_of_spectrum(np.linalg.eigvalsh(_reduce(post, self.side)))
        self._self_check(u, s_joint - s_meas)
        return self.offset - s_meas + s_joint

    def _self_check(self, u: np.ndarray, lhs: np.ndarray):
        r = self.m.reshape(2, 2, 2, 2)
        if self.side == 0:
            cond = np.einsum("sak,abcd,sck->skbd", u.conj(), r, u)
        else:
            cond = np.einsum("sbk,abcd,sdk->skac", u.conj(), r, u)
        p = np.einsum("skii->sk", cond).real
        safe = np.where(p > 0, p, 1.0)
        s_cond = entropy_of_spectrum(np.linalg.eigvalsh(cond / safe[:, :, None, None]))
        rhs = np.sum(np.where(p > 0, p * s_cond, 0.0), axis=1)
        resid = float(np.max(np.abs(lhs - rhs)))
        self.max_identity_residual = max(self.max_identity_residual, resid)
        if resid > IDENTITY_TOL:
            raise SelfCheckFailed(f"block-entropy identity violated by {resid:.3e}")


def _hsd_objective(rho: DensityMatrix, side=0):
    m = _check_pair(rho)
    side = _side(side)

    def f(angles):
        angles = np.atleast_2d(angles)
        post = dephase(m, basis_unitaries(angles[:, 0], angles[:, 1]), side)
        return np.sqrt(np.sum(np.abs(m[None] - post) ** 2, axis=(1, 2)))

    return f


def _lmimd_objective(rho: DensityMatrix):
    m = _check_pair(rho)

    def f(angles):
        angles = np.atleast_2d(angles)
        u1 = basis_unitaries(angles[:, 0], angles[:, 1])
        u2 = basis_unitaries(angles[:, 2], angles[:, 3])
        return pair_coherence(m, u1, u2)

    return f


def objective_for(kind, rho: DensityMatrix, measured_side="first"):
    """``(objective, k)`` for the optimized measures (QD, HSD, LMIMD)."""
    kind = MeasureKind.parse(kind)
    if kind is MeasureKind.QD:
        return DiscordObjective(rho, measured_side), 2
    if kind is MeasureKind.HSD:
        return _hsd_objective(rho, measured_side), 2
    if kind is MeasureKind.LMIMD:
        return _lmimd_objective(rho), 4
    raise ValueError("LEMID involves no optimization")


def _ordered_parties(rho: DensityMatrix, side: int) -> tuple:
    return rho.parties if side == 0 else rho.parties[::-1]


def quantum_discord(rho: DensityMatrix, measured_side="first", cfg: Optional[OptimizerConfig] = None) -> MeasureResult:
    """Quantum discord (bits) with a projective measurement on one party."""
    side = _side(measured_side)
    obj = DiscordObjective(rho, side)
    value, argmin, report = minimize(obj, 2, cfg)
    return MeasureResult(
        MeasureKind.QD,
        _clamp(value),
        MeasurementBasis(*argmin),
        report,
        parties=_ordered_parties(rho, side),
        diagnostics={"max_identity_residual": obj.max_identity_residual},
    )


def qd_pure_shortcut(rho: DensityMatrix) -> float:
    """Discord of a pure two-party state: entropy of the first party's reduction."""
    _check_pair(rho)
    purity = rho.purity()
    if abs(purity - 1.0) > _PURITY_TOL:
        raise NotPure(f"purity {purity:.12g} is not within {_PURITY_TOL} of 1")
    return von_neumann_entropy(partial_trace(rho, [rho.parties[0]]))


def hsd(rho: DensityMatrix, measured_side="first", cfg: Optional[OptimizerConfig] = None) -> MeasureResult:
    """Smallest Hilbert-Schmidt distance between ``rho`` and a one-sided dephasing of it."""
    side = _side(measured_side)
    value, argmin, report = minimize(_hsd_objective(rho, side), 2, cfg)
    return MeasureResult(
        MeasureKind.HSD, _clamp(value), MeasurementBasis(*argmin), report,
        parties=_ordered_parties(rho, side),
    )


def _eigen_basis(rho: DensityMatrix, party: int):
    """Basis angles of a party's reduced-state eigenvectors, plus the eigen gap."""
    es = eig_hermitian(partial_trace(rho, [party]))
    v = es.eigenvectors[:, 0]
    theta = 2.0 * math.acos(min(1.0, abs(v[0])))
    phi = float(np.angle(v[1]) - np.angle(v[0])) if abs(v[1]) > 0 else 0.0
    gap = float(es.eigenvalues[0] - es.eigenvalues[1])
    return MeasurementBasis.canonical(theta, phi), gap


def lemid(rho: DensityMatrix) -> MeasureResult:
    """Off-diagonal coherence in the product of the reduced-state eigenbases.

    If either reduced state has an eigenvalue gap below ``DEGENERATE_GAP`` the
    eigenbasis is not unique; the deterministic ordering of
    :func:`~qcorr.tensor.eig_hermitian` picks one and ``warnings`` contains
    ``"DegenerateEigenbasis"``.
    """
    _check_pair(rho)
    b1, gap1 = _eigen_basis(rho, rho.parties[0])
    b2, gap2 = _eigen_basis(rho, rho.parties[1])
    pb = PairBasis(b1, b2)
    warn = ("DegenerateEigenbasis",) if min(gap1, gap2) < DEGENERATE_GAP else ()
    value = _clamp(coherence_in_pair_basis(rho, pb))
    return MeasureResult(
        MeasureKind.LEMID, value, pb, None, parties=rho.parties, warnings=warn,
        diagnostics={"eigen_gaps": [gap1, gap2]},
    )


def lmimd(rho: DensityMatrix, cfg: Optional[OptimizerConfig] = None) -> MeasureResult:
    """Minimal off-diagonal coherence over product bases of both parties.

    The LEMID eigenbasis is fed to the search as an extra start, so the
    result never exceeds LEMID.
    """
    _check_pair(rho)
    eig = lemid(rho).argmin
    start = (eig.measured.theta, eig.measured.phi, eig.other.theta, eig.other.phi)
    value, argmin, report = minimize(_lmimd_objective(rho), 4, cfg, extra_starts=[start])
    pb = PairBasis(MeasurementBasis(*argmin[:2]), MeasurementBasis(*argmin[2:]))
    return MeasureResult(MeasureKind.LMIMD, _clamp(value), pb, report, parties=rho.parties)


def compute(kind, rho: DensityMatrix, cfg: Optional[OptimizerConfig] = None, measured_side="first") -> MeasureResult:
    """Dispatch on :class:`MeasureKind`."""
    kind = MeasureKind.parse(kind)
    if kind is MeasureKind.QD:
        return quantum_discord(rho, measured_side, cfg)
    if kind is MeasureKind.HSD:
        return hsd(rho, measured_side, cfg)
    if kind is MeasureKind.LMIMD:
        return lmimd(rho, cfg)
    return lemid(rho)


def measure_pair(state, n: int, i1: int, i2: int, kind, cfg: Optional[OptimizerConfig] = None,
                 keep=None, measured_side="first") -> MeasureResult:
    """Measure of the n-party two-party ``(i1, i2)`` state; ``i1`` is measured by default."""
    rho = pair_state(state, n, i1, i2, keep=keep)
    return compute(kind, rho, cfg, measured_side)


@dataclass(frozen=True)
class SymmetryReport:
    kind: MeasureKind
    n: int
    values: dict
    spread: float
    symmetric: bool

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "values": {f"{a},{b}": v for (a, b), v in self.values.items()},
            "spread": self.spread,
            "symmetric": self.symmetric,
        }


SYMMETRY_TOL = 1e-6


def pair_symmetry_check(state, n: int, kind, cfg: Optional[OptimizerConfig] = None) -> SymmetryReport:
    """Evaluate a measure on every ordered pair of the first ``n`` parties.

    Pairs whose two-party matrices coincide exactly share one evaluation.
    """
    kind = MeasureKind.parse(kind)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    cache = {}
    values = {}
    for i1, i2 in itertools.permutations(range(1, n + 1), 2):
        rho = pair_state(state, n, i1, i2)
        key = rho.matrix.tobytes()
        if key not in cache:
            cache[key] = compute(kind, rho, cfg).value
        values[(i1, i2)] = cache[key]
    vals = np.array(list(values.values()))
    spread = float(vals.max() - vals.min())
    return SymmetryReport(kind, n, values, spread, spread <= SYMMETRY_TOL)
