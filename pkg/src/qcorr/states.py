"""State constructors: GHZ-like and W families, user amplitudes, pair states."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import BadPartyCount, BadStateSpec, UnknownParty
from .tensor import DensityMatrix, PureKet, pair_contract, partial_trace

__all__ = [
    "StateSpec",
    "ghz_like",
    "w_state",
    "custom_state",
    "density_of",
    "pair_state",
    "load_state_spec",
]

_CUSTOM_NORM_TOL = 1e-6


def ghz_like(n: int, alpha: float) -> PureKet:
    """``cos(alpha)|1...1> + sin(alpha)|0...0>`` on ``n`` qubits.

    ``alpha`` outside ``[0, pi]`` is folded back modulo ``pi`` (a shift by
    ``pi`` is a global sign) and a warning is emitted.
    """
    if n < 2:
        raise BadPartyCount(f"GHZ-like state needs n >= 2, got {n}")
    if not 0.0 <= alpha <= math.pi:
        folded = math.fmod(alpha, math.pi)
        if folded < 0:
            folded += math.pi
        warnings.warn(f"alpha={alpha!r} folded into [0, pi] as {folded!r}", stacklevel=2)
        alpha = folded
    amps = np.zeros(2**n, dtype=complex)
    amps[-1] = math.cos(alpha)
    amps[0] = math.sin(alpha)
    return PureKet(amps)


def w_state(n: int) -> PureKet:
    """Uniform superposition of the ``n`` single-excitation kets."""
    if n < 3:
        raise BadPartyCount(f"W state needs n >= 3, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[[1 << k for k in range(n)]] = 1.0 / math.sqrt(n)
    return PureKet(amps)


def _parse_amplitude(a) -> complex:
    if isinstance(a, (list, tuple)):
        if len(a) != 2:
            raise BadStateSpec(f"amplitude {a!r} must be [re, im]")
        return complex(float(a[0]), float(a[1]))
    return complex(a)


def custom_state(amplitudes: Sequence, n: Optional[int] = None) -> PureKet:
    """Ket from user amplitudes, renormalized if the norm is within 1e-6 of one."""
    v = np.array([_parse_amplitude(a) for a in amplitudes], dtype=complex)
    if n is not None and v.size != 2**n:
        raise BadStateSpec(f"expected {2**n} amplitudes for n={n}, got {v.size}")
    if v.size < 2 or v.size & (v.size - 1):
        raise BadStateSpec(f"amplitude count {v.size} is not a power of two")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > _CUSTOM_NORM_TOL:
        raise BadStateSpec(f"amplitude norm {norm:.9g} is not within {_CUSTOM_NORM_TOL} of 1")
    return PureKet(v / norm)


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a pure N-qubit state."""

    kind: str
    n_parties: int
    alpha: Optional[float] = None
    amplitudes: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("ghz_like", "w", "custom"):
            raise BadStateSpec(f"unknown state kind {self.kind!r}")
        if self.kind == "ghz_like" and self.alpha is None:
            raise BadStateSpec("ghz_like requires alpha")
        if self.kind == "custom" and self.amplitudes is None:
            raise BadStateSpec("custom requires amplitudes")

    def ket(self) -> PureKet:
        if self.kind == "ghz_like":
            return ghz_like(self.n_parties, self.alpha)
        if self.kind == "w":
            return w_state(self.n_parties)
        return custom_state(self.amplitudes, self.n_parties)

    def density(self) -> DensityMatrix:
        return density_of(self.ket())

    @classmethod
    def from_dict(cls, d: dict) -> "StateSpec":
        """Parse ``{"kind", "n", "alpha"?, "amplitudes"?}``."""
        try:
            kind = d["kind"]
            n = int(d["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BadStateSpec(f"state spec needs 'kind' and integer 'n': {exc}") from None
        alpha = d.get("alpha")
        amps = d.get("amplitudes")
        return cls(
            kind=kind,
            n_parties=n,
            alpha=None if alpha is None else float(alpha),
            amplitudes=None if amps is None else tuple(tuple(a) if isinstance(a, list) else a for a in amps),
        )

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n_parties}
        if self.alpha is not None:
            d["alpha"] = self.alpha
        if self.amplitudes is not None:
            d["amplitudes"] = [[_parse_amplitude(a).real, _parse_amplitude(a).imag] for a in self.amplitudes]
        return d


def load_state_spec(path) -> StateSpec:
    with open(Path(path)) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadStateSpec(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise BadStateSpec(f"{path}: top-level JSON value must be an object")
    return StateSpec.from_dict(data)


def density_of(ket: PureKet) -> DensityMatrix:
    v = ket.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), parties=ket.parties, dims=ket.dims)


def _as_density(state) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureKet):
        return density_of(state)
    if isinstance(state, StateSpec):
        return state.density()
    raise TypeError(f"cannot build a density matrix from {type(state).__name__}")


def pair_state(state, n: int, i1: int, i2: int, keep=None) -> DensityMatrix:
    """The n-party two-party ``(i1, i2)`` density matrix.

    The full state is reduced to ``n`` parties by partial trace (keeping the
    first ``n`` labels unless ``keep`` is given) and then contracted onto the
    pair with :func:`~qcorr.tensor.pair_contract`.

    Parameters
    ----------
    state : StateSpec, PureKet or DensityMatrix
    n : int
        Size of the intermediate reduced state, ``2 <= n <= N``.
    i1, i2 : int
        Pair labels; ``i1`` is listed first in the result.
    keep : iterable of int, optional
        Explicit set of ``n`` parties to keep.
    """
    rho = _as_density(state)
    big_n = rho.n_parties
    if not 2 <= n <= big_n:
        raise BadPartyCount(f"reduction size n={n} must satisfy 2 <= n <= {big_n}")
    keep = list(rho.parties[:n]) if keep is None else sorted(set(keep))
    if len(keep) != n:
        raise BadPartyCount(f"keep set {keep} does not have n={n} parties")
    for p in (i1, i2):
        if p not in keep:
            raise UnknownParty(f"party {p} is not among the kept parties {keep}")
    rho_n = partial_trace(rho, keep)
    return pair_contract(rho_n, i1, i2)
