"""Global minimization over measurement angles.

Objectives take a float array of shape ``(s, k)`` -- rows of
``(theta, phi)`` or ``(theta1, phi1, theta2, phi2)`` -- and return ``s``
values.  :func:`minimize` scans a fixed grid and polishes the best grid point
with a downhill simplex; :func:`oracle_minimize` is a plain dense grid used to
cross-check it.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Callable, Optional

import numpy as np
from scipy import optimize as _spo

from .errors import NonFinite
from .measurement import canonical_angles

__all__ = [
    "OptimizerConfig",
    "OptimizerReport",
    "Minimum",
    "minimize",
    "oracle_minimize",
    "canonicalize",
    "config_from_env",
    "CONFIG_ENV_VAR",
]

CONFIG_ENV_VAR = "QCORR_OPT_CONFIG"

Objective = Callable[[np.ndarray], np.ndarray]

# grid values this close to the best are ties; the lexicographically first wins
_TIE_TOL = 1e-12
_CHUNK = 200_000
# grid points whose axes agree this closely are the same measurement
_SAME_AXIS_TOL = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    """Search settings.

    ``grid_points_*`` apply to one-sided (2-angle) searches; the
    ``pair_grid_points_*`` fields give the per-party grid of the 4-angle
    search.  The ``refine_seeds`` best distinct grid local minima are polished, each
    simplex being rebuilt up to ``refine_restarts`` times after it
    converges.  ``multistart > 0`` adds that many seeded random starts.
    """

    grid_points_theta: int = 61
    grid_points_phi: int = 120
    pair_grid_points_theta: int = 21
    pair_grid_points_phi: int = 40
    refine_max_iter: int = 400
    refine_tol: float = 1e-10
    simplex_scale: float = 0.05
    refine_seeds: int = 8
    refine_restarts: int = 3
    multistart: int = 0
    seed: int = 0

    def __post_init__(self):
        for name in ("grid_points_theta", "grid_points_phi", "pair_grid_points_theta",
                     "pair_grid_points_phi", "refine_max_iter"):
            if int(getattr(self, name)) < 2:
                raise ValueError(f"{name} must be >= 2")
        if not self.refine_tol > 0 or not self.simplex_scale > 0:
            raise ValueError("refine_tol and simplex_scale must be positive")
        if self.multistart < 0 or self.refine_restarts < 0 or self.refine_seeds < 1:
            raise ValueError("multistart and refine_restarts must be >= 0, refine_seeds >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown optimizer config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


def config_from_env(base: Optional[OptimizerConfig] = None) -> OptimizerConfig:
    """Apply the JSON file named by ``$QCORR_OPT_CONFIG`` on top of ``base``."""
    base = base or OptimizerConfig()
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return base
    with open(path) as fh:
        overrides = json.load(fh)
    OptimizerConfig.from_dict(overrides)  # reject unknown keys early
    return replace(base, **overrides)


@dataclass(frozen=True)
class OptimizerReport:
    evaluations: int
    iterations: int
    converged: bool
    grid_value: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Minimum:
    value: float
    argmin: tuple
    report: OptimizerReport

    def __iter__(self):
        return iter((self.value, self.argmin, self.report))


def canonicalize(x) -> tuple:
    """Fold each ``(theta, phi)`` pair of ``x`` into the canonical domain."""
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    out = []
    for t, p in x:
        out.extend(canonical_angles(t, p))
    return tuple(out)


def _axes(k: int, n_theta: int, n_phi: int):
    theta = np.linspace(0.0, math.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    return [theta, phi] * (k // 2)


def _check_k(k: int):
    if k not in (2, 4):
        raise ValueError(f"k must be 2 or 4, got {k}")


def _eval_product_grid(objective: Objective, axes) -> np.ndarray:
    """Objective on the Cartesian product of ``axes``, C order (last axis fastest)."""
    shape = tuple(len(a) for a in axes)
    total = int(np.prod(shape))
    out = np.empty(total)
    for start in range(0, total, _CHUNK):
        idx = np.unravel_index(np.arange(start, min(start + _CHUNK, total)), shape)
        pts = np.column_stack([a[i] for a, i in zip(axes, idx)])
        vals = np.asarray(objective(pts), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NonFinite("objective returned a non-finite value on the grid")
        out[start:start + len(vals)] = vals
    return out


def _grid_point(axes, flat: int) -> np.ndarray:
    idx = np.unravel_index(flat, tuple(len(a) for a in axes))
    return np.array([a[i] for a, i in zip(axes, idx)])


def _grid_local_minima(values: np.ndarray, shape) -> np.ndarray:
    """Flat indices of grid points no larger than any axis neighbour, best first."""
    v = values.reshape(shape)
    is_min = np.ones(shape, dtype=bool)
    for ax in range(len(shape)):
        for step in (1, -1):
            is_min &= v <= np.roll(v, step, axis=ax)
    flat = np.flatnonzero(is_min.ravel())
    # stable sort keeps lexicographic order among equal values
    return flat[np.argsort(values[flat], kind="stable")]


def _axes_of(x) -> np.ndarray:
    """Bloch axes (one row per party) of an angle vector."""
    t, p = np.asarray(x, dtype=float).reshape(-1, 2).T
    return np.column_stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])


def _same_measurement(x, y) -> bool:
    """True if ``x`` and ``y`` give every party the same projector pair."""
    dots = np.abs(np.sum(_axes_of(x) * _axes_of(y), axis=1))
    return bool(np.all(dots > 1.0 - _SAME_AXIS_TOL))


def _nelder_mead(scalar, start, cfg: OptimizerConfig):
    """Simplex descent from ``start``, rebuilding the simplex after each convergence."""
    k = len(start)
    x, fx = np.asarray(start, dtype=float), scalar(start)
    nfev = nit = 0
    converged = True
    for _ in range(cfg.refine_restarts + 1):
        simplex = np.vstack([x, x + cfg.simplex_scale * np.eye(k)])
        res = _spo.minimize(
            scalar,
            x,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "maxiter": cfg.refine_max_iter,
                "maxfev": 4 * cfg.refine_max_iter,
                "fatol": cfg.refine_tol,
                "xatol": 1e-9,
            },
        )
        nfev += int(res.nfev)
        nit += int(res.nit)
        converged = bool(res.success)
        if not res.fun < fx - cfg.refine_tol:
            if res.fun < fx:
                x, fx = np.asarray(res.x), float(res.fun)
            break
        x, fx = np.asarray(res.x), float(res.fun)
    return x, fx, nfev + 1, nit, converged


def minimize(objective: Objective, k: int, cfg: Optional[OptimizerConfig] = None,
             extra_starts=()) -> Minimum:
    """Grid scan followed by Nelder-Mead refinement.

    The grid is ``grid_points_theta`` values of theta on ``[0, pi]`` and
    ``grid_points_phi`` values of phi on ``[0, 2 pi)`` per party.  Among grid
    values within 1e-12 of the best, the lexicographically smallest angle
    tuple is the primary seed; the next best grid local minima are polished
    as well.  The simplex works on unbounded angles; the objective is
    periodic, so only the reported argmin is folded back to the canonical
    domain.  A refined point replaces the incumbent only if it improves on
    it by more than the tie tolerance, which keeps flat directions pinned to
    the deterministic grid choice.

    ``extra_starts`` are additional known-feasible points (for example an
    eigenbasis); each is evaluated and refined like a grid seed, so the
    result is never worse than any of them.
    """
    _check_k(k)
    cfg = cfg or OptimizerConfig()
    if k == 2:
        axes = _axes(2, cfg.grid_points_theta, cfg.grid_points_phi)
    else:
        axes = _axes(4, cfg.pair_grid_points_theta, cfg.pair_grid_points_phi)
    shape = tuple(len(a) for a in axes)
    values = _eval_product_grid(objective, axes)
    grid_best = float(values.min())
    seed_flat = int(np.flatnonzero(values <= grid_best + _TIE_TOL)[0])

    def scalar(x):
        v = float(np.asarray(objective(np.asarray(x, dtype=float)[None, :]))[0])
        if not math.isfinite(v):
            raise NonFinite(f"objective returned {v} at {x}")
        return v

    # (theta, phi) and (pi - theta, phi + pi) are the same projectors with the
    # labels swapped, so grid minima repeat; refine one copy of each
    starts = [_grid_point(axes, seed_flat)]
    for flat in _grid_local_minima(values, shape):
        if len(starts) >= cfg.refine_seeds:
            break
        x = _grid_point(axes, flat)
        if not any(_same_measurement(x, s) for s in starts):
            starts.append(x)
    starts += [np.asarray(x, dtype=float).reshape(k) for x in extra_starts]
    if cfg.multistart:
        rng = np.random.default_rng(cfg.seed)
        scale = np.array([math.pi, 2.0 * math.pi] * (k // 2))
        starts += [rng.uniform(0.0, 1.0, size=k) * scale for _ in range(cfg.multistart)]

    best_x, best_v = starts[0], float(values[seed_flat])
    evaluations, iterations, converged = values.size, 0, True
    for i, start in enumerate(starts):
        x, fx, nfev, nit, ok = _nelder_mead(scalar, start, cfg)
        evaluations += nfev
        iterations += nit
        if i == 0:
            converged = ok
        if fx < best_v - _TIE_TOL:
            best_x, best_v = x, fx
            converged = ok

    report = OptimizerReport(evaluations, iterations, converged, grid_best)
    return Minimum(best_v, canonicalize(best_x), report)


def oracle_minimize(objective: Objective, k: int, resolution: int) -> float:
    """Brute-force minimum over a dense grid, without any refinement.

    Each party gets ``resolution`` theta values on ``[0, pi]`` and
    ``2 * (resolution - 1)`` phi values on ``[0, 2 pi)`` -- the same step in
    both angles, e.g. 181 x 360 at ``resolution=181``.
    """
    _check_k(k)
    floor = 90 if k == 2 else 36
    if resolution < floor:
        raise ValueError(f"oracle resolution must be >= {floor} for k={k}, got {resolution}")
    theta = np.linspace(0.0, math.pi, resolution)
    phi = np.arange(2 * (resolution - 1)) * (math.pi / (resolution - 1))
    best = math.inf
    if k == 2:
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        pts = np.column_stack([tt.ravel(), pp.ravel()])
        for start in range(0, len(pts), _CHUNK):
            best = min(best, _finite_min(objective(pts[start:start + _CHUNK])))
        return best
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    party = np.column_stack([tt.ravel(), pp.ravel()])
    # one block per first-party direction keeps memory flat
    for t1, p1 in party:
        rows = np.empty((len(party), 4))
        rows[:, 0], rows[:, 1] = t1, p1
        rows[:, 2:] = party
        best = min(best, _finite_min(objective(rows)))
    return best


def _finite_min(vals) -> float:
    vals = np.asarray(vals, dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFinite("objective returned a non-finite value")
    return float(vals.min())
