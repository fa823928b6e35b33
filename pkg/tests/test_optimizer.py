import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcorr import optimizer
from qcorr.errors import NonFinite
from qcorr.optimizer import (
    CONFIG_ENV_VAR,
    OptimizerConfig,
    _same_measurement,
    canonicalize,
    config_from_env,
    minimize,
    oracle_minimize,
)


def _bloch_z(angles):
    """<n|z> for the b0 direction; minimum -1 at theta = pi."""
    return np.cos(np.atleast_2d(angles)[:, 0])


_A = np.array([[0.3, 0.1, -0.2], [0.1, -0.5, 0.05], [-0.2, 0.05, 0.2]])
_B = np.array([0.1, -0.2, 0.15])


def _bloch(a):
    t, p = a[:, 0], a[:, 1]
    return np.column_stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])


def _smooth2(angles):
    """Quadratic form on the Bloch sphere, so invariant under the angle fold."""
    n = _bloch(np.atleast_2d(angles))
    return np.einsum("si,ij,sj->s", n, _A, n) + n @ _B


def test_minimize_finds_pole():
    value, argmin, report = minimize(_bloch_z, 2)
    assert value == pytest.approx(-1, abs=1e-12)
    assert argmin[0] == pytest.approx(math.pi, abs=1e-5)
    assert report.evaluations > 61 * 120
    assert report.grid_value == pytest.approx(-1)


def test_minimize_beats_dense_grid():
    value = minimize(_smooth2, 2).value
    assert value <= oracle_minimize(_smooth2, 2, 361) + 1e-12


def test_minimize_four_angles_separable():
    def f(a):
        a = np.atleast_2d(a)
        return _smooth2(a[:, :2]) + _smooth2(a[:, 2:])

    value, argmin, _ = minimize(f, 4)
    assert value == pytest.approx(2 * minimize(_smooth2, 2).value, abs=1e-9)
    assert len(argmin) == 4


def test_minimize_deterministic():
    cfg = OptimizerConfig(multistart=3, seed=7)
    a = minimize(_smooth2, 2, cfg)
    b = minimize(_smooth2, 2, cfg)
    assert a.value == b.value and a.argmin == b.argmin


def test_constant_objective_returns_grid_origin():
    value, argmin, _ = minimize(lambda a: np.zeros(len(np.atleast_2d(a))), 2)
    assert value == 0 and argmin == (0.0, 0.0)


def test_extra_start_is_used():
    # narrow well invisible to a coarse grid
    center = np.array([1.234, 4.321])

    def well(a):
        a = np.atleast_2d(a)
        d2 = np.sum((a - center) ** 2, axis=1)
        return 1 - np.exp(-d2 / 1e-4)

    cfg = OptimizerConfig(grid_points_theta=5, grid_points_phi=6, refine_seeds=1)
    assert minimize(well, 2, cfg).value > 0.5
    assert minimize(well, 2, cfg, extra_starts=[center + 0.001]).value < 1e-8


def test_non_finite_objective_raises():
    with pytest.raises(NonFinite):
        minimize(lambda a: np.full(len(np.atleast_2d(a)), np.nan), 2)
    with pytest.raises(NonFinite):
        oracle_minimize(lambda a: np.full(len(np.atleast_2d(a)), np.inf), 2, 90)


def test_bad_k_and_resolution():
    with pytest.raises(ValueError):
        minimize(_bloch_z, 3)
    with pytest.raises(ValueError):
        oracle_minimize(_bloch_z, 2, 89)
    with pytest.raises(ValueError):
        oracle_minimize(_bloch_z, 4, 35)


def test_oracle_grid_shape():
    seen = []

    def record(a):
        seen.append(np.array(a))
        return np.zeros(len(a))

    oracle_minimize(record, 2, 91)
    pts = np.vstack(seen)
    assert len(pts) == 91 * 180
    assert np.unique(pts[:, 0]).size == 91 and np.unique(pts[:, 1]).size == 180
    assert pts[:, 1].max() < 2 * math.pi


@settings(max_examples=100)
@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=4, max_size=4))
def test_canonicalize_domain(x):
    out = canonicalize(x)
    for t, p in zip(out[::2], out[1::2]):
        assert 0 <= t <= math.pi and 0 <= p < 2 * math.pi


def test_config_validation_and_dict():
    cfg = OptimizerConfig(grid_points_theta=31)
    assert OptimizerConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ValueError):
        OptimizerConfig.from_dict({"grid_size": 3})
    with pytest.raises(ValueError):
        OptimizerConfig(grid_points_phi=1)
    with pytest.raises(ValueError):
        OptimizerConfig(refine_tol=0)


def test_config_from_env(tmp_path, monkeypatch):
    path = tmp_path / "opt.json"
    path.write_text(json.dumps({"grid_points_theta": 11, "seed": 3}))
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    cfg = config_from_env()
    assert cfg.grid_points_theta == 11 and cfg.seed == 3 and cfg.grid_points_phi == 120
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError):
        config_from_env()
    monkeypatch.delenv(CONFIG_ENV_VAR)
    assert config_from_env() == OptimizerConfig()


def test_same_measurement():
    assert _same_measurement([0.3, 1.0], [math.pi - 0.3, 1.0 + math.pi])
    assert _same_measurement([0.0, 0.0], [0.0, 2.5])
    assert not _same_measurement([0.3, 1.0, 0.2, 0.0], [0.3, 1.0, 0.2, math.pi / 2])


def test_relabeled_grid_copies_are_refined_once(monkeypatch):
    starts = []
    real = optimizer._nelder_mead

    def spy(scalar, start, cfg):
        starts.append(np.array(start))
        return real(scalar, start, cfg)

    monkeypatch.setattr(optimizer, "_nelder_mead", spy)
    minimize(_smooth2, 2, OptimizerConfig(refine_seeds=6))
    assert len(starts) >= 2
    for i, a in enumerate(starts):
        for b in starts[:i]:
            assert not _same_measurement(a, b)
