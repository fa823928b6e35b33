"""Analytic reference values for the GHZ-like and W families.

Used as expected values by :mod:`qcorr.verify`; none of these go through the
optimizer.
"""

import math

import numpy as np

__all__ = [
    "ghz_qd",
    "ghz_hsd",
    "ghz_lmimd",
    "ghz_pair_pure",
    "ghz_pair_mixed",
    "w_pair_pure",
    "w_pair_reduced",
    "FORMULAS",
    "MATRICES",
]


def ghz_qd(alpha: float) -> float:
    """Binary entropy of ``cos^2 alpha`` in bits."""
    total = 0.0
    for p in (math.cos(alpha) ** 2, math.sin(alpha) ** 2):
        if p > 0:
            total -= p * math.log2(p)
    return total


def ghz_hsd(alpha: float) -> float:
    inner = 0.5 * (3.0 - math.cos(4 * alpha) - 2.0 * math.cos(2 * alpha) ** 2)
    # inner is 2 sin^2(2 alpha); rounding can push it a hair below zero
    return 0.5 * math.sqrt(max(inner, 0.0))


def ghz_lmimd(alpha: float) -> float:
    return abs(math.sin(2 * alpha))


def _ket2dm(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def ghz_pair_pure(alpha: float) -> np.ndarray:
    """``cos a |11> + sin a |00>`` as a density matrix."""
    return _ket2dm([math.sin(alpha), 0, 0, math.cos(alpha)])


def ghz_pair_mixed(alpha: float) -> np.ndarray:
    """``cos^2 a |11><11| + sin^2 a |00><00|``."""
    return np.diag([math.sin(alpha) ** 2, 0, 0, math.cos(alpha) ** 2]).astype(complex)


def w_pair_pure(alpha: float = 0.0) -> np.ndarray:
    """``(|10> + |01> + |00>) / sqrt(3)`` as a density matrix."""
    return _ket2dm(np.array([1, 1, 1, 0]) / math.sqrt(3))


def w_pair_reduced(alpha: float = 0.0) -> np.ndarray:
    """``(1/3)|10+01><10+01| + (1/3)|00><00|`` (the ket is unnormalized)."""
    return (_ket2dm([0, 1, 1, 0]) + _ket2dm([1, 0, 0, 0])) / 3.0


FORMULAS = {"ghz_qd": ghz_qd, "ghz_hsd": ghz_hsd, "ghz_lmimd": ghz_lmimd}
MATRICES = {
    "ghz_pair_pure": ghz_pair_pure,
    "ghz_pair_mixed": ghz_pair_mixed,
    "w_pair_pure": w_pair_pure,
    "w_pair_reduced": w_pair_reduced,
}
