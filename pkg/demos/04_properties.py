"""
Sanity properties on random states
==================================

A few facts that hold for any two-qubit state: products carry no
correlation, local unitaries change nothing, LMIMD never exceeds LEMID, and
on pure states the discord is the entropy of either reduction.
"""

import numpy as np
from scipy.stats import unitary_group

from qcorr import DensityMatrix, compute
from qcorr.measures import lemid, lmimd, qd_pure_shortcut

rng = np.random.default_rng(0)


def random_state(rank=4):
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


a, b = (random_state(2).matrix[:2, :2] for _ in range(2))
product = DensityMatrix(np.kron(a / np.trace(a), b / np.trace(b)))
print("product state:", {k: round(compute(k, product).value, 9) for k in ("qd", "hsd", "lmimd", "lemid")})

rho = random_state()
u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
rotated = DensityMatrix(u @ rho.matrix @ u.conj().T)
for kind in ("qd", "hsd", "lmimd"):
    print(f"{kind:>5} before/after a local unitary: {compute(kind, rho).value:.6f} {compute(kind, rotated).value:.6f}")

print(f"LMIMD {lmimd(rho).value:.6f} <= LEMID {lemid(rho).value:.6f}")

pure = random_state(rank=1)
print(f"pure state: QD {compute('qd', pure).value:.6f}, entropy of reduction {qd_pure_shortcut(pure):.6f}")
