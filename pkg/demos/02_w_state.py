"""
The W state: full pair versus partial trace
===========================================

Two ways of extracting a two-party object from the three-qubit W state give
very different pictures.  Contracting the third index keeps the amplitude
structure and leaves a pure state; tracing it out leaves a mixture.
"""

import numpy as np

from qcorr import StateSpec, compute, pair_state
from qcorr.tensor import eig_hermitian, partial_trace

w = StateSpec("w", 3)

pure = pair_state(w, 3, 1, 2)      # n = 3: pair contraction of the whole state
mixed = pair_state(w, 2, 1, 2)     # n = 2: plain partial trace onto parties 1, 2

np.set_printoptions(precision=4, suppress=True)
print("contracted pair\n", pure.matrix.real)
print("reduced pair\n", mixed.matrix.real)

# spectra of the single-party reductions
for name, rho in (("contracted", pure), ("reduced", mixed)):
    lam = eig_hermitian(partial_trace(rho, [1])).eigenvalues
    print(f"{name:>10} party-1 spectrum: {lam}")

# The optimized measures, with the basis each one settles on
for name, rho in (("contracted", pure), ("reduced", mixed)):
    for kind in ("qd", "hsd", "lmimd", "lemid"):
        res = compute(kind, rho)
        print(f"{name:>10} {kind:>5} = {res.value:.6f}   argmin {res.argmin.as_dict()}")
