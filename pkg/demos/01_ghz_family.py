"""
Correlations along the GHZ-like family
======================================

For ``cos(a)|1...1> + sin(a)|0...0>`` every pair carries the same correlations,
and the three optimized measures have closed forms.  This script sweeps ``a``
and prints the numerical values next to them.
"""

import math

import numpy as np

from qcorr import StateSpec, measure_pair
from qcorr.closed_forms import ghz_hsd, ghz_lmimd, ghz_qd

# a four-qubit state, kept whole (n = 4) and contracted onto parties 1 and 2
N = 4

print(f"{'alpha/pi':>8} {'QD':>9} {'formula':>9} {'HSD':>9} {'formula':>9} {'LMIMD':>9} {'formula':>9}")
for alpha in np.linspace(0, math.pi, 9):
    spec = StateSpec("ghz_like", N, alpha=float(alpha))
    qd = measure_pair(spec, N, 1, 2, "qd").value
    hsd = measure_pair(spec, N, 1, 2, "hsd").value
    lm = measure_pair(spec, N, 1, 2, "lmimd").value
    print(f"{alpha / math.pi:8.3f} {qd:9.6f} {ghz_qd(alpha):9.6f} {hsd:9.6f} {ghz_hsd(alpha):9.6f} "
          f"{lm:9.6f} {ghz_lmimd(alpha):9.6f}")

# all three peak at a = pi/4 and 3pi/4 and vanish at 0, pi/2, pi, where the
# state is a product of |0>s or |1>s
