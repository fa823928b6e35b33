"""Two-party quantum correlation measures for multipartite qubit states.

Quantum discord, Hilbert-Schmidt distance, LMIMD and LEMID evaluated on the
two-party states extracted from GHZ-like, W and user-supplied N-qubit states.
"""

from .errors import QCorrError
from .measurement import MeasurementBasis, PairBasis, coherence_in_pair_basis, measure_one_side, projectors
from .measures import (
    MeasureKind,
    MeasureResult,
    compute,
    hsd,
    lemid,
    lmimd,
    measure_pair,
    pair_symmetry_check,
    qd_pure_shortcut,
    quantum_discord,
)
from .optimizer import OptimizerConfig, minimize, oracle_minimize
from .states import StateSpec, custom_state, density_of, ghz_like, pair_state, w_state
from .tensor import (
    DensityMatrix,
    EigenSystem,
    PureKet,
    eig_hermitian,
    frobenius_distance,
    kron,
    pair_contract,
    partial_trace,
    von_neumann_entropy,
)
from .verify import run_verify

__version__ = "0.1.0"
