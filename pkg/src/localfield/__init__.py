"""Multiparameter estimation of independent local fields.

Quantum Fisher information matrices for probes encoded by sum_i h_i H_i,
the probe-optimized lower bound on Tr(W F^-1), GHZ / product / mixed probe
families, and a simplex search that confirms the analytic optima.
"""

from .bounds import (
    BoundReport,
    corollary1_residual,
    evaluate_probe,
    max_variance,
    mixed_trace_bound,
    product_bound,
    theorem1_bound,
)
from .errors import LocalFieldError
from .hamiltonian import LocalHamiltonian, embed_generator, encode, eigen_extremes, pauli_z_hamiltonian
from .optimizer import OptimizationResult, OptimizationTask, maximize_trace_fq, minimize_fom, sweep
from .probes import (
    GhzParams,
    N3Params,
    ghz_probe,
    gme_certify,
    haar_random_pure,
    parametric_n3_probe,
    product_probe,
    random_mixed,
)
from .qfim import Qfim, figure_of_merit, qfim_mixed, qfim_pure, saturability_check, sld_pure
from .states import DensityMatrix, PureState
from .weights import WeightMatrix, build_w_bar, validate_psd_weight, weight_sqrt_closed_form

__version__ = "0.1.0"
