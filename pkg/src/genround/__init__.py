"""Negative type and generalized roundness of finite quasi-metric spaces.

Also provides the energy integrals and finite witnesses showing that sup-norm
R^3 fails the generalized-roundness inequality at every exponent p > 0.
"""

__version__ = "0.1.0"

from .exceptions import (
    ConvergenceFailure,
    DegenerateInputError,
    GenRoundError,
    InvalidExponentError,
    InvalidInputError,
    InvalidWitnessError,
    NumericFailure,
    OutOfDomainError,
)
from .metric_core import (
    DistanceMatrix,
    Point3,
    QuasiMetricReport,
    distance_matrix,
    lp_quasi_constant,
    power_matrix,
    sup_distance,
    validate_quasi_metric,
)
from .negative_type import NTCertificate, SupremumResult, has_p_negative_type, nt_form, nt_gap, nt_supremum
from .roundness import (
    ViolationReport,
    WeightedSimplex,
    certificate_to_witness,
    gr_gap_points,
    gr_gap_weighted,
    gr_supremum,
    verify_witness,
)
from .construction import (
    ClosedFormReport,
    ConstructionParams,
    QuadratureRule,
    calculus_bounds,
    closed_form_report,
    continuous_gap,
    critical_length,
    delta,
    delta_diag,
    mu_mu_energy,
    mu_nu_energy,
    quad_mu_mu,
    quad_mu_nu,
    quad_nu_nu,
    t1,
    t2,
)
from .discretizer import (
    NetAssignment,
    discretize,
    gap_convergence_trace,
    midpoint_gap,
    quantize_to_net,
    witness_for_exponent,
)
