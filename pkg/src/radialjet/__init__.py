"""Exact radial-derivative calculus on truncated power series, plus ball-space norms.

The package has five parts:

* :mod:`radialjet.jets` -- exact/float jets (truncated power series) with
  the radial derivative and the analytic functional calculus;
* :mod:`radialjet.coefficients` -- exact, dual-path-checked coefficient
  tables (falling-factorial matrix and inverse, power/log correction
  coefficients, composition-derivative tables);
* :mod:`radialjet.identities` -- zero-residual verification of the
  commutator differentiation identities, and numeric norm-bound demos;
* :mod:`radialjet.spaces` -- Drury-Arveson and Besov-Dirichlet norms,
  monomial weights with quadrature/Monte-Carlo oracles, reproducing
  kernels, norm-equivalence scans, compression multiplier bounds;
* :mod:`radialjet.cli` -- the ``radialjet`` command.
"""

from .jets import (
    DEFAULT_TOL,
    EXACT,
    FLOAT,
    ConstantTermError,
    Jet,
    JetShapeError,
    MultiIndex,
    exp_series,
    int_pow,
    log_series,
    monomial_indices,
    mul,
    radial_power,
    random_jet,
    random_pair,
    real_pow,
)
from .coefficients import (
    BetaMatrix,
    ConsistencyError,
    CTable,
    FdBTable,
    LogCoefficients,
    PowerCoefficients,
    a_coefficients,
    beta_matrix,
    binomial,
    c_table,
    fdb_table,
    rho_coefficients,
)
from .identities import (
    NormBoundReport,
    VerificationReport,
    commutator_defect,
    norm_bound_demo,
    power_reconstruction,
    reciprocal_expansion,
    stratum_operator,
    verify_fdb_power,
    verify_log_expansion,
    verify_log_identity,
    verify_power_expansion,
    verify_power_identity,
    verify_reciprocal_identity,
    verify_stratum_reduction,
)
from .spaces import (
    BesovDirichlet,
    DruryArveson,
    EquivalenceScan,
    SamplerConfig,
    compression_multiplier_norm,
    da_norm,
    da_norm_sq,
    equivalence_scan,
    evaluate_jet,
    hms_norm,
    hms_norm_sq,
    inner_product,
    kernel_eval,
    monomial_weight,
    sup_norm_estimate,
)
from .rationals import format_rational, parse_rational

__version__ = "0.1.0"
