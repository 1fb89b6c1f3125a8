"""Weierstrass field toolkit: wp, wp', zeta, Eisenstein series, invariants.

Evaluation works anywhere on the upper half plane times the z-plane: the pair
(tau, z) is moved to the modular fundamental domain and the base lattice cell,
the q-expansions are summed there, and the value is transported back by the
exact covariance weights.  A symbolic layer differentiates rational
combinations of the field generators in closed form, and a seeded verification
suite cross-checks every identity against slow lattice-sum oracles.
"""

from .core import (
    DEFAULT_POLICY,
    FUNDAMENTAL_IM_MIN,
    NOME_RADIUS,
    CellCoordinates,
    TolerancePolicy,
    coords_wrt_lattice,
    in_cell,
    in_fundamental_domain,
    in_m_delta,
    lattice_distance,
    nome,
    tau_from_nome,
)
from .eisenstein import (
    DEFAULT_TRUNCATION,
    EisensteinValues,
    LatticeInvariants,
    QTruncation,
    eisenstein_at,
    invariants_at,
    lattice_sum_eisenstein,
    q_coefficients,
    sigma,
)
from .errors import (
    ConvergenceDomain,
    DegenerateConfiguration,
    NearSingular,
    NonFiniteValue,
    NonTermination,
    PoleProximity,
    WPFieldError,
    ZeroArgument,
)
from .reduction import (
    ReductionResult,
    UnimodularMatrix,
    e2_anywhere,
    e4_anywhere,
    e6_anywhere,
    invariants_anywhere,
    lattice_distance_anywhere,
    reduce_point,
    reduce_tau,
    reduce_z,
    wp_add,
    wp_anywhere,
    wp_prime_anywhere,
    zeta_anywhere,
)
from .symbolic import (
    E2,
    E4,
    E6,
    I,
    ONE,
    PI,
    TAU,
    WP,
    WP1,
    Z,
    ZERO,
    ZETA,
    Expr,
    build_rule_table,
    default_rule_table,
    delta_expr,
    differentiate,
    eval_expr,
    expr_to_text,
    fd_check,
    g2_expr,
    g3_expr,
    parse_expr,
    rational,
)
from .verify import (
    IdentityCase,
    IdentityReport,
    case_names,
    load_tolerance_config,
    run_identity_suite,
)
from .weier import (
    HalfPeriodData,
    WValue,
    half_periods,
    wp_lattice_oracle,
    wp_prime_q,
    wp_q,
    wp_second_derivative,
    zeta_lattice_oracle,
    zeta_q,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLICY",
    "DEFAULT_TRUNCATION",
    "FUNDAMENTAL_IM_MIN",
    "NOME_RADIUS",
    "CellCoordinates",
    "ConvergenceDomain",
    "DegenerateConfiguration",
    "E2",
    "E4",
    "E6",
    "EisensteinValues",
    "Expr",
    "HalfPeriodData",
    "I",
    "IdentityCase",
    "IdentityReport",
    "LatticeInvariants",
    "NearSingular",
    "NonFiniteValue",
    "NonTermination",
    "ONE",
    "PI",
    "PoleProximity",
    "QTruncation",
    "ReductionResult",
    "TAU",
    "TolerancePolicy",
    "UnimodularMatrix",
    "WP",
    "WP1",
    "WPFieldError",
    "WValue",
    "Z",
    "ZERO",
    "ZETA",
    "ZeroArgument",
    "build_rule_table",
    "case_names",
    "coords_wrt_lattice",
    "default_rule_table",
    "delta_expr",
    "differentiate",
    "e2_anywhere",
    "e4_anywhere",
    "e6_anywhere",
    "eisenstein_at",
    "eval_expr",
    "expr_to_text",
    "fd_check",
    "g2_expr",
    "g3_expr",
    "half_periods",
    "in_cell",
    "in_fundamental_domain",
    "in_m_delta",
    "invariants_anywhere",
    "invariants_at",
    "lattice_distance",
    "lattice_distance_anywhere",
    "lattice_sum_eisenstein",
    "load_tolerance_config",
    "nome",
    "parse_expr",
    "q_coefficients",
    "rational",
    "reduce_point",
    "reduce_tau",
    "reduce_z",
    "run_identity_suite",
    "sigma",
    "tau_from_nome",
    "wp_add",
    "wp_anywhere",
    "wp_lattice_oracle",
    "wp_prime_anywhere",
    "wp_prime_q",
    "wp_q",
    "wp_second_derivative",
    "zeta_anywhere",
    "zeta_lattice_oracle",
    "zeta_q",
]
