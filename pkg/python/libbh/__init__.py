"""Bohnenblust-Hille constants, their asymptotics, and inequality checks"""

from ._asymptotics import (
    STABLE_TAIL_FRACTION,
    LimitKind,
    LimitTarget,
    ReductionResult,
    ScanResult,
    check_claim1,
    check_contraction,
    check_ratio_identities,
    check_square_root_reduction,
    claim_residual_maxima,
    dyadic_block_sups,
    envelope,
    even_ratio,
    even_ratio_bound,
    gamma_limit_value,
    limit_target,
    limit_targets,
    odd_ratio,
    odd_ratio_factors,
    threshold_index,
)
from ._cli import (
    main,
    make_parser,
    run,
)
from ._ConstantTable import (
    ConstantTable,
    RatioSeries,
    constant_table,
    get_constant_table,
    log_constant,
    ratio,
    ratio_series,
)
from ._ConvergenceReport import (
    ConvergenceReport,
    convergence_report,
    fit_rate_constant,
)
from ._errors import (
    BHError,
    DomainError,
    HypothesisError,
    InternalError,
    ParsingError,
    ResourceError,
)
from ._FamilySpec import (
    Family,
    FamilySpec,
    LogValue,
    ScalarField,
)
from ._khinchine import (
    KhinchineMode,
    a_p,
    critical_exponent,
    log_a_p,
)
from ._MultilinearForm import (
    MultilinearForm,
    littlewood_form,
    read_form,
    write_form,
)
from ._RunConfig import (
    Command,
    OutputFormat,
    RunConfig,
)
from ._special_functions import (
    DOUBLE_PRECISION,
    Precision,
    euler_gamma,
    find_p0,
    ln_gamma,
    p0_residual,
)
from ._verifier import (
    Distribution,
    InequalityReport,
    LowerBoundResult,
    SupNormEstimate,
    Verdict,
    bh_lhs,
    check_inequality,
    lower_bound_search,
    random_form,
    sup_norm,
    sup_norm_complex_lower,
    sup_norm_real,
)
