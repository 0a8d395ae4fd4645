"""Three-state N-canonical ensemble of a molecular domain.

Closed-form statistics (:mod:`.ensemble`), a brute-force reference
(:mod:`.oracle`), finite-difference checks of expectation identities
(:mod:`.qei`) and inversion of the charge curve (:mod:`.calibration`).
"""
from .calibration import InversionResult, gamma_for_charge, gamma_for_population
from .ensemble import (
    DomainSpec,
    WeightVector,
    covariance_rho_m,
    entropy,
    log_partition,
    log_weights,
    mean_population,
    purity,
    transferred_charge,
    variance,
    weights,
)
from .exceptions import (
    ConfigError,
    DomainError,
    EnsembleError,
    InputError,
    ObservableError,
    UnreachableTargetError,
)
from .qei import (
    DiagonalObservable,
    FiniteDiffConfig,
    QeiReport,
    expectation,
    qei_lhs_fd,
    qei_rhs,
    verify_fdt,
    verify_pfdt,
    verify_qei,
)

__version__ = "0.1.0"
