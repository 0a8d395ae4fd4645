"""Numerical verification of expectation identities for the three-state ensemble.

For an observable ``A`` that is diagonal in the eigenbasis of ``rho`` (and
therefore commutes with it), the derivative of its expectation obeys

    d<A>/dgamma = <dA/dgamma> - <A M> - (d ln Xi / dgamma) <A>,

with ``d ln Xi / dgamma = -<M>``.  The left side is estimated here by central
finite differences and compared with the right side assembled from
expectations.  Only diagonal observables can be represented, so the
commutation requirement holds by construction and is never checked at run
time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import ensemble
from .ensemble import DomainSpec
from .exceptions import ConfigError, InputError, ObservableError

__all__ = [
    "DiagonalObservable",
    "FiniteDiffConfig",
    "QeiReport",
    "QeiTerms",
    "identity",
    "number",
    "number_squared",
    "gamma_number",
    "density",
    "standard_observables",
    "expectation",
    "central_difference",
    "qei_rhs",
    "qei_lhs_fd",
    "check_derivative",
    "verify_qei",
    "verify_fdt",
    "verify_pfdt",
    "DEFAULT_TOLERANCE",
    "DEFAULT_ABS_FLOOR",
]

DEFAULT_TOLERANCE = 1e-6
DEFAULT_ABS_FLOOR = 1e-9
SCHEMES = ("central-2point", "central-4point")


@dataclass(frozen=True)
class DiagonalObservable:
    """An operator given by one eigenvalue ``a(M, gamma)`` per basis state.

    ``eigenvalue_gamma_derivative`` must be the exact partial derivative of
    ``eigenvalue`` with respect to ``gamma``.
    """

    eigenvalue: Callable[[int, float], float]
    eigenvalue_gamma_derivative: Callable[[int, float], float]
    label: str = "A"


def identity() -> DiagonalObservable:
    return DiagonalObservable(lambda m, g: 1.0, lambda m, g: 0.0, "identity")


def number() -> DiagonalObservable:
    return DiagonalObservable(lambda m, g: float(m), lambda m, g: 0.0, "M")


def number_squared() -> DiagonalObservable:
    return DiagonalObservable(lambda m, g: float(m) ** 2, lambda m, g: 0.0, "M^2")


def gamma_number() -> DiagonalObservable:
    """``gamma * M``, a gamma-dependent observable whose ``<dA/dgamma>`` is ``<M>``."""
    return DiagonalObservable(lambda m, g: g * m, lambda m, g: float(m), "gamma*M")


def density(spec: DomainSpec) -> DiagonalObservable:
    """The density matrix itself: eigenvalue ``w_M(gamma)``.

    Its derivative is ``w_M (<M> - M)``.  The expectation of this observable
    is the purity.
    """
    def weight(m, g):
        return math.exp(_log_weight(spec, m, g))

    def dweight(m, g):
        return math.exp(_log_weight(spec, m, g)) * (ensemble.mean_population(spec, g) - m)

    return DiagonalObservable(weight, dweight, "rho")


def _log_weight(spec: DomainSpec, m: int, gamma: float) -> float:
    lw = ensemble.log_weights(spec, gamma)
    try:
        return lw[spec.states.index(m)]
    except ValueError:
        raise ObservableError(f"state {m} is not in the basis {spec.states}") from None


def standard_observables(spec: DomainSpec) -> list[DiagonalObservable]:
    """Identity, ``M``, ``M**2``, ``gamma M`` and ``rho``."""
    return [identity(), number(), number_squared(), gamma_number(), density(spec)]


@dataclass(frozen=True)
class FiniteDiffConfig:
    """Step and stencil for central differences in ``gamma``.

    With ``step=None`` the step is ``1e-5 * max(1, |gamma|)``.
    """

    step: Optional[float] = None
    scheme: str = "central-2point"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.step is not None:
            if not (math.isfinite(self.step) and 0.0 < self.step <= 1e-2):
                raise ConfigError(f"step must lie in (0, 1e-2], got {self.step!r}")

    def step_at(self, gamma: float) -> float:
        if self.step is not None:
            return self.step
        return 1e-5 * max(1.0, abs(gamma))


def central_difference(f: Callable[[float], float], x: float, h: float, scheme: str = "central-2point") -> float:
    """Central finite-difference estimate of ``f'(x)``."""
    if scheme == "central-2point":
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if scheme == "central-4point":
        return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h)
    raise ConfigError(f"unknown scheme {scheme!r}")


def _eigen(obs: DiagonalObservable, spec: DomainSpec, gamma: float) -> list[float]:
    values = [float(obs.eigenvalue(m, gamma)) for m in spec.states]
    if not all(math.isfinite(v) for v in values):
        raise ObservableError(f"observable {obs.label!r} is not finite at gamma={gamma}: {values}")
    return values


def _deigen(obs: DiagonalObservable, spec: DomainSpec, gamma: float) -> list[float]:
    values = [float(obs.eigenvalue_gamma_derivative(m, gamma)) for m in spec.states]
    if not all(math.isfinite(v) for v in values):
        raise ObservableError(f"derivative of {obs.label!r} is not finite at gamma={gamma}: {values}")
    return values


def _check_inputs(spec, gamma) -> float:
    if not isinstance(spec, DomainSpec):
        raise InputError(f"expected a DomainSpec, got {type(spec).__name__}")
    try:
        gamma = float(gamma)
    except (TypeError, ValueError) as exc:
        raise InputError(f"gamma must be a real scalar, got {gamma!r}") from exc
    if not math.isfinite(gamma):
        raise InputError(f"gamma must be finite, got {gamma!r}")
    return gamma


def _mean_of(weights, values) -> float:
    return math.fsum(w * v for w, v in zip(weights, values))


def expectation(obs: DiagonalObservable, spec: DomainSpec, gamma: float) -> float:
    """``<A> = sum_M w_M a(M, gamma)`` over the three basis states."""
    gamma = _check_inputs(spec, gamma)
    return _mean_of(ensemble.weights(spec, gamma), _eigen(obs, spec, gamma))


@dataclass(frozen=True)
class QeiTerms:
    """Right-hand side of the expectation identity and its pieces.

    ``rhs = term_dA - term_AM - term_logXi * expectation``.
    """

    term_dA: float
    term_AM: float
    term_logXi: float
    expectation: float
    rhs: float


def qei_rhs(obs: DiagonalObservable, spec: DomainSpec, gamma: float) -> QeiTerms:
    """Assemble ``<dA/dgamma> - <A M> - (d ln Xi/dgamma) <A>``.

    ``d ln Xi / dgamma`` is taken as minus the closed-form mean population.
    For a gamma-independent ``A`` the result is ``-Cov(A, M)``.
    """
    gamma = _check_inputs(spec, gamma)
    w = ensemble.weights(spec, gamma)
    a = _eigen(obs, spec, gamma)
    da = _deigen(obs, spec, gamma)
    term_da = _mean_of(w, da)
    term_am = _mean_of(w, [ai * m for ai, m in zip(a, spec.states)])
    term_logxi = -ensemble.mean_population(spec, gamma)
    mean_a = _mean_of(w, a)
    rhs = term_da - term_am - term_logxi * mean_a
    return QeiTerms(term_da, term_am, term_logxi, mean_a, rhs)


def qei_lhs_fd(
    obs: DiagonalObservable,
    spec: DomainSpec,
    gamma: float,
    cfg: Optional[FiniteDiffConfig] = None,
) -> float:
    """Finite-difference estimate of ``d<A>/dgamma``.

    ``<A>`` is split as ``a_ref + sum_{M != ref} w_M (a_M - a_ref)`` where
    ``ref`` is the most probable state at ``gamma``, and the two parts are
    differenced separately.  When one state dominates, this keeps the tiny
    response of the other states from being lost in the rounding of a large
    ``a_ref``.
    """
    gamma = _check_inputs(spec, gamma)
    cfg = cfg or FiniteDiffConfig()
    h = cfg.step_at(gamma)
    span = 2 * h if cfg.scheme == "central-4point" else h
    if not (math.isfinite(gamma + span) and math.isfinite(gamma - span)):
        raise ConfigError(f"gamma +/- step is not finite (gamma={gamma}, step={h})")

    ref = int(np.argmax(ensemble.weights(spec, gamma)))
    m_ref = spec.states[ref]

    def anchor(g):
        return float(obs.eigenvalue(m_ref, g))

    def deviation(g):
        w = ensemble.weights(spec, g)
        a = _eigen(obs, spec, g)
        return math.fsum(w[i] * (a[i] - a[ref]) for i in range(3) if i != ref)

    return central_difference(anchor, gamma, h, cfg.scheme) + central_difference(deviation, gamma, h, cfg.scheme)


@dataclass(frozen=True)
class QeiReport:
    """Outcome of one identity check at one ``gamma``.

    ``passed`` is true when ``abs_residual <= abs_floor`` or
    ``rel_residual <= tolerance``.  The term fields are ``None`` for the
    specialized checks whose right side comes from a closed form.
    """

    label: str
    gamma: float
    baseline_population: int
    max_capacity: int
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    tolerance: float
    abs_floor: float
    passed: bool
    term_dA: Optional[float] = None
    term_AM: Optional[float] = None
    term_logXi: Optional[float] = None
    expectation: Optional[float] = None
    step: Optional[float] = field(default=None, compare=False)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _report(label, spec, gamma, lhs, rhs, tolerance, abs_floor, step, terms=None) -> QeiReport:
    if not (tolerance > 0 and abs_floor >= 0):
        raise ConfigError(f"tolerance must be > 0 and abs_floor >= 0, got {tolerance}, {abs_floor}")
    abs_res = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    if scale > 0:
        rel_res = abs_res / scale
    else:
        rel_res = 0.0 if abs_res == 0 else math.inf
    extra = {}
    if terms is not None:
        extra = dict(
            term_dA=terms.term_dA,
            term_AM=terms.term_AM,
            term_logXi=terms.term_logXi,
            expectation=terms.expectation,
        )
    return QeiReport(
        label=label,
        gamma=gamma,
        baseline_population=spec.baseline_population,
        max_capacity=spec.max_capacity,
        lhs=lhs,
        rhs=rhs,
        abs_residual=abs_res,
        rel_residual=rel_res,
        tolerance=tolerance,
        abs_floor=abs_floor,
        passed=bool(abs_res <= abs_floor or rel_res <= tolerance),
        step=step,
        **extra,
    )


def check_derivative(
    obs: DiagonalObservable,
    spec: DomainSpec,
    gamma: float,
    rtol: float = 1e-6,
    atol: float = DEFAULT_ABS_FLOOR,
) -> None:
    """Compare the declared ``da/dgamma`` with a central difference of ``a``.

    The absolute slack is ``atol * max(1, |a|)`` so that large eigenvalues do
    not trip the check on roundoff alone.

    Raises:
        ObservableError: if any state disagrees.
    """
    gamma = _check_inputs(spec, gamma)
    h = 1e-5 * max(1.0, abs(gamma))
    for m, da in zip(spec.states, _deigen(obs, spec, gamma)):
        a0 = float(obs.eigenvalue(m, gamma))
        fd = central_difference(lambda g: float(obs.eigenvalue(m, g)), gamma, h)
        slack = max(rtol * abs(da), atol * max(1.0, abs(a0)))
        if not abs(fd - da) <= slack:
            raise ObservableError(
                f"declared derivative of {obs.label!r} at M={m}, gamma={gamma} is {da}, "
                f"finite difference gives {fd}"
            )


def verify_qei(
    obs: DiagonalObservable,
    spec: DomainSpec,
    gamma: float,
    cfg: Optional[FiniteDiffConfig] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    abs_floor: float = DEFAULT_ABS_FLOOR,
) -> QeiReport:
    """Check the expectation identity for ``obs`` at one ``gamma``.

    The declared eigenvalue derivative is validated first.

    Raises:
        ObservableError: if the declared derivative is inconsistent.
    """
    gamma = _check_inputs(spec, gamma)
    cfg = cfg or FiniteDiffConfig()
    check_derivative(obs, spec, gamma)
    terms = qei_rhs(obs, spec, gamma)
    lhs = qei_lhs_fd(obs, spec, gamma, cfg)
    return _report(obs.label, spec, gamma, lhs, terms.rhs, tolerance, abs_floor, cfg.step_at(gamma), terms)


def verify_fdt(
    spec: DomainSpec,
    gamma: float,
    cfg: Optional[FiniteDiffConfig] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    abs_floor: float = DEFAULT_ABS_FLOOR,
) -> QeiReport:
    """Fluctuation-dissipation check ``d<M>/dgamma = -Var(M)``.

    The left side differences the closed-form mean population; the right
    side is the closed-form variance.
    """
    gamma = _check_inputs(spec, gamma)
    cfg = cfg or FiniteDiffConfig()
    h = cfg.step_at(gamma)
    lhs = central_difference(lambda g: ensemble.mean_population(spec, g), gamma, h, cfg.scheme)
    rhs = -ensemble.variance(spec.max_capacity, gamma)
    return _report("fdt", spec, gamma, lhs, rhs, tolerance, abs_floor, h)


def verify_pfdt(
    spec: DomainSpec,
    gamma: float,
    cfg: Optional[FiniteDiffConfig] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    abs_floor: float = DEFAULT_ABS_FLOOR,
) -> QeiReport:
    """Purity fluctuation-dissipation check ``dphi/dgamma = -2 Cov(rho, M)``."""
    gamma = _check_inputs(spec, gamma)
    cfg = cfg or FiniteDiffConfig()
    h = cfg.step_at(gamma)
    q = spec.max_capacity
    lhs = central_difference(lambda g: ensemble.purity(q, g), gamma, h, cfg.scheme)
    rhs = -2.0 * ensemble.covariance_rho_m(q, gamma)
    return _report("pfdt", spec, gamma, lhs, rhs, tolerance, abs_floor, h)
