"""Closed-form statistics of the three-state N-canonical ensemble.

A molecular domain with baseline population ``N`` and maximum capacity ``q``
is described by the density matrix ``exp(-gamma * M) / Xi`` restricted to the
states ``M in {N - q, N, N + q}``.  Every quantity below depends on ``gamma``
and ``q`` only through ``x = gamma * q``.  With ``t = exp(-|x|)`` all of them
are rational in ``t``, which is how they are evaluated here: nothing ever
overflows, and odd/even symmetry in ``gamma`` holds bit for bit.

All functions accept a scalar or an array of ``gamma`` values and return a
float or an ndarray to match.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .exceptions import DomainError, InputError

__all__ = [
    "DomainSpec",
    "WeightVector",
    "log_partition",
    "weights",
    "log_weights",
    "mean_population",
    "transferred_charge",
    "variance",
    "purity",
    "covariance_rho_m",
    "entropy",
]

ArrayLike = Union[float, np.ndarray]

# Weights below this contribute 0 to the entropy (x ln x -> 0).
ENTROPY_WEIGHT_CUTOFF = 1e-300


@dataclass(frozen=True)
class DomainSpec:
    """Baseline electron count ``N`` and maximum transferable charge ``q``.

    The basis is ``(N - q, N, N + q)``: cation, neutral, anion.
    """

    baseline_population: int
    max_capacity: int

    def __post_init__(self):
        for name in ("baseline_population", "max_capacity"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.max_capacity < 1:
            raise DomainError(f"max_capacity must be >= 1, got {self.max_capacity}")
        if self.baseline_population - self.max_capacity < 0:
            raise DomainError(
                "cation population N - q must be non-negative, got "
                f"N={self.baseline_population}, q={self.max_capacity}"
            )

    @property
    def states(self) -> tuple[int, int, int]:
        n, q = self.baseline_population, self.max_capacity
        return (n - q, n, n + q)


class WeightVector(NamedTuple):
    """Statistical weights of the cation, neutral and anion states."""

    cation: ArrayLike
    neutral: ArrayLike
    anion: ArrayLike


def _check_spec(spec) -> DomainSpec:
    if not isinstance(spec, DomainSpec):
        raise DomainError(f"expected a DomainSpec, got {type(spec).__name__}")
    return spec


def _check_capacity(q) -> int:
    if isinstance(q, bool) or not isinstance(q, numbers.Integral):
        raise DomainError(f"q must be a positive integer, got {q!r}")
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    return int(q)


def _check_gamma(gamma) -> np.ndarray:
    try:
        g = np.asarray(gamma, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"gamma must be real, got {gamma!r}") from exc
    if not np.all(np.isfinite(g)):
        raise InputError(f"gamma must be finite, got {gamma!r}")
    return g


def _out(value: np.ndarray) -> ArrayLike:
    # +0.0 folds -0.0 into 0.0
    value = value + 0.0
    return float(value) if value.ndim == 0 else value


def _reduced(q: int, gamma) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``sign(x)``, ``t = exp(-|x|)`` and ``1 + t + t**2`` for ``x = gamma q``."""
    x = q * _check_gamma(gamma)
    t = np.exp(-np.abs(x))
    return np.sign(x), t, 1.0 + t + t * t


def _one_minus_t2(q: int, gamma) -> np.ndarray:
    # 1 - exp(-2|x|) without cancellation near x = 0
    return -np.expm1(-2.0 * np.abs(q * _check_gamma(gamma)))


def log_partition(spec: DomainSpec, gamma: ArrayLike) -> ArrayLike:
    """Natural log of the partition function ``Xi = exp(-gamma N) (1 + 2 cosh(gamma q))``.

    Evaluated as ``-gamma N + |gamma q| + log1p(t + t**2)``; ``Xi`` itself is
    never formed.
    """
    spec = _check_spec(spec)
    g = _check_gamma(gamma)
    _, t, _ = _reduced(spec.max_capacity, g)
    x = np.abs(spec.max_capacity * g)
    return _out(-g * spec.baseline_population + x + np.log1p(t + t * t))


def weights(spec: DomainSpec, gamma: ArrayLike) -> WeightVector:
    """Statistical weights ``exp(-gamma M) / Xi`` of the three basis states.

    The weights do not depend on ``N``.  For large ``|gamma q|`` the two
    disfavoured weights underflow gracefully towards 0.

    Examples:
        >>> w = weights(DomainSpec(5, 1), 1.0)
        >>> round(w.cation, 6), round(w.neutral, 6), round(w.anion, 6)
        (0.665241, 0.244728, 0.090031)
    """
    spec = _check_spec(spec)
    sign, t, den = _reduced(spec.max_capacity, gamma)
    big = 1.0 / den
    small = t * t / den
    # gamma >= 0 favours the cation (fewest electrons)
    cation = np.where(sign >= 0, big, small)
    anion = np.where(sign >= 0, small, big)
    return WeightVector(_out(cation), _out(t / den), _out(anion))


def log_weights(spec: DomainSpec, gamma: ArrayLike) -> WeightVector:
    """Natural logs of the three weights, finite for every finite ``gamma``."""
    spec = _check_spec(spec)
    g = _check_gamma(gamma)
    _, t, _ = _reduced(spec.max_capacity, g)
    x = spec.max_capacity * g
    ax = np.abs(x)
    # shifted exponents first, so ln(w_max) = -log1p(t + t**2) keeps its digits
    rest = np.log1p(t + t * t)
    return WeightVector(_out((x - ax) - rest), _out(-ax - rest), _out((-x - ax) - rest))


def transferred_charge(q: int, gamma: ArrayLike) -> ArrayLike:
    """Fractional charge ``nu = -2 q sinh(gamma q) / (2 cosh(gamma q) + 1)``.

    Strictly decreasing and odd in ``gamma``; saturates at ``-q`` (donor,
    ``gamma -> +inf``) and ``+q`` (acceptor, ``gamma -> -inf``).
    """
    q = _check_capacity(q)
    sign, _, den = _reduced(q, gamma)
    return _out(-q * sign * _one_minus_t2(q, gamma) / den)


def mean_population(spec: DomainSpec, gamma: ArrayLike) -> ArrayLike:
    """Mean electron number ``N + nu``, inside the open interval ``(N - q, N + q)``."""
    spec = _check_spec(spec)
    nu = np.asarray(transferred_charge(spec.max_capacity, gamma))
    return _out(spec.baseline_population + nu)


def variance(q: int, gamma: ArrayLike) -> ArrayLike:
    """Particle-number variance ``2 q**2 (cosh(gamma q) + 2) / (2 cosh(gamma q) + 1)**2``.

    Even in ``gamma`` with its maximum ``2 q**2 / 3`` at ``gamma = 0``.
    """
    q = _check_capacity(q)
    _, t, den = _reduced(q, gamma)
    var = q * q * t * (1.0 + 4.0 * t + t * t) / (den * den)
    # rounding near gamma = 0 can overshoot the maximum by an ulp
    return _out(np.minimum(var, 2.0 * q * q / 3.0))


def purity(q: int, gamma: ArrayLike) -> ArrayLike:
    """Quantum purity ``Tr(rho**2) = (2 cosh(gamma q) - 1) / (2 cosh(gamma q) + 1)``.

    Equals 1/3 at ``gamma = 0`` and tends to 1 as the state becomes a pure
    ionic state.
    """
    q = _check_capacity(q)
    _, t, den = _reduced(q, gamma)
    return _out(np.maximum((1.0 - t + t * t) / den, 1.0 / 3.0))


def covariance_rho_m(q: int, gamma: ArrayLike) -> ArrayLike:
    """Covariance between the density matrix and the number operator.

    ``Cov = <rho M> - <rho><M> = -2 q sinh(gamma q) / (2 cosh(gamma q) + 1)**2``,
    which is independent of ``N``.
    """
    q = _check_capacity(q)
    sign, t, den = _reduced(q, gamma)
    return _out(-q * sign * t * _one_minus_t2(q, gamma) / (den * den))


def entropy(spec: DomainSpec, gamma: ArrayLike) -> ArrayLike:
    """Von Neumann entropy ``-sum w ln w`` of the three-state mixture, in nats."""
    w = weights(spec, gamma)
    logw = log_weights(spec, gamma)
    terms = []
    for wi, lwi in zip(w, logw):
        wi = np.asarray(wi)
        terms.append(np.where(wi < ENTROPY_WEIGHT_CUTOFF, 0.0, -wi * np.asarray(lwi)))
    cation, neutral, anion = terms
    # ionic terms added first so that S(-gamma) == S(gamma) exactly
    total = (cation + anion) + neutral
    return _out(np.minimum(total, math.log(3.0)))


def max_entropy() -> float:
    """Entropy of the uniform three-state mixture, ``ln 3``."""
    return math.log(3.0)
