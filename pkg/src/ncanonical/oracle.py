"""Brute-force reference for exponential ensembles over integer particle numbers.

Everything here is a direct weighted sum over an explicit list of states,
accumulated with :func:`math.fsum`.  Nothing in this module uses the closed
forms of :mod:`ncanonical.ensemble`; it exists to check them.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import InputError

__all__ = [
    "GeneralEnsemble",
    "make_ensemble",
    "three_state_ensemble",
    "oracle_moment",
    "oracle_mean",
    "oracle_central_moment",
    "oracle_variance",
    "oracle_purity",
    "oracle_cov",
    "oracle_entropy",
    "oracle_log_partition",
]

MAX_STATES = 10_000


@dataclass(frozen=True, eq=False)
class GeneralEnsemble:
    """Normalized weights ``exp(-gamma M_i) / Z`` over distinct integers ``M_i``.

    ``log_z`` is the log of the partition function ``sum_i exp(-gamma M_i)``,
    stored as ``shift + log_z_rest`` where ``shift`` is the largest exponent.
    """

    states: tuple[int, ...]
    gamma: float
    weights: np.ndarray
    shift: float
    log_z_rest: float

    @property
    def log_z(self) -> float:
        return self.shift + self.log_z_rest

    def log_weight(self, i: int) -> float:
        return (-self.gamma * self.states[i] - self.shift) - self.log_z_rest

    def __len__(self) -> int:
        return len(self.states)


def make_ensemble(states: Sequence[int], gamma: float) -> GeneralEnsemble:
    """Build the ensemble ``exp(-gamma M) / Z`` over ``states``.

    Exponents are shifted by their maximum before exponentiating, so any
    finite ``gamma`` works; weights of strongly disfavoured states may
    underflow to zero.

    Raises:
        InputError: if ``states`` is empty, has duplicates or non-integers,
            has more than ``MAX_STATES`` entries, or ``gamma`` is not finite.
    """
    states = tuple(states)
    if not states:
        raise InputError("an ensemble needs at least one state")
    if len(states) > MAX_STATES:
        raise InputError(f"at most {MAX_STATES} states are supported, got {len(states)}")
    for m in states:
        if isinstance(m, bool) or not isinstance(m, numbers.Integral):
            raise InputError(f"states must be integers, got {m!r}")
    if len(set(states)) != len(states):
        raise InputError(f"states must be distinct, got {states}")
    try:
        gamma = float(gamma)
    except (TypeError, ValueError) as exc:
        raise InputError(f"gamma must be real, got {gamma!r}") from exc
    if not math.isfinite(gamma):
        raise InputError(f"gamma must be finite, got {gamma!r}")

    states = tuple(int(m) for m in states)
    exponents = [-gamma * m for m in states]
    top = max(range(len(states)), key=exponents.__getitem__)
    shift = exponents[top]
    unnormalized = [math.exp(e - shift) for e in exponents]
    # the top term is exactly 1; log1p of the rest keeps digits lost in log(z)
    rest = math.fsum(u for i, u in enumerate(unnormalized) if i != top)
    z = 1.0 + rest
    w = np.array([u / z for u in unnormalized])
    w.setflags(write=False)
    return GeneralEnsemble(states, gamma, w, shift, math.log1p(rest))


def three_state_ensemble(baseline_population: int, max_capacity: int, gamma: float) -> GeneralEnsemble:
    """Ensemble over ``(N - q, N, N + q)``."""
    n, q = baseline_population, max_capacity
    return make_ensemble((n - q, n, n + q), gamma)


def _wsum(values) -> float:
    return math.fsum(values)


def oracle_moment(ens: GeneralEnsemble, k: int) -> float:
    """Raw moment ``sum_i w_i M_i**k``."""
    if k < 0:
        raise InputError(f"moment order must be non-negative, got {k}")
    if k == 0:
        return _wsum(ens.weights)
    return _wsum(float(w) * float(m) ** k for w, m in zip(ens.weights, ens.states))


def oracle_mean(ens: GeneralEnsemble) -> float:
    return oracle_moment(ens, 1)


def oracle_central_moment(ens: GeneralEnsemble, k: int) -> float:
    """Central moment ``sum_i w_i (M_i - <M>)**k``.

    Summing about the mean avoids the cancellation in ``<M**2> - <M>**2``
    when ``M`` is large.
    """
    mean = oracle_mean(ens)
    return _wsum(float(w) * (m - mean) ** k for w, m in zip(ens.weights, ens.states))


def oracle_variance(ens: GeneralEnsemble) -> float:
    return oracle_central_moment(ens, 2)


def oracle_purity(ens: GeneralEnsemble) -> float:
    """``Tr(rho**2) = sum_i w_i**2``; lies in ``[1/n, 1]`` for ``n`` states."""
    return _wsum(float(w) * float(w) for w in ens.weights)


def oracle_cov(ens: GeneralEnsemble) -> float:
    """``Cov(rho, M) = sum w**2 M - (sum w**2)(sum w M)``.

    Computed as ``sum_i w_i**2 (M_i - <M>)``, which is the same quantity
    without the large cancelling terms.
    """
    mean = oracle_mean(ens)
    return _wsum(float(w) * float(w) * (m - mean) for w, m in zip(ens.weights, ens.states))


def oracle_entropy(ens: GeneralEnsemble) -> float:
    """``-sum_i w_i ln w_i`` using log-weights from the shifted exponents."""
    return _wsum(-float(w) * ens.log_weight(i) for i, w in enumerate(ens.weights) if w > 0.0)


def oracle_log_partition(ens: GeneralEnsemble) -> float:
    return ens.log_z
