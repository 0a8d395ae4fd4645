"""Inverse of the charge-fraction curve.

``nu(gamma)`` is strictly decreasing (its slope is ``-Var(M) < 0``) and maps
the real line onto ``(-q, q)``, so every reachable target has exactly one
``gamma``.  The root is found by bisection on a bracket that starts at
``[-1/q, 1/q]`` and doubles outward until it straddles the target.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .ensemble import DomainSpec, _check_capacity, transferred_charge
from .exceptions import InputError, UnreachableTargetError

__all__ = ["InversionResult", "gamma_for_charge", "gamma_for_population"]

GAMMA_TOL = 1e-12
MAX_ITER = 400


@dataclass(frozen=True)
class InversionResult:
    gamma: float
    target_nu: float
    achieved_nu: float
    iterations: int
    bracket_width_final: float


def _check_target(value, name: str) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} must be real, got {value!r}") from exc
    if not math.isfinite(value):
        raise InputError(f"{name} must be finite, got {value!r}")
    return value


def gamma_for_charge(q: int, target_nu: float) -> InversionResult:
    """Find ``gamma`` with ``transferred_charge(q, gamma) == target_nu``.

    Positive targets (electron uptake) give ``gamma < 0``; negative targets
    give ``gamma > 0``.  Iteration stops when the bracket is narrower than
    ``1e-12`` or the midpoint hits the target exactly.

    Near saturation the answer is only as precise as ``target_nu`` allows:
    one unit in the last place of ``nu`` spans roughly ``eps / (q * exp(-|gamma q|))``
    in ``gamma``.

    Raises:
        UnreachableTargetError: if ``|target_nu| >= q``.
    """
    q = _check_capacity(q)
    target = _check_target(target_nu, "target_nu")
    if abs(target) >= q:
        raise UnreachableTargetError(
            f"|nu| must be < q = {q}; nu = {target} lies on or beyond the asymptotic limit"
        )

    def nu(g):
        return transferred_charge(q, g)

    lo, hi = -1.0 / q, 1.0 / q
    iterations = 0
    # nu(lo) >= target >= nu(hi) once straddled
    while nu(hi) > target:
        lo, hi = hi, 2.0 * hi
        iterations += 1
    while nu(lo) < target:
        lo, hi = 2.0 * lo, lo
        iterations += 1

    mid = 0.5 * (lo + hi)
    achieved = nu(mid)
    while hi - lo >= GAMMA_TOL and achieved != target and iterations < MAX_ITER:
        if achieved > target:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        achieved = nu(mid)
        iterations += 1

    return InversionResult(
        gamma=mid + 0.0,
        target_nu=target,
        achieved_nu=achieved,
        iterations=iterations,
        bracket_width_final=hi - lo,
    )


def gamma_for_population(spec: DomainSpec, target_population: float) -> InversionResult:
    """Find ``gamma`` whose mean population equals ``target_population``.

    Raises:
        UnreachableTargetError: unless ``N - q < target < N + q``.
    """
    if not isinstance(spec, DomainSpec):
        raise InputError(f"expected a DomainSpec, got {type(spec).__name__}")
    target = _check_target(target_population, "target_population")
    n, q = spec.baseline_population, spec.max_capacity
    if not (n - q < target < n + q):
        raise UnreachableTargetError(
            f"target population {target} is outside the open interval ({n - q}, {n + q})"
        )
    return gamma_for_charge(q, target - n)
