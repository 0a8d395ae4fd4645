"""Which gamma produces a given fractional charge?

nu(gamma) is strictly decreasing, so it can be inverted by bisection.  Near
the asymptotes +-q the curve is so flat that a double-precision nu no longer
pins gamma down tightly; the last column shows how wide that plateau is.

Run: python demos/04_charge_inversion.py
"""
import math

from ncanonical import gamma_for_charge, gamma_for_population, DomainSpec, transferred_charge, variance

q = 2
for nu in (-1.9, -1.0, -0.1, 0.0, 0.5, 1.5, 1.999):
    r = gamma_for_charge(q, nu)
    plateau = math.ulp(nu or 1.0) / variance(q, r.gamma)
    print(f"nu={nu:+.3f} -> gamma={r.gamma:+.12f} ({r.iterations} steps), "
          f"check nu={transferred_charge(q, r.gamma):+.12f}, gamma resolution ~{plateau:.1e}")

# %% Populations work the same way: N + nu.
r = gamma_for_population(DomainSpec(8, 2), 8.25)
print(f"<M> = 8.25 for N=8, q=2 at gamma = {r.gamma:.10f}")
