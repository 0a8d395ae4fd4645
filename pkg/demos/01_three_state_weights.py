"""How the three-state mixture shifts with the chemical potential gamma.

Run: python demos/01_three_state_weights.py
"""
import numpy as np

from ncanonical import DomainSpec, entropy, purity, transferred_charge, weights

spec = DomainSpec(baseline_population=6, max_capacity=1)

# %% Weights of the cation (N-q), neutral (N) and anion (N+q) states.
# gamma < 0 favours the anion (electron uptake), gamma > 0 the cation.
print(f"{'gamma':>6} {'w(N-q)':>9} {'w(N)':>9} {'w(N+q)':>9} {'nu':>9} {'purity':>8} {'S':>8}")
for g in np.linspace(-4, 4, 9):
    w = weights(spec, g)
    print(f"{g:6.1f} {w.cation:9.5f} {w.neutral:9.5f} {w.anion:9.5f} "
          f"{transferred_charge(1, g):9.5f} {purity(1, g):8.5f} {entropy(spec, g):8.5f}")

# %% At gamma = 0 the mixture is uniform: purity 1/3, entropy ln 3.
# Far from 0 a single ionic state dominates and purity -> 1, entropy -> 0,
# but nothing overflows even at |gamma| = 1000.
print(weights(spec, 1000.0), purity(1, -1000.0), entropy(spec, 1000.0))
