"""The particle-number fluctuation-dissipation identity, checked numerically.

The slope of the mean population with respect to gamma equals minus the
variance.  The slope is taken by central differences of the closed-form
mean; the variance is its own closed form.

Run: python demos/02_fluctuation_dissipation.py
"""
from ncanonical import DomainSpec, FiniteDiffConfig, variance, verify_fdt

for q in (1, 2, 3):
    spec = DomainSpec(3, q)
    print(f"q = {q}: Var(0) = {variance(q, 0.0):.6f}  (2q^2/3 = {2 * q * q / 3:.6f})")
    for g in (-2.0, -0.5, 0.0, 0.5, 2.0):
        r = verify_fdt(spec, g)
        print(f"   gamma={g:+.1f}  d<M>/dgamma={r.lhs:+.9f}  -Var={r.rhs:+.9f}  "
              f"rel.res={r.rel_residual:.1e}  {'ok' if r.passed else 'FAIL'}")

# %% Second-order convergence: halving the step cuts the residual by ~4.
spec = DomainSpec(2, 2)
prev = None
for h in (1e-3, 5e-4, 2.5e-4, 1.25e-4):
    res = verify_fdt(spec, 1.0, FiniteDiffConfig(step=h)).abs_residual
    ratio = "" if prev is None else f"  ratio {prev / res:.3f}"
    print(f"h = {h:.2e}  |lhs - rhs| = {res:.3e}{ratio}")
    prev = res
