"""Using the density matrix itself as the test operator.

With A = rho, the expectation <rho> is the purity, and the identity turns
into  dphi/dgamma = -2 Cov(rho, M).  Both the specialized check and the
generic one (which assembles the right side from expectations over the
three states) are shown, along with the other bundled observables.

Run: python demos/03_purity_identity.py
"""
from ncanonical import DomainSpec, covariance_rho_m, purity, verify_pfdt, verify_qei
from ncanonical.qei import standard_observables

spec = DomainSpec(5, 2)
for g in (-1.0, -0.3, 0.0, 0.3, 1.0):
    r = verify_pfdt(spec, g)
    print(f"gamma={g:+.1f} phi={purity(2, g):.6f} Cov={covariance_rho_m(2, g):+.6f} "
          f"dphi/dgamma={r.lhs:+.8f} -2Cov={r.rhs:+.8f} {'ok' if r.passed else 'FAIL'}")

print()
for obs in standard_observables(spec):
    r = verify_qei(obs, spec, 0.8)
    print(f"{obs.label:>8}: <dA>={r.term_dA:+.6f} <AM>={r.term_AM:+.6f} "
          f"lhs={r.lhs:+.8f} rhs={r.rhs:+.8f} {'ok' if r.passed else 'FAIL'}")
