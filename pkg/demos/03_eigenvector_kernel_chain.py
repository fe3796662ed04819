"""
Eigenvalues survive: a two-point example on C2 x Z
==================================================

For mu = delta_(1,0), the indicator of the finite subgroup C2 x {0} is an exact
eigenvector, and it also lies in the kernel of the derivative operator.  The
truncations see the same thing: half of the delta_e mass sits at each of +1, -1.
"""
from convspec import (
    Cyclic, DirectProduct, IntLattice, Measure, apply, character_space, kernel_chain_witness,
    point_mass_estimate, spectral_report,
)

X = DirectProduct(Cyclic(2), IntLattice(1))
mu = Measure.delta(X, X.coerce("(1|(0))"))
chi_Y = Measure.indicator(X, [X.coerce("(0|(0))"), X.coerce("(1|(0))")])

print("H_mu chi_Y == chi_Y:", apply(mu, chi_Y) == chi_Y)
w = kernel_chain_witness(character_space(X).basis, mu, chi_Y)
print("eigenvalue:", w.eigenvalue, " (Phi mu) * chi_Y == 0:", w.holds)

trend = point_mass_estimate(spectral_report(mu, (4, 6, 8)))
print("\nlargest atom per radius:", [round(m, 6) for m in trend.max_mass], "->", trend.trend)
for center, masses in trend.persistent_atoms:
    print(f"  atom at {center:+.3f}: masses {[round(m, 6) for m in masses]}")
print(trend.label)
