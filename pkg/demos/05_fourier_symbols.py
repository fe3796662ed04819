"""
The abelian picture: multiplication by a symbol
===============================================

On an abelian group H_mu becomes multiplication by m(xi) = sum mu(x) e^{i<x,xi>}.
Multiplying mu by a real character corresponds to differentiating m, which we
check against a fourth-order finite difference.
"""
import numpy as np

from convspec import (
    Cyclic, DirectProduct, IntLattice, Measure, Symbol, character_space, derivative_identity_check,
    multiplier_report, point_spectrum_scan,
)
from convspec.fourier import dual_points

Z = IntLattice(1)
mu = Measure.indicator(Z, [(1,), (-1,), (2,), (-2,)])
phi = character_space(Z).basis[0]
rng = np.random.default_rng(1)
for xi in rng.uniform(0, 2 * np.pi, 3):
    c = derivative_identity_check(mu, phi, [xi])
    print(f"xi={xi:.3f}: smallest error {min(c.errors):.1e}, observed order {c.observed_order:.2f}")

# on a finite abelian group the symbol values are the eigenvalues
C4 = Cyclic(4)
m = Measure.indicator(C4, [1, 3])
print("\nC4 symbol values:", np.round(Symbol(m)(dual_points(C4)).real, 12) + 0.0)
print("exact point spectrum:", point_spectrum_scan(m).values)

# C2 x Z: m0 moves along Z, m1 lives on the torsion part
X = DirectProduct(Cyclic(2), Z)
m0 = Measure.indicator(X, [X.coerce("(0|(1))"), X.coerce("(0|(-1))")])
m1 = Measure.indicator(X, [X.coerce("(0|(0))"), X.coerce("(1|(0))")])
print("\nmultiplier report:", multiplier_report(m0, m1).to_json())
print("flat values of m1 alone:", point_spectrum_scan(m1, grid=256).values)
