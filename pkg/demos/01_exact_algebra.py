"""
Exact convolution algebra on a few groups
=========================================

Measures are finite dictionaries with exact rational (Gaussian) coefficients,
so associativity, the adjoint and the derivation identity hold on the nose.
"""
from fractions import Fraction

from convspec import (
    DirectProduct, FreeGroup, IntLattice, Measure, Symmetric, adjoint, character_space, convolve,
    derivation_identity_check, is_central, is_selfadjoint, l1_norm,
)

# simple random walk on Z^2
Z2 = IntLattice(2)
walk = Measure.indicator(Z2, [(1, 0), (-1, 0), (0, 1), (0, -1)])
two_steps = convolve(walk, walk)
print("walk * walk at the origin:", two_steps[(0, 0)])  # 4 returning paths
print("walk is self-adjoint:", is_selfadjoint(walk))

# a non-symmetric measure and its adjoint on the free group
F = FreeGroup(2)
mu = Measure(F, {F.coerce("a"): Fraction(1, 2), F.coerce("ab^-1"): 3})
print("mu    =", mu)
print("mu*   =", adjoint(mu))
print("mu + mu* self-adjoint:", is_selfadjoint(mu + adjoint(mu)))

# exact l1 norms stay symbolic (radicals appear for complex coefficients)
print("||mu||_1 =", l1_norm(mu))

# class sums are central; a single transposition is not
X = DirectProduct(Symmetric(3), IntLattice(1))
E2 = Measure.conjugacy_class_indicator(X, X.coerce("(a|(0))"))
print("E2 central:", is_central(E2), " delta_a central:", is_central(Measure.delta(X, X.coerce("(a|(0))"))))

# Phi(mu * f) = (Phi mu) * f + mu * (Phi f) for a real character Phi
phi = character_space(X).basis[0]
f = Measure.indicator(X, [X.coerce(s) for s in ("(b|(2))", "(ab|(-1))")])
print("derivation identity:", derivation_identity_check(phi, E2 + Measure.delta(X, X.coerce("(e|(1))")), f))
