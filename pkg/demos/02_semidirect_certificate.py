"""
A symmetric set in S3 x_tau Z, built fibre by fibre
===================================================

Z acts on S3 by conjugation with the transposition a.  We pick the fibres
N_{-1} = {a, aba} and N_1 = {a, b}, let the toolkit check the compatibility and
counting conditions, then certify that the indicator of the resulting set has
an adapted character whose square is constant on the support.
"""
from convspec import (
    ConjugationBy, FiberData, IntLattice, Semidirect, Symmetric, ac_hypothesis_report,
    character_space, commutation_condition_holds, construct_symmetric_set, is_adapted,
    is_semi_adapted, precis_applicable, validate_fiber_data,
)
from convspec.characters import PRECIS_CONSEQUENCE

X = Semidirect(Symmetric(3), IntLattice(1), ConjugationBy("a"))
data = FiberData.build(X, ["-1", "1"], {"-1": ["a", "aba"], "1": ["a", "b"]})

diag = validate_fiber_data(data)
print("G0 symmetric:      ", diag.g0_symmetric)
print("tau-compatible:    ", diag.tau_compatible)
print("counting condition:", diag.counting_condition)

S = construct_symmetric_set(data)
print("\nS =", sorted(X.format(x) for x in S.support()))
print("fibre commutation: ", commutation_condition_holds(S))

phi = character_space(X).basis[0]  # phi(n, g) = g
print("semi-adapted:", is_semi_adapted(phi, S), " adapted:", is_adapted(phi, S))
if precis_applicable(phi, S):
    print("conclusion:", PRECIS_CONSEQUENCE)

print("\nhypothesis report:", ac_hypothesis_report(S).to_json())

# a bad choice of fibres is rejected with a concrete witness
bad = FiberData.build(X, ["-1", "1"], {"-1": ["a"], "1": ["b"]})
print("\nfibres {a} / {b}: tau-compatible =", validate_fiber_data(bad).tau_compatible,
      "witness:", validate_fiber_data(bad).witnesses["tau_compatible"])
