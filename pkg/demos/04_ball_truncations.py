"""
Truncated operators on Cayley balls
===================================

Compressing H_mu to a ball gives a finite Hermitian matrix.  On Z the ball of
radius r is a path with 2r+1 vertices, so the eigenvalues are known exactly.
Moments of the delta_e spectral measure are exact as long as n <= r.
"""
import numpy as np

from convspec import FreeGroup, IntLattice, Measure, build_truncation, eigendecompose, moment_crosscheck

Z = IntLattice(1)
walk = Measure.indicator(Z, [(1,), (-1,)])
for r in (4, 6, 8):
    evals, weights = eigendecompose(build_truncation(walk, r))
    k = np.arange(1, 2 * r + 2)
    err = np.abs(np.sort(2 * np.cos(k * np.pi / (2 * r + 2))) - evals).max()
    print(f"r={r}: {len(evals)} eigenvalues, max error vs 2cos(k pi/(2r+2)) = {err:.1e}, "
          f"largest delta_e weight = {weights.max():.4f}")

# free group on two generators: return counts 1, 0, 4, 0, 28, 0, 232, ...
F = FreeGroup(2)
adj = Measure.indicator(F, [F.coerce(s) for s in ("a", "a^-1", "b", "b^-1")])
T = build_truncation(adj, 6)
print(f"\nF2 ball of radius 6 has {T.size} elements")
for row in moment_crosscheck(T, 6):
    print(f"  n={row.n}: exact {row.exact}  matrix {row.matrix.real:.6f}")
