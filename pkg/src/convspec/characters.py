"""Real characters ``Phi: X -> R`` and the commutation predicates built on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GroupError, PreconditionError
from .groups import Element, Group
from .measures import ComplexRational, Measure, convolve, is_selfadjoint

# consequence attached to a positive applicability verdict
PRECIS_CONSEQUENCE = (
    "spectrum purely absolutely continuous, with the possible exception of an "
    "eigenvalue at 0 whose eigenspace is ker(H_mu) = ker(H_{Phi mu})"
)


@dataclass(frozen=True)
class RealCharacter:
    """Group morphism into Q given by weights on the free abelian directions.

    Directions follow the constructor tree in pre-order: lattice coordinates,
    free-group exponent sums, and for semidirect products only the acting part.
    """

    group: Group
    weights: tuple

    def __post_init__(self):
        w = tuple(Fraction(x) for x in self.weights)
        if len(w) != self.group.char_dim:
            raise GroupError(f"expected {self.group.char_dim} weights, got {len(w)}")
        object.__setattr__(self, "weights", w)

    def value_raw(self, x) -> Fraction:
        return sum((w * c for w, c in zip(self.weights, self.group.char_coords(x))), Fraction(0))

    def __call__(self, x) -> Fraction:
        if isinstance(x, (Element, str)):
            x = self.group.coerce(x)
        return self.value_raw(x)

    def is_zero(self) -> bool:
        return not any(self.weights)

    def to_json(self) -> dict:
        return {"weights": [str(w) for w in self.weights]}


@dataclass(frozen=True)
class CharacterSpace:
    group: Group
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)


def character_space(spec: Group) -> CharacterSpace:
    d = spec.char_dim
    basis = tuple(RealCharacter(spec, tuple(int(i == j) for j in range(d))) for i in range(d))
    return CharacterSpace(spec, basis)


def evaluate(phi: RealCharacter, x) -> Fraction:
    return phi(x)


def multiply_by_character(phi: RealCharacter, k: int, mu: Measure) -> Measure:
    """``(Phi^k mu)(x) = Phi(x)^k mu(x)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if phi.group != mu.group:
        raise GroupError("character and measure live on different groups")
    return mu.map(lambda x: phi.value_raw(x) ** k)


def _require_sa(mu):
    if not is_selfadjoint(mu):
        raise PreconditionError("adaptedness is defined for self-adjoint measures only")


def is_semi_adapted(phi: RealCharacter, mu: Measure) -> bool:
    """``(Phi mu) * mu == mu * (Phi mu)`` exactly.

    Integrability of ``Phi mu`` and ``Phi^2 mu`` is automatic for finite support.
    """
    _require_sa(mu)
    pm = multiply_by_character(phi, 1, mu)
    return convolve(pm, mu) == convolve(mu, pm)


def is_adapted(phi: RealCharacter, mu: Measure) -> bool:
    """Semi-adapted and ``(Phi mu) * (Phi^2 mu) == (Phi^2 mu) * (Phi mu)``."""
    if not is_semi_adapted(phi, mu):
        return False
    p1 = multiply_by_character(phi, 1, mu)
    p2 = multiply_by_character(phi, 2, mu)
    return convolve(p1, p2) == convolve(p2, p1)


def k_measure(phi: RealCharacter, mu: Measure) -> Measure:
    """Measure of the commutator ``i[H_mu, Phi] = -i H_{Phi mu}``."""
    return multiply_by_character(phi, 1, mu).scale(ComplexRational(0, -1))


def l_measure(phi: RealCharacter, mu: Measure) -> Measure:
    """Measure of the double commutator ``-H_{Phi^2 mu}``."""
    return -multiply_by_character(phi, 2, mu)


def derivation_identity_check(phi: RealCharacter, mu: Measure, f: Measure) -> bool:
    """``Phi(mu * f) == (Phi mu) * f + mu * (Phi f)`` exactly."""
    lhs = multiply_by_character(phi, 1, convolve(mu, f))
    rhs = convolve(multiply_by_character(phi, 1, mu), f) + convolve(mu, multiply_by_character(phi, 1, f))
    return lhs == rhs


def precis_applicable(phi: RealCharacter, mu: Measure) -> bool:
    """True iff ``Phi^2`` is one nonzero constant on ``supp(mu)``.

    When true, :data:`PRECIS_CONSEQUENCE` describes the spectral conclusion.
    Raises if ``phi`` is not adapted to ``mu``.
    """
    if not is_adapted(phi, mu):
        raise PreconditionError("character is not adapted to the measure")
    squares = {phi.value_raw(x) ** 2 for x in mu.coeffs}
    return len(squares) == 1 and 0 not in squares


@dataclass
class KernelChainWitness:
    eigenvalue: ComplexRational
    vanishes: list  # one bool per character: (Phi mu) * f == 0

    @property
    def holds(self) -> bool:
        return all(self.vanishes)


def exact_eigenvalue(mu: Measure, f: Measure):
    """``lambda`` with ``mu * f == lambda f`` exactly, or ``None``."""
    if not f:
        raise PreconditionError("eigenvector must be nonzero")
    g = convolve(mu, f)
    x0 = min(f.coeffs)
    lam = g[x0] / f[x0]
    return lam if g == f.scale(lam) else None


def kernel_chain_witness(phis: Sequence[RealCharacter], mu: Measure, f: Measure) -> KernelChainWitness:
    """For an exact finitely supported eigenvector ``f`` of ``H_mu``, test ``f in ker H_{Phi mu}``."""
    lam = exact_eigenvalue(mu, f)
    if lam is None:
        raise PreconditionError("f is not an exact eigenvector of H_mu")
    vanishes = [not convolve(multiply_by_character(phi, 1, mu), f) for phi in phis]
    return KernelChainWitness(lam, vanishes)
