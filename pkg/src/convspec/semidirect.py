"""Commutation and counting conditions on semidirect products ``N x_tau G``.

The fibre form of a measure ``a`` on ``X = N x_tau G`` is the family of functions
``n -> a(n, g)``, one per ``g``.  For ``g1 != g2`` the commutation identity asks

    sum_{m = n1 tau_{g1}(n2)} a(n1, g1) a(n2, g2)  ==  sum_{m = n1 tau_{g2}(n2)} a(n1, g2) a(n2, g1)

for every ``m`` in ``N``.  Both sides vanish unless the two fibres are nonempty and
``m`` lies in the finite product set, so the check is exact and finite.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .characters import character_space, multiply_by_character
from .errors import GroupError, PreconditionError
from .groups import Group, Semidirect
from .measures import ONE, ZERO, Measure, convolve, is_central, is_selfadjoint


def _require_semidirect(group):
    if not isinstance(group, Semidirect):
        raise PreconditionError("measure must live on a Semidirect group")


def _fibres(a: Measure) -> dict:
    fib = defaultdict(dict)
    for (n, g), c in a.coeffs.items():
        fib[g][n] = c
    return dict(fib)


def _twisted_products(group, f1, g1, f2):
    """``m -> sum f1(n1) f2(n2)`` over ``m = n1 tau_{g1}(n2)``."""
    normal = group.normal
    out = {}
    for n2, c2 in f2.items():
        t = group.tau(g1, n2)
        for n1, c1 in f1.items():
            m = normal.mul(n1, t)
            out[m] = out.get(m, ZERO) + c1 * c2
    return {m: v for m, v in out.items() if v}


@dataclass
class CommutationWitness:
    g1: object
    g2: object
    m: object
    lhs: object
    rhs: object

    def to_json(self, group) -> dict:
        return {
            "g1": group.acting.format(self.g1),
            "g2": group.acting.format(self.g2),
            "m": group.normal.format(self.m),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


def commutation_witness(a0: Measure):
    """First ``(g1, g2, m)`` violating the fibre commutation identity, or ``None``."""
    group = a0.group
    _require_semidirect(group)
    fib = _fibres(a0)
    keys = sorted(fib)
    for i, g1 in enumerate(keys):
        for g2 in keys[i + 1:]:
            lhs = _twisted_products(group, fib[g1], g1, fib[g2])
            rhs = _twisted_products(group, fib[g2], g2, fib[g1])
            if lhs != rhs:
                for m in sorted(set(lhs) | set(rhs)):
                    if lhs.get(m, ZERO) != rhs.get(m, ZERO):
                        return CommutationWitness(g1, g2, m, lhs.get(m, ZERO), rhs.get(m, ZERO))
    return None


def commutation_condition_holds(a0: Measure) -> bool:
    """Exact fibre commutation identity for a self-adjoint finitely supported ``a0``."""
    if not is_selfadjoint(a0):
        raise PreconditionError("a0 must be self-adjoint")
    return commutation_witness(a0) is None


# --------------------------------------------------------------------------
# symmetric sets S = disjoint union of N_g x {g}


class FiberDataError(GroupError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


@dataclass
class FiberData:
    """``G0`` (a finite symmetric subset of G) and a finite ``N_g`` for every ``g`` in it."""

    group: Semidirect
    g0: tuple
    families: dict

    @classmethod
    def build(cls, group: Group, g0: Sequence, families: Mapping) -> FiberData:
        _require_semidirect(group)
        g0r = tuple(sorted({group.acting.coerce(g) for g in g0}))
        fam = {}
        for g, ns in families.items():
            gr = group.acting.coerce(g)
            fam[gr] = frozenset(group.normal.coerce(n) for n in ns)
        return cls(group, g0r, fam)

    def to_json(self) -> dict:
        G, N = self.group.acting, self.group.normal
        return {
            "G0": [G.format(g) for g in self.g0],
            "families": {G.format(g): [N.format(n) for n in sorted(self.families[g])] for g in self.g0},
        }


@dataclass
class FiberDiagnostics:
    g0_symmetric: bool
    families_complete: bool
    tau_compatible: bool
    counting_condition: bool
    noncompact_reach: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        """Structural validity: enough to build a self-adjoint indicator meeting the counting condition."""
        return self.g0_symmetric and self.families_complete and self.tau_compatible and self.counting_condition

    def to_json(self) -> dict:
        return {
            "g0_symmetric": self.g0_symmetric,
            "families_complete": self.families_complete,
            "tau_compatible": self.tau_compatible,
            "counting_condition": self.counting_condition,
            "noncompact_reach": self.noncompact_reach,
            "witnesses": self.witnesses,
        }


def _count_products(group, ns1, g1, ns2):
    counts = defaultdict(int)
    for n2 in ns2:
        t = group.tau(g1, n2)
        for n1 in ns1:
            counts[group.normal.mul(n1, t)] += 1
    return counts


def _counting_witness(data: FiberData):
    group = data.group
    keys = [g for g in data.g0 if data.families.get(g)]
    for i, g1 in enumerate(keys):
        for g2 in keys[i + 1:]:
            lhs = _count_products(group, data.families[g1], g1, data.families[g2])
            rhs = _count_products(group, data.families[g2], g2, data.families[g1])
            for m in sorted(set(lhs) | set(rhs)):
                if lhs.get(m, 0) != rhs.get(m, 0):
                    return {
                        "g1": group.acting.format(g1),
                        "g2": group.acting.format(g2),
                        "m": group.normal.format(m),
                        "lhs": lhs.get(m, 0),
                        "rhs": rhs.get(m, 0),
                    }
    return None


def validate_fiber_data(data: FiberData) -> FiberDiagnostics:
    group = data.group
    G, N = group.acting, group.normal
    wit = {}
    g0set = set(data.g0)
    missing_neg = [g for g in data.g0 if G.inv(g) not in g0set]
    symmetric = not missing_neg
    if missing_neg:
        wit["g0_symmetric"] = {"G0": [G.format(g) for g in data.g0], "g": G.format(missing_neg[0])}
    extra = sorted(set(data.families) ^ g0set)
    complete = not extra
    if extra:
        wit["families_complete"] = {"g": G.format(extra[0])}
    compatible = True
    if symmetric and complete:
        for g in data.g0:
            lhs = {group.tau(g, n) for n in data.families[G.inv(g)]}
            rhs = {N.inv(n) for n in data.families[g]}
            if lhs != rhs:
                n = sorted(lhs ^ rhs)[0]
                compatible = False
                wit["tau_compatible"] = {"g": G.format(g), "n": N.format(n)}
                break
    else:
        compatible = False
    counting = False
    if complete:
        w = _counting_witness(data)
        counting = w is None
        if w is not None:
            wit["counting_condition"] = w
    reach = any(G.in_torsion_subgroup(g) is False for g in data.g0)
    return FiberDiagnostics(symmetric, complete, compatible, counting, reach, wit)


def counting_condition_holds(data: FiberData) -> bool:
    """Equal product counts for every ``g1, g2`` in ``G0`` and every ``m``."""
    diag = validate_fiber_data(data)
    if not (diag.g0_symmetric and diag.families_complete and diag.tau_compatible):
        raise FiberDataError("invalid fibre data", diag.witnesses)
    return diag.counting_condition


def construct_symmetric_set(data: FiberData) -> Measure:
    """Indicator of ``S = union of N_g x {g}``; raises with a witness if the data are invalid."""
    diag = validate_fiber_data(data)
    for name in ("g0_symmetric", "families_complete", "tau_compatible", "counting_condition"):
        if not getattr(diag, name):
            raise FiberDataError(f"fibre data fail {name}", diag.witnesses.get(name))
    return Measure._raw(data.group, {(n, g): ONE for g in data.g0 for n in data.families[g]})


# --------------------------------------------------------------------------


@dataclass
class HypothesisReport:
    route: str
    checks: dict
    nonzero_characters: list
    notes: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return all(v is True for v in self.checks.values())

    @property
    def ac_component_guaranteed(self) -> bool:
        return self.hypotheses_hold and bool(self.nonzero_characters)

    def to_json(self) -> dict:
        return {
            "route": self.route,
            "checks": dict(self.checks),
            "hypotheses_hold": self.hypotheses_hold,
            "nonzero_characters": list(self.nonzero_characters),
            "ac_component_guaranteed": self.ac_component_guaranteed,
            "notes": list(self.notes),
        }


def ac_hypothesis_report(a0: Measure, a1: Measure | None = None, route: str = "semidirect") -> HypothesisReport:
    """Check the hypotheses guaranteeing a nontrivial absolutely continuous part of ``H_{a0+a1}``.

    ``route="semidirect"``: fibre commutation identity for ``a0`` and ``a1 * a0 == a0 * a1``.
    ``route="central"``: ``a0`` central (no commutation with ``a1`` required).
    Both routes require self-adjointness and ``supp(a1)`` inside the torsion subgroup.
    """
    group = a0.group
    a1 = Measure.zero(group) if a1 is None else a1
    a0._same(a1)
    checks = {
        "a0_selfadjoint": is_selfadjoint(a0),
        "a1_selfadjoint": is_selfadjoint(a1),
    }
    notes = []
    if route == "semidirect":
        _require_semidirect(group)
        checks["commutation_condition"] = checks["a0_selfadjoint"] and commutation_witness(a0) is None
        checks["a1_commutes_with_a0"] = convolve(a1, a0) == convolve(a0, a1)
    elif route == "central":
        checks["a0_central"] = is_central(a0)
    else:
        raise ValueError(f"unknown route {route!r}")
    flags = [group.in_torsion_subgroup(x) for x in a1.coeffs]
    checks["a1_torsion_supported"] = all(f is True for f in flags)
    if any(f is None for f in flags):
        notes.append("torsion-subgroup membership undetermined for part of supp(a1)")
    nonzero = [
        i for i, phi in enumerate(character_space(group).basis)
        if multiply_by_character(phi, 1, a0)
    ]
    return HypothesisReport(route, checks, nonzero, notes)


# short aliases for the fibre-data toolkit, kept for config and script authors
GarpData = FiberData
bequilles_check = commutation_condition_holds
quation_check = counting_condition_holds
garp_construct = construct_symmetric_set
garp_validate = validate_fiber_data
bouboulina_report = ac_hypothesis_report
