import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import f2_swap_z, s3_semidirect_z
from convspec import semidirect
from convspec.errors import PreconditionError
from convspec.groups import Cyclic, DirectProduct, IntLattice, Semidirect, Symmetric, WreathLite
from convspec.measures import Measure
from convspec.semidirect import (
    FiberData, FiberDataError, ac_hypothesis_report, commutation_condition_holds, commutation_witness,
    construct_symmetric_set, counting_condition_holds, validate_fiber_data,
)

S3Z_FAMILIES = {"-1": ["a", "aba"], "1": ["a", "b"]}


def s3z_data():
    return FiberData.build(s3_semidirect_z(), ["-1", "1"], S3Z_FAMILIES)


def indicator(X, literals):
    return Measure.indicator(X, [X.coerce(s) for s in literals])


def test_s3z_fibre_data_valid():
    data = s3z_data()
    diag = validate_fiber_data(data)
    assert diag.g0_symmetric and diag.families_complete and diag.tau_compatible
    assert diag.counting_condition and diag.noncompact_reach and diag.valid
    assert diag.witnesses == {}
    S = construct_symmetric_set(data)
    assert S == indicator(data.group, ["(a|-1)", "(aba|-1)", "(a|1)", "(b|1)"])
    assert commutation_condition_holds(S)
    assert counting_condition_holds(data)


def test_s3z_report():
    S = construct_symmetric_set(s3z_data())
    rep = ac_hypothesis_report(S)
    assert rep.hypotheses_hold and rep.ac_component_guaranteed
    assert rep.nonzero_characters == [0]
    js = rep.to_json()
    assert js["route"] == "semidirect" and all(js["checks"].values())


def test_trivial_action_fails_counting_with_witness():
    X = Semidirect(Symmetric(3), IntLattice(1))
    data = FiberData.build(X, ["-2", "-1", "1", "2"], {"-1": ["a"], "1": ["a"], "-2": ["b"], "2": ["b"]})
    diag = validate_fiber_data(data)
    assert diag.tau_compatible and not diag.counting_condition
    w = diag.witnesses["counting_condition"]
    assert w["lhs"] != w["rhs"] and w["m"] in ("[2,3,1]", "[3,1,2]")
    S = indicator(X, ["(a|-1)", "(a|1)", "(b|-2)", "(b|2)"])
    assert not commutation_condition_holds(S)
    cw = commutation_witness(S)
    assert cw.lhs != cw.rhs
    with pytest.raises(FiberDataError) as err:
        construct_symmetric_set(data)
    assert err.value.witness == w


def test_asymmetric_g0_rejected():
    data = FiberData.build(s3_semidirect_z(), ["1", "2"], {"1": ["a"], "2": ["b"]})
    diag = validate_fiber_data(data)
    assert not diag.g0_symmetric and diag.witnesses["g0_symmetric"]["g"] == "(1)"
    with pytest.raises(FiberDataError):
        construct_symmetric_set(data)
    with pytest.raises(FiberDataError):
        counting_condition_holds(data)


def test_tau_incompatible_families():
    data = FiberData.build(s3_semidirect_z(), ["-1", "1"], {"-1": ["a"], "1": ["b"]})
    diag = validate_fiber_data(data)
    assert not diag.tau_compatible
    assert set(diag.witnesses["tau_compatible"]) == {"g", "n"}


def test_missing_family_reported():
    data = FiberData.build(s3_semidirect_z(), ["-1", "1"], {"1": ["a"]})
    diag = validate_fiber_data(data)
    assert not diag.families_complete


def test_compact_reach_is_informational():
    W = WreathLite(Cyclic(2), 3, Cyclic(3), [[2, 3, 1]])
    data = FiberData.build(W, ["1", "2"], {"1": ["<0;0;0>"], "2": ["<0;0;0>"]})
    diag = validate_fiber_data(data)
    assert diag.valid and not diag.noncompact_reach
    construct_symmetric_set(data)


def test_torsion_perturbation():
    S = construct_symmetric_set(s3z_data())
    X = S.group
    good = Measure.delta(X)
    assert ac_hypothesis_report(S, good).hypotheses_hold
    bad = indicator(X, ["(e|1)", "(e|-1)"])
    rep = ac_hypothesis_report(S, bad)
    assert not rep.checks["a1_torsion_supported"]
    assert not rep.hypotheses_hold and not rep.ac_component_guaranteed


def test_wreath_lamplighter_hypotheses():
    W = WreathLite(Cyclic(2), 3, IntLattice(1), [[2, 3, 1]])
    a0 = indicator(W, ["(<0;0;0>|1)", "(<0;0;0>|-1)"])
    a1 = indicator(W, ["(<1;0;0>|0)", "(<0;1;0>|0)", "(<0;0;1>|0)"])
    rep = ac_hypothesis_report(a0, a1)
    assert rep.hypotheses_hold and rep.ac_component_guaranteed
    # a single lamp does not commute with the shifts
    rep = ac_hypothesis_report(a0, indicator(W, ["(<1;0;0>|0)"]))
    assert not rep.checks["a1_commutes_with_a0"]


def test_free_group_example():
    X = f2_swap_z()
    fam = ["a", "a^-1", "b", "b^-1"]
    data = FiberData.build(X, ["-1", "1"], {"-1": fam, "1": fam})
    diag = validate_fiber_data(data)
    assert diag.valid and diag.noncompact_reach
    assert ac_hypothesis_report(construct_symmetric_set(data)).ac_component_guaranteed


def test_central_route():
    X = DirectProduct(Symmetric(3), IntLattice(1))
    mu = indicator(X, [f"({n}|({g}))" for n in ("a", "b", "aba") for g in (-1, 1)])
    rep = ac_hypothesis_report(mu, route="central")
    assert rep.checks["a0_central"] and rep.ac_component_guaranteed
    with pytest.raises(PreconditionError):
        ac_hypothesis_report(mu, route="semidirect")


def test_non_semidirect_rejected():
    with pytest.raises(PreconditionError):
        commutation_witness(Measure.delta(IntLattice(1)))


def test_schema_aliases():
    assert semidirect.GarpData is FiberData
    assert semidirect.bequilles_check is commutation_condition_holds
    assert semidirect.quation_check is counting_condition_holds
    assert semidirect.garp_construct is construct_symmetric_set
    assert semidirect.bouboulina_report is ac_hypothesis_report


@given(st.randoms(use_true_random=False), st.integers(1, 3))
def test_indicator_commutation_matches_counting(rng, g):
    X = s3_semidirect_z()
    N = X.normal
    ng = rng.sample(N.elements_raw(), rng.randint(1, 4))
    nmg = [X.tau((-g,), N.inv(n)) for n in ng]
    data = FiberData(X, ((-g,), (g,)), {(g,): frozenset(ng), (-g,): frozenset(nmg)})
    diag = validate_fiber_data(data)
    assert diag.tau_compatible
    S = construct_symmetric_set(data) if diag.valid else Measure.indicator(
        X, [(n, (g,)) for n in ng] + [(n, (-g,)) for n in nmg])
    assert commutation_condition_holds(S) == diag.counting_condition
