"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or directly
with ``python3 tests/test_acceptance.py``.
"""
import copy
import json
import random
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ZOO, random_character, random_measure  # noqa: E402
from convspec.characters import (  # noqa: E402
    character_space, derivation_identity_check, is_adapted, is_semi_adapted, kernel_chain_witness,
    multiply_by_character, precis_applicable,
)
from convspec.config import apply_overrides, bundled_examples, bundled_path, parse_config  # noqa: E402
from convspec.fourier import DualSubgroup, Symbol, derivative_identity_check, dual_points, layout  # noqa: E402
from convspec.groups import ConjugationBy, Cyclic, DirectProduct, FreeGroup, IntLattice, Semidirect, Symmetric  # noqa: E402
from convspec.measures import (  # noqa: E402
    Measure, adjoint, apply, convolve, is_central, is_selfadjoint, moments_at_identity, norm_bound_holds,
)
from convspec.runner import run  # noqa: E402
from convspec.semidirect import (  # noqa: E402
    FiberData, commutation_condition_holds, construct_symmetric_set, validate_fiber_data,
)
from convspec.spectral import (  # noqa: E402
    build_truncation, eigendecompose, kernel_weight, moment_crosscheck, point_mass_estimate, spectral_report,
)

RESULTS = {}


def report(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def s3_semidirect_z():
    return Semidirect(Symmetric(3), IntLattice(1), ConjugationBy("a"))


def indicator(X, literals):
    return Measure.indicator(X, [X.coerce(s) for s in literals])


# 1 ---------------------------------------------------------------------------

def test_criterion_1_exact_algebra():
    rng = random.Random(20261015)
    names = sorted(ZOO)
    cases = failures = 0
    t0 = time.perf_counter()
    for i in range(52 * len(names)):
        G = ZOO[names[i % len(names)]]
        mu, nu, rho = (random_measure(G, rng) for _ in range(3))
        phi = random_character(G, rng)
        ok = (
            convolve(convolve(mu, nu), rho) == convolve(mu, convolve(nu, rho))
            and adjoint(adjoint(mu)) == mu
            and norm_bound_holds(mu, nu)
            and derivation_identity_check(phi, mu, nu)
        )
        cases += 1
        failures += not ok
    dt = time.perf_counter() - t0
    ok = cases >= 500 and failures == 0 and dt < 30
    assert report(1, ok, f"{cases} randomized cases over {len(names)} groups, {failures} failures, {dt:.1f}s (< 30s)")


# 2 ---------------------------------------------------------------------------

def test_criterion_2_s3z_certificates():
    t0 = time.perf_counter()
    X = s3_semidirect_z()
    S = indicator(X, ["(a|-1)", "(aba|-1)", "(a|1)", "(b|1)"])
    phi = character_space(X).basis[0]
    data = FiberData.build(X, ["-1", "1"], {"-1": ["a", "aba"], "1": ["a", "b"]})
    diag = validate_fiber_data(data)
    checks = {
        "selfadjoint": is_selfadjoint(S),
        "procedure": diag.g0_symmetric and diag.tau_compatible and construct_symmetric_set(data) == S,
        "fibre commutation": commutation_condition_holds(S),
        "counting": diag.counting_condition,
        "semi_adapted": is_semi_adapted(phi, S),
        "adapted": is_adapted(phi, S),
        "precis_applicable": precis_applicable(phi, S),
        "phi(n,g)=g": phi("(b|3)") == 3 and phi("(aba|-1)") == -1,
    }
    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < 5
    failed = [k for k, v in checks.items() if not v]
    extra = f" failed: {failed}" if failed else ""
    assert report(2, ok, f"S3 x_tau Z set S: {len(checks) - len(failed)}/{len(checks)} exact checks{extra}, {dt:.2f}s (< 5s)")


# 3 ---------------------------------------------------------------------------

def test_criterion_3_central_route():
    X = DirectProduct(Symmetric(3), IntLattice(1))
    measures = {
        "E2": Measure.conjugacy_class_indicator(X, X.coerce("(a|(0))")),
        "E3": Measure.conjugacy_class_indicator(X, X.coerce("(ab|(0))")),
        "E2x{-1,1}": indicator(X, [f"({n}|({g}))" for n in ("a", "b", "aba") for g in (-1, 1)]),
    }
    basis = character_space(X).basis
    rows = {k: is_central(m) and all(is_adapted(phi, m) for phi in basis) for k, m in measures.items()}
    ok = all(rows.values()) and len(measures["E2"]) == 3 and len(measures["E3"]) == 2
    assert report(3, ok, f"central and adapted for every basis character: {rows}")


# 4 ---------------------------------------------------------------------------

def test_criterion_4_eigenvector():
    X = DirectProduct(Cyclic(2), IntLattice(1))
    mu = Measure.delta(X, X.coerce("(1|(0))"))
    chi_Y = indicator(X, ["(0|(0))", "(1|(0))"])
    phi = character_space(X).basis[0]
    w = kernel_chain_witness([phi], mu, chi_Y)
    ok = apply(mu, chi_Y) == chi_Y and w.eigenvalue == 1 and not convolve(multiply_by_character(phi, 1, mu), chi_Y)
    assert report(4, ok, f"H_mu chi_Y = {w.eigenvalue} chi_Y and (Phi mu) * chi_Y = 0 exactly")


# 5 ---------------------------------------------------------------------------

def test_criterion_5_moment_window():
    t0 = time.perf_counter()
    Z = IntLattice(1)
    F = FreeGroup(2)
    cases = {
        "Z": Measure.indicator(Z, [(1,), (-1,)]),
        "F2": indicator(F, ["a", "a^-1", "b", "b^-1"]),
    }
    exact = {k: moments_at_identity(m, 8) for k, m in cases.items()}
    ok = exact["Z"][2] == 2 and exact["Z"][4] == 6
    ok &= exact["F2"][2] == 4 and exact["F2"][4] == 28 and all(exact["F2"][n] == 0 for n in (1, 3, 5, 7))
    worst = 0.0
    for mu in cases.values():
        rows = moment_crosscheck(build_truncation(mu, 8), 8)
        worst = max(worst, max(r.diff / max(1.0, abs(complex(r.exact))) for r in rows))
        ok &= all(r.ok for r in rows)
    dt = time.perf_counter() - t0
    ok = ok and dt < 60
    assert report(5, ok, f"Z m2,m4 = {exact['Z'][2]},{exact['Z'][4]}; F2 m2,m4 = {exact['F2'][2]},{exact['F2'][4]}; "
                         f"max rel. error {worst:.1e} (<= 1e-8) at radius 8, {dt:.1f}s (< 60s)")


# 6 ---------------------------------------------------------------------------

def test_criterion_6_tridiagonal_oracle():
    Z = IntLattice(1)
    mu = Measure.indicator(Z, [(1,), (-1,)])
    worst = 0.0
    for r in (4, 6, 8):
        evals, _ = eigendecompose(build_truncation(mu, r))
        k = np.arange(1, 2 * r + 2)
        worst = max(worst, np.abs(np.sort(2 * np.cos(k * np.pi / (2 * r + 2))) - evals).max())
    assert report(6, worst < 1e-8, f"Z truncations r in {{4,6,8}} vs 2cos(k pi/(2r+2)): max error {worst:.1e} (< 1e-8)")


# 7 ---------------------------------------------------------------------------

BUNDLED_ABELIAN = [("z_free_walk", "walk"), ("delta_identity", "walk2d"), ("subgroup_indicator", "m0")]


def test_criterion_7_fourier():
    rng = np.random.default_rng(7)
    checks = []
    for cfg_name, measure in BUNDLED_ABELIAN:
        cfg = parse_config(bundled_path(cfg_name))
        mu = cfg.measures[measure]
        mods = layout(mu.group)
        phis = [phi for phi in cfg.characters if any(DualSubgroup.from_character(phi).direction)]
        for _ in range(20):
            xi = np.array([2 * np.pi * (rng.integers(n) / n if n else rng.random()) for n in mods])
            checks += [derivative_identity_check(mu, phi, xi) for phi in phis]
    min_order = min(c.observed_order for c in checks)
    fd_ok = all(c.passed for c in checks)

    finite = {
        "C4": Measure.indicator(Cyclic(4), [1, 3]),
        "C2xC3": None,
    }
    G = DirectProduct(Cyclic(2), Cyclic(3))
    finite["C2xC3"] = Measure(G, {(1, 0): 1, (0, 1): 1, (0, 2): 1, (1, 1): 2, (1, 2): 2})
    gaps = {}
    for name, mu in finite.items():
        T = build_truncation(mu, 6)
        assert T.size == mu.group.size()
        symbol = np.sort(Symbol(mu)(dual_points(mu.group)).real)
        gaps[name] = float(np.abs(np.sort(eigendecompose(T)[0]) - symbol).max())
    ok = fd_ok and min_order >= 2 and all(g < 1e-8 for g in gaps.values())
    assert report(7, ok, f"{len(checks)} derivative checks on 3 bundled measures x 20 points, min order {min_order:.2f} (>= 2); "
                         f"symbol vs eigenvalue multisets max gap {max(gaps.values()):.1e} (< 1e-8)")


# 8 ---------------------------------------------------------------------------

def test_criterion_8_point_mass_trends():
    radii = (4, 6, 8)
    Z = IntLattice(1)
    ta = point_mass_estimate(spectral_report(Measure.indicator(Z, [(1,), (-1,)]), radii))
    a_ok = ta.trend == "decreasing" and ta.max_mass[-1] < 0.2

    X = DirectProduct(Cyclic(2), Z)
    tb = point_mass_estimate(spectral_report(Measure.delta(X, X.coerce("(1|(0))")), radii))
    atoms = {round(c): ms for c, ms in tb.persistent_atoms}
    b_ok = set(atoms) == {-1, 1} and all(abs(m - 0.5) <= 1e-6 for ms in atoms.values() for m in ms)

    Y = s3_semidirect_z()
    S = indicator(Y, ["(a|-1)", "(aba|-1)", "(a|1)", "(b|1)"])
    kw = [kernel_weight(build_truncation(S, r)) for r in radii]
    c_ok = all(b < a for a, b in zip(kw, kw[1:]))
    ok = a_ok and b_ok and c_ok
    assert report(8, ok, f"(a) Z walk max weight {[round(m, 4) for m in ta.max_mass]} {ta.trend}; "
                         f"(b) C2xZ masses at +-1 {[round(m, 6) for m in atoms.get(1, [])]}; "
                         f"(c) S3 x_tau Z kernel weight {[round(w, 4) for w in kw]} at radii {list(radii)} "
                         f"(trend heuristics, not spectral-type proofs)")


# 9 ---------------------------------------------------------------------------

def _strip(report_json):
    data = copy.deepcopy(report_json)
    del data["provenance"]["timestamp"]
    return json.dumps(data, indent=2)


def _floats(obj):
    if isinstance(obj, float):
        return 1
    if isinstance(obj, dict):
        return sum(_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return sum(_floats(v) for v in obj)
    return 0


def test_criterion_9_cli_integration():
    names = bundled_examples()
    codes, errors, deterministic, float_count = {}, [], True, 0
    with tempfile.TemporaryDirectory() as tmp:
        for name in names:
            cfg = parse_config(bundled_path(name))
            texts = []
            for rep_dir in ("a", "b"):
                out = Path(tmp) / name / rep_dir
                res = run(apply_overrides(cfg, out=out, env={}))
                codes[name] = res.exit_code
                errors += [f"{name}:{t['key']}" for t in res.data["tasks"] if t["status"] != "ok"]
                float_count += _floats(res.certificate)
                texts.append(_strip(json.loads((out / "report.json").read_text())))
            deterministic &= texts[0] == texts[1]
    ok = len(names) >= 6 and all(c == 0 for c in codes.values()) and not errors and deterministic and float_count == 0
    assert report(9, ok, f"{len(names)} bundled examples, exit codes {sorted(set(codes.values()))}, task errors {errors or 0}, "
                         f"deterministic={deterministic}, floats in certificates={float_count}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
