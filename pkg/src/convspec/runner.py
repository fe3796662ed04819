"""Execute an :class:`AnalysisConfig` and write ``report.json`` plus CSV plot series.

The report keeps exact verdicts (booleans, rational strings) in ``certificate``
and every floating-point quantity in ``heuristic``.  Anything that changes from
one run to the next lives under ``provenance.timestamp``.
"""
from __future__ import annotations

import csv
import datetime as _dt
import json
import platform
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy
import sympy

from . import __version__
from .characters import (
    PRECIS_CONSEQUENCE, derivation_identity_check, is_adapted, is_semi_adapted,
    kernel_chain_witness, precis_applicable,
)
from .config import AnalysisConfig
from .errors import ConvspecError, ResourceCapError
from .fourier import (
    DualSubgroup, derivative_identity_check, layout, multiplier_report, point_spectrum_scan,
    symbol_grid,
)
from .groups import Semidirect
from .measures import is_central, is_selfadjoint, l1_norm, moments_at_identity
from .semidirect import (
    ac_hypothesis_report, commutation_witness, construct_symmetric_set, validate_fiber_data,
)
from .spectral import build_truncation, moment_crosscheck, point_mass_estimate, spectral_report

REPORT_SCHEMA = "convspec.report/1"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REQUIRED = 3
EXIT_CAP = 4


def _f(x) -> float:
    """Floats rounded to 12 significant digits so reports do not hinge on the last ulp."""
    x = float(x)
    return 0.0 if x == 0 else float(f"{x:.12g}")


@dataclass
class TaskResult:
    index: int
    kind: str
    measure: str | None
    status: str = "ok"
    error: str | None = None
    certificate: dict = field(default_factory=dict)
    heuristic: dict = field(default_factory=dict)
    required: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def key(self) -> str:
        return f"{self.index}:{self.kind}" + (f":{self.measure}" if self.measure else "")


@dataclass
class RunReport:
    data: dict
    exit_code: int
    artifacts: list

    @property
    def certificate(self) -> dict:
        return self.data["certificate"]

    @property
    def heuristic(self) -> dict:
        return self.data["heuristic"]


# --------------------------------------------------------------------------
# task bodies: each returns nothing and fills ``res``


def _task_check(cfg: AnalysisConfig, task, res: TaskResult, out: Path):
    mu = cfg.measures[task["measure"]]
    sa = is_selfadjoint(mu)
    cert = {"selfadjoint": sa, "central": is_central(mu)}
    rows = []
    for phi in cfg.characters:
        row = {"weights": [str(w) for w in phi.weights],
               "derivation_identity": derivation_identity_check(phi, mu, mu)}
        if sa:
            row["semi_adapted"] = is_semi_adapted(phi, mu)
            row["adapted"] = row["semi_adapted"] and is_adapted(phi, mu)
            row["precis_applicable"] = precis_applicable(phi, mu) if row["adapted"] else False
            if row["precis_applicable"]:
                row["consequence"] = PRECIS_CONSEQUENCE
        else:
            row.update(semi_adapted=None, adapted=None, precis_applicable=None)
        rows.append(row)
    cert["characters"] = rows
    cert["semi_adapted_all"] = sa and all(r["semi_adapted"] for r in rows)
    cert["adapted_all"] = sa and all(r["adapted"] for r in rows)
    cert["precis_applicable_any"] = any(r["precis_applicable"] for r in rows)
    cert["derivation_identity_all"] = all(r["derivation_identity"] for r in rows)
    if "eigenvector" in task:
        w = kernel_chain_witness(cfg.characters, mu, cfg.measures[task["eigenvector"]])
        cert["kernel_chain"] = {"eigenvector": task["eigenvector"], "eigenvalue": str(w.eigenvalue),
                                "vanishes": list(w.vanishes), "holds": w.holds}
    if "perturbation" in task or "route" in task:
        route = task.get("route", "semidirect" if isinstance(mu.group, Semidirect) else "central")
        a1 = cfg.measures.get(task.get("perturbation"))
        cert["ac_hypotheses"] = ac_hypothesis_report(mu, a1, route).to_json()
    res.certificate = cert


def _task_semidirect(cfg: AnalysisConfig, task, res: TaskResult, out: Path):
    a0 = cfg.measures[task["measure"]]
    a1 = cfg.measures.get(task.get("perturbation"))
    group = a0.group
    cert = {}
    if "fiber_data" in task:
        data = task["fiber_data"]
        diag = validate_fiber_data(data)
        cert["fibers"] = data.to_json()
        cert.update({k: v for k, v in diag.to_json().items()})
        cert["matches_measure"] = diag.valid and construct_symmetric_set(data) == a0
    wit = commutation_witness(a0) if is_selfadjoint(a0) else None
    cert["commutation_condition"] = is_selfadjoint(a0) and wit is None
    if wit is not None:
        cert["commutation_witness"] = wit.to_json(group)
    report = ac_hypothesis_report(a0, a1, "semidirect")
    cert["ac_report"] = report.to_json()
    cert["ac_hypotheses"] = report.hypotheses_hold
    cert["ac_component_guaranteed"] = report.ac_component_guaranteed
    res.certificate = cert


def _radii(cfg, task):
    if cfg.radius_override:
        return tuple(cfg.radius_override)
    return tuple(task.get("radii", cfg.parameters.radii))


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _task_spectrum(cfg: AnalysisConfig, task, res: TaskResult, out: Path):
    p = cfg.parameters
    mu = cfg.measures[task["measure"]]
    rep = spectral_report(mu, _radii(cfg, task), kernel_tol=p.kernel_tol, cap=p.ball_cap, dense_limit=p.dense_limit)
    res.certificate = {"selfadjoint": True, "l1_norm": str(l1_norm(mu))}
    per = []
    for r in rep.results:
        atoms = r.atoms(p.cluster_tol)
        big = max(atoms, key=lambda a: a[1])
        per.append({
            "radius": r.radius,
            "ball_size": r.ball_size,
            "hull": [_f(v) for v in r.hull],
            "kernel_weight": _f(r.kernel_weight),
            "max_atom": {"eigenvalue": _f(big[0]), "weight": _f(big[1])},
            "moments_within_tolerance": all(m.ok for m in r.moments),
            "max_moment_error": _f(max(m.diff for m in r.moments)),
        })
        if "csv" in cfg.formats:
            name = f"spectrum_{res.index}_{task['measure']}_r{r.radius}.csv"
            _write_csv(out / name, ["eigenvalue", "weight"],
                       [(f"{e:.15g}", f"{w:.15g}") for e, w in zip(r.eigenvalues, r.weights)])
            res.artifacts.append(name)
    heur = {"norm_bound": _f(rep.norm_bound), "radii": per}
    kws = [row["kernel_weight"] for row in per]
    heur["kernel_weight_decreasing"] = len(kws) > 1 and all(b < a for a, b in zip(kws, kws[1:]))
    if len(rep.results) >= 3:
        t = point_mass_estimate(rep, p.cluster_tol)
        heur["point_mass"] = {
            "max_mass": [_f(m) for m in t.max_mass],
            "location": [_f(c) for c in t.max_mass_location],
            "trend": t.trend,
            "label": t.label,
            "persistent_atoms": [{"eigenvalue": _f(c), "mass": [_f(m) for m in ms]} for c, ms in t.persistent_atoms],
        }
    heur["note"] = "finite compressions: trends are heuristic, not spectral-type proofs"
    res.heuristic = heur


def _task_moments(cfg: AnalysisConfig, task, res: TaskResult, out: Path):
    mu = cfg.measures[task["measure"]]
    nmax = task.get("nmax", 8)
    radius = task.get("radius", nmax)
    exact = moments_at_identity(mu, nmax)
    res.certificate = {"exact_moments": [str(m) for m in exact]}
    T = build_truncation(mu, radius, cfg.parameters.ball_cap)
    rows = moment_crosscheck(T, nmax)
    res.heuristic = {
        "radius": radius,
        "ball_size": T.size,
        "matrix_moments": [[_f(r.matrix.real), _f(r.matrix.imag)] for r in rows],
        "abs_error": [_f(r.diff) for r in rows],
        "all_within_tolerance": all(r.ok for r in rows),
    }


def _random_dual(mods, rng):
    return np.array([rng.integers(n) * 2 * np.pi / n if n else rng.uniform(0, 2 * np.pi) for n in mods])


def _task_fourier(cfg: AnalysisConfig, task, res: TaskResult, out: Path):
    p = cfg.parameters
    mu = cfg.measures[task["measure"]]
    mods = layout(mu.group)
    a1 = cfg.measures.get(task.get("perturbation"))
    rep = multiplier_report(mu, a1)
    cert = dict(rep.checks)
    cert.update(hypotheses_hold=rep.hypotheses_hold, nonzero_directions=rep.nonzero_directions, verdict=rep.verdict)
    res.certificate = cert

    rng = np.random.default_rng(p.seed)
    checks = []
    for idx, phi in enumerate(cfg.characters):
        if not any(DualSubgroup.from_character(phi).direction):
            continue
        for _ in range(task.get("points", p.fd_points)):
            checks.append((idx, derivative_identity_check(mu, phi, _random_dual(mods, rng))))
    heur = {}
    if checks:
        orders = [c.observed_order for _, c in checks]
        heur["derivative_identity"] = {
            "points": len(checks),
            "passed": sum(c.passed for _, c in checks),
            "min_observed_order": _f(min(orders)) if np.isfinite(min(orders)) else "inf",
            "max_error": _f(max(min(c.errors) for _, c in checks)),
        }
    n_lattice = sum(1 for n in mods if n == 0)
    if n_lattice <= 2:
        scan = point_spectrum_scan(mu, p.grid if n_lattice < 2 else min(p.grid, 1024))
        heur["point_spectrum"] = {
            "exact": scan.exact,
            "values": [[_f(v), _f(w)] for v, w in scan.values],
            "notes": scan.notes,
        }
        if scan.exact:
            heur["point_spectrum"]["eigenvalues"] = [_f(v) for v in scan.eigenvalues] if all(
                isinstance(v, float) for v in scan.eigenvalues) else [[_f(v.real), _f(v.imag)] for v in scan.eigenvalues]
    if "csv" in cfg.formats and n_lattice <= 2:
        values, axes = symbol_grid(mu, p.csv_grid)
        name = f"symbol_{res.index}_{task['measure']}.csv"
        header = [f"theta_{i + 1}" for i in range(len(mods))] + ["re", "im"]
        rows = []
        for idx in np.ndindex(values.shape):
            v = values[idx]
            rows.append([f"{axes[k][i]:.12g}" for k, i in enumerate(idx)] + [f"{v.real:.12g}", f"{v.imag:.12g}"])
        _write_csv(out / name, header, rows)
        res.artifacts.append(name)
    res.heuristic = heur


def _task_report(cfg, task, res: TaskResult, out: Path, done: list):
    table = []
    for r in done:
        for name, ok in sorted(r.required.items()):
            table.append({"task": r.key, "check": name, "passed": ok})
    res.certificate = {"required_checks": table, "all_required_passed": all(t["passed"] for t in table)}
    lines = [f"{'task':32s} {'check':28s} result"]
    lines += [f"{t['task']:32s} {t['check']:28s} {'PASS' if t['passed'] else 'FAIL'}" for t in table]
    lines += [f"{r.key:32s} {'(task)':28s} {r.status.upper()}: {r.error}" for r in done if r.status != "ok"]
    if out.is_dir():
        (out / "summary.txt").write_text("\n".join(lines) + "\n")
        res.artifacts.append("summary.txt")


TASKS = {
    "check": _task_check,
    "semidirect": _task_semidirect,
    "spectrum": _task_spectrum,
    "moments": _task_moments,
    "fourier": _task_fourier,
}


def _required_value(cert, name) -> bool:
    v = cert.get(name)
    if isinstance(v, dict):
        v = v.get("holds", v.get("hypotheses_hold"))
    return v is True


# --------------------------------------------------------------------------


def _versions() -> dict:
    return {
        "convspec": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "sympy": sympy.__version__,
    }


def run(cfg: AnalysisConfig, write: bool = True) -> RunReport:
    """Run the tasks in order; the exit code follows the documented table."""
    if not write:
        cfg = replace(cfg, formats=())
    out = Path(cfg.output_dir)
    if write:
        out.mkdir(parents=True, exist_ok=True)
    started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    done, cap_hit, stop = [], False, False
    for i, task in enumerate(cfg.tasks):
        res = TaskResult(i, task["type"], task.get("measure"))
        if stop:
            res.status = "skipped"
            done.append(res)
            continue
        t0 = time.perf_counter()
        try:
            if task["type"] == "report":
                _task_report(cfg, task, res, out, done)
            else:
                TASKS[task["type"]](cfg, task, res, out)
        except ResourceCapError as exc:
            res.status, res.error, cap_hit = "resource_cap", str(exc), True
        except (ConvspecError, ValueError, ArithmeticError) as exc:
            res.status, res.error = "error", str(exc)
        res.seconds = time.perf_counter() - t0
        res.required = {name: res.status == "ok" and _required_value(res.certificate, name)
                        for name in task.get("required", [])}
        done.append(res)
        if cfg.fail_fast and (res.status != "ok" or not all(res.required.values())):
            stop = True

    required = [{"task": r.key, "check": n, "passed": ok} for r in done for n, ok in r.required.items()]
    all_required = all(x["passed"] for x in required)
    if cap_hit:
        code = EXIT_CAP
    elif not all_required:
        code = EXIT_REQUIRED
    else:
        code = EXIT_OK

    data = {
        "schema": REPORT_SCHEMA,
        "name": cfg.name,
        "group": repr(cfg.group),
        "characters": [phi.to_json() for phi in cfg.characters],
        "tasks": [
            {"key": r.key, "type": r.kind, "measure": r.measure, "status": r.status, "error": r.error,
             "artifacts": r.artifacts}
            for r in done
        ],
        "certificate": {
            "tasks": {r.key: r.certificate for r in done if r.certificate},
            "required": required,
            "all_required_passed": all_required,
        },
        "heuristic": {r.key: r.heuristic for r in done if r.heuristic},
        "exit_code": code,
        "provenance": {
            "config_sha256": cfg.digest(),
            "versions": _versions(),
            "parameters": {
                "radii": list(cfg.radius_override or cfg.parameters.radii),
                "ball_cap": cfg.parameters.ball_cap,
                "cluster_tol": cfg.parameters.cluster_tol,
                "seed": cfg.parameters.seed,
            },
            "timestamp": {
                "started": started,
                "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
                "task_seconds": {r.key: round(r.seconds, 4) for r in done},
            },
        },
    }
    artifacts = [a for r in done for a in r.artifacts]
    if write and "json" in cfg.formats:
        (out / "report.json").write_text(json.dumps(data, indent=2) + "\n")
        artifacts.insert(0, "report.json")
    return RunReport(data, code, artifacts)
