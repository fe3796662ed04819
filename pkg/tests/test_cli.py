import copy
import json

import pytest

from convspec.cli import main
from convspec.config import (
    ConfigError, apply_overrides, bundled_examples, bundled_path, config_from_dict, parse_config,
)
from convspec.runner import run

Z_DELTA = {
    "schema": "convspec.config/1",
    "group": {"type": "IntLattice", "d": 1},
    "measures": {"shift": {"delta": "1"}},
    "tasks": [{"type": "check", "measure": "shift", "required": ["selfadjoint"]}],
}


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return path


def floats_in(obj, path="$"):
    if isinstance(obj, float):
        yield path
    elif isinstance(obj, dict):
        for k, v in obj.items():
            yield from floats_in(v, f"{path}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from floats_in(v, f"{path}[{i}]")


def strip_timestamp(data):
    data = copy.deepcopy(data)
    del data["provenance"]["timestamp"]
    return data


# -- parsing -----------------------------------------------------------------

def test_bundled_set():
    names = bundled_examples()
    assert len(names) >= 6
    for required in ("delta_identity", "subgroup_indicator", "s3_times_z_central", "s3_semidirect_z",
                     "wreath_lite", "free_semidirect"):
        assert required in names


def test_s3z_config_auto_characters():
    cfg = parse_config(bundled_path("s3_semidirect_z"))
    assert [list(map(str, phi.weights)) for phi in cfg.characters] == [["1"]]
    assert [t["type"] for t in cfg.tasks][:3] == ["check", "semidirect", "spectrum"]


def test_central_config_uses_e2_times_pm1():
    cfg = parse_config(bundled_path("s3_times_z_central"))
    mu = cfg.measures["chi_E2xpm1"]
    assert len(mu) == 6 and sorted({g for _, g in mu.support()}) == [(-1,), (1,)]


@pytest.mark.parametrize(
    "mutate, match",
    [
        (lambda d: d.update(tasks=[]), "tasks"),
        (lambda d: d.update(group={"type": "Symmetric", "n": 3}, measures={"m": {"indicator": ["a c"]}}), "'a c'"),
        (lambda d: d.update(group={"type": "Heisenberg"}), "unknown constructor"),
        (lambda d: d["tasks"][0].update(measure="nope"), "unresolved"),
        (lambda d: d.update(parameters={"radii": [-1]}), "parameters.radii"),
        (lambda d: d.update(parameters={"ball_cap": 0}), "parameters.ball_cap"),
        (lambda d: d.update(parameters={"colour": 1}), "unknown parameter"),
        (lambda d: d["tasks"][0].update(required=["adapted_everywhere"]), "required"),
        (lambda d: d.update(schema="convspec.config/9"), "schema"),
        (lambda d: d["tasks"][0].update(type="plot"), "unknown task"),
    ],
)
def test_config_errors(tmp_path, mutate, match):
    data = copy.deepcopy(Z_DELTA)
    mutate(data)
    with pytest.raises(ConfigError, match=match):
        parse_config(write(tmp_path, data))


def test_json_syntax_error_has_line(tmp_path):
    with pytest.raises(ConfigError, match=r"cfg.json:3:"):
        parse_config(write(tmp_path, '{\n  "group": {"type": "IntLattice", "d": 1},\n  oops\n}'))


def test_overrides_precedence(tmp_path):
    cfg = config_from_dict(copy.deepcopy(Z_DELTA))
    env = {"CONVSPEC_OUT": str(tmp_path / "env"), "CONVSPEC_CAP": "77"}
    c1 = apply_overrides(cfg, env=env)
    assert c1.output_dir == str(tmp_path / "env") and c1.parameters.ball_cap == 77
    c2 = apply_overrides(cfg, out=tmp_path / "flag", cap=5, radii=[2, 3], env=env)
    assert c2.output_dir == str(tmp_path / "flag") and c2.parameters.ball_cap == 5
    assert c2.radius_override == (2, 3)


# -- running -----------------------------------------------------------------

def test_required_failure_exit_code(tmp_path):
    cfg = apply_overrides(config_from_dict(copy.deepcopy(Z_DELTA)), out=tmp_path, env={})
    rep = run(cfg)
    assert rep.exit_code == 3
    assert rep.certificate["required"] == [{"task": "0:check:shift", "check": "selfadjoint", "passed": False}]


def test_non_abelian_fourier_recorded(tmp_path):
    data = {
        "group": {"type": "Symmetric", "n": 3},
        "measures": {"E2": {"conjugacy_class_indicator": "a"}},
        "tasks": [{"type": "fourier", "measure": "E2"}, {"type": "check", "measure": "E2", "required": ["central"]}],
    }
    rep = run(apply_overrides(config_from_dict(data), out=tmp_path, env={}))
    assert rep.data["tasks"][0]["status"] == "error"
    assert "non-abelian spec" in rep.data["tasks"][0]["error"]
    assert rep.data["tasks"][1]["status"] == "ok" and rep.exit_code == 0


def test_fail_fast_skips_rest(tmp_path):
    data = copy.deepcopy(Z_DELTA)
    data["tasks"].append({"type": "moments", "measure": "shift"})
    rep = run(apply_overrides(config_from_dict(data), out=tmp_path, fail_fast=True, env={}))
    assert [t["status"] for t in rep.data["tasks"]] == ["ok", "skipped"]
    rep = run(apply_overrides(config_from_dict(data), out=tmp_path, env={}))
    assert rep.data["tasks"][1]["status"] == "error"  # ran; delta_1 is not self-adjoint


def test_resource_cap_exit_code(tmp_path):
    cfg = apply_overrides(parse_config(bundled_path("z_free_walk")), out=tmp_path, cap=5, env={})
    rep = run(cfg)
    assert rep.exit_code == 4
    assert any(t["status"] == "resource_cap" for t in rep.data["tasks"])


def test_s3z_run_artifacts(tmp_path):
    cfg = apply_overrides(parse_config(bundled_path("s3_semidirect_z")), out=tmp_path, env={})
    rep = run(cfg)
    assert rep.exit_code == 0
    cert = rep.certificate["tasks"]
    check = cert["0:check:chi_S"]
    assert check["selfadjoint"] and check["semi_adapted_all"] and check["adapted_all"]
    assert check["precis_applicable_any"] and not check["central"]
    semi = cert["1:semidirect:chi_S"]
    assert all(semi[k] for k in ("g0_symmetric", "tau_compatible", "counting_condition", "commutation_condition"))
    for r in (4, 6, 8):
        lines = (tmp_path / f"spectrum_2_chi_S_r{r}.csv").read_text().splitlines()
        assert lines[0] == "eigenvalue,weight" and len(lines) > 1
    heur = rep.heuristic["2:spectrum:chi_S"]
    assert heur["kernel_weight_decreasing"]
    assert (tmp_path / "report.json").exists() and (tmp_path / "summary.txt").exists()


def test_determinism_and_certificate_purity(tmp_path):
    for name in ("subgroup_indicator", "z_free_walk"):
        cfg = parse_config(bundled_path(name))
        a = run(apply_overrides(cfg, out=tmp_path / "a", env={}))
        b = run(apply_overrides(cfg, out=tmp_path / "b", env={}))
        ja = json.loads((tmp_path / "a" / "report.json").read_text())
        jb = json.loads((tmp_path / "b" / "report.json").read_text())
        assert json.dumps(strip_timestamp(ja)) == json.dumps(strip_timestamp(jb))
        assert list(floats_in(a.certificate)) == []
        assert a.exit_code == b.exit_code == 0


# -- command line --------------------------------------------------------------

def test_cli_validate_and_examples(tmp_path, capsys):
    assert main(["validate", "--config", "s3_semidirect_z"]) == 0
    assert "ok: s3_semidirect_z" in capsys.readouterr().out
    assert main(["examples", "--write", str(tmp_path)]) == 0
    assert len(list(tmp_path.glob("*.json"))) == len(bundled_examples())
    assert main(["validate", "--config", str(tmp_path / "wreath_lite.json")]) == 0


def test_cli_config_error_exit(tmp_path, capsys):
    path = write(tmp_path, {**Z_DELTA, "tasks": []})
    assert main(["validate", "--config", str(path)]) == 2
    assert "config error" in capsys.readouterr().err
    assert main(["run", "--config", "no_such_example"]) == 2


def test_cli_run_flags(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CONVSPEC_OUT", str(tmp_path / "env"))
    assert main(["run", "--config", "z_free_walk", "--radius", "2", "--radius", "3", "--radius", "4"]) == 0
    report = json.loads((tmp_path / "env" / "report.json").read_text())
    assert report["provenance"]["parameters"]["radii"] == [2, 3, 4]
    assert (tmp_path / "env" / "spectrum_2_walk_r3.csv").exists()
    assert main(["run", "--config", "z_free_walk", "--out", str(tmp_path / "o"), "--cap", "3"]) == 4
    monkeypatch.setenv("CONVSPEC_CAP", "3")
    assert main(["run", "--config", "z_free_walk", "--out", str(tmp_path / "p")]) == 4
