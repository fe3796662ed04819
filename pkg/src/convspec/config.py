"""JSON analysis configs: group, named measures, characters, tasks, parameters."""
from __future__ import annotations

import hashlib
import json
import os
from importlib import resources
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .characters import RealCharacter, character_space
from .errors import ConvspecError, GroupError
from .groups import (
    ConjugationBy, Cyclic, DirectProduct, FreeGroup, GeneratorImages, Group, IntLattice,
    Semidirect, Symmetric, Trivial, WreathLite,
)
from .measures import ComplexRational, Measure
from .semidirect import FiberData

SCHEMA = "convspec.config/1"
TASK_TYPES = ("check", "spectrum", "moments", "fourier", "semidirect", "report")
FORMATS = ("json", "csv")

REQUIRABLE = {
    "check": {
        "selfadjoint", "central", "semi_adapted_all", "adapted_all", "precis_applicable_any",
        "derivation_identity_all", "kernel_chain", "ac_hypotheses",
    },
    "semidirect": {
        "g0_symmetric", "tau_compatible", "counting_condition", "noncompact_reach",
        "commutation_condition", "ac_hypotheses", "ac_component_guaranteed",
    },
    "fourier": {"m0_real", "m1_real", "m1_torsion_supported", "hypotheses_hold"},
    "moments": set(),
    "spectrum": set(),
    "report": set(),
}


class ConfigError(ConvspecError, ValueError):
    def __init__(self, where, message):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass
class Parameters:
    radii: tuple = (4, 6, 8)
    cluster_tol: float = 1e-6
    kernel_tol: float | None = None
    ball_cap: int = 200_000
    support_cap: int = 500_000
    dense_limit: int = 4000
    grid: int = 2**12
    csv_grid: int = 256
    fd_points: int = 20
    seed: int = 0


@dataclass
class AnalysisConfig:
    name: str
    group: Group
    measures: dict
    characters: list
    tasks: list
    parameters: Parameters
    output_dir: str = "convspec-out"
    formats: tuple = FORMATS
    fail_fast: bool = False
    radius_override: tuple | None = None
    raw: dict = field(default_factory=dict, repr=False)
    source: str = ""

    def digest(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


# --------------------------------------------------------------------------


def _need(block, key, where):
    if not isinstance(block, dict) or key not in block:
        raise ConfigError(where, f"missing field {key!r}")
    return block[key]


def _int(value, where, lo=None):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(where, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(where, f"must be >= {lo}")
    return value


def parse_group(block, where="group") -> Group:
    kind = _need(block, "type", where)
    try:
        if kind == "IntLattice":
            return IntLattice(_int(_need(block, "d", where), f"{where}.d", 1))
        if kind == "Cyclic":
            return Cyclic(_int(_need(block, "n", where), f"{where}.n", 1))
        if kind == "Symmetric":
            return Symmetric(_int(_need(block, "n", where), f"{where}.n", 1))
        if kind == "FreeGroup":
            return FreeGroup(_int(_need(block, "k", where), f"{where}.k", 1))
        if kind == "DirectProduct":
            return DirectProduct(
                parse_group(_need(block, "left", where), f"{where}.left"),
                parse_group(_need(block, "right", where), f"{where}.right"),
            )
        if kind == "Semidirect":
            n = parse_group(_need(block, "n", where), f"{where}.n")
            g = parse_group(_need(block, "g", where), f"{where}.g")
            return Semidirect(n, g, _parse_action(block.get("action", {"type": "Trivial"}), f"{where}.action"))
        if kind == "WreathLite":
            r = parse_group(_need(block, "r", where), f"{where}.r")
            j = _int(_need(block, "j", where), f"{where}.j", 1)
            g = parse_group(_need(block, "g", where), f"{where}.g")
            return WreathLite(r, j, g, _need(block, "action", where))
    except ConfigError:
        raise
    except (GroupError, TypeError, ValueError) as exc:
        raise ConfigError(where, str(exc)) from None
    raise ConfigError(f"{where}.type", f"unknown constructor {kind!r}")


def _parse_action(block, where):
    kind = _need(block, "type", where)
    if kind == "Trivial":
        return Trivial()
    if kind == "ConjugationBy":
        return ConjugationBy(str(_need(block, "c", where)))
    if kind == "GeneratorImages":
        images = _need(block, "images", where)
        return GeneratorImages(tuple(tuple(str(x) for x in imgs) for imgs in images))
    raise ConfigError(f"{where}.type", f"unknown action {kind!r} (Trivial, ConjugationBy, GeneratorImages)")


def _element(group, literal, where):
    try:
        return group.coerce(str(literal))
    except GroupError as exc:
        raise ConfigError(where, str(exc)) from None


def _rational(text, where):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(where, f"malformed rational {text!r}") from None


def parse_measure(block, group, where, named=None) -> Measure:
    if isinstance(block, str):
        if named and block in named:
            return named[block]
        raise ConfigError(where, f"unresolved measure reference {block!r}")
    if not isinstance(block, dict):
        raise ConfigError(where, "measure block must be an object")
    if "coeffs" in block:
        coeffs = {}
        for i, item in enumerate(block["coeffs"]):
            w = f"{where}.coeffs[{i}]"
            x = _element(group, _need(item, "element", w), f"{w}.element")
            c = ComplexRational(_rational(item.get("re", "0"), f"{w}.re"), _rational(item.get("im", "0"), f"{w}.im"))
            coeffs[x] = coeffs.get(x, ComplexRational(0)) + c
        mu = Measure(group, coeffs)
    elif "indicator" in block:
        elems = [_element(group, s, f"{where}.indicator[{i}]") for i, s in enumerate(block["indicator"])]
        if len(set(elems)) != len(elems):
            raise ConfigError(f"{where}.indicator", "repeated element")
        mu = Measure.indicator(group, elems)
    elif "conjugacy_class_indicator" in block:
        x = _element(group, block["conjugacy_class_indicator"], f"{where}.conjugacy_class_indicator")
        mu = Measure.conjugacy_class_indicator(group, x)
    elif "delta" in block:
        mu = Measure.delta(group, _element(group, block["delta"], f"{where}.delta"))
    elif "sum" in block:
        parts = [parse_measure(b, group, f"{where}.sum[{i}]", named) for i, b in enumerate(block["sum"])]
        mu = Measure.zero(group)
        for p in parts:
            mu = mu + p
    else:
        raise ConfigError(where, "expected one of coeffs, indicator, conjugacy_class_indicator, delta, sum")
    if "scale" in block:
        mu = mu.scale(_rational(block["scale"], f"{where}.scale"))
    return mu


def parse_characters(block, group, where="characters") -> list:
    if block is None or block == "auto":
        return list(character_space(group).basis)
    if not isinstance(block, list):
        raise ConfigError(where, "expected 'auto' or a list of {weights: [...]}")
    out = []
    for i, item in enumerate(block):
        w = f"{where}[{i}]"
        weights = [_rational(v, f"{w}.weights") for v in _need(item, "weights", w)]
        if len(weights) != group.char_dim:
            raise ConfigError(w, f"expected {group.char_dim} weights")
        out.append(RealCharacter(group, tuple(weights)))
    return out


def _parse_fibers(block, group, where):
    if not isinstance(group, Semidirect):
        raise ConfigError(where, "fibre data need a Semidirect group")
    g0 = _need(block, "G0", where)
    families = _need(block, "families", where)
    if not isinstance(g0, list) or not isinstance(families, dict):
        raise ConfigError(where, "expected G0: [...] and families: {g: [...]}")
    try:
        return FiberData.build(group, [str(g) for g in g0], {str(g): [str(n) for n in ns] for g, ns in families.items()})
    except GroupError as exc:
        raise ConfigError(where, str(exc)) from None


def _check_task(task, i, measures):
    where = f"tasks[{i}]"
    if not isinstance(task, dict):
        raise ConfigError(where, "task must be an object")
    kind = _need(task, "type", where)
    if kind not in TASK_TYPES:
        raise ConfigError(f"{where}.type", f"unknown task {kind!r}")
    for key in ("measure", "perturbation", "eigenvector"):
        if key in task and task[key] not in measures:
            raise ConfigError(f"{where}.{key}", f"unresolved measure reference {task[key]!r}")
    if kind not in ("report",) and "measure" not in task:
        raise ConfigError(where, "missing field 'measure'")
    for name in task.get("required", []):
        if name not in REQUIRABLE[kind]:
            raise ConfigError(f"{where}.required", f"{name!r} is not a certificate of a {kind} task")
    if "radii" in task:
        radii = task["radii"]
        if not isinstance(radii, list) or not radii:
            raise ConfigError(f"{where}.radii", "expected a nonempty list")
        for r in radii:
            _int(r, f"{where}.radii", 0)
    if "route" in task and task["route"] not in ("central", "semidirect"):
        raise ConfigError(f"{where}.route", "route must be 'central' or 'semidirect'")
    if kind == "moments" and "nmax" in task:
        _int(task["nmax"], f"{where}.nmax", 0)
    return dict(task)


def _parameters(block) -> Parameters:
    p = Parameters()
    if not block:
        return p
    if not isinstance(block, dict):
        raise ConfigError("parameters", "expected an object")
    known = set(Parameters.__dataclass_fields__)
    for key, value in block.items():
        where = f"parameters.{key}"
        if key not in known:
            raise ConfigError(where, "unknown parameter")
        if key == "radii":
            if not isinstance(value, list) or not value:
                raise ConfigError(where, "expected a nonempty list of radii")
            value = tuple(_int(r, where, 0) for r in value)
        elif key in ("cluster_tol", "kernel_tol"):
            if value is not None and (not isinstance(value, (int, float)) or value <= 0):
                raise ConfigError(where, "tolerance must be positive")
        else:
            value = _int(value, where, 1 if key != "seed" else 0)
        p = replace(p, **{key: value})
    return p


def config_from_dict(data: dict, source: str = "") -> AnalysisConfig:
    if not isinstance(data, dict):
        raise ConfigError("", "config must be a JSON object")
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ConfigError("schema", f"unsupported schema {schema!r} (expected {SCHEMA!r})")
    group = parse_group(_need(data, "group", ""))
    measures = {}
    for name, block in (data.get("measures") or {}).items():
        measures[name] = parse_measure(block, group, f"measures.{name}", measures)
    characters = parse_characters(data.get("characters", "auto"), group)
    tasks = data.get("tasks")
    if not isinstance(tasks, list) or not tasks:
        raise ConfigError("tasks", "at least one task is required")
    tasks = [_check_task(t, i, measures) for i, t in enumerate(tasks)]
    for i, task in enumerate(tasks):
        if "fibers" in task:
            task["fiber_data"] = _parse_fibers(task["fibers"], group, f"tasks[{i}].fibers")
    params = _parameters(data.get("parameters"))
    out = data.get("output") or {}
    formats = tuple(out.get("formats", FORMATS))
    for f in formats:
        if f not in FORMATS:
            raise ConfigError("output.formats", f"unknown format {f!r}")
    return AnalysisConfig(
        name=str(data.get("name", Path(source).stem if source else "analysis")),
        group=group,
        measures=measures,
        characters=characters,
        tasks=tasks,
        parameters=params,
        output_dir=str(out.get("dir", "convspec-out")),
        formats=formats,
        fail_fast=bool(data.get("fail_fast", False)),
        raw=data,
        source=source,
    )


def parse_config(path) -> AnalysisConfig:
    """Load and validate a config file; errors carry the JSON line or the field path."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return config_from_dict(data, str(path))


def apply_overrides(cfg: AnalysisConfig, out=None, radii=None, cap=None, fail_fast=None, env=None) -> AnalysisConfig:
    """Command-line flags win over environment variables, which win over the file."""
    env = os.environ if env is None else env
    params = cfg.parameters
    if env.get("CONVSPEC_CAP"):
        params = replace(params, ball_cap=int(env["CONVSPEC_CAP"]))
    if cap is not None:
        params = replace(params, ball_cap=cap)
    override = tuple(radii) if radii else cfg.radius_override
    if radii:
        params = replace(params, radii=tuple(radii))
    output_dir = env.get("CONVSPEC_OUT") or cfg.output_dir
    if out is not None:
        output_dir = str(out)
    return replace(
        cfg, parameters=params, output_dir=output_dir, radius_override=override,
        fail_fast=cfg.fail_fast if fail_fast is None else (fail_fast or cfg.fail_fast),
    )


def _bundled_dir():
    return resources.files("convspec") / "bundled"


def bundled_examples() -> list:
    """Names of the example configs shipped with the package."""
    return sorted(p.name[:-5] for p in _bundled_dir().iterdir() if p.name.endswith(".json"))


def bundled_path(name: str) -> Path:
    name = name[:-5] if name.endswith(".json") else name
    if name not in bundled_examples():
        raise ConfigError("--config", f"no file or bundled example named {name!r}")
    return Path(str(_bundled_dir() / f"{name}.json"))


def resolve_config_path(ref) -> Path:
    """A filesystem path if it exists, else the bundled example of that name."""
    path = Path(ref)
    return path if path.exists() else bundled_path(str(ref))
