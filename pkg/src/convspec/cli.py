"""Command line: ``convspec validate|run|examples``."""
from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from .config import ConfigError, apply_overrides, bundled_examples, bundled_path, parse_config, resolve_config_path
from .runner import EXIT_CONFIG, EXIT_OK, run


def _load(args):
    return parse_config(resolve_config_path(args.config))


def cmd_validate(args) -> int:
    cfg = _load(args)
    kinds = ", ".join(t["type"] for t in cfg.tasks)
    print(f"ok: {cfg.name}: {cfg.group!r}")
    print(f"  measures: {', '.join(cfg.measures) or '-'}")
    print(f"  characters: {[ [str(w) for w in phi.weights] for phi in cfg.characters]}")
    print(f"  tasks: {kinds}")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = apply_overrides(_load(args), out=args.out, radii=args.radius, cap=args.cap,
                          fail_fast=args.fail_fast or None)
    report = run(cfg)
    for t in report.data["tasks"]:
        line = f"{t['key']:36s} {t['status']}"
        if t["error"]:
            line += f": {t['error']}"
        print(line)
    for r in report.certificate["required"]:
        print(f"  {'PASS' if r['passed'] else 'FAIL'} {r['task']} {r['check']}")
    print(f"wrote {', '.join(report.artifacts)} to {cfg.output_dir}")
    print(f"exit {report.exit_code}")
    return report.exit_code


def cmd_examples(args) -> int:
    names = bundled_examples()
    if args.write:
        dest = Path(args.write)
        dest.mkdir(parents=True, exist_ok=True)
        for name in names:
            shutil.copyfile(bundled_path(name), dest / f"{name}.json")
    for name in names:
        desc = json.loads(bundled_path(name).read_text()).get("description", "")
        print(f"{name:24s} {desc}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="convspec", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse and validate a config")
    v.add_argument("--config", required=True, help="path, or name of a bundled example")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("run", help="run every task of a config and write report.json and CSVs")
    r.add_argument("--config", required=True, help="path, or name of a bundled example")
    r.add_argument("--out", help="output directory (overrides CONVSPEC_OUT and the config)")
    r.add_argument("--fail-fast", action="store_true", help="stop at the first failed task or required check")
    r.add_argument("--radius", type=int, action="append", help="radius for spectral tasks (repeatable)")
    r.add_argument("--cap", type=int, help="ball size cap (overrides CONVSPEC_CAP and the config)")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("examples", help="list bundled example configs")
    e.add_argument("--write", metavar="DIR", help="copy the bundled configs into DIR")
    e.set_defaults(func=cmd_examples)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
