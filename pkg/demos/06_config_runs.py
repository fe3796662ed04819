"""
Running bundled analysis configs
================================

Every bundled config runs end to end.  The report splits exact certificates
(booleans and rational strings) from numerical heuristics.
"""
import json
import tempfile
from pathlib import Path

from convspec.config import apply_overrides, bundled_examples, bundled_path, parse_config
from convspec.runner import run

with tempfile.TemporaryDirectory() as tmp:
    for name in bundled_examples():
        cfg = apply_overrides(parse_config(bundled_path(name)), out=Path(tmp) / name, env={})
        rep = run(cfg)
        req = rep.certificate["required"]
        print(f"{name:22s} exit {rep.exit_code}  required checks {sum(r['passed'] for r in req)}/{len(req)}")

    report = json.loads((Path(tmp) / "s3_semidirect_z" / "report.json").read_text())
    print("\ncertificate of the semidirect task:")
    print(json.dumps(report["certificate"]["tasks"]["1:semidirect:chi_S"], indent=2)[:800])
    print("\nkernel weights per radius:",
          {r["radius"]: r["kernel_weight"] for r in report["heuristic"]["2:spectrum:chi_S"]["radii"]})
