#!/usr/bin/env python3
"""Run the CLI over the catalog and validate every document against schema/."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: validate_reports.py <pqgeom binary> <schema dir>", file=sys.stderr)
        return 2
    cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    report = json.loads((schema_dir / "report-v1.schema.json").read_text())
    oracle = json.loads((schema_dir / "oracle-v1.schema.json").read_text())

    listing = subprocess.run([cli, "example"], check=True, capture_output=True, text=True).stdout
    names = [line.split()[0] for line in listing.splitlines() if line.strip()]
    bad = 0
    for name in names:
        run = subprocess.run([cli, "check", "--example", name, "--points", "4", "--json", "-"],
                             capture_output=True, text=True)
        if run.returncode not in (0, 1, 2):
            print(f"{name}: exit {run.returncode}: {run.stderr.strip()}")
            bad += 1
            continue
        try:
            jsonschema.validate(json.loads(run.stdout), report)
        except jsonschema.ValidationError as e:
            print(f"{name}: {e.message}")
            bad += 1

    for name, point in (("conf-flat", "0.1 0.2 -0.3 0.4"), ("flat-r8", "0.1 0 0 0 0 0 0 0.2")):
        out = subprocess.run([cli, "oracle", "--example", name, "--quantity", "riemann", "--point", point],
                             check=True, capture_output=True, text=True).stdout
        try:
            jsonschema.validate(json.loads(out), oracle)
        except jsonschema.ValidationError as e:
            print(f"oracle {name}: {e.message}")
            bad += 1

    print(f"{len(names)} reports and 2 oracle records checked, {bad} invalid")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
