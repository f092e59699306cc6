#!/usr/bin/env python3
"""Validate config files against docs/config.schema.json."""
import json
import sys
from pathlib import Path

import jsonschema

root = Path(__file__).resolve().parent.parent
schema = json.loads((root / "docs" / "config.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

paths = [Path(p) for p in sys.argv[1:]] or sorted((root / "configs").glob("*.json"))
bad = 0
for p in paths:
    errors = list(validator.iter_errors(json.loads(p.read_text())))
    for e in errors:
        print(f"{p.name}: {'/'.join(map(str, e.path)) or '<root>'}: {e.message}")
    bad += bool(errors)

# the schema must reject what the parser rejects
for text in ['{}', '{"version": 2}', '{"version": 1, "colour": 1}', '{"version": 1, "grid": {"size": 3}}']:
    if validator.is_valid(json.loads(text)):
        print(f"schema accepts {text}")
        bad += 1

print(f"{len(paths)} configs checked, {bad} problems")
sys.exit(1 if bad else 0)
