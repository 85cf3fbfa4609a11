"""Loaders for the JSON Schemas shipped with the package."""

import json
from importlib import resources

SCHEMA_NAMES = ("cliques", "opposite", "bounds", "probe", "manifest")


def load_schema(name: str) -> dict:
    if name not in SCHEMA_NAMES:
        raise KeyError(f"no schema named {name!r}; have {SCHEMA_NAMES}")
    ref = resources.files(__name__) / f"{name}.schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))
