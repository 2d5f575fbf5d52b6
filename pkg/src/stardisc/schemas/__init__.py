"""JSON schemas for the machine-readable reports."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

NAMES = (
    "discrepancy_result",
    "coefficient_table",
    "certificate_report",
    "rational_bound_report",
    "sum_sweep",
)


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    text = resources.files(__name__).joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    return Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(load(name))) for name in NAMES
    )


def validate(name: str, instance) -> None:
    """Raise ``jsonschema.ValidationError`` if ``instance`` does not match schema ``name``."""
    schema = load(name)
    cls = jsonschema.validators.validator_for(schema)
    cls(schema, registry=_registry()).validate(instance)
