"""
    Json schemas of everything centrodq reads or writes.
    Config and batch files are validated against them before anything runs; the output
    schemas document the --format json documents and are dumped by the `schema` subcommand.
"""
import logging
from typing import Any, Dict

import genson
from jsonschema import validate as validate_json, ValidationError

from .errors import InvalidArgumentError

LOGGER = logging.getLogger(__name__)

_NUMBER_LIST = {"type": "array", "items": {"type": "number"}}
_COMPLEX = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re", "im"],
}
_COUNTER = {
    "type": "object",
    "properties": {"multiplies": {"type": "integer"}, "adds": {"type": "integer"}},
    "required": ["multiplies", "adds"],
}

GRID_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["uniform", "chebyshev", "chebyshev-supported", "custom"]},
        "n": {"type": "integer", "minimum": 2},
        "nodes": _NUMBER_LIST,
    },
    "required": ["kind", "n", "nodes"],
}

WEIGHTS_SCHEMA = {
    "type": "object",
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "n": {"type": "integer"},
        "symmetry": {"enum": ["centro", "skew-centro", "none"]},
        "grid": GRID_SCHEMA,
        "values": {"type": "array", "items": _NUMBER_LIST},
    },
    "required": ["order", "n", "symmetry", "grid", "values"],
}

FREQUENCY_SCHEMA = {
    "type": "object",
    "properties": {
        "problem": {"type": "string"},
        "path": {"enum": ["dense", "factorized"]},
        "modes": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "mode": {"type": "integer", "minimum": 1},
                    "frequency": {"type": "number", "minimum": 0},
                    "label": {"enum": ["symmetric", "skew-symmetric", "unlabeled"]},
                    "reference": {"type": "number"},
                    "relative_error": {"type": "number"},
                },
                "required": ["mode", "frequency", "label"],
            },
        },
        "counter": _COUNTER,
    },
    "required": ["problem", "path", "modes", "counter"],
}

CONVDIFF_SCHEMA = {
    "type": "object",
    "properties": {
        "problem": {"const": "conv-diff"},
        "path": {"enum": ["dense", "factorized"]},
        "residual": {"type": "number"},
        "x": _NUMBER_LIST,
        "y": _NUMBER_LIST,
        "solution": {"type": "array", "items": _NUMBER_LIST},
        "counter": _COUNTER,
    },
    "required": ["problem", "path", "residual", "x", "y", "solution", "counter"],
}

TRUNCATION_SCHEMA = {
    "type": "object",
    "properties": {
        "function": {"type": "string"},
        "order": {"type": "integer", "minimum": 1},
        "grid": GRID_SCHEMA,
        "errors": _NUMBER_LIST,
        "argmax": {"type": "integer", "minimum": 1},
        "max_error": {"type": "number"},
        "k_bound": {"type": "number"},
        "estimate": _NUMBER_LIST,
        "end_bound": {"type": "number"},
        "center_bound": {"type": ["number", "null"]},
    },
    "required": ["function", "order", "grid", "errors", "argmax", "max_error"],
}

BENCH_SCHEMA = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer"},
        "trials": {"type": "integer", "minimum": 1},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "op": {"enum": ["det", "inv", "eig"]},
                    "symmetry": {"enum": ["centro", "skew-centro"]},
                    "n": {"type": "integer"},
                    "dense_mults": {"type": "integer"},
                    "factored_mults": {"type": "integer"},
                    "ratio": {"type": "number"},
                    "discrepancy": {"type": "number"},
                },
                "required": ["op", "symmetry", "n", "dense_mults", "factored_mults", "ratio"],
            },
        },
        "resources": {
            "type": "object",
            "properties": {
                "wall_seconds": {"type": "number"},
                "cpu_seconds": {"type": "number"},
                "rss_bytes": {"type": "integer"},
            },
        },
    },
    "required": ["seed", "trials", "rows"],
}

ERROR_SCHEMA = {
    "type": "object",
    "properties": {
        "code": {"type": "integer"},
        "message": {"type": "string"},
        "detail": {"type": "string"},
    },
    "required": ["code", "message"],
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "command": {"enum": ["weights", "solve", "bench", "error-profile"]},
        "problem": {"enum": ["beam", "plate", "skew-plate", "conv-diff"]},
        "grid": {"enum": ["uniform", "chebyshev", "chebyshev-supported", "custom"]},
        "n": {"type": "integer", "minimum": 2},
        "ny": {"type": "integer", "minimum": 2},
        "nodes": _NUMBER_LIST,
        "order": {"type": "integer", "minimum": 1},
        "alpha": {"type": "number"},
        "beta": {"type": "number"},
        "theta": {"type": "number"},
        "bc": {"enum": ["simply-supported", "clamped"]},
        "sink": {"type": "number"},
        "inlet": _NUMBER_LIST,
        "count": {"type": "integer", "minimum": 1},
        "path": {"enum": ["auto", "dense", "factorized"]},
        "reference": {"oneOf": [_NUMBER_LIST, {"const": "exact"}]},
        "function": {"type": "string"},
        "k_bound": {"type": "number", "exclusiveMinimum": 0},
        "sizes": {"type": "array", "items": {"type": "integer"}},
        "trials": {"type": "integer", "minimum": 1},
        "ops": {"type": "array", "items": {"enum": ["det", "inv", "eig"]}},
        "workers": {"type": "integer", "minimum": 1},
        "resources": {"type": "boolean"},
        "seed": {"type": "integer"},
        "format": {"enum": ["csv", "json"]},
        "output": {"type": "string"},
    },
    "additionalProperties": False,
}

BATCH_SCHEMA = {
    "type": "object",
    "properties": {
        "workers": {"type": "integer", "minimum": 1},
        "cases": {
            "type": "array",
            "minItems": 1,
            "items": {"allOf": [CONFIG_SCHEMA, {"required": ["command", "output"]}]},
        },
    },
    "required": ["cases"],
}

SCHEMAS = {
    "grid": GRID_SCHEMA,
    "weights": WEIGHTS_SCHEMA,
    "frequencies": FREQUENCY_SCHEMA,
    "conv-diff": CONVDIFF_SCHEMA,
    "truncation": TRUNCATION_SCHEMA,
    "bench": BENCH_SCHEMA,
    "error": ERROR_SCHEMA,
    "config": CONFIG_SCHEMA,
    "batch": BATCH_SCHEMA,
}


def get_schema(name: str) -> Dict:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown schema {name!r}, known: {', '.join(sorted(SCHEMAS))}")


def validate(instance: Any, name: str):
    """ Validate a document against one of the named schemas. """
    try:
        validate_json(instance=instance, schema=get_schema(name))
    except ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise InvalidArgumentError(f"invalid {name} document", f"{path or '<root>'}: {e.message}")


def infer_schema(value: Any) -> Dict:
    """ Derive a schema from a sample document. """
    # we use genson library to determine schema type:
    try:
        builder = genson.SchemaBuilder()
        builder.add_object(value)
        schema = builder.to_schema()
        schema.pop("$schema", None)
        return schema
    except genson.schema.node.SchemaGenerationError as e:
        raise InvalidArgumentError(f"cannot infer a schema for {type(value).__name__}", str(e))
