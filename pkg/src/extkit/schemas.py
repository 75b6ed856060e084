"""JSON schemas for file inputs of the command line."""

import jsonschema

_GROUP = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "properties": {
                "free_rank": {"type": "integer", "minimum": 0},
                "torsion": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
            "required": ["free_rank", "torsion"],
            "additionalProperties": False,
        },
    ]
}

_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}

EXTENSION = {
    "type": "object",
    "properties": {"base": _GROUP, "coeff": _GROUP, "phi": _MATRIX},
    "required": ["base", "coeff", "phi"],
    "additionalProperties": False,
}

TOWER = {
    "type": "object",
    "properties": {
        "groups": {"type": "array", "items": _GROUP, "minItems": 2},
        "bonds": {"type": "array", "items": _MATRIX},
        "period": {"type": "integer", "minimum": 1},
        "period_from": {"type": "integer", "minimum": 0},
    },
    "required": ["groups", "bonds"],
    "additionalProperties": False,
}

CORPUS = {
    "type": "object",
    "properties": {
        "suite": {"type": "string"},
        "cases": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "args": {"type": "array", "items": {"type": "string"}},
                    "exit": {"type": "integer"},
                    "expect": {"type": "object"},
                },
                "required": ["name", "args"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["suite", "cases"],
    "additionalProperties": False,
}

SCHEMAS = {"extension": EXTENSION, "tower": TOWER, "corpus": CORPUS}


def check(obj, kind: str) -> None:
    """Raise jsonschema.ValidationError when obj does not match."""
    jsonschema.validate(obj, SCHEMAS[kind])
