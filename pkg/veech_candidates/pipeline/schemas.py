from ..flatsurf.params import CYCNUM_SCHEMA, PARAMS_SCHEMA

_root_schema = {
    "type": "object",
    "required": ["order", "exponent"],
    "additionalProperties": False,
    "properties": {"order": {"type": "integer", "minimum": 1}, "exponent": {"type": "integer"}},
}

CANDIDATE_RECORD_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Candidate record",
    "type": "object",
    "required": [
        "genus",
        "roots",
        "relative_period",
        "winding",
        "torsion_order",
        "moduli",
        "matrix",
        "params",
        "vertical_circumferences",
        "vertical_heights",
        "trace",
        "flags",
    ],
    "additionalProperties": False,
    "properties": {
        "genus": {"type": "integer", "minimum": 2},
        "roots": {"type": "array", "minItems": 2, "items": _root_schema},
        "relative_period": CYCNUM_SCHEMA,
        "winding": {"type": "array", "items": {"type": "integer"}},
        "torsion_order": {"type": "integer", "minimum": 1},
        "moduli": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
        "matrix": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        },
        "params": PARAMS_SCHEMA,
        "vertical_circumferences": {"type": "array", "items": CYCNUM_SCHEMA},
        "vertical_heights": {"type": "array", "items": CYCNUM_SCHEMA},
        "trace": {
            "type": "object",
            "required": ["degree", "conductor", "discriminant"],
            "additionalProperties": False,
            "properties": {
                "degree": {"type": "integer", "minimum": 1},
                "conductor": {"type": "integer", "minimum": 1},
                "discriminant": {"type": ["string", "null"], "pattern": r"^-?[0-9]+(/[0-9]+)?$"},
            },
        },
        "flags": {"type": "object", "additionalProperties": {"type": "boolean"}},
    },
}
