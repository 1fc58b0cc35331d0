"""JSON schemas for the reports the command line emits."""

_number_or_null = {"type": ["number", "null"]}

DIRECTION = {
    "type": ["object", "null"],
    "required": ["provenance", "coords"],
    "properties": {
        "provenance": {"type": ["string", "null"]},
        "coords": {"type": "array", "items": {"type": "number"}},
    },
}

CERTIFICATE_REPORT = {
    "type": "object",
    "required": [
        "method", "q", "n", "d", "factor", "B", "certified_upper",
        "best_direction", "seed", "tolerances", "diagnostics",
    ],
    "properties": {
        "method": {"enum": ["proxy", "baseline", "guth", "proxy-pq"]},
        "q": {"type": "integer", "minimum": 2},
        "p": {"type": "number", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "d": {"type": "integer", "minimum": 1},
        "factor": {"type": "number", "exclusiveMinimum": 0},
        "B": _number_or_null,
        "certified_upper": {"type": "number", "minimum": 0},
        "best_direction": DIRECTION,
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "decision": {"enum": ["NO-consistent", "YES-witnessed", "inconclusive"]},
        "seed": {"type": ["integer", "null"]},
        "tolerances": {
            "type": "object",
            "required": ["eig_tol", "max_iter"],
            "properties": {"eig_tol": {"type": "number"}, "max_iter": {"type": "integer"}},
        },
        "diagnostics": {
            "type": "object",
            "properties": {
                "max_eig_residual": {"type": "number"},
                "lambda_Mtilde": {"type": "number"},
                "wall_ms": {"type": "object", "additionalProperties": {"type": "number"}},
            },
        },
    },
}

CERTIFY_OUTPUT = {"type": "array", "items": CERTIFICATE_REPORT, "minItems": 1}

SEARCH_OUTPUT = {
    "type": "object",
    "required": ["q", "B", "factor", "best_direction", "seed"],
    "properties": {
        "q": {"type": "integer"},
        "B": {"type": "number", "minimum": 0},
        "factor": {"type": "number"},
        "best_direction": DIRECTION,
        "seed": {"type": "integer"},
    },
}

ORACLE_OUTPUT = {
    "type": "object",
    "required": ["value", "vector", "restarts_used", "ascent_iterations_total", "converged_fraction", "seed"],
    "properties": {
        "value": {"type": "number", "minimum": 0},
        "vector": {"type": "array", "items": {"type": "number"}},
        "restarts_used": {"type": "integer"},
        "ascent_iterations_total": {"type": "integer"},
        "converged_fraction": {"type": "number", "minimum": 0, "maximum": 1},
        "seed": {"type": "integer"},
    },
}

GEN_OUTPUT = {
    "type": "object",
    "required": ["n", "d", "checksum", "spec"],
    "properties": {
        "n": {"type": "integer"},
        "d": {"type": "integer"},
        "checksum": {"type": "string"},
        "out": {"type": ["string", "null"]},
        "spec": {"type": "object"},
    },
}

BENCH_OUTPUT = {
    "type": "object",
    "required": ["q", "rows", "slopes", "residuals", "medians", "skipped"],
    "properties": {
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["d", "n", "seed", "method", "value", "wall_ms"],
            },
        },
        "slopes": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}

LIMITATION_OUTPUT = {
    "type": "object",
    "required": ["d", "C", "q", "seeds", "verdict"],
    "properties": {
        "seeds": {"type": "array", "items": {"type": "object", "required": ["seed", "checks"]}},
        "verdict": {"type": "object", "required": ["pass"]},
    },
}
