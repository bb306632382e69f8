"""JSON Schemas (draft 2020-12) for everything the CLI writes."""

_number_or_null = {"type": ["number", "null"]}
_count_map = {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}}

MANIFEST = {
    "type": "object",
    "required": ["command", "params", "seed", "inputs", "tool_version", "timestamp"],
    "properties": {
        "command": {"enum": ["run", "iterate", "analyze", "census", "measure"]},
        "params": {"type": "object"},
        "seed": {"type": ["integer", "null"]},
        "inputs": {"type": "object", "additionalProperties": {"type": "string", "pattern": "^[0-9a-f]{64}$"}},
        "tool_version": {"type": "string"},
        "timestamp": {"type": "string"},
    },
}

TRACE_RECORD = {
    "type": "object",
    "required": ["step", "numerator", "base", "length", "value"],
    "additionalProperties": False,
    "properties": {
        "step": {"type": "integer", "minimum": 0},
        "numerator": {"type": "string", "pattern": "^[0-9]+$"},
        "base": {"type": "integer", "minimum": 2},
        "length": {"type": "integer", "minimum": 0},
        "value": {"type": "number", "minimum": 0, "maximum": 1},
    },
}

DEBUG_REPORT = {
    "type": "object",
    "required": ["outcome", "halt", "loop", "steps_executed", "history_length", "mode"],
    "properties": {
        "outcome": {"enum": ["Y", "N", "BudgetExhausted"]},
        "halt": {"enum": ["accept", "reject", None]},
        "loop": {"oneOf": [{"type": "null"},
                           {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}]},
        "steps_executed": {"type": "integer", "minimum": 0},
        "history_length": {"type": "integer", "minimum": 0},
        "mode": {"enum": ["paper", "sound"]},
    },
}

ITERATION_SUMMARY = {
    "type": "object",
    "required": ["map", "x0", "steps", "samples", "termination", "stopped_at", "exact"],
    "properties": {
        "map": {"enum": ["babylonian", "logistic", "tan", "affine"]},
        "steps": {"type": "integer", "minimum": 0},
        "samples": {"type": "integer", "minimum": 0},
        "termination": {"enum": ["Completed", "SingularityHit", "Overflowed"]},
        "stopped_at": {"type": ["integer", "null"]},
        "exact": {"type": "boolean"},
    },
}

CLASSIFICATION_REPORT = {
    "type": "object",
    "required": ["label", "k", "evidence", "decomposition", "mixing"],
    "properties": {
        "label": {"enum": ["Finite", "Convergent", "NonCauchyMixture", "Unbounded", "Inconclusive"]},
        "k": {"type": ["integer", "null"]},
        "evidence": {"type": "object", "required": ["length", "tail_diameter", "cluster_count",
                                                   "mixing", "dense", "aperiodic"]},
        "decomposition": {"oneOf": [{"type": "null"}, {
            "type": "object", "required": ["k", "centroids", "intervals"],
            "properties": {"centroids": {"type": "array", "items": {"type": "number"}},
                           "intervals": {"type": "array", "items": {
                               "type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}}}}]},
        "mixing": {"oneOf": [{"type": "null"}, {
            "type": "object", "required": ["matrix", "reach", "horizon", "mixing"]}]},
    },
}

CENSUS_REPORT = {
    "type": "object",
    "required": ["family", "mode", "budget", "detection", "seed", "input_policy", "distribution",
                 "total", "outcomes", "labels", "mixture_k"],
    "properties": {
        "family": {"type": "object", "required": ["states", "symbols", "size"]},
        "mode": {"enum": ["enumerate", "sample", "explicit"]},
        "budget": {"type": "integer", "minimum": 1},
        "total": {"type": "integer", "minimum": 0},
        "outcomes": {"type": "object", "required": ["Y", "N", "BudgetExhausted"],
                     "additionalProperties": {"type": "integer", "minimum": 0}},
        "labels": _count_map,
        "mixture_k": _count_map,
    },
}

MEASURE_REPORT = {
    "type": "object",
    "required": ["n", "delta", "estimate", "stderr", "samples", "analytic", "analytic_stderr"],
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "delta": {"type": "number", "minimum": 0, "maximum": 1},
        "estimate": {"type": "number", "minimum": 0, "maximum": 1},
        "stderr": {"type": "number", "minimum": 0},
        "analytic": {"type": "number"},
        "analytic_stderr": {"type": "number", "minimum": 0},
        "sorted_region_measure": _number_or_null,
    },
}

RESULTS = {
    "debug_report": DEBUG_REPORT,
    "iteration_summary": ITERATION_SUMMARY,
    "classification_report": CLASSIFICATION_REPORT,
    "census_report": CENSUS_REPORT,
    "measure_report": MEASURE_REPORT,
}


def envelope_schema(kind: str) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["schema_version", "kind", "result", "manifest", "digest"],
        "properties": {
            "schema_version": {"const": 1},
            "kind": {"const": kind},
            "result": RESULTS[kind],
            "manifest": MANIFEST,
            "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        },
    }
