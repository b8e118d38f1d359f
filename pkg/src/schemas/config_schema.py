from src.schemas.constants import (
    ANGLE_DEGREES,
    LOG_LEVEL_NAMES,
    NON_NEGATIVE_NUMBER,
    POSITIVE_INTEGER,
)

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://github.com/geotomo/geotomo/tree/master/src/schemas/config-schema.json",
    "title": "Config Schema",
    "description": "geotomo tuning config for data generation and reconstruction",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "data": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "size": {"type": "integer", "minimum": 8, "maximum": 4096},
                "bin_factor": {"type": "integer", "minimum": 1, "maximum": 16},
            },
        },
        "shadows": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "threshold": NON_NEGATIVE_NUMBER,
                "median_filter": {"type": "boolean"},
                "convex": {"type": "boolean"},
                "opening": {"type": "boolean"},
                "diamond_radius": {"type": "integer", "minimum": 0, "maximum": 10},
            },
        },
        "sirt": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "iterations": POSITIVE_INTEGER,
                "relaxation": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "maximum": 2,
                },
                "threshold": {"type": "number"},
            },
        },
        "bart": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "art_sweeps": POSITIVE_INTEGER,
                "relaxation": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "maximum": 2,
                },
                "lower": {"type": "number"},
                "upper": {"type": "number"},
                "art_tolerance": NON_NEGATIVE_NUMBER,
                "snap_margin": {"type": "number", "minimum": 0, "maximum": 0.5},
                "contour_threshold": {"type": "number"},
                "filter_rounds": {"type": "integer", "minimum": 0},
                "smooth_weights": {
                    "type": "array",
                    "items": NON_NEGATIVE_NUMBER,
                    "minItems": 3,
                    "maxItems": 3,
                },
            },
        },
        "dart": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "init_sirt_iters": POSITIVE_INTEGER,
                "dart_iters": {"type": "integer", "minimum": 0},
                "inner_sirt_iters": POSITIVE_INTEGER,
                "relaxation": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "maximum": 2,
                },
                "rho": {"type": "number", "exclusiveMinimum": 0},
                "fix_fraction": {"type": "number", "minimum": 0, "maximum": 1},
            },
        },
        "gkxr": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "directions": {
                    "type": "array",
                    "items": ANGLE_DEGREES,
                    "minItems": 4,
                    "maxItems": 4,
                },
                "lines_per_direction": {"type": "integer", "minimum": 2},
                "window_fraction": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "maximum": 0.5,
                },
                "pair_merge_threshold": {"type": "number", "exclusiveMinimum": 0},
                "iir_rounds": {"type": "integer", "minimum": 0},
                "iir_alternate": {"type": "boolean"},
                "init_jitter": {"type": "number", "minimum": 0},
                "sweeps_per_temperature": {"type": "number", "exclusiveMinimum": 0},
                "anneal": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "cooling_factor": {
                            "type": "number",
                            "exclusiveMinimum": 0,
                            "exclusiveMaximum": 1,
                        },
                        "steps_per_temperature": POSITIVE_INTEGER,
                        "min_temperature_ratio": {
                            "type": "number",
                            "exclusiveMinimum": 0,
                            "exclusiveMaximum": 1,
                        },
                        "step_scale": {"type": "number", "exclusiveMinimum": 0},
                        "polish_tolerance": {"type": "number", "exclusiveMinimum": 0},
                        "polish_max_evaluations": {"type": "integer", "minimum": 0},
                    },
                },
            },
        },
        "ngon": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 3},
                "poly_degree": {
                    "oneOf": [{"type": "null"}, {"type": "integer", "minimum": 0}]
                },
                "omega": {
                    "oneOf": [
                        {"type": "null"},
                        {"type": "number", "exclusiveMinimum": 0, "maximum": 360},
                    ]
                },
                "spacing_tolerance": NON_NEGATIVE_NUMBER,
                "n_per_phantom": {
                    "type": "object",
                    "patternProperties": {
                        "^[1-6]$": {"type": "integer", "minimum": 3}
                    },
                    "additionalProperties": False,
                },
            },
        },
        "stack": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "intensity_scale": {"type": "number", "exclusiveMinimum": 0},
                "opening": {"type": "boolean"},
                "median_filter": {"type": "boolean"},
            },
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "log_level": {"type": "string", "enum": LOG_LEVEL_NAMES},
                "record_timing": {"type": "boolean"},
                "save_images": {"type": "boolean"},
                "pgm_binary": {"type": "boolean"},
            },
        },
    },
}
