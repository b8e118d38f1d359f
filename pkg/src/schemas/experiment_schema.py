from src.schemas.constants import (
    ALGORITHM_NAMES,
    EXPLICIT_SCHEDULE,
    NAMED_SCHEDULE_NAMES,
    NON_NEGATIVE_NUMBER,
    POSITIVE_INTEGER,
)

EXPERIMENT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://github.com/geotomo/geotomo/tree/master/src/schemas/experiment-schema.json",
    "title": "Experiment Schema",
    "description": "geotomo benchmark experiment layout",
    "type": "object",
    "additionalProperties": False,
    "required": ["phantoms", "algorithms", "schedules", "sigmas", "trials"],
    "properties": {
        "phantoms": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1, "maximum": 6},
            "minItems": 1,
        },
        "algorithms": {
            "type": "array",
            "items": {"type": "string", "enum": ALGORITHM_NAMES},
            "minItems": 1,
        },
        "schedules": {
            "type": "array",
            "items": {
                "oneOf": [
                    {"type": "string", "enum": NAMED_SCHEDULE_NAMES},
                    EXPLICIT_SCHEDULE,
                ]
            },
            "minItems": 1,
        },
        "sigmas": {
            "type": "array",
            "items": NON_NEGATIVE_NUMBER,
            "minItems": 1,
        },
        "trials": POSITIVE_INTEGER,
        "base_seed": {"type": "integer", "minimum": 0},
        "workers": POSITIVE_INTEGER,
        "output_dir": {"type": "string"},
        "save_images": {"type": "boolean"},
        # validated separately against the config schema
        "tuning": {"type": "object"},
    },
}
