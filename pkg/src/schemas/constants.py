from src.constants import ALGORITHMS, NAMED_SCHEDULES
from src.logger import LOG_LEVELS

NAMED_SCHEDULE_NAMES = list(NAMED_SCHEDULES)

ALGORITHM_NAMES = ALGORITHMS

LOG_LEVEL_NAMES = LOG_LEVELS

POSITIVE_INTEGER = {"type": "integer", "minimum": 1}

NON_NEGATIVE_NUMBER = {"type": "number", "minimum": 0}

ANGLE_DEGREES = {"type": "number", "minimum": 0, "exclusiveMaximum": 180}

EXPLICIT_SCHEDULE = {
    "type": "array",
    "items": ANGLE_DEGREES,
    "minItems": 1,
}
