# https://docs.python.org/3/tutorial/modules.html#:~:text=The%20__init__.py,on%20the%20module%20search%20path.
from jsonschema import Draft202012Validator

from src.schemas.config_schema import CONFIG_SCHEMA
from src.schemas.experiment_schema import EXPERIMENT_SCHEMA

SCHEMA_JSONS = {
    "config": CONFIG_SCHEMA,
    "experiment": EXPERIMENT_SCHEMA,
}

SCHEMA_VALIDATORS = {
    "config": Draft202012Validator(CONFIG_SCHEMA),
    "experiment": Draft202012Validator(EXPERIMENT_SCHEMA),
}
