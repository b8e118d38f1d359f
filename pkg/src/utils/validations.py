"""

 geotomo

 JSON validation of tuning configs and experiment files

"""
import re

import jsonschema
from jsonschema import validate
from rich.table import Table

from src.logger import console, logger
from src.schemas import SCHEMA_JSONS, SCHEMA_VALIDATORS


def validate_experiment_json(json_data, experiment_path):
    logger.info(f"Loading experiment json: {experiment_path}")
    validate_against_schema("experiment", json_data, experiment_path, "Experiment")


def validate_config_json(json_data, config_path):
    logger.info(f"Loading tuning config: {config_path}")
    validate_against_schema("config", json_data, config_path, "config")


def validate_against_schema(schema_key, json_data, json_path, label):
    try:
        validate(instance=json_data, schema=SCHEMA_JSONS[schema_key])
    except jsonschema.exceptions.ValidationError as _err:  # NOQA
        table = Table(show_lines=True)
        table.add_column("Key", style="cyan", no_wrap=True)
        table.add_column("Error", style="magenta")
        errors = sorted(
            SCHEMA_VALIDATORS[schema_key].iter_errors(json_data),
            key=lambda e: list(map(str, e.path)),
        )
        for error in errors:
            key, validator, msg = parse_validation_error(error)
            if validator == "required":
                required_property = re.findall(r"'(.*?)'", msg)[0]
                table.add_row(
                    f"{key}.{required_property}",
                    f"{msg}. Check for spelling errors in the key",
                )
            else:
                table.add_row(key, msg)
        console.print(table, justify="center")
        raise Exception(f"Provided {label} JSON is Invalid: '{json_path}'") from None


def parse_validation_error(error):
    return (
        (".".join(map(str, error.path)) if len(error.path) > 0 else "$root"),
        error.validator,
        error.message,
    )
