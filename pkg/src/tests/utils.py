import json
import os
from copy import deepcopy

from dotmap import DotMap
from freezegun import freeze_time

from main import entry_point_for_args
from src.utils.parsing import merge_tuning_config

FROZEN_TIMESTAMP = "1970-01-01"


def small_tuning_config(**sections):
    """Default tuning config on a reduced grid, with per-section overrides."""
    user_config = {
        "data": {"size": 64, "bin_factor": 2},
        "outputs": {"log_level": "WARNING", "record_timing": False},
    }
    for section, values in sections.items():
        user_config.setdefault(section, {}).update(values)
    return merge_tuning_config(user_config, "<tests>")


def experiment_for(tmp_path, **keys):
    experiment = {
        "phantoms": [1],
        "algorithms": ["SIRT"],
        "schedules": ["S180_10"],
        "sigmas": [0.0],
        "trials": 1,
        "base_seed": 11,
        "workers": 1,
        "output_dir": str(tmp_path),
        "save_images": False,
        "tuning": {},
    }
    experiment.update(keys)
    return DotMap(experiment, _dynamic=False)


def run_entry_point(command, experiment_path=None, output_dir=None, **extra_args):
    args = {
        "command": command,
        "config": str(experiment_path) if experiment_path else None,
        "out": str(output_dir) if output_dir else None,
        "debug": False,
        **extra_args,
    }
    with freeze_time(FROZEN_TIMESTAMP):
        return entry_point_for_args(args)


def write_modified(modify_content, boilerplate, sample_json_path):
    if boilerplate is None:
        return

    content = deepcopy(boilerplate)

    if modify_content is not None:
        returned_value = modify_content(content)
        if returned_value is not None:
            content = returned_value

    with open(sample_json_path, "w") as f:
        json.dump(content, f)


def remove_file(path):
    if os.path.exists(path):
        os.remove(path)


def generate_write_jsons_and_run(run_sample, sample_path, experiment_boilerplate=None):
    if experiment_boilerplate is None:
        raise Exception(
            "No boilerplates found. Provide an experiment boilerplate to write json."
        )

    def write_jsons_and_run(mocker, modify_experiment=None):
        sample_experiment_path = sample_path.joinpath("experiment.json")
        write_modified(
            modify_experiment, experiment_boilerplate, sample_experiment_path
        )

        exception = "No Error"
        try:
            run_sample(mocker, sample_experiment_path)
        except Exception as e:
            exception = e

        remove_file(sample_experiment_path)

        return exception

    return write_jsons_and_run
