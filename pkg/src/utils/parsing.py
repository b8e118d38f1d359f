from copy import deepcopy

from deepmerge import Merger
from dotmap import DotMap

from src.defaults import CONFIG_DEFAULTS, EXPERIMENT_DEFAULTS
from src.projector import TiltSchedule
from src.utils.file import load_json
from src.utils.validations import validate_config_json, validate_experiment_json

OVERRIDE_MERGER = Merger(
    # pass in a list of tuples,with the
    # strategies you are looking to apply
    # to each type.
    [(dict, ["merge"])],
    # next, choose the fallback strategies,
    # applied to all other types:
    ["override"],
    # finally, choose the strategies in
    # the case where the types conflict:
    ["override"],
)


def merge_tuning_config(user_tuning_config, source="<defaults>"):
    tuning_config = OVERRIDE_MERGER.merge(
        deepcopy(CONFIG_DEFAULTS), dict(user_tuning_config or {})
    )
    validate_config_json(tuning_config, source)
    # https://github.com/drgrib/dotmap/issues/74
    return DotMap(tuning_config, _dynamic=False)


def open_config_with_defaults(config_path):
    return merge_tuning_config(load_json(config_path), config_path)


def open_experiment_with_defaults(experiment_path=None, overrides=None):
    user_experiment = load_json(experiment_path) if experiment_path else {}
    experiment = OVERRIDE_MERGER.merge(deepcopy(EXPERIMENT_DEFAULTS), user_experiment)
    if overrides:
        experiment = OVERRIDE_MERGER.merge(experiment, overrides)
    validate_experiment_json(experiment, experiment_path or "<defaults>")
    return DotMap(experiment, _dynamic=False)


def tuning_config_for_experiment(experiment, source="<experiment>"):
    tuning = experiment.tuning
    if isinstance(tuning, DotMap):
        tuning = tuning.toDict()
    return merge_tuning_config(tuning, source)


def parse_schedule(entry, index=0):
    if isinstance(entry, str):
        return TiltSchedule.named(entry)
    angles = sorted(set(float(angle) for angle in entry))
    return TiltSchedule(angles, name=f"custom{index}")


def parse_schedules(entries):
    return [parse_schedule(entry, index) for index, entry in enumerate(entries)]
