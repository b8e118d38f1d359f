"""

 geotomo

 Subcommand entry points: gen, recon, bench, stack and metrics.

"""
from pathlib import Path

from src.core import SliceInstanceOps
from src.grid import PixelSet
from src.harness import (
    build_nanowire_stack,
    residual_norm,
    run_experiment,
    run_stack,
    save_outcome,
    trial_seed,
    write_stack,
)
from src.logger import logger
from src.metrics import reconstruction_errors
from src.phantoms import make_phantom
from src.processors.interfaces.Reconstructor import ReconstructionOutcome
from src.processors.manager import RECONSTRUCTOR_MANAGER
from src.utils.file import (
    read_pixel_set_table,
    write_polygon_csv,
    write_sinogram_csv,
)
from src.utils.image import ImageUtils
from src.utils.interaction import InteractionUtils
from src.utils.parsing import (
    open_experiment_with_defaults,
    parse_schedules,
    tuning_config_for_experiment,
)

# CLI flag -> experiment key
EXPERIMENT_OVERRIDES = {
    "phantom": "phantoms",
    "algo": "algorithms",
    "schedule": "schedules",
    "sigma": "sigmas",
    "trials": "trials",
    "seed": "base_seed",
    "out": "output_dir",
    "workers": "workers",
    "save_images": "save_images",
}


def experiment_overrides(args):
    overrides = {}
    for flag, key in EXPERIMENT_OVERRIDES.items():
        value = args.get(flag)
        if value is None or value is False:
            continue
        overrides[key] = value
    return overrides


def load_run_configuration(args):
    config_path = args.get("config")
    experiment = open_experiment_with_defaults(config_path, experiment_overrides(args))
    source = config_path or "<defaults>"
    tuning_config = tuning_config_for_experiment(experiment, source)
    logger.set_level(tuning_config.outputs.log_level)
    return experiment, tuning_config


def print_config_summary(command, experiment, tuning_config, args):
    rows = [
        ("Command", command),
        ("Phantoms", list(experiment.phantoms)),
        ("Algorithms", list(experiment.algorithms)),
        ("Schedules", list(experiment.schedules)),
        ("Noise Levels", list(experiment.sigmas)),
        ("Trials per Cell", experiment.trials),
        ("Base Seed", experiment.base_seed),
        ("Workers", experiment.workers),
        ("Grid Size", tuning_config.data.size),
        ("Bin Factor", tuning_config.data.bin_factor),
        ("Output Directory", experiment.output_dir),
    ]
    if args.get("config"):
        rows.append(("Experiment Config", args["config"]))
    if args.get("input"):
        rows.append(("Input", args["input"]))
    InteractionUtils.print_config_summary("Current Configurations", rows)


def _single_algorithm(experiment, command):
    if len(experiment.algorithms) != 1:
        raise Exception(
            f"'{command}' needs exactly one algorithm, pass --algo. "
            f"Got {list(experiment.algorithms)}"
        )
    return experiment.algorithms[0]


def generate_data(experiment, tuning_config, args):
    output_dir = Path(experiment.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    slice_ops = SliceInstanceOps(tuning_config)
    schedules = parse_schedules(experiment.schedules)
    binary_format = tuning_config.outputs.pgm_binary

    if args.get("stack"):
        sinos = build_nanowire_stack(
            slice_ops,
            args["stack"],
            schedules[0],
            sigma=float(experiment.sigmas[0]),
            seed=experiment.base_seed,
        )
        return write_stack(sinos, output_dir)

    written = []
    for phantom_id in experiment.phantoms:
        phantom = make_phantom(phantom_id)
        truth = slice_ops.ground_truth(phantom.polygon)
        ImageUtils.save_mask(
            output_dir.joinpath(f"phantom_{phantom_id}.pgm"), truth.mask, binary_format
        )
        write_polygon_csv(
            output_dir.joinpath(f"phantom_{phantom_id}_polygon.csv"), phantom.polygon
        )
        for schedule in schedules:
            for sigma in map(float, experiment.sigmas):
                seed = trial_seed(
                    experiment.base_seed, phantom_id, schedule.name, sigma, 0
                )
                sino = slice_ops.simulate(phantom_id, schedule, sigma, seed)
                path = output_dir.joinpath(
                    f"sinogram_p{phantom_id}_{schedule.name}_s{sigma:g}.csv"
                )
                write_sinogram_csv(path, sino)
                written.append(path)
    logger.info(f"Wrote {len(written)} sinograms to '{output_dir}'")
    return written


def reconstruct_file(experiment, tuning_config, args):
    input_path = Path(args["input"])
    output_dir = Path(experiment.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    slice_ops = SliceInstanceOps(tuning_config)
    sino = slice_ops.load_sinogram(input_path, name=input_path.stem)
    truth, phantom_id = None, None
    if args.get("phantom"):
        phantom_id = experiment.phantoms[0]
        truth = slice_ops.rasterize_for(sino, make_phantom(phantom_id).polygon)

    outcomes = {}
    for algorithm in experiment.algorithms:
        reconstructor = RECONSTRUCTOR_MANAGER.create(algorithm, slice_ops)
        try:
            outcome = reconstructor.reconstruct(
                sino, trial_seed(experiment.base_seed, algorithm), phantom=phantom_id
            )
        except Exception as error:
            logger.error(f"{algorithm} failed on '{input_path}': {error}")
            outcome = ReconstructionOutcome.failed(error)
        message = f"{algorithm}: {outcome.status} {outcome.reason}".rstrip()
        if outcome.ok:
            stem = f"{input_path.stem}_{algorithm}"
            save_outcome(
                outcome,
                output_dir.joinpath(f"{stem}.pgm"),
                output_dir.joinpath(f"{stem}_polygon.csv"),
                tuning_config.outputs.pgm_binary,
            )
            message += f", residual {residual_norm(sino, outcome.pixel_set):.4g}"
            if truth is not None:
                errors = reconstruction_errors(truth, outcome.pixel_set)
                message += f", delta_s {errors.delta_s}, delta_h {errors.delta_h}"
        logger.info(message)
        outcomes[algorithm] = outcome
    return outcomes


def read_pixel_set(path, size):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return PixelSet.from_members(read_pixel_set_table(path), size)
    mask = ImageUtils.read_mask(path)
    if mask.shape[0] != mask.shape[1]:
        raise Exception(f"Expected a square image at '{path}', got shape {mask.shape}")
    return PixelSet(mask)


def compare_files(tuning_config, args):
    if not args.get("input") or not args.get("reference"):
        raise Exception("'metrics' needs both --input and --reference")
    size = tuning_config.data.size
    reconstruction = read_pixel_set(args["input"], size)
    reference = read_pixel_set(args["reference"], reconstruction.size)
    errors = reconstruction_errors(reference, reconstruction)
    logger.info(f"delta_s = {errors.delta_s}, delta_h = {errors.delta_h}")
    return errors


def entry_point(command, args):
    experiment, tuning_config = load_run_configuration(args)
    if command in ("recon", "stack") and not args.get("input"):
        raise Exception(f"'{command}' needs --input")
    print_config_summary(command, experiment, tuning_config, args)

    if command == "gen":
        return generate_data(experiment, tuning_config, args)
    if command == "recon":
        return reconstruct_file(experiment, tuning_config, args)
    if command == "bench":
        return run_experiment(experiment, tuning_config)
    if command == "stack":
        algorithm = _single_algorithm(experiment, command)
        return run_stack(
            args["input"],
            algorithm,
            tuning_config,
            experiment.output_dir,
            seed=experiment.base_seed,
        )
    if command == "metrics":
        return compare_files(tuning_config, args)
    raise Exception(f"Unknown command '{command}'")

