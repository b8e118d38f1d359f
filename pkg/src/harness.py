"""

 geotomo

 Benchmark harness: phantom -> hires data -> noise -> reconstruct -> score over
 phantoms x schedules x noise levels x trials, plus slice-stack reconstruction of
 sinogram CSV directories.

"""
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from functools import lru_cache, partial
from pathlib import Path
from time import perf_counter

import numpy as np
import pandas as pd
from dotmap import DotMap

from src.constants import (
    CELL_COLUMNS,
    MANIFEST_COLUMNS,
    MANIFEST_CSV_FILENAME,
    MANIFEST_JSON_FILENAME,
    SLICE_FILENAME_PATTERN,
    SLICE_GLOB,
    SUMMARY_METRICS,
    TRIAL_COLUMNS,
    TRIAL_STATUS,
)
from src.core import SliceInstanceOps
from src.geometry import ConvexPolygon
from src.grid import ImageGrid, PixelSet, rasterize
from src.logger import logger
from src.metrics import reconstruction_errors
from src.phantoms import make_phantom
from src.processors.interfaces.Reconstructor import ReconstructionOutcome
from src.processors.manager import RECONSTRUCTOR_MANAGER
from src.projector import TiltSchedule, project
from src.utils.file import (
    Paths,
    dump_json,
    setup_dirs_for_paths,
    write_csv,
    write_polygon_csv,
    write_sinogram_csv,
)
from src.utils.image import ImageUtils
from src.utils.interaction import InteractionUtils, Stats
from src.utils.parsing import parse_schedules


def trial_seed(*parts):
    """64-bit seed from the first 8 bytes of a SHA-256 over the joined parts."""
    digest = hashlib.sha256("|".join(str(part) for part in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def residual_norm(sino, reconstruction):
    """||A x - b|| with x the rasterized reconstruction on the sinogram's grid."""
    size, spacing = sino.detector_count, sino.detector_spacing
    if reconstruction is None:
        return float(np.linalg.norm(sino.values))
    if isinstance(reconstruction, ConvexPolygon):
        pixels = rasterize(reconstruction, size, spacing).mask
    elif isinstance(reconstruction, PixelSet):
        pixels = reconstruction.mask
    elif isinstance(reconstruction, ImageGrid):
        pixels = reconstruction.pixels
    else:
        pixels = np.asarray(reconstruction)
    if pixels.shape != (size, size):
        raise ValueError(
            f"size mismatch: reconstruction {pixels.shape}, "
            f"sinogram has {size} detectors"
        )
    forward = project(ImageGrid(pixels.astype(np.float64), spacing), sino.schedule)
    return float(np.linalg.norm(forward.values - sino.values))


@dataclass
class TrialJob:
    phantom: int
    schedule: TiltSchedule
    sigma: float
    trial: int


@dataclass
class TrialReport:
    phantom: int
    algorithm: str
    schedule: str
    sigma: float
    trial: int
    seed: int
    status: str = TRIAL_STATUS.OK
    reason: str = ""
    delta_s: float = np.nan
    delta_h: float = np.nan
    residual: float = np.nan
    wall_time_ms: float = 0.0

    def to_row(self):
        return asdict(self)


@lru_cache(maxsize=2)
def _worker_context(tuning_json):
    """SliceInstanceOps and one reconstructor per algorithm, once per process."""
    tuning_config = DotMap(json.loads(tuning_json), _dynamic=False)
    logger.set_level(tuning_config.outputs.log_level)
    slice_ops = SliceInstanceOps(tuning_config)
    reconstructors = {
        name: RECONSTRUCTOR_MANAGER.create(name, slice_ops)
        for name in RECONSTRUCTOR_MANAGER.processors
    }
    return slice_ops, reconstructors


def _artifact_stem(job, algorithm):
    schedule = job.schedule.name
    return f"p{job.phantom}_{algorithm}_{schedule}_s{job.sigma:g}_t{job.trial:03d}"


def save_outcome(outcome, images_path, polygon_path=None, binary_format=True):
    if outcome.pixel_set is not None:
        ImageUtils.save_mask(images_path, outcome.pixel_set.mask, binary_format)
    if polygon_path is not None and outcome.polygon is not None:
        write_polygon_csv(polygon_path, outcome.polygon)


def run_trial_job(job, tuning_json, algorithms, base_seed, output_dir=None):
    """All algorithms on one (phantom, schedule, sigma, trial) cell; data for each
    required schedule is generated once."""
    slice_ops, reconstructors = _worker_context(tuning_json)
    outputs = slice_ops.tuning_config.outputs
    truth = slice_ops.ground_truth(make_phantom(job.phantom).polygon)
    data_seed = trial_seed(
        base_seed, job.phantom, job.schedule.name, job.sigma, job.trial
    )
    data = {}

    reports = []
    for algorithm in algorithms:
        reconstructor = reconstructors[algorithm]
        seed = trial_seed(
            base_seed, job.phantom, job.schedule.name, job.sigma, job.trial, algorithm
        )
        report = TrialReport(
            job.phantom, algorithm, job.schedule.name, job.sigma, job.trial, seed
        )
        sino = None
        start = perf_counter()
        try:
            schedule = reconstructor.required_schedule(job.schedule)
            key = tuple(schedule.angles)
            if key not in data:
                sino = slice_ops.simulate(job.phantom, schedule, job.sigma, data_seed)
                data[key] = [sino, None]
            sino, shadows = data[key]
            if reconstructor.input_kind == "shadows" and shadows is None:
                shadows = data[key][1] = slice_ops.extract_shadows(sino)
            outcome = reconstructor.reconstruct(
                sino,
                seed,
                shadows=shadows,
                noise_free=job.sigma == 0,
                phantom=job.phantom,
            )
        except Exception as error:
            logger.error(
                f"Trial {job.trial} of {algorithm} on phantom {job.phantom} "
                f"({job.schedule.name}, sigma={job.sigma:g}) failed: {error}"
            )
            outcome = ReconstructionOutcome.failed(error)
        elapsed_ms = (perf_counter() - start) * 1000.0

        report.status, report.reason = outcome.status, outcome.reason
        report.wall_time_ms = round(elapsed_ms, 3) if outputs.record_timing else 0.0
        if outcome.ok:
            errors = reconstruction_errors(truth, outcome.pixel_set)
            report.delta_s, report.delta_h = errors.delta_s, errors.delta_h
            report.residual = residual_norm(sino, outcome.pixel_set)
            if output_dir is not None:
                paths = Paths(Path(output_dir))
                stem = _artifact_stem(job, algorithm)
                save_outcome(
                    outcome,
                    paths.images_dir.joinpath(f"{stem}.pgm"),
                    paths.polygons_dir.joinpath(f"{stem}.csv"),
                    outputs.pgm_binary,
                )
        reports.append(report)
    return reports


def summarize_trials(trials):
    """Per cell: status counts, mean and sample std of the metrics over ok trials."""
    rows = []
    for key, group in trials.groupby(CELL_COLUMNS, sort=False):
        ok = group[group["status"] == TRIAL_STATUS.OK]
        row = dict(zip(CELL_COLUMNS, key))
        for status in TRIAL_STATUS.values():
            row[f"n_{status}"] = int((group["status"] == status).sum())
        for metric in SUMMARY_METRICS:
            values = ok[metric].astype(np.float64)
            row[f"{metric}_mean"] = values.mean()
            row[f"{metric}_std"] = values.std(ddof=1)
        rows.append(row)
    return pd.DataFrame(rows)


def experiment_jobs(experiment):
    schedules = parse_schedules(experiment.schedules)
    return [
        TrialJob(int(phantom), schedule, float(sigma), trial)
        for phantom in experiment.phantoms
        for schedule in schedules
        for sigma in experiment.sigmas
        for trial in range(experiment.trials)
    ]


def run_experiment(experiment, tuning_config):
    jobs = experiment_jobs(experiment)
    paths = Paths(Path(experiment.output_dir))
    save_images = experiment.save_images or tuning_config.outputs.save_images
    setup_dirs_for_paths(paths, save_images)
    worker = partial(
        run_trial_job,
        tuning_json=json.dumps(tuning_config.toDict(), sort_keys=True),
        algorithms=list(experiment.algorithms),
        base_seed=experiment.base_seed,
        output_dir=str(paths.output_dir) if save_images else None,
    )

    results = []
    with InteractionUtils.progress() as progress:
        task = progress.add_task("Running trials", total=len(jobs))
        if experiment.workers > 1:
            with ProcessPoolExecutor(max_workers=experiment.workers) as executor:
                # map keeps job order, so outputs do not depend on scheduling
                for reports in executor.map(worker, jobs):
                    results.append(reports)
                    progress.advance(task)
        else:
            for job in jobs:
                results.append(worker(job))
                progress.advance(task)

    stats = Stats()
    for reports in results:
        for report in reports:
            stats.count(report.status)
    trials = pd.DataFrame(
        [report.to_row() for reports in results for report in reports],
        columns=TRIAL_COLUMNS,
    )
    summary = summarize_trials(trials)
    write_csv(paths.trials_csv, trials)
    write_csv(paths.summary_csv, summary)
    logger.info(
        f"{stats.total} trials: {stats.trials_ok} ok, "
        f"{stats.trials_no_reconstruction} without reconstruction, "
        f"{stats.trials_error} failed"
    )
    shown = CELL_COLUMNS + ["n_ok", "delta_s_mean", "delta_h_mean", "residual_mean"]
    InteractionUtils.print_summary_table(summary[shown])
    return trials, summary


def slice_files(input_dir):
    files = sorted(Path(input_dir).glob(SLICE_GLOB))
    if not files:
        raise ValueError(f"No slice sinograms matching '{SLICE_GLOB}' in '{input_dir}'")
    return files


def write_stack(sinos, output_dir):
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for index, sino in enumerate(sinos):
        path = output_dir.joinpath(SLICE_FILENAME_PATTERN % index)
        write_sinogram_csv(path, sino)
        paths.append(path)
    logger.info(f"Wrote {len(sinos)} slice sinograms to '{output_dir}'")
    return paths


def build_nanowire_stack(
    slice_ops, n_slices, schedule, sigma=0.0, seed=0, rotation_deg=30.0
):
    """Hexagonal slices whose top third is rotated by rotation_deg."""
    if n_slices < 1:
        raise ValueError("A stack needs at least one slice")
    hexagon = make_phantom(1).polygon
    rotated = hexagon.transformed(rotation_deg=rotation_deg)
    first_rotated = n_slices - n_slices // 3
    return [
        slice_ops.simulate_polygon(
            rotated if index >= first_rotated else hexagon,
            schedule,
            sigma,
            trial_seed(seed, "slice", index),
        )
        for index in range(n_slices)
    ]


def _stack_shadows(slice_ops, reconstructor, sinos):
    if reconstructor.input_kind != "shadows":
        return [None] * len(sinos)
    try:
        return slice_ops.extract_stack_shadows(sinos)
    except ValueError as error:
        logger.warning(f"Stack shadows unavailable, using per-slice shadows: {error}")
        return [None] * len(sinos)


def run_stack(input_dir, algorithm, tuning_config, output_dir, seed=0):
    """Reconstruct every slice_*.csv of a directory independently."""
    files = slice_files(input_dir)
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    slice_ops = SliceInstanceOps(tuning_config)
    reconstructor = RECONSTRUCTOR_MANAGER.create(algorithm, slice_ops)
    scale = tuning_config.stack.intensity_scale
    sinos = [
        slice_ops.load_sinogram(path, name=path.stem).scaled(scale) for path in files
    ]
    shadows = _stack_shadows(slice_ops, reconstructor, sinos)

    rows = []
    with InteractionUtils.progress() as progress:
        task = progress.add_task(
            f"Reconstructing slices ({algorithm})", total=len(sinos)
        )
        for index, (path, sino) in enumerate(zip(files, sinos)):
            try:
                outcome = reconstructor.reconstruct(
                    sino, trial_seed(seed, algorithm, index), shadows=shadows[index]
                )
            except Exception as error:
                logger.error(f"Slice '{path.name}' failed: {error}")
                outcome = ReconstructionOutcome.failed(error)
            row = dict.fromkeys(MANIFEST_COLUMNS, "")
            row.update(slice=path.name, status=outcome.status, reason=outcome.reason)
            row["minima"] = " ".join(f"{angle:g}" for angle in outcome.minima)
            if outcome.ok:
                row["pixel_count"] = len(outcome.pixel_set)
                if outcome.polygon is not None:
                    row["vertex_count"] = len(outcome.polygon)
                row["residual"] = residual_norm(sino, outcome.pixel_set)
                save_outcome(
                    outcome,
                    output_dir.joinpath(f"{path.stem}.pgm"),
                    output_dir.joinpath(f"{path.stem}_polygon.csv"),
                    tuning_config.outputs.pgm_binary,
                )
            rows.append(row)
            progress.advance(task)

    manifest = pd.DataFrame(rows, columns=MANIFEST_COLUMNS)
    write_csv(output_dir.joinpath(MANIFEST_CSV_FILENAME), manifest)
    dump_json(
        output_dir.joinpath(MANIFEST_JSON_FILENAME),
        {
            "created_at": datetime.now(timezone.utc).isoformat(),
            "algorithm": algorithm,
            "input_dir": str(input_dir),
            "slices": len(files),
            "status_counts": {
                status: int((manifest["status"] == status).sum())
                for status in TRIAL_STATUS.values()
            },
        },
    )
    logger.info(f"Stack manifest written to '{output_dir}'")
    return manifest
