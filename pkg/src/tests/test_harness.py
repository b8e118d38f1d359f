import json

import numpy as np
import pandas as pd
import pytest
from freezegun import freeze_time

from src.constants import (
    MANIFEST_CSV_FILENAME,
    MANIFEST_JSON_FILENAME,
    SUMMARY_FILENAME,
    TRIAL_COLUMNS,
    TRIALS_FILENAME,
    TRIAL_STATUS,
)
from src.core import SliceInstanceOps
from src.grid import ImageGrid, PixelSet
from src.harness import (
    build_nanowire_stack,
    residual_norm,
    run_experiment,
    run_stack,
    slice_files,
    summarize_trials,
    trial_seed,
    write_stack,
)
from src.phantoms import make_phantom
from src.processors.PixelReconstructors import Sirt
from src.projector import Sinogram, TiltSchedule, project
from src.tests.utils import FROZEN_TIMESTAMP, experiment_for, small_tuning_config
from src.utils.file import read_csv
from src.utils.parsing import tuning_config_for_experiment

SMALL_TUNING = {
    "data": {"size": 32, "bin_factor": 2},
    "sirt": {"iterations": 5},
    "outputs": {"log_level": "WARNING", "record_timing": False},
}


def small_experiment(output_dir, **keys):
    keys.setdefault("algorithms", ["SIRT", "U-FBP"])
    keys.setdefault("trials", 2)
    keys.setdefault("sigmas", [0.0, 1.0])
    experiment = experiment_for(output_dir, tuning=SMALL_TUNING, **keys)
    return experiment, tuning_config_for_experiment(experiment)


def test_trial_seed_is_stable_and_64_bit():
    seed = trial_seed(20100101, 1, "S180_1", 0.0, 3)
    assert seed == trial_seed(20100101, 1, "S180_1", 0.0, 3)
    assert seed != trial_seed(20100101, 1, "S180_1", 0.0, 4)
    assert 0 <= seed < 2**64


def test_residual_norm():
    pixels = np.zeros((32, 32))
    pixels[10:20, 12:18] = 1.0
    sino = project(ImageGrid(pixels, 16.0), TiltSchedule.named("S180_10"))
    data_norm = np.linalg.norm(sino.values)
    assert residual_norm(sino, None) == pytest.approx(data_norm)
    assert residual_norm(sino, PixelSet.empty(32)) == pytest.approx(data_norm)
    assert residual_norm(sino, PixelSet(pixels > 0)) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError, match="size mismatch"):
        residual_norm(sino, PixelSet.empty(16))


def test_experiment_outputs_are_reproducible(tmp_path):
    outputs = []
    for run in ("first", "second"):
        experiment, tuning_config = small_experiment(tmp_path / run)
        trials, summary = run_experiment(experiment, tuning_config)
        outputs.append(
            (
                (tmp_path / run / TRIALS_FILENAME).read_bytes(),
                (tmp_path / run / SUMMARY_FILENAME).read_bytes(),
            )
        )
    assert outputs[0] == outputs[1]
    assert list(trials.columns) == TRIAL_COLUMNS
    # 2 algorithms x 2 noise levels x 2 trials
    assert len(trials) == 8
    assert (trials["status"] == TRIAL_STATUS.OK).all()
    assert len(summary) == 4


def test_summary_can_be_recomputed_from_trials(tmp_path):
    experiment, tuning_config = small_experiment(tmp_path)
    _, summary = run_experiment(experiment, tuning_config)
    recomputed = summarize_trials(pd.read_csv(tmp_path / TRIALS_FILENAME))
    pd.testing.assert_frame_equal(
        recomputed, pd.read_csv(tmp_path / SUMMARY_FILENAME), check_dtype=False
    )
    assert summary["n_ok"].tolist() == [2, 2, 2, 2]


def test_failing_trials_are_recorded_and_the_run_continues(mocker, tmp_path):
    mocker.patch.object(Sirt, "reconstruct", side_effect=RuntimeError("diverged"))
    experiment, tuning_config = small_experiment(tmp_path, sigmas=[0.0])
    trials, summary = run_experiment(experiment, tuning_config)
    sirt_rows = trials[trials["algorithm"] == "SIRT"]
    assert (sirt_rows["status"] == TRIAL_STATUS.ERROR).all()
    assert (sirt_rows["reason"] == "RuntimeError: diverged").all()
    assert sirt_rows["delta_s"].isna().all()
    ufbp_rows = trials[trials["algorithm"] == "U-FBP"]
    assert (ufbp_rows["status"] == TRIAL_STATUS.OK).all()
    assert summary.set_index("algorithm").loc["SIRT", "n_error"] == 2


def test_parallel_workers_match_a_single_worker(tmp_path):
    frames = []
    for workers in (1, 2):
        experiment, tuning_config = small_experiment(
            tmp_path / str(workers), workers=workers
        )
        trials, _ = run_experiment(experiment, tuning_config)
        frames.append(trials)
    pd.testing.assert_frame_equal(frames[0], frames[1])


def test_slice_files_need_a_non_empty_directory(tmp_path):
    with pytest.raises(ValueError):
        slice_files(tmp_path)
    with pytest.raises(ValueError):
        slice_ops = SliceInstanceOps(small_tuning_config())
        build_nanowire_stack(slice_ops, 0, TiltSchedule([0.0]))


def test_identical_slices_give_identical_rows(tmp_path):
    slice_ops = SliceInstanceOps(small_tuning_config())
    sino = slice_ops.simulate(1, TiltSchedule.named("S180_10"))
    write_stack([sino] * 8, tmp_path / "stack")
    tuning_config = small_tuning_config()
    with freeze_time(FROZEN_TIMESTAMP):
        manifest = run_stack(
            tmp_path / "stack", "U-FBP", tuning_config, tmp_path / "out"
        )

    assert manifest["slice"].tolist() == [f"slice_{i:04d}.csv" for i in range(8)]
    rows = manifest.drop(columns="slice").to_dict("records")
    assert all(row == rows[0] for row in rows)
    assert rows[0]["status"] == TRIAL_STATUS.OK
    assert (tmp_path / "out" / "slice_0003.pgm").exists()
    assert (tmp_path / "out" / "slice_0003_polygon.csv").exists()

    with open(tmp_path / "out" / MANIFEST_JSON_FILENAME) as f:
        manifest_json = json.load(f)
    assert manifest_json["created_at"] == "1970-01-01T00:00:00+00:00"
    assert manifest_json["slices"] == 8
    assert manifest_json["status_counts"][TRIAL_STATUS.OK] == 8


def test_an_empty_slice_is_refused_without_stopping_the_stack(tmp_path):
    tuning_config = small_tuning_config(data={"size": 128}, stack={"opening": False})
    slice_ops = SliceInstanceOps(tuning_config)
    schedule = TiltSchedule.named("S140_1")
    sino = slice_ops.simulate(1, schedule)
    empty = Sinogram(schedule, np.zeros_like(sino.values), sino.detector_spacing)
    write_stack([sino, empty, sino], tmp_path / "stack")
    run_stack(tmp_path / "stack", "2n-GON", tuning_config, tmp_path / "out")

    manifest = read_csv(tmp_path / "out" / MANIFEST_CSV_FILENAME)
    assert manifest["status"].tolist() == [
        TRIAL_STATUS.OK,
        TRIAL_STATUS.NO_RECONSTRUCTION,
        TRIAL_STATUS.OK,
    ]
    assert manifest["reason"].tolist()[1] == "m<2"
    assert not (tmp_path / "out" / "slice_0001.pgm").exists()


def test_stack_shadows_apply_the_stack_median_filter():
    # a single hot detector bin and no object
    values = np.zeros((1, 16))
    values[0, 13] = 5.0
    sino = Sinogram(TiltSchedule([0.0]), values)
    tuning_config = small_tuning_config(stack={"opening": False})
    slice_ops = SliceInstanceOps(tuning_config)

    assert slice_ops.extract_stack_shadows([sino])[0].interval(0) is None
    assert slice_ops.extract_shadows(sino).interval(0) == (13, 13)
    unfiltered = SliceInstanceOps(
        small_tuning_config(stack={"opening": False, "median_filter": False})
    )
    assert unfiltered.extract_stack_shadows([sino])[0].interval(0) == (13, 13)


def test_nanowire_rotation_shows_in_the_width_minima(tmp_path):
    tuning_config = small_tuning_config(data={"size": 128})
    slice_ops = SliceInstanceOps(tuning_config)
    sinos = build_nanowire_stack(slice_ops, 9, TiltSchedule.named("S140_1"))
    write_stack(sinos, tmp_path / "stack")
    manifest = run_stack(tmp_path / "stack", "2n-GON", tuning_config, tmp_path / "out")

    def minima(index):
        return [float(angle) for angle in manifest["minima"][index].split()]

    bottom, top = minima(0), minima(8)
    checked = [t for t in bottom if 10.0 <= t and t + 30.0 < 140.0]
    assert checked
    for t in checked:
        assert min(abs(t + 30.0 - u) for u in top) <= 3.0


def test_hexagon_raster_has_the_expected_area():
    slice_ops = SliceInstanceOps(small_tuning_config(data={"size": 128}))
    truth = slice_ops.ground_truth(make_phantom(1).polygon)
    area_in_pixels = make_phantom(1).polygon.area / slice_ops.spacing**2
    assert len(truth) == pytest.approx(area_in_pixels, rel=0.02)
