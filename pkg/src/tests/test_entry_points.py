import json
import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

from src.constants import (
    ALGORITHMS,
    MANIFEST_CSV_FILENAME,
    SUMMARY_FILENAME,
    TRIALS_FILENAME,
)
from src.processors.manager import ProcessorManager
from src.tests.test_samples.experiment.boilerplate import EXPERIMENT_BOILERPLATE
from src.tests.utils import run_entry_point


@pytest.fixture
def experiment_path(tmp_path):
    path = tmp_path.joinpath("experiment.json")
    with open(path, "w") as f:
        json.dump(EXPERIMENT_BOILERPLATE, f)
    return path


def test_gen_recon_and_metrics(experiment_path, tmp_path):
    data_dir = tmp_path.joinpath("data")
    written = run_entry_point("gen", experiment_path, data_dir)
    sinogram_path = data_dir.joinpath("sinogram_p1_S180_10_s0.csv")
    assert written == [sinogram_path]
    assert data_dir.joinpath("phantom_1.pgm").exists()
    assert data_dir.joinpath("phantom_1_polygon.csv").exists()

    recon_dir = tmp_path.joinpath("recon")
    outcomes = run_entry_point(
        "recon",
        experiment_path,
        recon_dir,
        input=str(sinogram_path),
        algo=["U-FBP"],
        phantom=[1],
    )
    assert outcomes["U-FBP"].ok
    reconstruction = recon_dir.joinpath("sinogram_p1_S180_10_s0_U-FBP.pgm")
    assert reconstruction.exists()
    assert recon_dir.joinpath("sinogram_p1_S180_10_s0_U-FBP_polygon.csv").exists()

    errors = run_entry_point(
        "metrics",
        experiment_path,
        tmp_path,
        input=str(reconstruction),
        reference=str(data_dir.joinpath("phantom_1.pgm")),
    )
    assert errors.delta_h <= 2
    assert errors.delta_s <= 40


def test_bench_writes_trials_and_summary(experiment_path, tmp_path):
    trials, summary = run_entry_point("bench", experiment_path, tmp_path)
    assert len(trials) == 2
    assert set(trials["algorithm"]) == {"SIRT", "U-FBP"}
    on_disk = pd.read_csv(tmp_path.joinpath(TRIALS_FILENAME))
    assert on_disk["seed"].tolist() == trials["seed"].tolist()
    assert tmp_path.joinpath(SUMMARY_FILENAME).exists()
    assert summary["n_ok"].tolist() == [1, 1]


def test_bench_saves_images_on_request(experiment_path, tmp_path):
    run_entry_point("bench", experiment_path, tmp_path, save_images=True)
    images = sorted(path.name for path in tmp_path.joinpath("images").iterdir())
    assert images == [
        "p1_SIRT_S180_10_s0_t000.pgm",
        "p1_U-FBP_S180_10_s0_t000.pgm",
    ]
    assert tmp_path.joinpath("polygons", "p1_U-FBP_S180_10_s0_t000.csv").exists()


def test_gen_stack_then_reconstruct_it(experiment_path, tmp_path):
    stack_dir = tmp_path.joinpath("stack")
    paths = run_entry_point("gen", experiment_path, stack_dir, stack=4)
    assert [path.name for path in paths] == [f"slice_{i:04d}.csv" for i in range(4)]

    out_dir = tmp_path.joinpath("out")
    manifest = run_entry_point(
        "stack", experiment_path, out_dir, input=str(stack_dir), algo=["MPW"]
    )
    assert manifest["status"].tolist() == ["ok"] * 4
    assert out_dir.joinpath(MANIFEST_CSV_FILENAME).exists()


@pytest.mark.parametrize(
    "module", ["main", "src.entry", "src.harness", "src.processors.manager"]
)
def test_modules_import_in_a_fresh_interpreter(module):
    root = Path(__file__).resolve().parents[2]
    result = subprocess.run(
        [sys.executable, "-c", f"import {module}"],
        cwd=root,
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0, result.stderr


def test_registry_holds_every_algorithm():
    manager = ProcessorManager()
    assert sorted(manager.processors) == sorted(ALGORITHMS)
    with pytest.raises(ValueError, match="Unknown algorithm"):
        manager.get("FBP")
