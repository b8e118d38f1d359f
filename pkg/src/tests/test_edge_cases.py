import json

import pytest

from src.tests.test_samples.experiment.boilerplate import EXPERIMENT_BOILERPLATE
from src.tests.utils import run_entry_point


@pytest.fixture
def experiment_path(tmp_path):
    path = tmp_path.joinpath("experiment.json")
    with open(path, "w") as f:
        json.dump(EXPERIMENT_BOILERPLATE, f)
    return path


def test_recon_without_input(experiment_path, tmp_path):
    with pytest.raises(Exception) as error:
        run_entry_point("recon", experiment_path, tmp_path)
    assert str(error.value) == "'recon' needs --input"


def test_stack_with_several_algorithms(experiment_path, tmp_path):
    with pytest.raises(Exception) as error:
        run_entry_point("stack", experiment_path, tmp_path, input=str(tmp_path))
    assert str(error.value) == (
        "'stack' needs exactly one algorithm, pass --algo. Got ['SIRT', 'U-FBP']"
    )


def test_stack_on_an_empty_directory(experiment_path, tmp_path):
    with pytest.raises(ValueError, match="No slice sinograms"):
        run_entry_point(
            "stack", experiment_path, tmp_path, input=str(tmp_path), algo=["MPW"]
        )


def test_metrics_without_reference(experiment_path, tmp_path):
    with pytest.raises(Exception) as error:
        run_entry_point("metrics", experiment_path, tmp_path, input="a.pgm")
    assert str(error.value) == "'metrics' needs both --input and --reference"


def test_unknown_algorithm_from_the_command_line(tmp_path):
    with pytest.raises(Exception) as error:
        run_entry_point("bench", None, tmp_path, algo=["FBP"])
    assert str(error.value) == "Provided Experiment JSON is Invalid: '<defaults>'"


def test_unknown_command(experiment_path, tmp_path):
    with pytest.raises(Exception) as error:
        run_entry_point("train", experiment_path, tmp_path)
    assert str(error.value) == "Unknown command 'train'"


def test_missing_sinogram_file(experiment_path, tmp_path):
    with pytest.raises(FileNotFoundError):
        run_entry_point(
            "recon", experiment_path, tmp_path, input=str(tmp_path / "missing.csv")
        )
