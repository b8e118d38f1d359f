import json
import os
from csv import QUOTE_NONNUMERIC

import numpy as np
import pandas as pd

from src.constants import SUMMARY_FILENAME, TRIALS_FILENAME
from src.logger import logger


def load_json(path, **rest):
    try:
        with open(path, "r") as f:
            loaded = json.load(f, **rest)
    except json.decoder.JSONDecodeError as error:
        logger.critical(f"Error when loading json file at: '{path}'\n{error}")
        exit(1)
    return loaded


def dump_json(path, content):
    with open(path, "w") as f:
        json.dump(content, f, indent=2, sort_keys=True)


class Paths:
    def __init__(self, output_dir):
        self.output_dir = output_dir
        self.images_dir = output_dir.joinpath("images")
        self.polygons_dir = output_dir.joinpath("polygons")
        self.trials_csv = output_dir.joinpath(TRIALS_FILENAME)
        self.summary_csv = output_dir.joinpath(SUMMARY_FILENAME)


def setup_dirs_for_paths(paths, save_images=False):
    logger.info("Checking Directories...")
    save_output_dirs = [paths.output_dir]
    if save_images:
        save_output_dirs += [paths.images_dir, paths.polygons_dir]
    for save_output_dir in save_output_dirs:
        if not os.path.exists(save_output_dir):
            logger.info(f"Created : {save_output_dir}")
            os.makedirs(save_output_dir)


def write_csv(path, df):
    df.to_csv(path, quoting=QUOTE_NONNUMERIC, index=False)


def read_csv(path):
    return pd.read_csv(path, keep_default_na=False)


def write_sinogram_csv(path, sinogram):
    values = sinogram.values
    columns = [f"d{j}" for j in range(values.shape[1])]
    df = pd.DataFrame(values, columns=columns)
    df.insert(0, "angle_deg", sinogram.schedule.angles)
    write_csv(path, df)


def read_sinogram_table(path):
    """Returns (angles, values) from a sinogram CSV."""
    df = pd.read_csv(path)
    if "angle_deg" not in df.columns:
        raise ValueError(f"Sinogram file '{path}' has no 'angle_deg' column")
    detector_columns = [c for c in df.columns if c != "angle_deg"]
    expected = [f"d{j}" for j in range(len(detector_columns))]
    if detector_columns != expected:
        raise ValueError(
            f"Sinogram file '{path}' must have detector columns d0..d{len(expected) - 1}"
        )
    angles = df["angle_deg"].to_numpy(dtype=np.float64)
    values = df[detector_columns].to_numpy(dtype=np.float64)
    return angles, values


def write_polygon_csv(path, polygon):
    df = pd.DataFrame(np.asarray(polygon.vertices).reshape(-1, 2), columns=["x", "y"])
    write_csv(path, df)


def read_polygon_table(path):
    df = pd.read_csv(path)
    return df[["x", "y"]].to_numpy(dtype=np.float64)


def write_pixel_set_csv(path, pixel_set):
    rows, cols = np.nonzero(pixel_set.mask)
    write_csv(path, pd.DataFrame({"row": rows, "col": cols}))


def read_pixel_set_table(path):
    df = pd.read_csv(path)
    return df[["row", "col"]].to_numpy(dtype=np.int64)
