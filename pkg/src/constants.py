"""

 geotomo

 Shared constants: file names, named tilt schedules and algorithm names.

"""
import numpy as np
from dotmap import DotMap

# Filenames
TRIALS_FILENAME = "trials.csv"
SUMMARY_FILENAME = "summary.csv"
MANIFEST_CSV_FILENAME = "manifest.csv"
MANIFEST_JSON_FILENAME = "manifest.json"
SLICE_FILENAME_PATTERN = "slice_%04d.csv"
SLICE_GLOB = "slice_*.csv"

# World frame of the phantoms: one world unit is one pixel at this resolution.
PHANTOM_FRAME = 512

# 180 degrees coincides with 0 degrees, keep every angle in [0, 180)
NAMED_SCHEDULES = {
    "S180_1": sorted(float(a % 180) for a in range(1, 181)),
    "S140_1": [float(a) for a in range(1, 141)],
    "S180_10": [float(a) for a in range(1, 180, 10)],
    "S140_10": [float(a) for a in range(1, 140, 10)],
}

GKXR_DIRECTIONS = [1.0, 28.0, 91.0, 118.0]

# Reconstructor plugins by the name they register under
ALGORITHMS = ["SIRT", "BART", "DART", "GKXR", "U-FBP", "MPW", "2n-GON"]

TRIAL_STATUS = DotMap(
    {
        "OK": "ok",
        "NO_RECONSTRUCTION": "no_reconstruction",
        "ERROR": "error",
    },
    _dynamic=False,
)

# why 2n-GON declined to reconstruct
NGON_EXIT = DotMap(
    {
        "TOO_FEW_MINIMA": "m<2",
        "NO_CHAIN": "R empty",
        "OUT_OF_RANGE": "T out of range",
    },
    _dynamic=False,
)
GKXR_NO_OBJECT = "no object"

TRIAL_COLUMNS = [
    "phantom",
    "algorithm",
    "schedule",
    "sigma",
    "trial",
    "seed",
    "status",
    "reason",
    "delta_s",
    "delta_h",
    "residual",
    "wall_time_ms",
]

CELL_COLUMNS = ["phantom", "algorithm", "schedule", "sigma"]
SUMMARY_METRICS = ["delta_s", "delta_h", "residual", "wall_time_ms"]

MANIFEST_COLUMNS = [
    "slice",
    "status",
    "reason",
    "pixel_count",
    "vertex_count",
    "residual",
    "minima",
]

EPSILON = 1e-9
DEG = np.pi / 180.0
