"""

 geotomo

 Reconstruction errors between pixel sets: symmetric difference count and
 Hausdorff distance under the Chebyshev (L-infinity) pixel metric.

"""
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from src.logger import logger


@dataclass(frozen=True)
class ErrorPair:
    delta_s: int
    delta_h: int


def _check_sizes(a, b):
    if a.size != b.size:
        raise ValueError(f"Pixel sets live on different grids: {a.size} vs {b.size}")


def symmetric_difference(a, b):
    _check_sizes(a, b)
    return int(np.count_nonzero(a.mask ^ b.mask))


def _distance_to(target):
    # chessboard distance from every pixel to the nearest member of target
    return ndimage.distance_transform_cdt(~target.mask, metric="chessboard")


def directed_hausdorff(a, b):
    return int(_distance_to(b)[a.mask].max())


def hausdorff(a, b):
    _check_sizes(a, b)
    a_empty, b_empty = not a.mask.any(), not b.mask.any()
    if a_empty and b_empty:
        return 0
    if a_empty or b_empty:
        logger.warning(
            "Hausdorff distance against an empty set, using the grid diagonal"
        )
        return a.size - 1
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def reconstruction_errors(truth, reconstruction):
    return ErrorPair(
        symmetric_difference(truth, reconstruction), hausdorff(truth, reconstruction)
    )
