"""

 geotomo

 Pixel-based reconstructors: SIRT, BART (binary-constrained ART with
 isolated-pixel filtering) and DART.

"""
from dataclasses import dataclass, field

import cv2
import numpy as np

from src.grid import ImageGrid, remove_isolated_pixels
from src.logger import logger
from src.projector import system_matrix


@dataclass
class SirtConfig:
    iterations: int = 50
    relaxation: float = 1.0
    threshold: float = 0.5

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("SIRT needs at least one iteration")
        if not 0 < self.relaxation <= 2:
            raise ValueError(
                f"SIRT relaxation must lie in (0, 2], got {self.relaxation}"
            )


@dataclass
class DartConfig:
    init_sirt_iters: int = 25
    dart_iters: int = 25
    inner_sirt_iters: int = 10
    relaxation: float = 1.0
    rho: float = 1.0
    fix_fraction: float = 0.85

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("DART gray level rho must be positive")
        if not 0 <= self.fix_fraction <= 1:
            raise ValueError("fix_fraction must lie in [0, 1]")

    @property
    def threshold(self):
        return self.rho / 2.0


@dataclass
class BartConfig:
    art_sweeps: int = 5
    relaxation: float = 0.3
    lower: float = 0.0
    upper: float = 1.0
    art_tolerance: float = 0.5
    snap_margin: float = 0.1
    contour_threshold: float = 0.5
    filter_rounds: int = 7
    # center, edge, corner
    smooth_weights: tuple = (2.0, 1.0, 1.0)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("BART lower bound exceeds upper bound")

    def smoothing_kernel(self):
        center, edge, corner = self.smooth_weights
        kernel = np.array(
            [[corner, edge, corner], [edge, center, edge], [corner, edge, corner]],
            dtype=np.float64,
        )
        return kernel / kernel.sum()


@dataclass
class SirtResult:
    gray: ImageGrid
    binary: ImageGrid
    residuals: list = field(default_factory=list)


def _safe_reciprocal(values):
    out = np.zeros_like(values)
    touched = values > 1e-12
    out[touched] = 1.0 / values[touched]
    return out


def _check_finite(sino):
    if not np.all(np.isfinite(sino.values)):
        raise ValueError("Sinogram contains non-finite values")


class SirtOperator:
    """The SIRT update x <- x - lambda C A^T D (A x - b) for one sinogram,
    optionally restricted to a mask of free pixels."""

    def __init__(self, sino):
        _check_finite(sino)
        self.sino = sino
        self.size = sino.detector_count
        self.spacing = sino.detector_spacing
        self.matrix = system_matrix(self.size, sino.schedule)
        self.measured = sino.values.ravel()
        self.column_weights = _safe_reciprocal(
            self._adjoint(np.ones_like(self.measured))
        )
        self.full_row_weights = _safe_reciprocal(
            self._forward(np.ones((self.size, self.size)))
        )

    def _forward(self, pixels):
        return self.matrix @ np.asarray(pixels, dtype=np.float64).ravel()

    def _adjoint(self, values):
        return (self.matrix.T @ values).reshape(self.size, self.size)

    def row_weights(self, free=None):
        if free is None:
            return self.full_row_weights
        return _safe_reciprocal(self._forward(free.astype(np.float64)))

    def run(self, x, iterations, relaxation, free=None):
        """Returns the new iterate and the weighted residual norms before each step
        and after the last one. Pixels outside free keep their values."""
        x = x.copy()
        row_weights = self.row_weights(free)
        column_weights = self.column_weights
        if free is not None:
            column_weights = np.where(free, column_weights, 0.0)
        residuals = []
        residual = self._forward(x) - self.measured
        for _ in range(iterations):
            residuals.append(float(np.sqrt(np.sum(row_weights * residual**2))))
            x -= relaxation * column_weights * self._adjoint(row_weights * residual)
            residual = self._forward(x) - self.measured
        residuals.append(float(np.sqrt(np.sum(row_weights * residual**2))))
        return x, residuals


def sirt(sino, cfg: SirtConfig):
    operator = SirtOperator(sino)
    x, residuals = operator.run(
        np.zeros((operator.size, operator.size)), cfg.iterations, cfg.relaxation
    )
    gray = ImageGrid(x, operator.spacing)
    binary = ImageGrid((x > cfg.threshold).astype(np.float64), operator.spacing)
    logger.debug(f"SIRT weighted residual {residuals[0]:.4g} -> {residuals[-1]:.4g}")
    return SirtResult(gray, binary, residuals)


def _art_sweep(x, sino, cfg: BartConfig):
    matrix = system_matrix(sino.detector_count, sino.schedule)
    measured = sino.values.ravel()
    tolerance = cfg.art_tolerance
    for row in range(matrix.shape[0]):
        start, end = matrix.indptr[row], matrix.indptr[row + 1]
        if start == end:
            continue
        row_pixels, row_weights = matrix.indices[start:end], matrix.data[start:end]
        norm = float(row_weights @ row_weights)
        if norm == 0:
            continue
        ray_sum = float(row_weights @ x[row_pixels])
        target = measured[row]
        # interval ART: only rays outside [b - tol, b + tol] are corrected
        if ray_sum < target - tolerance:
            correction = target - tolerance - ray_sum
        elif ray_sum > target + tolerance:
            correction = target + tolerance - ray_sum
        else:
            continue
        updated = x[row_pixels] + cfg.relaxation * correction / norm * row_weights
        x[row_pixels] = np.clip(updated, cfg.lower, cfg.upper)
    return x


def _snap_to_bounds(x, cfg: BartConfig):
    span = cfg.upper - cfg.lower
    x[x < cfg.lower + cfg.snap_margin * span] = cfg.lower
    x[x > cfg.upper - cfg.snap_margin * span] = cfg.upper
    return x


def smooth_and_contour(binary, cfg: BartConfig):
    kernel = cfg.smoothing_kernel()
    image = binary.astype(np.float64)
    for _ in range(cfg.filter_rounds):
        smoothed = cv2.filter2D(image, -1, kernel, borderType=cv2.BORDER_REFLECT)
        image = (smoothed > cfg.contour_threshold).astype(np.float64)
    return remove_isolated_pixels(image > 0)


def bart(sino, cfg: BartConfig):
    _check_finite(sino)
    size = sino.detector_count
    x = np.zeros(size * size)
    for sweep in range(cfg.art_sweeps):
        x = _art_sweep(x, sino, cfg)
        x = _snap_to_bounds(x, cfg)
        logger.debug(f"BART sweep {sweep + 1}/{cfg.art_sweeps} done")
    contour = x.reshape(size, size) > cfg.contour_threshold
    filtered = smooth_and_contour(contour, cfg)
    return ImageGrid(filtered.astype(np.float64), sino.detector_spacing)


def boundary_mask(segmentation):
    """Pixels with a 4-neighbour in the other class."""
    padded = np.pad(segmentation, 1, mode="edge")
    center = padded[1:-1, 1:-1]
    boundary = np.zeros(segmentation.shape, dtype=bool)
    for neighbour in (
        padded[:-2, 1:-1],
        padded[2:, 1:-1],
        padded[1:-1, :-2],
        padded[1:-1, 2:],
    ):
        boundary |= neighbour != center
    return boundary


def dart(sino, cfg: DartConfig, seed=0):
    operator = SirtOperator(sino)
    size = operator.size
    rng = np.random.default_rng(seed)
    x, _ = operator.run(np.zeros((size, size)), cfg.init_sirt_iters, cfg.relaxation)
    segmentation = x > cfg.threshold
    for _ in range(cfg.dart_iters):
        boundary = boundary_mask(segmentation)
        fixed = ~boundary & (rng.random((size, size)) < cfg.fix_fraction)
        free = ~fixed
        x = np.where(fixed, np.where(segmentation, cfg.rho, 0.0), x)
        x, _ = operator.run(x, cfg.inner_sirt_iters, cfg.relaxation, free=free)
        segmentation = x > cfg.threshold
    return ImageGrid(segmentation.astype(np.float64), operator.spacing)
