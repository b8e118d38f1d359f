"""

 geotomo

 Parallel-beam forward projection, its exact adjoint, and shadow, width and
 support extraction from sinograms.

 Every pixel is rotated onto the detector axis and its value is split linearly
 between the two nearest detector bins; summing those contributions is the
 rotate-then-sum-columns projection, with mass outside the detector cropped.

"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix

from src.constants import DEG, NAMED_SCHEDULES
from src.geometry import detector_axis
from src.grid import ImageGrid, median_filter_1x3, open_mask
from src.logger import logger


@dataclass
class TiltSchedule:
    angles: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=np.float64).reshape(-1)
        if len(angles) == 0:
            raise ValueError("A tilt schedule needs at least one angle")
        if np.any(angles < 0) or np.any(angles >= 180):
            raise ValueError("Tilt angles must lie in [0, 180) degrees")
        if np.any(np.diff(angles) <= 0):
            raise ValueError("Tilt angles must be strictly increasing")
        self.angles = angles

    @classmethod
    def named(cls, name):
        if name not in NAMED_SCHEDULES:
            raise ValueError(
                f"Unknown tilt schedule '{name}', expected one of {list(NAMED_SCHEDULES)}"
            )
        return cls(NAMED_SCHEDULES[name], name=name)

    def __len__(self):
        return len(self.angles)

    def index_of(self, angle, tolerance=1e-6):
        matches = np.flatnonzero(np.abs(self.angles - angle) <= tolerance)
        return int(matches[0]) if len(matches) else None

    def coverage(self):
        """Angular range the schedule measures: 180 when the gap over 180 degrees is
        no wider than the steps, otherwise the last angle plus one step."""
        if len(self.angles) == 1:
            return 180.0
        steps = np.diff(self.angles)
        if self.angles[0] + 180.0 - self.angles[-1] <= steps.max() + 1e-9:
            return 180.0
        return float(min(self.angles[-1] + np.median(steps), 180.0))


@dataclass
class Sinogram:
    schedule: TiltSchedule
    values: np.ndarray
    detector_spacing: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != len(self.schedule):
            raise ValueError(
                f"Sinogram values must be shaped (angles, detectors), got {values.shape} "
                f"for {len(self.schedule)} angles"
            )
        self.values = values

    @property
    def detector_count(self):
        return self.values.shape[1]

    def copy(self):
        return Sinogram(self.schedule, self.values.copy(), self.detector_spacing)

    def scaled(self, factor):
        return Sinogram(self.schedule, self.values * factor, self.detector_spacing)

    def restricted(self, angles):
        """Rows for the given angles, which must all be present."""
        indices = []
        for angle in angles:
            index = self.schedule.index_of(angle)
            if index is None:
                raise ValueError(f"Sinogram has no projection at {angle} degrees")
            indices.append(index)
        schedule = TiltSchedule(self.schedule.angles[indices], self.schedule.name)
        return Sinogram(schedule, self.values[indices], self.detector_spacing)


@dataclass
class ShadowSet:
    schedule: TiltSchedule
    intervals: list
    detector_count: int
    detector_spacing: float = 1.0

    def interval(self, index):
        """The single interval at an angle index, None when the shadow is empty."""
        runs = self.intervals[index]
        if len(runs) > 1:
            raise ValueError(
                f"Expected one shadow interval at {self.schedule.angles[index]} degrees, "
                f"found {len(runs)}"
            )
        return runs[0] if runs else None


@dataclass
class SupportMeasurements:
    directions: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        self.directions = np.asarray(self.directions, dtype=np.float64).reshape(-1, 2)
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        norms = np.linalg.norm(self.directions, axis=1)
        if np.any(np.abs(norms - 1) > 1e-12):
            raise ValueError("Support directions must be unit vectors")

    def __len__(self):
        return len(self.values)

    @property
    def angles(self):
        """Direction angles in degrees, in [0, 360)."""
        return np.mod(
            np.degrees(np.arctan2(self.directions[:, 1], self.directions[:, 0])), 360.0
        )


@lru_cache(maxsize=8)
def _pixel_offsets(size):
    """Flattened pixel-center coordinates in detector-bin units."""
    center = (size - 1) / 2.0
    index = np.arange(size, dtype=np.float64)
    cols, rows = np.meshgrid(index, index)
    x = (cols - center).ravel()
    y = (center - rows).ravel()
    x.setflags(write=False)
    y.setflags(write=False)
    return x, y


def _bin_positions(x, y, theta_deg, center):
    theta = theta_deg * DEG
    s = x * np.cos(theta) + y * np.sin(theta) + center
    lower = np.floor(s)
    return lower.astype(np.int64), s - lower


def project(img, schedule):
    """Line sums of img for every tilt angle; detector_count equals img.size."""
    size = img.size
    center = (size - 1) / 2.0
    flat = img.pixels.ravel()
    if not np.all(np.isfinite(flat)):
        raise ValueError("project needs a finite-valued image")
    x_all, y_all = _pixel_offsets(size)
    nonzero = np.flatnonzero(flat)
    x, y, weights = x_all[nonzero], y_all[nonzero], flat[nonzero]

    values = np.zeros((len(schedule), size))
    for i, theta in enumerate(schedule.angles):
        lower, frac = _bin_positions(x, y, theta, center)
        shares = ((lower, weights * (1.0 - frac)), (lower + 1, weights * frac))
        for bins, share in shares:
            valid = (bins >= 0) & (bins < size)
            values[i] += np.bincount(bins[valid], weights=share[valid], minlength=size)
    return Sinogram(schedule, values, img.pixel_spacing)


def backproject(sino, size):
    """Adjoint of project: each pixel gathers its two detector bins with the same
    weights."""
    if sino.detector_count != size:
        raise ValueError(
            f"size mismatch: sinogram has {sino.detector_count} detectors, "
            f"grid size {size}"
        )
    center = (size - 1) / 2.0
    x, y = _pixel_offsets(size)
    image = np.zeros(size * size)
    for i, theta in enumerate(sino.schedule.angles):
        row = sino.values[i]
        if not np.any(row):
            continue
        lower, frac = _bin_positions(x, y, theta, center)
        for bins, share in ((lower, 1.0 - frac), (lower + 1, frac)):
            valid = (bins >= 0) & (bins < size)
            image[valid] += row[bins[valid]] * share[valid]
    return ImageGrid(image.reshape(size, size), sino.detector_spacing)


def projection_rows(size, theta_deg):
    """Sparse rows of the system matrix for one angle as CSR arrays
    (indptr, pixel indices, weights), one row per detector bin."""
    center = (size - 1) / 2.0
    x, y = _pixel_offsets(size)
    lower, frac = _bin_positions(x, y, theta_deg, center)
    pixels = np.arange(size * size)
    bins = np.concatenate([lower, lower + 1])
    weights = np.concatenate([1.0 - frac, frac])
    pixel_index = np.concatenate([pixels, pixels])
    keep = (bins >= 0) & (bins < size) & (weights > 0)
    bins, weights, pixel_index = bins[keep], weights[keep], pixel_index[keep]
    order = np.argsort(bins, kind="stable")
    indptr = np.concatenate([[0], np.cumsum(np.bincount(bins, minlength=size))])
    return indptr, pixel_index[order], weights[order]


@lru_cache(maxsize=2)
def _system_matrix(size, angles):
    blocks = [projection_rows(size, theta) for theta in angles]
    indptr, offset = [np.zeros(1, dtype=np.int64)], 0
    for block_indptr, _, _ in blocks:
        indptr.append(block_indptr[1:] + offset)
        offset += block_indptr[-1]
    indices = np.concatenate([pixels for _, pixels, _ in blocks])
    data = np.concatenate([weights for _, _, weights in blocks])
    return csr_matrix(
        (data, indices, np.concatenate(indptr)),
        shape=(len(angles) * size, size * size),
    )


def system_matrix(size, schedule):
    """CSR matrix A with A @ pixels.ravel() == project(img, schedule).values.ravel();
    its transpose is backproject."""
    return _system_matrix(int(size), tuple(float(a) for a in schedule.angles))


def runs_of_ones(mask_row):
    """Maximal runs of True as inclusive (lo, hi) pairs."""
    padded = np.concatenate([[False], np.asarray(mask_row, dtype=bool), [False]])
    changes = np.flatnonzero(padded[1:] != padded[:-1])
    return [(int(lo), int(hi) - 1) for lo, hi in zip(changes[::2], changes[1::2])]


def shadow_mask(sino, t=0.0, median=True):
    """Per-angle detector mask of values strictly above t."""
    values = median_filter_1x3(sino.values) if median else sino.values
    return values > t


def shadows_from_mask(sino, mask, convex=True):
    intervals = []
    for row in mask:
        runs = runs_of_ones(row)
        if convex and len(runs) > 1:
            runs = [max(runs, key=lambda run: (run[1] - run[0], -run[0]))]
        intervals.append(runs)
    return ShadowSet(
        sino.schedule, intervals, sino.detector_count, sino.detector_spacing
    )


def extract_shadows(sino, t=0.0, convex=True, median=True):
    return shadows_from_mask(sino, shadow_mask(sino, t, median), convex)


def extract_stack_shadows(sinos, t=0.0, convex=True, median=True, se=None):
    """Shadows of a slice stack, opening each angle's (slice x detector) mask
    so neighbouring slices interact."""
    if len(sinos) == 0:
        return []
    first = sinos[0]
    for sino in sinos[1:]:
        if sino.detector_count != first.detector_count or not np.array_equal(
            sino.schedule.angles, first.schedule.angles
        ):
            raise ValueError("All slices of a stack must share schedule and detector")
    masks = np.stack([shadow_mask(sino, t, median) for sino in sinos])
    for angle_index in range(masks.shape[1]):
        masks[:, angle_index, :] = open_mask(masks[:, angle_index, :], se)
    return [shadows_from_mask(sino, masks[k], convex) for k, sino in enumerate(sinos)]


def widths(shadows):
    """(angle, width) per angle with a shadow; empty shadows are omitted."""
    result = []
    omitted = []
    for index, angle in enumerate(shadows.schedule.angles):
        interval = shadows.interval(index)
        if interval is None:
            omitted.append(float(angle))
            continue
        lo, hi = interval
        result.append((float(angle), (hi - lo + 1) * shadows.detector_spacing))
    if omitted:
        logger.warning(
            f"No shadow at {len(omitted)} angle(s), widths omitted: {omitted}"
        )
    return result


def support_pairs(shadows):
    """(angle, h(v), h(-v)) per angle with a shadow, measured to the outer bin edges."""
    center = (shadows.detector_count - 1) / 2.0
    spacing = shadows.detector_spacing
    pairs = []
    for index, angle in enumerate(shadows.schedule.angles):
        interval = shadows.interval(index)
        if interval is None:
            continue
        lo, hi = interval
        pairs.append(
            (float(angle), (hi - center + 0.5) * spacing, (center - lo + 0.5) * spacing)
        )
    return pairs


def support_measurements(shadows):
    directions, values = [], []
    pairs = support_pairs(shadows)
    if len(pairs) < len(shadows.schedule):
        logger.warning(
            f"Support measurements omitted for {len(shadows.schedule) - len(pairs)} "
            "angle(s) without shadow"
        )
    for angle, h_plus, h_minus in pairs:
        v = detector_axis(angle)
        v /= np.linalg.norm(v)
        directions += [v, -v]
        values += [h_plus, h_minus]
    return SupportMeasurements(np.array(directions).reshape(-1, 2), np.array(values))

