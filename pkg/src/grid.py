"""

 geotomo

 Square raster images: binning, thresholding, 1x3 median, morphology and
 polygon rasterization.

 Pixel (row, col) has its center at world
   x = (col - (size - 1) / 2) * spacing,  y = ((size - 1) / 2 - row) * spacing
 relative to the grid origin, so rows grow downward.

"""
from dataclasses import dataclass, field

import cv2
import numpy as np

from src.constants import EPSILON
from src.logger import logger


@dataclass
class ImageGrid:
    pixels: np.ndarray
    pixel_spacing: float = 1.0
    origin: tuple = (0.0, 0.0)

    def __post_init__(self):
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if pixels.ndim != 2 or pixels.shape[0] != pixels.shape[1]:
            raise ValueError(
                f"ImageGrid needs a square 2D array, got shape {pixels.shape}"
            )
        if pixels.shape[0] < 1:
            raise ValueError("ImageGrid size must be positive")
        if not self.pixel_spacing > 0:
            raise ValueError(
                f"pixel_spacing must be positive, got {self.pixel_spacing}"
            )
        self.pixels = pixels

    @classmethod
    def zeros(cls, size, pixel_spacing=1.0):
        return cls(np.zeros((size, size)), pixel_spacing)

    @property
    def size(self):
        return self.pixels.shape[0]

    def is_binary(self):
        return bool(np.all((self.pixels == 0) | (self.pixels == 1)))

    def to_pixel_set(self):
        return PixelSet(self.pixels != 0)

    def pixel_centers(self):
        return pixel_centers(self.size, self.pixel_spacing, self.origin)


@dataclass
class PixelSet:
    """Pixel coordinates held as a boolean mask over a size x size grid."""

    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
            raise ValueError(f"PixelSet needs a square mask, got shape {mask.shape}")
        self.mask = mask

    @classmethod
    def empty(cls, size):
        return cls(np.zeros((size, size), dtype=bool))

    @classmethod
    def from_members(cls, members, size):
        mask = np.zeros((size, size), dtype=bool)
        members = np.asarray(list(members), dtype=np.int64).reshape(-1, 2)
        if len(members) and (members.min() < 0 or members.max() >= size):
            raise ValueError(f"PixelSet members must lie in [0, {size})")
        mask[members[:, 0], members[:, 1]] = True
        return cls(mask)

    @property
    def size(self):
        return self.mask.shape[0]

    @property
    def members(self):
        rows, cols = np.nonzero(self.mask)
        return set(zip(rows.tolist(), cols.tolist()))

    def __len__(self):
        return int(np.count_nonzero(self.mask))

    def issubset(self, other):
        return not np.any(self.mask & ~other.mask)

    def to_grid(self, pixel_spacing=1.0):
        return ImageGrid(self.mask.astype(np.float64), pixel_spacing)


def pixel_centers(size, spacing=1.0, origin=(0.0, 0.0)):
    """World x, y of every pixel center, each shaped (size, size)."""
    center = (size - 1) / 2.0
    index = np.arange(size, dtype=np.float64)
    xs = (index - center) * spacing + origin[0]
    ys = (center - index) * spacing + origin[1]
    return np.meshgrid(xs, ys)


def threshold(img, t):
    return ImageGrid((img.pixels > t).astype(np.float64), img.pixel_spacing, img.origin)


def bin_image(img, factor):
    """Sum factor x factor blocks."""
    size = img.size
    if factor < 1 or size % factor:
        raise ValueError("bin factor mismatch")
    out = size // factor
    blocks = img.pixels.reshape(out, factor, out, factor).sum(axis=(1, 3))
    return ImageGrid(blocks, img.pixel_spacing * factor, img.origin)


def bin_rows(values, factor):
    """Sum consecutive groups of `factor` entries along the last axis."""
    values = np.asarray(values, dtype=np.float64)
    length = values.shape[-1]
    if factor < 1 or length % factor:
        raise ValueError("bin factor mismatch")
    return values.reshape(*values.shape[:-1], length // factor, factor).sum(axis=-1)


def median_filter_1x3(row):
    """1x3 median along the last axis; each end entry takes the mean of its pair."""
    row = np.asarray(row, dtype=np.float64)
    if row.shape[-1] < 1:
        raise ValueError("median filter needs at least one entry")
    if row.shape[-1] == 1:
        return row.copy()
    out = np.empty_like(row)
    if row.shape[-1] > 2:
        window = np.stack([row[..., :-2], row[..., 1:-1], row[..., 2:]], axis=-1)
        out[..., 1:-1] = np.median(window, axis=-1)
    out[..., 0] = 0.5 * (row[..., 0] + row[..., 1])
    out[..., -1] = 0.5 * (row[..., -2] + row[..., -1])
    return out


def diamond(radius=2):
    """All offsets with |dr| + |dc| <= radius, as a uint8 kernel."""
    offsets = np.abs(np.arange(-radius, radius + 1))
    return (np.add.outer(offsets, offsets) <= radius).astype(np.uint8)


def open_mask(mask, se=None):
    """Binary opening of any 2D mask; pixels outside the frame never erode."""
    se = diamond(2) if se is None else np.asarray(se, dtype=np.uint8)
    opened = cv2.morphologyEx(
        np.asarray(mask, dtype=np.uint8), cv2.MORPH_OPEN, se, iterations=1
    )
    return opened.astype(bool)


def morphological_open(img, se=None):
    if not img.is_binary():
        raise ValueError("morphological_open expects a binary image")
    opened = open_mask(img.pixels > 0, se)
    return ImageGrid(opened.astype(np.float64), img.pixel_spacing, img.origin)


def remove_isolated_pixels(mask):
    """Drop 8-connected components made of a single pixel."""
    mask = np.asarray(mask, dtype=np.uint8)
    _count, labels, stats, _ = cv2.connectedComponentsWithStats(mask, connectivity=8)
    singles = np.flatnonzero(stats[:, cv2.CC_STAT_AREA] == 1)
    singles = singles[singles != 0]
    if len(singles) == 0:
        return mask.astype(bool)
    logger.debug(f"Removing {len(singles)} isolated pixels")
    return (mask > 0) & ~np.isin(labels, singles)


def rasterize(poly, size, spacing=1.0, origin=(0.0, 0.0)):
    """Pixels whose centers lie inside or on the polygon."""
    if poly.is_empty:
        return PixelSet.empty(size)
    normals, offsets = poly.edge_halfspaces()
    center = (size - 1) / 2.0
    vertices = poly.vertices - np.asarray(origin)
    # restrict the test to the polygon's bounding box
    col_lo = max(int(np.floor(vertices[:, 0].min() / spacing + center)), 0)
    col_hi = min(int(np.ceil(vertices[:, 0].max() / spacing + center)), size - 1)
    row_lo = max(int(np.floor(center - vertices[:, 1].max() / spacing)), 0)
    row_hi = min(int(np.ceil(center - vertices[:, 1].min() / spacing)), size - 1)
    mask = np.zeros((size, size), dtype=bool)
    if col_lo > col_hi or row_lo > row_hi:
        return PixelSet(mask)

    cols = np.arange(col_lo, col_hi + 1, dtype=np.float64)
    rows = np.arange(row_lo, row_hi + 1, dtype=np.float64)
    xs, ys = np.meshgrid(
        (cols - center) * spacing + origin[0], (center - rows) * spacing + origin[1]
    )
    tolerance = EPSILON * max(1.0, spacing * size)
    inside = np.ones(xs.shape, dtype=bool)
    for normal, offset in zip(normals, offsets):
        inside &= normal[0] * xs + normal[1] * ys <= offset + tolerance
    mask[row_lo : row_hi + 1, col_lo : col_hi + 1] = inside
    return PixelSet(mask)
