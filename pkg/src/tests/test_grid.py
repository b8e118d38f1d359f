import numpy as np
import pytest

from src.geometry import convex_hull
from src.grid import (
    ImageGrid,
    PixelSet,
    bin_image,
    bin_rows,
    diamond,
    median_filter_1x3,
    morphological_open,
    open_mask,
    rasterize,
    remove_isolated_pixels,
    threshold,
)


def brute_force_open(mask, se):
    """Erosion treating pixels outside the frame as set, then dilation."""
    radius = se.shape[0] // 2
    offsets = [(dr - radius, dc - radius) for dr, dc in zip(*np.nonzero(se))]
    rows, cols = mask.shape

    def inside(r, c):
        return 0 <= r < rows and 0 <= c < cols

    eroded = np.zeros_like(mask)
    for r in range(rows):
        for c in range(cols):
            eroded[r, c] = all(
                mask[r + dr, c + dc] if inside(r + dr, c + dc) else True
                for dr, dc in offsets
            )
    opened = np.zeros_like(mask)
    for r in range(rows):
        for c in range(cols):
            opened[r, c] = any(
                eroded[r - dr, c - dc]
                for dr, dc in offsets
                if inside(r - dr, c - dc)
            )
    return opened


def test_image_grid_validation():
    with pytest.raises(ValueError):
        ImageGrid(np.zeros((4, 5)))
    with pytest.raises(ValueError):
        ImageGrid(np.zeros((4, 4)), pixel_spacing=0)
    grid = ImageGrid.zeros(8, pixel_spacing=2.0)
    assert grid.size == 8 and grid.is_binary()


def test_bin_image_conserves_mass():
    rng = np.random.default_rng(1)
    img = ImageGrid(rng.random((64, 64)), pixel_spacing=0.5)
    binned = bin_image(img, 4)
    assert binned.size == 16
    assert binned.pixel_spacing == pytest.approx(2.0)
    assert binned.pixels.sum() == pytest.approx(img.pixels.sum(), rel=1e-12)
    assert binned.pixels[0, 0] == pytest.approx(img.pixels[:4, :4].sum())


def test_bin_factor_mismatch():
    with pytest.raises(ValueError, match="bin factor mismatch"):
        bin_image(ImageGrid.zeros(10), 4)
    with pytest.raises(ValueError, match="bin factor mismatch"):
        bin_rows(np.ones((3, 10)), 4)


def test_bin_rows_sums_groups():
    values = np.arange(16.0).reshape(2, 8)
    assert bin_rows(values, 4).tolist() == [[6.0, 22.0], [38.0, 54.0]]


def test_median_filter_ends_take_pair_mean():
    assert median_filter_1x3([0, 5, 0, 0]).tolist() == [2.5, 0.0, 0.0, 0.0]
    assert median_filter_1x3([1, 9, 3, 7, 5]).tolist() == [5.0, 3.0, 7.0, 5.0, 6.0]
    rows = median_filter_1x3(np.array([[0, 5, 0, 0], [4, 4, 4, 4]]))
    assert rows[1].tolist() == [4.0, 4.0, 4.0, 4.0]


def test_diamond_structuring_element():
    se = diamond(2)
    assert se.shape == (5, 5)
    assert se.sum() == 13
    assert se[0, 2] == 1 and se[0, 1] == 0


def test_opening_matches_brute_force():
    rng = np.random.default_rng(3)
    se = diamond(2)
    square = np.zeros((30, 30), dtype=bool)
    square[5:25, 5:25] = True
    for mask in [square, rng.random((24, 24)) > 0.3]:
        assert np.array_equal(open_mask(mask, se), brute_force_open(mask, se))


def test_opening_removes_isolated_pixel_and_keeps_blocks():
    pixels = np.zeros((20, 20))
    pixels[2, 2] = 1
    pixels[8:16, 8:16] = 1
    opened = morphological_open(ImageGrid(pixels))
    assert opened.pixels[2, 2] == 0
    assert opened.pixels[11, 11] == 1
    with pytest.raises(ValueError):
        morphological_open(ImageGrid(pixels * 0.5))


def test_threshold_is_strict():
    img = ImageGrid(np.array([[0.2, 0.5], [0.7, 1.0]]))
    assert threshold(img, 0.5).pixels.tolist() == [[0.0, 0.0], [1.0, 1.0]]


def test_remove_isolated_pixels_keeps_diagonal_neighbours():
    mask = np.zeros((10, 10), dtype=bool)
    mask[1, 1] = True
    mask[5, 5] = mask[6, 6] = True
    cleaned = remove_isolated_pixels(mask)
    assert not cleaned[1, 1]
    assert cleaned[5, 5] and cleaned[6, 6]


def test_pixel_set_members():
    pixel_set = PixelSet.from_members([(0, 1), (2, 3)], 4)
    assert pixel_set.members == {(0, 1), (2, 3)}
    assert len(pixel_set) == 2
    assert PixelSet.empty(4).issubset(pixel_set)
    with pytest.raises(ValueError):
        PixelSet.from_members([(4, 0)], 4)


def test_rasterize_square_counts_pixel_centers():
    polygon = convex_hull([(-2, -2), (2, -2), (2, 2), (-2, 2)])
    raster = rasterize(polygon, 8, spacing=1.0)
    assert len(raster) == 16
    assert raster.mask[2:6, 2:6].all()
    shifted = rasterize(polygon, 8, spacing=1.0, origin=(-1.0, 0.0))
    assert len(shifted) == 16
    assert shifted.mask[2:6, 3:7].all()


def test_rasterize_empty_polygon():
    assert len(rasterize(convex_hull([]), 8)) == 0
