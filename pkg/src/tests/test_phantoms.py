import numpy as np
import pytest

from src.constants import PHANTOM_FRAME
from src.geometry import width, width_function
from src.phantoms import PHANTOM_IDS, make_phantom


def periodic_minima(polygon, step=0.05):
    angles = np.arange(0.0, 180.0, step)
    values = width_function(polygon, angles)
    before, after = np.roll(values, 1), np.roll(values, -1)
    return angles[(values < before) & (values <= after)]


def test_all_phantoms_are_convex_and_fit_the_frame():
    for phantom_id in PHANTOM_IDS:
        phantom = make_phantom(phantom_id)
        assert phantom.id == phantom_id
        assert phantom.polygon.area > 0
        assert phantom.polygon.contains([(0.0, 0.0)]).all()
        assert phantom.polygon.diameter < PHANTOM_FRAME / 2
        assert phantom.description


def test_invalid_phantom_ids():
    for phantom_id in (0, 7, -1):
        with pytest.raises(ValueError):
            make_phantom(phantom_id)


def test_vertex_counts():
    counts = {
        phantom_id: len(make_phantom(phantom_id).polygon) for phantom_id in PHANTOM_IDS
    }
    assert counts == {1: 6, 2: 6, 3: 6, 4: 8, 5: 8, 6: 14}


def test_regular_hexagon_width_minima():
    minima = periodic_minima(make_phantom(1).polygon)
    assert minima == pytest.approx([30.0, 90.0, 150.0], abs=0.1)
    rotated = periodic_minima(make_phantom(2).polygon)
    assert rotated == pytest.approx([45.0, 105.0, 165.0], abs=0.1)


def test_octagon_has_an_edge_normal_at_zero():
    polygon = make_phantom(4).polygon
    minima = periodic_minima(polygon)
    assert minima == pytest.approx([0.0, 45.0, 90.0, 135.0], abs=0.1)
    assert width(polygon, 0.0) == pytest.approx(2 * 65.0 * np.cos(np.pi / 8))


def test_irregular_hexagon_breaks_the_sixty_degree_spacing():
    polygon = make_phantom(3).polygon
    minima = periodic_minima(polygon, step=0.01)
    clusters = [minima[0]]
    for angle in minima[1:]:
        if angle - clusters[-1] > 10.0:
            clusters.append(angle)
    assert len(clusters) == 3
    spacings = np.diff(clusters)
    assert np.any(np.abs(spacings - 60.0) > 0.5)


def test_truncated_phantoms_lose_area():
    assert make_phantom(5).polygon.area < make_phantom(1).polygon.area
    assert make_phantom(6).polygon.area < make_phantom(2).polygon.area
