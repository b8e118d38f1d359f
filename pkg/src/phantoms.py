"""

 geotomo

 Phantoms 1-6 as exact convex polygons in the 512-pixel world frame.

"""
from dataclasses import dataclass

from src.geometry import ConvexPolygon, convex_hull, regular_polygon, truncate_corners

PHANTOM_IDS = range(1, 7)

IRREGULAR_HEXAGON_FACTORS = [1.00, 0.93, 1.05, 0.97, 1.04, 0.95]


@dataclass(frozen=True)
class PhantomSpec:
    id: int
    polygon: ConvexPolygon
    description: str


def _hexagon_flat_top():
    # vertices at 0, 60, ... degrees: edge normals at 30, 90, 150
    return regular_polygon(6, 60.0, start_deg=0.0)


def _hexagon_rotated():
    return regular_polygon(6, 70.0, start_deg=15.0)


def _irregular_hexagon():
    base = _hexagon_flat_top().vertices
    # regular_polygon lists vertices from angle 0 counterclockwise
    scaled = [
        vertex * factor for vertex, factor in zip(base, IRREGULAR_HEXAGON_FACTORS)
    ]
    return convex_hull(scaled)


def _octagon():
    # vertices at 22.5 + 45k: one edge normal at 0 degrees
    return regular_polygon(8, 65.0, start_deg=22.5)


def _truncated_hexagon():
    hexagon = regular_polygon(6, 60.0, start_deg=0.0)
    return truncate_corners(hexagon, [0, 3], 0.2)


def _faceted_hexagon():
    hexagon = regular_polygon(6, 70.0, start_deg=15.0)
    dodecagon = truncate_corners(hexagon, list(range(6)), 0.15)
    # two shallow extra facets on opposite sides
    return truncate_corners(dodecagon, [0, 6], 0.3)


PHANTOM_BUILDERS = {
    1: (_hexagon_flat_top, "regular hexagon, circumradius 60, flat top"),
    2: (_hexagon_rotated, "regular hexagon rotated by 15 degrees, circumradius 70"),
    3: (_irregular_hexagon, "slightly irregular hexagon, radial factors per vertex"),
    4: (_octagon, "regular octagon, circumradius 65, edge normal at 0 degrees"),
    5: (_truncated_hexagon, "phantom 1 with two corners truncated at 20% of the edge"),
    6: (_faceted_hexagon, "14-gon, phantom 2 with all corners cut and two more facets"),
}


def make_phantom(phantom_id):
    if phantom_id not in PHANTOM_BUILDERS:
        raise ValueError(
            f"Invalid phantom id {phantom_id}, expected one of {list(PHANTOM_IDS)}"
        )
    builder, description = PHANTOM_BUILDERS[phantom_id]
    return PhantomSpec(phantom_id, builder(), description)
