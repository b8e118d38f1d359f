"""

 geotomo

 Exact 2D convex geometry: hulls, halfspace clipping, chords, support and width.

 World coordinates have the image center at the origin, x to the right and y up.
 For a tilt angle theta the detector axis is v = (cos theta, sin theta) and the
 rays run along u = (-sin theta, cos theta), so theta = 0 projects along the
 vertical direction.

"""
from dataclasses import dataclass

import numpy as np

from src.constants import DEG, EPSILON


def detector_axis(theta_deg):
    theta = float(theta_deg) * DEG
    return np.array([np.cos(theta), np.sin(theta)])


def ray_direction(theta_deg):
    theta = float(theta_deg) * DEG
    return np.array([-np.sin(theta), np.cos(theta)])


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class ConvexPolygon:
    """Counterclockwise, strictly convex vertex list. Fewer than 3 vertices is empty."""

    def __init__(self, vertices=None):
        vertices = np.zeros((0, 2)) if vertices is None else vertices
        self.vertices = np.asarray(vertices, dtype=np.float64).reshape(-1, 2)

    @classmethod
    def empty(cls):
        return cls()

    @property
    def is_empty(self):
        return len(self.vertices) < 3

    def __len__(self):
        return 0 if self.is_empty else len(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({len(self)} vertices, area={self.area:.2f})"

    @property
    def area(self):
        if self.is_empty:
            return 0.0
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @property
    def centroid(self):
        if self.is_empty:
            raise ValueError("centroid of an empty polygon")
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        cross = x * yn - xn * y
        area = 0.5 * cross.sum()
        moments = np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()])
        return moments / (6 * area)

    @property
    def diameter(self):
        if self.is_empty:
            return 0.0
        diffs = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=2)).max())

    def edge_halfspaces(self):
        """Outward unit normals and offsets (normal . x <= offset) per edge."""
        edges = np.roll(self.vertices, -1, axis=0) - self.vertices
        normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        offsets = (normals * self.vertices).sum(axis=1)
        return normals, offsets

    def contains(self, points, tolerance=EPSILON):
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        if self.is_empty:
            return np.zeros(len(points), dtype=bool)
        normals, offsets = self.edge_halfspaces()
        return np.all(points @ normals.T <= offsets + tolerance, axis=1)

    def transformed(self, scale=1.0, rotation_deg=0.0, shift=(0.0, 0.0)):
        c, s = np.cos(rotation_deg * DEG), np.sin(rotation_deg * DEG)
        rotation = np.array([[c, -s], [s, c]])
        moved = (self.vertices * scale) @ rotation.T + np.asarray(shift)
        return convex_hull(moved)


@dataclass(frozen=True)
class Halfspace:
    """The set {x : normal . x <= offset}."""

    normal: tuple
    offset: float

    def __post_init__(self):
        normal = np.asarray(self.normal, dtype=np.float64)
        norm = np.linalg.norm(normal)
        if norm == 0:
            raise ValueError("Halfspace normal must be non-zero")
        object.__setattr__(self, "normal", tuple(normal / norm))
        object.__setattr__(self, "offset", float(self.offset) / norm)

    @classmethod
    def from_angle(cls, angle_deg, offset):
        return cls(tuple(detector_axis(angle_deg)), offset)


def convex_hull(points):
    """Andrew's monotone chain, collinear points dropped. Degenerate hulls are empty."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(points) < 3:
        return ConvexPolygon.empty()
    points = np.unique(points, axis=0)
    if len(points) < 3:
        return ConvexPolygon.empty()
    pts = [tuple(p) for p in points]

    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= EPSILON:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= EPSILON:
            upper.pop()
        upper.append(p)

    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return ConvexPolygon.empty()
    polygon = ConvexPolygon(hull)
    if polygon.area <= EPSILON:
        return ConvexPolygon.empty()
    return polygon


def _clip(vertices, normal, offset):
    clipped = []
    count = len(vertices)
    for i in range(count):
        p, q = vertices[i], vertices[(i + 1) % count]
        dp = normal[0] * p[0] + normal[1] * p[1] - offset
        dq = normal[0] * q[0] + normal[1] * q[1] - offset
        p_inside, q_inside = dp <= EPSILON, dq <= EPSILON
        if p_inside:
            clipped.append(p)
        if p_inside != q_inside:
            t = dp / (dp - dq)
            clipped.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return clipped


def halfspace_intersection(halfspaces, bound):
    """Sutherland-Hodgman clipping of the centered square of half-width bound."""
    if bound <= 0:
        raise ValueError(f"bound must be positive, got {bound}")
    vertices = [(-bound, -bound), (bound, -bound), (bound, bound), (-bound, bound)]
    for halfspace in halfspaces:
        vertices = _clip(vertices, halfspace.normal, halfspace.offset)
        if len(vertices) < 3:
            return ConvexPolygon.empty()
    return convex_hull(vertices)


def chord_intervals(polygon, points, direction):
    """Parameter ranges (lower, upper) of polygon on the lines points + t * u, u the
    normalized direction. Lines missing the polygon get lower > upper."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if polygon.is_empty or len(points) == 0:
        return np.full(len(points), np.inf), np.full(len(points), -np.inf)
    direction = np.asarray(direction, dtype=np.float64)
    direction = direction / np.linalg.norm(direction, axis=-1, keepdims=True)
    direction = np.broadcast_to(direction, points.shape)

    normals, offsets = polygon.edge_halfspaces()
    # t * (n . d) <= offset - n . p for every edge
    rhs = offsets[None, :] - points @ normals.T
    slope = direction @ normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = rhs / slope
    upper = np.where(slope > EPSILON, ratio, np.inf).min(axis=1)
    lower = np.where(slope < -EPSILON, ratio, -np.inf).max(axis=1)
    parallel_outside = np.any((np.abs(slope) <= EPSILON) & (rhs < -EPSILON), axis=1)
    lower[parallel_outside], upper[parallel_outside] = np.inf, -np.inf
    return lower, upper


def chord_lengths(polygon, points, direction):
    """Lengths of polygon intersected with the lines points + t * direction."""
    lower, upper = chord_intervals(polygon, points, direction)
    return np.clip(upper - lower, 0.0, None)


def chord_length(polygon, point, direction):
    return float(chord_lengths(polygon, [point], direction)[0])


def support(polygon, u):
    if polygon.is_empty:
        raise ValueError("support of an empty polygon is undefined")
    return float(np.max(polygon.vertices @ np.asarray(u, dtype=np.float64)))


def width(polygon, theta_deg):
    if polygon.is_empty:
        raise ValueError("width of an empty polygon is undefined")
    v = detector_axis(theta_deg)
    return support(polygon, v) + support(polygon, -v)


def width_function(polygon, angles_deg):
    """Vectorised width over many angles."""
    if polygon.is_empty:
        raise ValueError("width of an empty polygon is undefined")
    angles = np.asarray(angles_deg, dtype=np.float64) * DEG
    axes = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    projections = polygon.vertices @ axes.T
    return projections.max(axis=0) - projections.min(axis=0)


def regular_polygon(n_vertices, circumradius, start_deg=0.0, center=(0.0, 0.0)):
    angles = (start_deg + 360.0 * np.arange(n_vertices) / n_vertices) * DEG
    vertices = circumradius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return ConvexPolygon(vertices + np.asarray(center))


def truncate_corners(polygon, corner_indices, fraction):
    """Cut each listed corner with a chord through the points at `fraction`
    of its two adjacent edges."""
    vertices = polygon.vertices
    count = len(vertices)
    result = []
    for i, vertex in enumerate(vertices):
        if i not in corner_indices:
            result.append(vertex)
            continue
        previous, following = vertices[i - 1], vertices[(i + 1) % count]
        result.append(vertex + fraction * (previous - vertex))
        result.append(vertex + fraction * (following - vertex))
    return convex_hull(result)
