"""

 geotomo

 Object-based reconstructors of convex bodies: GKXR (point pairs fitted to four
 projections), U-FBP (strip intersection), MPW (consistent support values) and
 2n-GON (width minima of a nearly regular 2n-gon).

"""
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from src.constants import GKXR_DIRECTIONS, NGON_EXIT
from src.geometry import (
    ConvexPolygon,
    Halfspace,
    chord_intervals,
    chord_lengths,
    convex_hull,
    detector_axis,
    halfspace_intersection,
    ray_direction,
)
from src.logger import logger
from src.projector import support_measurements, support_pairs, widths
from src.solvers import (
    AnnealConfig,
    ConstrainedLsqProblem,
    anneal_minimize,
    constrained_lsq,
    poly_local_minima,
    polyfit_ls,
)


@dataclass(frozen=True)
class NoReconstruction:
    reason: str


def _frame_bound(detector_count, spacing):
    return detector_count * spacing


def strips_polygon(pairs, bound):
    """Intersection of the strips -h_minus <= v(theta) . x <= h_plus."""
    halfspaces = []
    for angle, h_plus, h_minus in pairs:
        v = detector_axis(angle)
        halfspaces.append(Halfspace(tuple(v), h_plus))
        halfspaces.append(Halfspace(tuple(-v), h_minus))
    return halfspace_intersection(halfspaces, bound)


def ufbp(shadows):
    pairs = support_pairs(shadows)
    if len(pairs) < 2:
        raise ValueError("insufficient shadows")
    bound = _frame_bound(shadows.detector_count, shadows.detector_spacing)
    return strips_polygon(pairs, bound)


def mpw(shadows):
    measurements = support_measurements(shadows)
    if len(measurements) < 4:
        raise ValueError("insufficient shadows")
    angles = measurements.angles
    order = np.argsort(angles)
    problem = ConstrainedLsqProblem(measurements.values[order], angles[order])
    consistent = constrained_lsq(problem)
    adjusted = np.abs(consistent - problem.targets).max()
    logger.debug(f"MPW adjusted support values by at most {adjusted:.4g}")
    halfspaces = [
        Halfspace(tuple(direction), value)
        for direction, value in zip(measurements.directions[order], consistent)
    ]
    bound = _frame_bound(shadows.detector_count, shadows.detector_spacing)
    return halfspace_intersection(halfspaces, bound)


@dataclass
class GkxrConfig:
    directions: tuple = tuple(GKXR_DIRECTIONS)
    lines_per_direction: int = 40
    window_fraction: float = 0.45
    # detector spacings
    pair_merge_threshold: float = 1.0
    iir_rounds: int = 50
    iir_alternate: bool = True
    # detector spacings, std of the seeded start around the measured chords
    init_jitter: float = 0.5
    # annealing moves per temperature, in multiples of the 8k coordinates
    sweeps_per_temperature: float = 2.0
    anneal: AnnealConfig = field(default_factory=lambda: AnnealConfig(step_scale=2.0))

    def __post_init__(self):
        if len(self.directions) != 4:
            raise ValueError("GKXR uses exactly 4 directions")
        if self.lines_per_direction < 2:
            raise ValueError("GKXR needs at least 2 lines per direction")
        if self.pair_merge_threshold <= 0:
            raise ValueError("pair_merge_threshold must be positive")
        if self.init_jitter < 0:
            raise ValueError("init_jitter must be non-negative")
        if self.sweeps_per_temperature <= 0:
            raise ValueError("sweeps_per_temperature must be positive")

    def anneal_steps(self):
        coordinates = 8 * self.lines_per_direction
        sweeps = int(np.ceil(self.sweeps_per_temperature * coordinates))
        return max(self.anneal.steps_per_temperature, sweeps)


@dataclass
class GkxrResult:
    polygon: ConvexPolygon
    no_object: bool
    initial_objective: float = 0.0
    final_objective: float = 0.0


def iir_smooth(row, rounds, alternate=True):
    """Repeat y'_i = (y_i + y'_{i-1}) / 2 (from 0) over the non-zero entries;
    alternate passes run backwards so the delays cancel."""
    row = np.array(row, dtype=np.float64)
    support = np.flatnonzero(row > 0)
    if rounds <= 0 or len(support) == 0:
        return row
    values = row[support]
    for round_index in range(rounds):
        backwards = alternate and round_index % 2 == 1
        sequence = values[::-1] if backwards else values
        smoothed = lfilter([0.5], [1.0, -0.5], sequence)
        values = smoothed[::-1] if backwards else smoothed
    row[support] = values
    return row


class GkxrProblem:
    """Measurement lines, measured chord lengths and the least-squares objective."""

    def __init__(self, sino, cfg: GkxrConfig, smooth=True):
        self.cfg = cfg
        size, spacing = sino.detector_count, sino.detector_spacing
        center = (size - 1) / 2.0
        radius = cfg.window_fraction * size * spacing
        k = cfg.lines_per_direction
        offsets = -radius + (np.arange(k) + 0.5) * 2.0 * radius / k
        half_chords = np.sqrt(np.clip(radius**2 - offsets**2, 0.0, None))

        points, directions, measured, limits = [], [], [], []
        for angle in cfg.directions:
            row = sino.values[sino.schedule.index_of(angle)]
            if smooth:
                row = iir_smooth(row, cfg.iir_rounds, cfg.iir_alternate)
            bins = offsets / spacing + center
            interpolated = np.interp(bins, np.arange(size), row, left=0.0, right=0.0)
            measured.append(interpolated * spacing)
            v, u = detector_axis(angle), ray_direction(angle)
            points.append(offsets[:, None] * v[None, :])
            directions.append(np.repeat(u[None, :], k, axis=0))
            limits.append(half_chords)

        self.line_points = np.concatenate(points)
        self.line_directions = np.concatenate(directions)
        self.measured = np.concatenate(measured)
        self.limits = np.concatenate(limits)
        self.offsets = offsets
        self.line_gap = 2.0 * radius / k
        self.radius = radius
        self.merge_distance = cfg.pair_merge_threshold * spacing
        self.spacing = spacing

    @property
    def line_count(self):
        return len(self.measured)

    def bounds(self):
        limits = np.repeat(self.limits, 2)
        return -limits, limits

    def active_points(self, z):
        pairs = np.asarray(z).reshape(self.line_count, 2)
        active = np.abs(pairs[:, 0] - pairs[:, 1]) >= self.merge_distance
        base = self.line_points[active][:, None, :]
        direction = self.line_directions[active][:, None, :]
        return (base + pairs[active][:, :, None] * direction).reshape(-1, 2)

    def polygon(self, z):
        return convex_hull(self.active_points(z))

    def hit_lines(self):
        return self.measured >= self.merge_distance

    def strip_region(self):
        """Intersection of the four strips spanned by the lines that see the object,
        each widened by half a line gap."""
        k = self.cfg.lines_per_direction
        hit = self.hit_lines().reshape(4, k)
        halfspaces = []
        for angle, seen in zip(self.cfg.directions, hit):
            if not seen.any():
                continue
            hi = self.offsets[seen].max() + self.line_gap / 2.0
            lo = self.offsets[seen].min() - self.line_gap / 2.0
            halfspaces.append(Halfspace.from_angle(angle, hi))
            halfspaces.append(Halfspace.from_angle(angle + 180.0, -lo))
        return halfspace_intersection(halfspaces, self.radius)

    def initial_pairs(self, rng):
        """Each hit line gets a pair spanning its measured chord, centred on the
        line's chord through the strip region, then jittered. Other lines start
        merged at the region's centre."""
        region = self.strip_region()
        lower, upper = chord_intervals(region, self.line_points, self.line_directions)
        center = np.zeros(2) if region.is_empty else region.centroid
        middles = np.einsum("ij,j->i", self.line_directions, center)
        crossing = upper > lower
        middles[crossing] = (lower[crossing] + upper[crossing]) / 2.0

        hit = self.hit_lines()
        half = np.where(hit, self.measured / 2.0, 0.0)
        pairs = np.stack([middles - half, middles + half], axis=1)
        jitter = rng.normal(0.0, self.cfg.init_jitter * self.spacing, pairs.shape)
        pairs[hit] += jitter[hit]
        lower_bound, upper_bound = self.bounds()
        return np.clip(pairs.reshape(-1), lower_bound, upper_bound)

    def objective(self, z):
        chords = chord_lengths(self.polygon(z), self.line_points, self.line_directions)
        return float(np.sum((self.measured - chords) ** 2))


def gkxr(sino, cfg: GkxrConfig, seed=0, smooth=True):
    restricted = sino.restricted(cfg.directions)
    if not np.any(restricted.values > 0):
        logger.warning("GKXR: no signal on any measurement line, no object")
        return GkxrResult(ConvexPolygon.empty(), True)
    problem = GkxrProblem(restricted, cfg, smooth=smooth)
    lower, upper = problem.bounds()
    rng = np.random.default_rng(seed)
    z0 = problem.initial_pairs(rng)
    anneal_cfg = replace(
        cfg.anneal,
        seed=int(rng.integers(2**63)),
        lower=lower,
        upper=upper,
        step_scale=cfg.anneal.step_scale * problem.spacing,
        steps_per_temperature=cfg.anneal_steps(),
    )
    initial = problem.objective(z0)
    z = anneal_minimize(problem.objective, z0, anneal_cfg)
    final = problem.objective(z)
    polygon = problem.polygon(z)
    logger.debug(
        f"GKXR objective {initial:.4g} -> {final:.4g}, {len(polygon)} vertices"
    )
    return GkxrResult(polygon, polygon.is_empty, initial, final)


@dataclass
class NgonConfig:
    n: int = 3
    # None means 2n + 5
    poly_degree: Optional[int] = None
    # None means the angular coverage of the tilt schedule
    omega: Optional[float] = None
    spacing_tolerance: float = 10.0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("2n-GON needs n >= 3")
        if self.degree < 2 * self.n:
            raise ValueError(f"poly_degree must be at least 2n = {2 * self.n}")

    @property
    def degree(self):
        return 2 * self.n + 5 if self.poly_degree is None else self.poly_degree

    def omega_for(self, schedule):
        return schedule.coverage() if self.omega is None else self.omega


class SupportTable:
    """Measured (h_plus, h_minus) per angle, linearly interpolated in angle."""

    def __init__(self, shadows):
        pairs = np.array(support_pairs(shadows)).reshape(-1, 3)
        self.angles, self.h_plus, self.h_minus = pairs[:, 0], pairs[:, 1], pairs[:, 2]
        self.bound = _frame_bound(shadows.detector_count, shadows.detector_spacing)
        self.wraps = False
        if len(self.angles) > 1:
            gap = np.diff(self.angles).max()
            # the schedule closes the circle when the gap over 180 is no larger
            self.wraps = self.angles[0] + 180.0 - self.angles[-1] <= gap + 1e-9
            if self.wraps:
                self.angles = np.append(self.angles, self.angles[0] + 180.0)
                self.h_plus, self.h_minus = (
                    np.append(self.h_plus, self.h_minus[0]),
                    np.append(self.h_minus, self.h_plus[0]),
                )

    def covers(self, angle):
        if len(self.angles) == 0:
            return False
        if self.wraps and angle < self.angles[0]:
            angle += 180.0
        return self.angles[0] - 1e-9 <= angle <= self.angles[-1] + 1e-9

    def pair(self, angle):
        if self.wraps and angle < self.angles[0]:
            angle += 180.0
        return (
            float(angle),
            float(np.interp(angle, self.angles, self.h_plus)),
            float(np.interp(angle, self.angles, self.h_minus)),
        )


def width_minima(shadows, cfg: NgonConfig):
    """Local minima in [0, omega) of the polynomial fitted to the widths."""
    samples = widths(shadows)
    if not samples:
        return []
    if len(samples) < cfg.degree + 1:
        raise ValueError(
            f"2n-GON needs widths at {cfg.degree + 1} angles, got {len(samples)}"
        )
    fit = polyfit_ls(samples, cfg.degree)
    hi = min(cfg.omega_for(shadows.schedule), 180.0)
    return [t for t in poly_local_minima(fit, 0.0, hi) if t < hi]


def _choose_chain(chain_indices, minima, n):
    target = 180.0 / n

    def cost(indices):
        return sum(abs(minima[i + 1] - minima[i] - target) for i in indices)

    if len(chain_indices) == n - 1:
        return list(chain_indices)
    members = set(chain_indices)
    windows = [
        list(range(start, start + n - 1))
        for start in chain_indices
        if all(start + j in members for j in range(n - 1))
    ]
    if windows:
        return min(windows, key=cost)
    return sorted(sorted(chain_indices, key=lambda i: cost([i]))[: n - 1])


def _anchor(pair_indices, minima, table):
    for i in sorted(pair_indices, reverse=True):
        if table.covers(minima[i]) and table.covers(minima[i + 1]):
            return minima[i], minima[i + 1]
    return None


def _strip_pairs(angles, anchor, table):
    """Measured strips where the tilt range covers the angle, otherwise a strip
    with the anchor's second width centred on the anchor parallelogram."""
    pairs, parallelogram, anchor_width = [], None, None
    for angle in sorted(set(angles)):
        if table.covers(angle):
            pairs.append(table.pair(angle))
            continue
        if parallelogram is None:
            first, second = table.pair(anchor[0]), table.pair(anchor[1])
            parallelogram = strips_polygon([first, second], table.bound)
            if parallelogram.is_empty:
                return None
            anchor_width = second[1] + second[2]
        center = float(detector_axis(angle) @ parallelogram.centroid)
        pairs.append((angle, center + anchor_width / 2.0, -center + anchor_width / 2.0))
    return pairs


def ngon_2n(shadows, cfg: NgonConfig, minima=None):
    if minima is None:
        minima = width_minima(shadows, cfg)
    m = len(minima)
    if m < 2:
        return NoReconstruction(NGON_EXIT.TOO_FEW_MINIMA)
    table = SupportTable(shadows)
    n = cfg.n

    if cfg.omega_for(shadows.schedule) >= 180.0:
        angles = minima
        anchor = _anchor(range(m - 1), minima, table)
    else:
        target = 180.0 / n
        chain = [
            i
            for i in range(m - 1)
            if target - cfg.spacing_tolerance
            <= abs(minima[i + 1] - minima[i])
            <= target + cfg.spacing_tolerance
        ]
        if not chain:
            return NoReconstruction(NGON_EXIT.NO_CHAIN)
        if len(chain) >= n - 1:
            chosen = _choose_chain(chain, minima, n)
            angles = sorted({minima[j] for i in chosen for j in (i, i + 1)})
            anchor = _anchor(chosen, minima, table)
        else:
            a = max(chain)
            b = a + 1
            extra = []
            # the chain a, b plus these completes n directions
            for i in range(1, n - len(chain)):
                angle = minima[b] + 180.0 * i / n
                if angle >= 180.0:
                    return NoReconstruction(NGON_EXIT.OUT_OF_RANGE)
                extra.append(angle)
            angles = list(minima) + extra
            anchor = _anchor([a], minima, table)

    if anchor is None:
        if not all(table.covers(angle) for angle in angles):
            return NoReconstruction(NGON_EXIT.OUT_OF_RANGE)
    pairs = _strip_pairs(angles, anchor, table)
    if pairs is None or len(pairs) < 2:
        return NoReconstruction(NGON_EXIT.OUT_OF_RANGE)
    return strips_polygon(pairs, table.bound)
