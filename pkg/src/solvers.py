"""

 geotomo

 Numeric subroutines of the object-based reconstructors: simulated annealing
 with a pattern-search polish, projection onto the support-function
 consistency cone, and Chebyshev least-squares polynomial fitting.

"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import chebyshev
from scipy.linalg import solve_triangular
from scipy.optimize import nnls

from src.constants import DEG
from src.logger import logger


@dataclass
class AnnealConfig:
    # None means objective(x0), or 1 when that is zero
    initial_temperature: Optional[float] = None
    cooling_factor: float = 0.95
    steps_per_temperature: int = 50
    # None means min_temperature_ratio * initial temperature
    min_temperature: Optional[float] = None
    min_temperature_ratio: float = 1e-3
    step_scale: float = 1.0
    seed: int = 0
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    polish_tolerance: float = 1e-6
    polish_max_evaluations: int = 20000

    def __post_init__(self):
        if not 0 < self.cooling_factor < 1:
            raise ValueError(
                f"cooling_factor must be in (0, 1), got {self.cooling_factor}"
            )
        if self.steps_per_temperature < 1:
            raise ValueError("steps_per_temperature must be positive")
        if self.step_scale <= 0:
            raise ValueError("step_scale must be positive")
        if self.initial_temperature is not None and self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be positive")
        if (
            self.initial_temperature is not None
            and self.min_temperature is not None
            and not 0 < self.min_temperature < self.initial_temperature
        ):
            raise ValueError("min_temperature must lie in (0, initial_temperature)")

    def temperatures(self, f0):
        t0 = self.initial_temperature or (f0 if f0 > 0 else 1.0)
        t_min = self.min_temperature or self.min_temperature_ratio * t0
        return t0, t_min


class _CountingObjective:
    def __init__(self, objective: Callable, lower, upper):
        self.objective = objective
        self.lower, self.upper = lower, upper
        self.evaluations = 0

    def clip(self, x):
        if self.lower is None and self.upper is None:
            return x
        return np.clip(x, self.lower, self.upper)

    def __call__(self, x):
        self.evaluations += 1
        return float(self.objective(x))


def anneal_minimize(objective, x0, cfg: AnnealConfig):
    """Metropolis annealing with single-coordinate Gaussian moves and geometric
    cooling, then a pattern-search polish. Returns the best point seen."""
    x = np.array(x0, dtype=np.float64).reshape(-1)
    if x.size == 0:
        return x
    f = _CountingObjective(objective, cfg.lower, cfg.upper)
    fx = f(x)
    if not np.isfinite(fx):
        raise ValueError("objective must be finite at the starting point")
    rng = np.random.default_rng(cfg.seed)
    t0, t_min = cfg.temperatures(fx)

    best_x, best_f = x.copy(), fx
    temperature = t0
    while temperature > t_min:
        step = cfg.step_scale * temperature / t0
        for _ in range(cfg.steps_per_temperature):
            k = rng.integers(x.size)
            candidate = x.copy()
            candidate[k] += rng.normal(0.0, step)
            candidate = f.clip(candidate)
            fc = f(candidate)
            if fc <= fx or rng.random() < np.exp(-(fc - fx) / temperature):
                x, fx = candidate, fc
                if fx < best_f:
                    best_x, best_f = x.copy(), fx
        temperature *= cfg.cooling_factor
    logger.debug(f"Annealing: {f.evaluations} evaluations, best {best_f:.6g}")

    best_x, best_f = pattern_search(f, best_x, best_f, cfg)
    return best_x


def _explore(f, x, fx, step):
    for k in range(x.size):
        for delta in (step, -step):
            candidate = x.copy()
            candidate[k] += delta
            candidate = f.clip(candidate)
            fc = f(candidate)
            if fc < fx:
                x, fx = candidate, fc
                break
    return x, fx


def pattern_search(f, x, fx, cfg: AnnealConfig):
    """Hooke-Jeeves: coordinate exploration plus pattern moves, halving the step
    until it falls below polish_tolerance * step_scale or the budget runs out."""
    step = cfg.step_scale
    min_step = cfg.polish_tolerance * cfg.step_scale
    budget = f.evaluations + cfg.polish_max_evaluations
    while step > min_step and f.evaluations < budget:
        new_x, new_f = _explore(f, x, fx, step)
        if new_f >= fx:
            step *= 0.5
            continue
        while f.evaluations < budget:
            pattern = f.clip(new_x + (new_x - x))
            x, fx = new_x, new_f
            trial_x, trial_f = _explore(f, pattern, f(pattern), step)
            if trial_f >= fx:
                break
            new_x, new_f = trial_x, trial_f
    return x, fx


@dataclass
class ConstrainedLsqProblem:
    """Targets h at direction angles (degrees); the consistent y is wanted."""

    targets: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        self.targets = np.asarray(self.targets, dtype=np.float64).reshape(-1)
        angles = np.asarray(self.angles, dtype=np.float64).reshape(-1)
        self.angles = np.mod(angles, 360.0)
        if len(self.targets) != len(self.angles):
            raise ValueError("targets and angles must have equal length")
        if np.any(np.diff(self.angles) <= 0):
            raise ValueError("angles must be strictly sorted modulo 360")

    def constraint_matrix(self):
        """Rows G with G y <= 0, one per cyclically consecutive triple (a, b, c):
        y_b sin(c - a) <= y_a sin(c - b) + y_c sin(b - a)."""
        count = len(self.angles)
        if count < 3:
            raise ValueError("constrained_lsq needs at least 3 directions")
        gaps = np.mod(np.roll(self.angles, -1) - self.angles, 360.0)
        if np.any(gaps >= 180.0):
            raise ValueError("directions must span more than a half-plane")
        rows = []
        for b in range(count):
            a, c = (b - 1) % count, (b + 1) % count
            ab = np.mod(self.angles[b] - self.angles[a], 360.0) * DEG
            bc = np.mod(self.angles[c] - self.angles[b], 360.0) * DEG
            if ab + bc >= np.pi:
                # b is not inside the cone of a and c, no constraint
                continue
            row = np.zeros(count)
            row[b] += np.sin(ab + bc)
            row[a] -= np.sin(bc)
            row[c] -= np.sin(ab)
            rows.append(row)
        return np.array(rows).reshape(-1, count)


def constrained_lsq(problem: ConstrainedLsqProblem):
    """Euclidean projection of h onto {y : G y <= 0}. The polar cone is spanned
    by the rows of G, so y = h - G^T lam with lam the non-negative least-squares
    fit of G^T lam to h (Lawson-Hanson active set)."""
    g = problem.constraint_matrix()
    h = problem.targets
    if len(g) == 0:
        return h.copy()
    try:
        lam, _residual = nnls(g.T, h, maxiter=50 * max(g.shape))
    except RuntimeError as error:
        raise RuntimeError(
            f"constrained least squares did not converge: {error}"
        ) from None
    y = h - g.T @ lam
    violation = float(np.max(g @ y, initial=0.0))
    if violation > 1e-9 * max(1.0, np.abs(h).max()):
        raise RuntimeError(
            f"constrained least squares left a violation of {violation:g}"
        )
    return y


@dataclass
class PolyFit:
    """Least-squares polynomial in the Chebyshev basis, [lo, hi] mapped to [-1, 1]."""

    coefficients: np.ndarray
    lo: float
    hi: float
    residual: float = 0.0

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def scaled(self, theta):
        span = self.hi - self.lo if self.hi > self.lo else 1.0
        return 2.0 * (np.asarray(theta, dtype=np.float64) - self.lo) / span - 1.0

    def __call__(self, theta):
        return chebyshev.chebval(self.scaled(theta), self.coefficients)


def polyfit_ls(samples, degree):
    samples = np.asarray(samples, dtype=np.float64).reshape(-1, 2)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if len(samples) < degree + 1:
        raise ValueError(
            f"polyfit needs at least {degree + 1} samples for degree {degree}, "
            f"got {len(samples)}"
        )
    angles, values = samples[:, 0], samples[:, 1]
    fit = PolyFit(np.zeros(degree + 1), float(angles.min()), float(angles.max()))
    vander = chebyshev.chebvander(fit.scaled(angles), degree)
    q, r = np.linalg.qr(vander)
    diagonal = np.abs(np.diag(r))
    if diagonal.min() <= 1e-10 * max(diagonal.max(), 1e-300):
        raise ValueError("polyfit design matrix is rank deficient")
    fit.coefficients = solve_triangular(r, q.T @ values)
    fit.residual = float(np.linalg.norm(vander @ fit.coefficients - values))
    return fit


def _ternary_minimum(fit, lo, hi, tolerance=0.01):
    while hi - lo > tolerance:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if fit(m1) < fit(m2):
            hi = m2
        else:
            lo = m1
    return 0.5 * (lo + hi)


def poly_local_minima(fit, lo, hi, resolution=0.1):
    """Strict interior local minima of fit on [lo, hi]: dense scan then ternary
    refinement to 0.01 degrees."""
    count = int(round((hi - lo) / resolution)) + 1
    if count < 3:
        return []
    grid = np.linspace(lo, hi, count)
    values = fit(grid)
    interior = np.flatnonzero(
        (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])
    ) + 1
    return [
        round(_ternary_minimum(fit, grid[i - 1], grid[i + 1]), 2) for i in interior
    ]
