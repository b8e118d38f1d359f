import itertools

import numpy as np
import pytest

from src.solvers import (
    AnnealConfig,
    ConstrainedLsqProblem,
    anneal_minimize,
    constrained_lsq,
    poly_local_minima,
    polyfit_ls,
)


def samples_of(function, angles):
    angles = np.asarray(angles, dtype=np.float64)
    return np.column_stack([angles, function(angles)])


def square_support(angles_deg):
    phi = np.radians(angles_deg)
    return np.abs(np.cos(phi)) + np.abs(np.sin(phi))


def test_polyfit_is_exact_on_a_cubic():
    def cubic(t):
        return 2e-4 * t**3 - 0.05 * t**2 + t + 3

    fit = polyfit_ls(samples_of(cubic, np.arange(0, 141, 5)), 3)
    probe = np.linspace(0, 140, 57)
    assert fit(probe) == pytest.approx(cubic(probe), rel=1e-9, abs=1e-9)
    assert fit.degree == 3
    assert fit.residual == pytest.approx(0.0, abs=1e-8)


def test_polyfit_preconditions():
    with pytest.raises(ValueError, match="at least"):
        polyfit_ls([(0, 1), (1, 2)], 2)
    with pytest.raises(ValueError, match="rank deficient"):
        polyfit_ls([(0, 1), (0, 1), (5, 2)], 2)


def test_local_minima_of_a_double_well():
    def double_well(t):
        return (t - 30) ** 2 * (t - 90) ** 2

    fit = polyfit_ls(samples_of(double_well, np.arange(0, 141)), 4)
    assert poly_local_minima(fit, 0, 140) == pytest.approx([30.0, 90.0], abs=0.02)
    assert poly_local_minima(fit, 40, 80) == []
    assert poly_local_minima(fit, 10, 10.1) == []


def test_constrained_lsq_keeps_consistent_supports():
    angles = np.arange(0, 360, 45.0)
    h = square_support(angles)
    y = constrained_lsq(ConstrainedLsqProblem(h, angles))
    assert y == pytest.approx(h, abs=1e-7)


def test_constrained_lsq_repairs_an_inconsistent_value():
    angles = np.arange(0, 360, 45.0)
    h_true = square_support(angles)
    h = h_true.copy()
    h[1] += 0.5
    problem = ConstrainedLsqProblem(h, angles)
    y = constrained_lsq(problem)
    assert np.all(problem.constraint_matrix() @ y <= 1e-9)
    assert np.linalg.norm(y - h) <= np.linalg.norm(h_true - h) + 1e-9
    assert y[1] < h[1]


def test_constrained_lsq_preconditions():
    with pytest.raises(ValueError, match="at least 3"):
        constrained_lsq(ConstrainedLsqProblem([1.0, 1.0], [0.0, 90.0]))
    with pytest.raises(ValueError, match="half-plane"):
        constrained_lsq(ConstrainedLsqProblem([1.0, 1.0, 1.0], [0.0, 90.0, 180.0]))
    with pytest.raises(ValueError, match="sorted"):
        ConstrainedLsqProblem([1.0, 1.0, 1.0], [90.0, 0.0, 180.0])


def test_anneal_finds_the_minimum_of_a_quadratic():
    def bowl(x):
        return (x[0] - 3.0) ** 2 + 0.5 * (x[1] + 1.0) ** 2

    cfg = AnnealConfig(seed=4, steps_per_temperature=20)
    first = anneal_minimize(bowl, [0.0, 0.0], cfg)
    second = anneal_minimize(bowl, [0.0, 0.0], cfg)
    assert first == pytest.approx([3.0, -1.0], abs=1e-4)
    assert np.array_equal(first, second)


def test_anneal_respects_bounds():
    cfg = AnnealConfig(seed=1, lower=np.array([0.0]), upper=np.array([2.0]))
    x = anneal_minimize(lambda x: (x[0] - 3.0) ** 2, [1.0], cfg)
    assert x == pytest.approx([2.0], abs=1e-6)


def test_anneal_config_validation():
    for options in (
        {"cooling_factor": 1.0},
        {"steps_per_temperature": 0},
        {"step_scale": 0.0},
        {"initial_temperature": 1.0, "min_temperature": 2.0},
    ):
        with pytest.raises(ValueError):
            AnnealConfig(**options)


def projection_by_active_sets(problem):
    """Tries every set of active constraints; the KKT point is the projection."""
    g, h = problem.constraint_matrix(), problem.targets
    tolerance = 1e-9 * max(1.0, np.abs(h).max())
    for size in range(len(g) + 1):
        for active in itertools.combinations(range(len(g)), size):
            rows = g[list(active)]
            lam = np.linalg.lstsq(rows.T, h, rcond=None)[0] if size else np.zeros(0)
            y = h - rows.T @ lam
            if np.all(lam >= -tolerance) and np.all(g @ y <= tolerance):
                return y
    raise AssertionError("no active set satisfies the KKT conditions")


@pytest.mark.parametrize(
    "angles",
    [
        np.arange(0, 360, 45.0),
        np.array([0.0, 70.0, 150.0, 200.0, 280.0]),
        np.array([10.0, 100.0, 190.0, 280.0, 330.0, 350.0]),
        np.array([5.0, 60.0, 120.0, 175.0, 240.0, 300.0, 340.0]),
    ],
)
def test_constrained_lsq_matches_the_active_set_enumeration(angles):
    rng = np.random.default_rng(len(angles))
    for _ in range(5):
        h = 1.0 + rng.normal(0.0, 0.4, len(angles))
        problem = ConstrainedLsqProblem(h, angles)
        y = constrained_lsq(problem)
        assert np.all(problem.constraint_matrix() @ y <= 1e-9 * max(1.0, abs(h).max()))
        assert y == pytest.approx(projection_by_active_sets(problem), abs=1e-7)


def test_anneal_follows_the_rosenbrock_valley():
    def rosenbrock(x):
        return 100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2

    cfg = AnnealConfig(
        seed=7,
        step_scale=0.5,
        lower=np.array([-2.0, -2.0]),
        upper=np.array([2.0, 2.0]),
        polish_tolerance=1e-9,
        polish_max_evaluations=50000,
    )
    x = anneal_minimize(rosenbrock, [-1.2, 1.0], cfg)
    assert rosenbrock(x) < 1e-4
    assert x == pytest.approx([1.0, 1.0], abs=2e-2)


def test_anneal_never_returns_a_worse_point():
    def bumpy(x):
        return float(np.sum(x**2) + 0.5 * np.sum(1.0 - np.cos(3.0 * x)))

    at_minimum = anneal_minimize(bumpy, np.zeros(3), AnnealConfig(seed=2))
    assert bumpy(at_minimum) == 0.0

    rng = np.random.default_rng(3)
    for seed in range(5):
        x0 = rng.uniform(-3.0, 3.0, 3)
        cfg = AnnealConfig(seed=seed, steps_per_temperature=5, polish_max_evaluations=0)
        assert bumpy(anneal_minimize(bumpy, x0, cfg)) <= bumpy(x0)
