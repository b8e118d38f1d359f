import numpy as np
import pytest

from src.noise import NoiseSpec, add_noise, noise_field
from src.projector import Sinogram, TiltSchedule


def constant_sinogram(value=1000.0, shape=(500, 200)):
    schedule = TiltSchedule(np.linspace(0, 179.5, shape[0]))
    return Sinogram(schedule, np.full(shape, value))


def test_noise_is_reproducible_bitwise():
    sino = constant_sinogram()
    first = add_noise(sino, NoiseSpec(50.0, seed=42))
    second = add_noise(sino, NoiseSpec(50.0, seed=42))
    assert np.array_equal(first.values, second.values)
    other = add_noise(sino, NoiseSpec(50.0, seed=43))
    assert not np.array_equal(first.values, other.values)


def test_noise_statistics():
    sino = constant_sinogram()
    noisy = add_noise(sino, NoiseSpec(50.0, seed=1))
    deviation = noisy.values - sino.values
    assert abs(deviation.mean()) < 0.5
    assert deviation.std() == pytest.approx(50.0, abs=1.0)


def test_zero_sigma_returns_an_unchanged_copy():
    sino = constant_sinogram(shape=(4, 6))
    noisy = add_noise(sino, NoiseSpec(0.0, seed=3))
    assert noisy is not sino
    assert np.array_equal(noisy.values, sino.values)


def test_zero_bins_stay_zero_and_values_stay_non_negative():
    values = np.zeros((20, 30))
    values[:, 10:20] = 1.0
    sino = Sinogram(TiltSchedule(np.arange(20.0)), values)
    noisy = add_noise(sino, NoiseSpec(200.0, seed=9))
    assert np.all(noisy.values[:, :10] == 0)
    assert np.all(noisy.values[:, 20:] == 0)
    assert np.all(noisy.values >= 0)
    assert np.any(noisy.values[:, 10:20] == 0)


def test_noise_field_scales_with_sigma():
    unit = noise_field((10, 10), NoiseSpec(1.0, seed=5))
    scaled = noise_field((10, 10), NoiseSpec(3.0, seed=5))
    assert scaled == pytest.approx(3.0 * unit)


def test_invalid_noise_spec():
    for sigma in (-1.0, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            NoiseSpec(sigma)
    with pytest.raises(ValueError):
        NoiseSpec(1.0, seed=-1)
