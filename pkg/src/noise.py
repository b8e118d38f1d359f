"""

 geotomo

 Seeded Gaussian noise on the non-zero intensities of a sinogram.

"""
from dataclasses import dataclass

import numpy as np

from src.projector import Sinogram


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.sigma) or self.sigma < 0:
            raise ValueError(f"sigma must be finite and non-negative, got {self.sigma}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def noise_field(shape, spec):
    """Standard normal draws scaled by sigma; entry (i, j) depends only on the
    seed and its index, Philox being counter based."""
    generator = np.random.Generator(np.random.Philox(key=spec.seed))
    return spec.sigma * generator.standard_normal(shape)


def add_noise(sino, spec):
    if spec.sigma == 0:
        return sino.copy()
    values = sino.values
    noisy = values + noise_field(values.shape, spec)
    # zero bins stay exactly zero, negative results clamp to zero
    noisy = np.where(values > 0, np.maximum(noisy, 0.0), values)
    return Sinogram(sino.schedule, noisy, sino.detector_spacing)
