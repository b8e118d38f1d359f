from functools import lru_cache

import numpy as np

from src.constants import PHANTOM_FRAME
from src.geometry import ConvexPolygon
from src.grid import bin_rows, diamond, rasterize
from src.logger import logger
from src.noise import NoiseSpec, add_noise
from src.phantoms import make_phantom
from src.projector import (
    Sinogram,
    TiltSchedule,
    extract_shadows,
    extract_stack_shadows,
    project,
)
from src.utils.file import read_sinogram_table


@lru_cache(maxsize=32)
def _hires_projection(vertices_key, angles_key, hires_size, hires_spacing):
    polygon = ConvexPolygon(np.array(vertices_key))
    schedule = TiltSchedule(list(angles_key))
    phantom = rasterize(polygon, hires_size, hires_spacing).to_grid(hires_spacing)
    logger.debug(
        f"Projecting {len(phantom.to_pixel_set())} phantom pixels at {hires_size}px "
        f"over {len(schedule)} angles"
    )
    return project(phantom, schedule)


class SliceInstanceOps:
    """Class to hold fine-tuned utilities for slice simulation and shadow extraction.
    One instance per tuning config."""

    def __init__(self, tuning_config):
        super().__init__()
        self.tuning_config = tuning_config
        self.size = tuning_config.data.size
        self.bin_factor = tuning_config.data.bin_factor
        self.spacing = PHANTOM_FRAME / self.size

    def ground_truth(self, polygon):
        return rasterize(polygon, self.size, self.spacing)

    def rasterize_for(self, sino, polygon):
        """Rasterize on the grid a sinogram reconstructs to."""
        return rasterize(polygon, sino.detector_count, sino.detector_spacing)

    def simulate_polygon(self, polygon, schedule, sigma=0.0, seed=0):
        """Project at size * bin_factor, add noise, bin back and rescale to unit
        gray level."""
        factor = self.bin_factor
        hires = _hires_projection(
            tuple(map(tuple, np.round(polygon.vertices, 12))),
            tuple(float(angle) for angle in schedule.angles),
            self.size * factor,
            self.spacing / factor,
        )
        hires = Sinogram(schedule, hires.values, hires.detector_spacing)
        noisy = add_noise(hires, NoiseSpec(float(sigma), int(seed)))
        values = bin_rows(noisy.values, factor) / factor**2
        return Sinogram(schedule, values, self.spacing)

    def simulate(self, phantom_id, schedule, sigma=0.0, seed=0):
        polygon = make_phantom(phantom_id).polygon
        return self.simulate_polygon(polygon, schedule, sigma, seed)

    def extract_shadows(self, sino):
        config = self.tuning_config.shadows
        if config.opening:
            return self.extract_stack_shadows(
                [sino], opening=True, median=config.median_filter
            )[0]
        return extract_shadows(
            sino, config.threshold, config.convex, config.median_filter
        )

    def extract_stack_shadows(self, sinos, opening=None, median=None):
        """Shadows of a slice stack; opening and median default to the stack
        settings."""
        config = self.tuning_config.shadows
        if opening is None:
            opening = self.tuning_config.stack.opening
        if median is None:
            median = self.tuning_config.stack.median_filter
        if not opening:
            return [
                extract_shadows(sino, config.threshold, config.convex, median)
                for sino in sinos
            ]
        return extract_stack_shadows(
            sinos,
            config.threshold,
            config.convex,
            median,
            se=diamond(config.diamond_radius),
        )

    def load_sinogram(self, path, name=None):
        angles, values = read_sinogram_table(path)
        schedule = TiltSchedule(angles, name=name or "custom")
        return Sinogram(schedule, values, PHANTOM_FRAME / values.shape[1])
