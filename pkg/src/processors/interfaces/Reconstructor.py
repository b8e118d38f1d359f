# Use all imports relative to root directory
from dataclasses import dataclass, field
from typing import Optional

from src.constants import TRIAL_STATUS
from src.geometry import ConvexPolygon
from src.grid import ImageGrid, PixelSet
from src.processors.manager import Processor


@dataclass
class ReconstructionOutcome:
    status: str
    reason: str = ""
    pixel_set: Optional[PixelSet] = None
    polygon: Optional[ConvexPolygon] = None
    gray: Optional[ImageGrid] = None
    minima: list = field(default_factory=list)

    @property
    def ok(self):
        return self.status == TRIAL_STATUS.OK

    @classmethod
    def refused(cls, reason, minima=None):
        return cls(TRIAL_STATUS.NO_RECONSTRUCTION, reason, minima=list(minima or []))

    @classmethod
    def failed(cls, error):
        return cls(TRIAL_STATUS.ERROR, f"{type(error).__name__}: {error}")


class Reconstructor(Processor):
    """Base class for an extension that reconstructs one slice from its sinogram"""

    algorithm_name = None
    # "sinogram" for pixel-based methods, "shadows" for methods working on shadows
    input_kind = "sinogram"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.description = self.algorithm_name or "UNKNOWN"

    def required_schedule(self, schedule):
        """The tilt schedule to simulate data on for an experiment schedule"""
        return schedule

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        """Reconstruct one slice and return a ReconstructionOutcome"""
        raise NotImplementedError

    def grid_outcome(self, grid, gray=None):
        return ReconstructionOutcome(
            TRIAL_STATUS.OK, pixel_set=grid.to_pixel_set(), gray=gray or grid
        )

    def polygon_outcome(self, sino, polygon, minima=None):
        pixel_set = self.slice_ops.rasterize_for(sino, polygon)
        return ReconstructionOutcome(
            TRIAL_STATUS.OK,
            pixel_set=pixel_set,
            polygon=polygon,
            minima=list(minima or []),
        )

    def shadows_for(self, sino, shadows=None):
        return shadows if shadows is not None else self.slice_ops.extract_shadows(sino)
