from src.constants import GKXR_NO_OBJECT
from src.convexrec import (
    GkxrConfig,
    NgonConfig,
    NoReconstruction,
    gkxr,
    mpw,
    ngon_2n,
    ufbp,
    width_minima,
)
from src.logger import logger
from src.processors.interfaces.Reconstructor import (
    ReconstructionOutcome,
    Reconstructor,
)
from src.projector import TiltSchedule
from src.solvers import AnnealConfig


class Gkxr(Reconstructor):
    """Point pairs on measurement lines fitted to four projections by annealing"""

    algorithm_name = "GKXR"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        options = self.tuning_config.gkxr.toDict()
        anneal = AnnealConfig(**options.pop("anneal"))
        options["directions"] = tuple(sorted(options["directions"]))
        self.cfg = GkxrConfig(anneal=anneal, **options)

    def required_schedule(self, schedule):
        # always measured on its own directions
        return TiltSchedule(list(self.cfg.directions), name="GKXR")

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        result = gkxr(sino, self.cfg, seed=seed, smooth=not noise_free)
        outcome = self.polygon_outcome(sino, result.polygon)
        if result.no_object:
            outcome.reason = GKXR_NO_OBJECT
        return outcome


class Ufbp(Reconstructor):
    algorithm_name = "U-FBP"
    input_kind = "shadows"

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        return self.polygon_outcome(sino, ufbp(self.shadows_for(sino, shadows)))


class Mpw(Reconstructor):
    """U-FBP on support values projected to a consistent set"""

    algorithm_name = "MPW"
    input_kind = "shadows"

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        return self.polygon_outcome(sino, mpw(self.shadows_for(sino, shadows)))


class TwoNGon(Reconstructor):
    algorithm_name = "2n-GON"
    input_kind = "shadows"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.ngon_options = self.tuning_config.ngon.toDict()

    def config_for(self, phantom=None):
        options = dict(self.ngon_options)
        n_per_phantom = options.pop("n_per_phantom", {})
        if phantom is not None and str(phantom) in n_per_phantom:
            options["n"] = n_per_phantom[str(phantom)]
        return NgonConfig(**options)

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        cfg = self.config_for(phantom)
        shadows = self.shadows_for(sino, shadows)
        minima = width_minima(shadows, cfg)
        result = ngon_2n(shadows, cfg, minima=minima)
        if isinstance(result, NoReconstruction):
            logger.warning(f"2n-GON refused to reconstruct: {result.reason}")
            return ReconstructionOutcome.refused(result.reason, minima)
        return self.polygon_outcome(sino, result, minima=minima)

