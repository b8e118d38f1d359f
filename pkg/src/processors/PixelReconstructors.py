from src.algebraic import BartConfig, DartConfig, SirtConfig, bart, dart, sirt
from src.logger import logger
from src.processors.interfaces.Reconstructor import Reconstructor


class Sirt(Reconstructor):
    """SIRT followed by a fixed threshold segmentation"""

    algorithm_name = "SIRT"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.cfg = SirtConfig(**self.tuning_config.sirt.toDict())

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        result = sirt(sino, self.cfg)
        return self.grid_outcome(result.binary, gray=result.gray)


class Bart(Reconstructor):
    algorithm_name = "BART"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        options = self.tuning_config.bart.toDict()
        options["smooth_weights"] = tuple(options["smooth_weights"])
        self.cfg = BartConfig(**options)

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        return self.grid_outcome(bart(sino, self.cfg))


class Dart(Reconstructor):
    algorithm_name = "DART"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.cfg = DartConfig(**self.tuning_config.dart.toDict())

    def reconstruct(self, sino, seed=0, shadows=None, noise_free=False, phantom=None):
        logger.debug(f"DART with seed {seed}")
        return self.grid_outcome(dart(sino, self.cfg, seed=seed))
