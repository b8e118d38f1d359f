"""
Reconstructor plugin registry
Adapted from https://github.com/gdiepen/python_processor_example
"""
import inspect
import pkgutil

from src.logger import logger


class Processor:
    """Base class of every reconstructor plugin."""

    def __init__(
        self,
        options=None,
        tuning_config=None,
        slice_ops=None,
    ):
        self.options = options or {}
        self.slice_ops = slice_ops
        self.tuning_config = (
            tuning_config if tuning_config is not None else slice_ops.tuning_config
        )
        self.description = "UNKNOWN"


class ProcessorManager:
    """Walks the processors package and registers every Processor subclass that
    declares an algorithm_name, keyed by that name.
    """

    def __init__(self, processors_dir="src.processors"):
        self.processors_dir = processors_dir
        # filled on first lookup, the walk imports modules that import this one
        self._processors = None

    @property
    def processors(self):
        if self._processors is None:
            self.reload_processors()
        return self._processors

    @staticmethod
    def get_name_filter(processor_name):
        def filter_function(member):
            return inspect.isclass(member) and member.__module__ == processor_name

        return filter_function

    def reload_processors(self):
        self._processors = {}

        logger.debug(f'Loading processors from "{self.processors_dir}"...')
        self.walk_package(self.processors_dir)

    def walk_package(self, package):
        imported_package = __import__(package, fromlist=["blah"])
        loaded_packages = []
        for _, processor_name, ispkg in pkgutil.walk_packages(
            imported_package.__path__, imported_package.__name__ + "."
        ):
            if not ispkg and processor_name != __name__:
                processor_module = __import__(processor_name, fromlist=["blah"])
                # https://stackoverflow.com/a/46206754/6242649
                clsmembers = inspect.getmembers(
                    processor_module,
                    ProcessorManager.get_name_filter(processor_name),
                )
                for _, c in clsmembers:
                    # Only concrete reconstructors carry an algorithm name
                    if (
                        issubclass(c, Processor)
                        and c is not Processor
                        and getattr(c, "algorithm_name", None)
                    ):
                        self._processors[c.algorithm_name] = c
                        loaded_packages.append(c.algorithm_name)

        logger.debug(f"Loaded reconstructors: {loaded_packages}")

    def get(self, algorithm_name):
        if algorithm_name not in self.processors:
            raise ValueError(
                f"Unknown algorithm '{algorithm_name}', "
                f"expected one of {sorted(self.processors)}"
            )
        return self.processors[algorithm_name]

    def create(self, algorithm_name, slice_ops, options=None):
        return self.get(algorithm_name)(options=options, slice_ops=slice_ops)


# Singleton export
RECONSTRUCTOR_MANAGER = ProcessorManager()
