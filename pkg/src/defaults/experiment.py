from dotmap import DotMap

EXPERIMENT_DEFAULTS = DotMap(
    {
        "phantoms": [1],
        "algorithms": ["SIRT", "BART", "DART", "GKXR", "U-FBP", "MPW", "2n-GON"],
        "schedules": ["S180_1"],
        "sigmas": [0.0, 50.0],
        # desk scale, 100 reproduces the full study
        "trials": 20,
        "base_seed": 20100101,
        "workers": 1,
        "output_dir": "outputs",
        "save_images": False,
        "tuning": {},
    },
    _dynamic=False,
)
