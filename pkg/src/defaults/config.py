from dotmap import DotMap

CONFIG_DEFAULTS = DotMap(
    {
        "data": {
            # reconstruction grid, world frame is fixed at 512 units
            "size": 512,
            # data is projected at size * bin_factor and binned back
            "bin_factor": 4,
        },
        "shadows": {
            "threshold": 0.0,
            "median_filter": False,
            "convex": True,
            "opening": False,
            "diamond_radius": 2,
        },
        "sirt": {
            "iterations": 50,
            "relaxation": 1.0,
            "threshold": 0.5,
        },
        "bart": {
            "art_sweeps": 5,
            "relaxation": 0.3,
            "lower": 0.0,
            "upper": 1.0,
            "art_tolerance": 0.5,
            "snap_margin": 0.1,
            "contour_threshold": 0.5,
            "filter_rounds": 7,
            "smooth_weights": [2.0, 1.0, 1.0],
        },
        "dart": {
            "init_sirt_iters": 25,
            "dart_iters": 25,
            "inner_sirt_iters": 10,
            "relaxation": 1.0,
            "rho": 1.0,
            "fix_fraction": 0.85,
        },
        "gkxr": {
            "directions": [1.0, 28.0, 91.0, 118.0],
            "lines_per_direction": 40,
            "window_fraction": 0.45,
            # detector spacings
            "pair_merge_threshold": 1.0,
            "iir_rounds": 50,
            "iir_alternate": True,
            # detector spacings
            "init_jitter": 0.5,
            "sweeps_per_temperature": 2.0,
            "anneal": {
                "cooling_factor": 0.95,
                "steps_per_temperature": 50,
                "min_temperature_ratio": 1e-3,
                # detector spacings
                "step_scale": 2.0,
                "polish_tolerance": 1e-6,
                "polish_max_evaluations": 20000,
            },
        },
        "ngon": {
            "n": 3,
            # null means 2n + 5
            "poly_degree": None,
            # null means the coverage of the tilt schedule
            "omega": None,
            "spacing_tolerance": 10.0,
            # phantom id -> n, used by the benchmark harness
            "n_per_phantom": {"4": 4},
        },
        "stack": {
            "intensity_scale": 1.0,
            "opening": True,
            "median_filter": True,
        },
        "outputs": {
            "log_level": "INFO",
            "record_timing": True,
            "save_images": False,
            "pgm_binary": True,
        },
    },
    _dynamic=False,
)
