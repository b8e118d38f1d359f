"""

 geotomo

 Slice-by-slice tomographic reconstruction of convex objects and the benchmark
 harness comparing pixel-based and object-based reconstructors.

"""

import argparse
import sys

from src.entry import entry_point
from src.logger import logger

COMMANDS = ["gen", "recon", "bench", "stack", "metrics"]


def parse_schedule_arg(value):
    # either a named schedule or comma separated angles
    if "," in value or value.replace(".", "", 1).isdigit():
        return [float(angle) for angle in value.split(",") if angle]
    return value


def parse_args(argv=None):
    argparser = argparse.ArgumentParser(prog="geotomo")

    argparser.add_argument(
        "command",
        choices=COMMANDS,
        help="gen: simulate data, recon: reconstruct a sinogram CSV, bench: run an "
        "experiment, stack: reconstruct a directory of slices, metrics: compare two "
        "pixel sets.",
    )
    argparser.add_argument(
        "--phantom", nargs="+", type=int, dest="phantom", help="Phantom id(s), 1 to 6."
    )
    argparser.add_argument(
        "--algo",
        nargs="+",
        dest="algo",
        help="Algorithm name(s), e.g. SIRT MPW 2n-GON.",
    )
    argparser.add_argument(
        "--schedule",
        nargs="+",
        type=parse_schedule_arg,
        dest="schedule",
        help="Named tilt schedule(s) S180_1, S140_1, S180_10, S140_10 or comma "
        "separated angles in degrees.",
    )
    argparser.add_argument(
        "--sigma", nargs="+", type=float, dest="sigma", help="Noise level(s)."
    )
    argparser.add_argument(
        "--trials", type=int, dest="trials", help="Trials per experiment cell."
    )
    argparser.add_argument("--seed", type=int, dest="seed", help="Base seed.")
    argparser.add_argument(
        "-o", "--out", dest="out", help="Specify an output directory."
    )
    argparser.add_argument(
        "--workers", type=int, dest="workers", help="Parallel trial workers."
    )
    argparser.add_argument(
        "-c", "--config", dest="config", help="Specify an experiment JSON file."
    )
    argparser.add_argument(
        "--save-images",
        action="store_true",
        dest="save_images",
        help="Save reconstructed PGM images and polygon CSVs for every trial.",
    )
    argparser.add_argument(
        "-i",
        "--input",
        dest="input",
        help="Sinogram CSV (recon), slice directory (stack) or pixel set (metrics).",
    )
    argparser.add_argument(
        "--reference", dest="reference", help="Reference pixel set for metrics."
    )
    argparser.add_argument(
        "--stack",
        type=int,
        dest="stack",
        help="With gen: write a synthetic nanowire stack of this many slices.",
    )
    argparser.add_argument(
        "-d",
        "--debug",
        action="store_false",
        dest="debug",
        help="Enables debugging mode for showing detailed errors",
    )

    args, unknown = argparser.parse_known_args(argv)
    args = vars(args)

    if len(unknown) > 0:
        logger.warning(f"\nError: Unknown arguments: {unknown}", unknown)
        argparser.print_help()
        exit(11)
    return args


def entry_point_for_args(args):
    if args.get("debug", True):
        sys.tracebacklimit = 0
    return entry_point(args["command"], args)


def main():
    args = parse_args()
    entry_point_for_args(args)


if __name__ == "__main__":
    main()
