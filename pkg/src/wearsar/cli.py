"""
Command-line entry point.

    wearsar simulate --config run.json --out out/
    wearsar image    --config run.json --out out/ [--threads 4] [--threshold-db -6]
    wearsar psf      --config run.json
    wearsar metrics  --gain 6.73 --directivity 6.74 --f-low 23.2e9 --f-high 24.8e9

Exit codes: 0 success, 2 bad config or input, 3 dataset geometry mismatch,
4 numerical or geometry failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .calib import EstimationError, check_same_geometry
from .config import ConfigError, RunConfig
from .dataio import (
    DatasetFormatError,
    read_dataset,
    write_dataset,
    write_image_csv,
    write_pgm,
    write_trajectory_csv,
)
from .pipeline import form_image, point_spread, simulate
from .radmetrics import PatternCut, directivity_from_cuts, efficiency, fractional_bandwidth, ftbr
from .scene import DomainError

log = logging.getLogger("wearsar")

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_NUMERIC = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig.from_dict({})
    if args.seed is not None:
        cfg.raw["seed"] = args.seed
    if getattr(args, "out", None):
        cfg.raw["out"] = args.out
    return cfg


def _emit(report: dict, path: Path | None = None) -> None:
    text = json.dumps(report, indent=1)
    if path is not None:
        path.write_text(text + "\n")
    print(text)


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    out = Path(cfg.raw["out"])
    try:
        sim = simulate(cfg)
    except DomainError as exc:
        raise CliError(str(exc), EXIT_NUMERIC) from None
    provenance = {"generator": f"wearsar {__version__}", "command": "simulate"}
    try:
        out.mkdir(parents=True, exist_ok=True)
        for kind, data in (("measured", sim.measured), ("background", sim.background)):
            write_dataset(out / kind, data, kind=kind, seed=cfg.seed, provenance=provenance)
        write_trajectory_csv(out / "trajectory.csv", sim.trajectory)
        (out / "config.json").write_text(cfg.to_json() + "\n")
    except OSError as exc:
        raise CliError(f"cannot write to {out}: {exc}", EXIT_INPUT) from None
    m, n = sim.measured.shape
    log.info("wrote %d x %d datasets to %s", m, n, out)
    return EXIT_OK


def cmd_image(args) -> int:
    cfg = _load_config(args)
    out = Path(cfg.raw["out"])
    measured_path = Path(args.measured) if args.measured else out / "measured.json"
    background_path = Path(args.background) if args.background else out / "background.json"
    try:
        measured = read_dataset(measured_path)
        background = read_dataset(background_path)
    except (OSError, DomainError) as exc:
        raise CliError(f"cannot read dataset: {exc}", EXIT_INPUT) from None
    try:
        check_same_geometry(measured, background)
    except DomainError as exc:
        raise CliError(str(exc), EXIT_MISMATCH) from None
    try:
        res = form_image(measured, background, cfg, workers=args.threads,
                         threshold_db=args.threshold_db)
    except EstimationError as exc:
        raise CliError(f"calibration failed: {exc}", EXIT_NUMERIC) from None
    except DomainError as exc:
        raise CliError(str(exc), EXIT_NUMERIC) from None
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_image_csv(out / "image_db.csv", res.db)
        write_pgm(out / "image.pgm", res.db)
        report = res.report.to_dict()
        report["reference_delay_s"] = res.reference_delay
        _emit(report, out / "detection.json")
    except OSError as exc:
        raise CliError(f"cannot write to {out}: {exc}", EXIT_INPUT) from None
    return EXIT_OK


def cmd_psf(args) -> int:
    cfg = _load_config(args)
    try:
        metrics = point_spread(cfg, workers=args.threads)
    except DomainError as exc:
        raise CliError(str(exc), EXIT_NUMERIC) from None
    report = {
        "range_fwhm_m": metrics.range_fwhm,
        "crossrange_fwhm_m": metrics.crossrange_fwhm,
        "peak_sidelobe_db": metrics.peak_sidelobe_db,
    }
    path = None
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        path = Path(args.out) / "psf.json"
    _emit(report, path)
    return EXIT_OK


def cmd_metrics(args) -> int:
    report = {}
    try:
        if args.gain is not None and args.directivity is not None:
            report["efficiency_percent"] = efficiency(args.gain, args.directivity)
        if args.f_low is not None and args.f_high is not None:
            report["fractional_bandwidth_percent"] = fractional_bandwidth(args.f_low, args.f_high)
        if args.cut:
            report["ftbr_db"] = ftbr(PatternCut.from_csv(args.cut))
        if args.cut_e and args.cut_h:
            report["directivity_db"] = directivity_from_cuts(
                PatternCut.from_csv(args.cut_e), PatternCut.from_csv(args.cut_h))
    except (OSError, DomainError) as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    if not report:
        raise CliError("nothing to compute; see wearsar metrics --help", EXIT_INPUT)
    _emit(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--threads", type=int, help="backprojection worker threads")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threshold-db", type=float, help="detection threshold (dB, < 0)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="wearsar", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", parents=[common], help="synthesize measured and background datasets")
    p = sub.add_parser("image", parents=[common], help="form an image and detection report")
    p.add_argument("--measured", help="measured dataset header (default OUT/measured.json)")
    p.add_argument("--background", help="background dataset header (default OUT/background.json)")
    sub.add_parser("psf", parents=[common], help="point-target resolution report")
    p = sub.add_parser("metrics", parents=[common], help="antenna radiation metrics")
    p.add_argument("--gain", type=float, help="gain, dBi")
    p.add_argument("--directivity", type=float, help="directivity, dB")
    p.add_argument("--f-low", type=float, help="lower matched frequency, Hz")
    p.add_argument("--f-high", type=float, help="upper matched frequency, Hz")
    p.add_argument("--cut", help="pattern cut CSV (angle_deg, level_db) for FTBR")
    p.add_argument("--cut-e", help="E-plane cut CSV for directivity")
    p.add_argument("--cut-h", help="H-plane cut CSV for directivity")
    return parser


COMMANDS = {"simulate": cmd_simulate, "image": cmd_image, "psf": cmd_psf, "metrics": cmd_metrics}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.threshold_db is not None and not args.threshold_db < 0:
        print("error: --threshold-db must be negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, DatasetFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
