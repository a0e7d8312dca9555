"""Command-line surface: reconstruct, evaluate, stitch, simulate and grey."""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional
import rollbar
from rollbar.logger import RollbarHandler
from app.commands.evaluation import EvaluateCloudsCommand
from app.commands.reconstruction import GreyscaleStagesCommand, ReconstructFrameCommand
from app.commands.simulation import SimulateContactCommand
from app.commands.stitching import StitchManifestCommand
from app.config import get_settings
from app.constants.exit_codes import ExitCodes
from app.constants.reconstruction import SmoothOrder
from app.constants.simulator import (
    DEFAULT_FIELD_RADIUS,
    DEFAULT_FRAME_HEIGHT,
    DEFAULT_FRAME_WIDTH,
    DEFAULT_KAPPA,
    DEFAULT_LATTICE_PITCH,
    DEFAULT_MAX_DEPTH_MM,
    DEFAULT_PIN_RADIUS,
    DEFAULT_SKIRT_SIGMA,
    PrimitiveKinds,
)
from app.core.logging_config import LoggingConfig, get_logger
from app.exceptions.handlers import handle_command_error
from app.schemas.geometry import SensorGeometry
from app.schemas.image import CircularMask
from app.schemas.pipeline import PipelineConfig
from app.schemas.simulator import ContactPrimitive, ExposureModel, PinLattice
from app.utils.config_file import load_pipeline_config

logger = get_logger("tacshade.cli")


def _dimensions(value: str) -> List[float]:
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimensions must be comma-separated numbers, got {value!r}")


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Key-value pipeline config file")
    parser.add_argument("--window", help="Ratio window, e.g. 21 or 21x15")
    parser.add_argument("--stride", type=int)
    parser.add_argument("--iters", type=int, help="Shape-from-shading iterations")
    parser.add_argument("--alpha", type=float, help="Height scale factor")
    parser.add_argument("--radius-mm", type=float, help="Hemisphere radius in mm")
    parser.add_argument("--out", default=".", help="Output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tacshade", description="Tactile image to height field and point cloud reconstruction"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    reconstruct = subparsers.add_parser("reconstruct", help="Reconstruct one frame")
    reconstruct.add_argument("frame")
    reconstruct.add_argument("g0", help="Rest frame")
    reconstruct.add_argument(
        "--calibrate-depth", type=float, help="Calibrate alpha so the deepest point is this many mm"
    )
    _add_pipeline_flags(reconstruct)

    evaluate = subparsers.add_parser("evaluate", help="Score a cloud against ground truth")
    evaluate.add_argument("recon")
    evaluate.add_argument("truth")
    evaluate.add_argument("--h-max", type=float, required=True, help="Maximum contact depth in mm")
    evaluate.add_argument("--json", action="store_true", help="Print the report as JSON")

    stitch = subparsers.add_parser("stitch", help="Fuse the contacts of a manifest")
    stitch.add_argument("manifest")
    stitch.add_argument("--g0", help="Rest frame for rows without a g0 column")
    stitch.add_argument("--threads", type=int)
    stitch.add_argument("--smooth-order", choices=SmoothOrder.get_all())
    stitch.add_argument("--smoothing-radius", type=float, help="z-smoothing radius in mm, 0 disables")
    _add_pipeline_flags(stitch)

    simulate = subparsers.add_parser("simulate", help="Render a synthetic contact frame")
    simulate.add_argument("--primitive", choices=PrimitiveKinds.get_all(), required=True)
    simulate.add_argument("--dims", type=_dimensions, required=True, help="Comma-separated sizes in mm")
    simulate.add_argument("--depth", type=float, required=True, help="Indent depth in mm")
    simulate.add_argument("--x-mm", type=float, default=0.0)
    simulate.add_argument("--y-mm", type=float, default=0.0)
    simulate.add_argument("--yaw-deg", type=float, default=0.0)
    simulate.add_argument("--width", type=int, default=DEFAULT_FRAME_WIDTH)
    simulate.add_argument("--height", type=int, default=DEFAULT_FRAME_HEIGHT)
    simulate.add_argument("--pitch", type=float, default=DEFAULT_LATTICE_PITCH)
    simulate.add_argument("--pin-radius", type=float, default=DEFAULT_PIN_RADIUS)
    simulate.add_argument("--field-radius", type=float, default=DEFAULT_FIELD_RADIUS)
    simulate.add_argument("--kappa", type=float, default=DEFAULT_KAPPA)
    simulate.add_argument("--max-depth", type=float, default=DEFAULT_MAX_DEPTH_MM)
    simulate.add_argument("--saturation-depth", type=float)
    simulate.add_argument("--skirt-sigma", type=float, default=DEFAULT_SKIRT_SIGMA)
    simulate.add_argument("--radius-mm", type=float, default=PipelineConfig().radius_mm)
    simulate.add_argument("--format", choices=["png", "pgm"], default="png")
    simulate.add_argument("--out", default=".", help="Output directory")

    grey = subparsers.add_parser("grey", help="Write intermediate greyscale images")
    grey.add_argument("frame")
    grey.add_argument("--g0", help="Rest frame; adds delta.png and shape.png")
    _add_pipeline_flags(grey)

    return parser


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    overrides: Dict[str, Any] = {
        "window": args.window,
        "stride": args.stride,
        "iterations": args.iters,
        "alpha": args.alpha,
        "radius_mm": args.radius_mm,
        "smooth_order": getattr(args, "smooth_order", None),
        "smoothing_radius_mm": getattr(args, "smoothing_radius", None),
    }
    return load_pipeline_config(args.config, overrides)


def _run_reconstruct(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    result = ReconstructFrameCommand().execute(
        args.frame, args.g0, args.out, config, args.calibrate_depth
    )
    if result.calibrated_alpha is not None:
        print(f"alpha={result.calibrated_alpha:.6f}")
    print(result.summary.to_line())
    return ExitCodes.SUCCESS


def _run_evaluate(args: argparse.Namespace) -> int:
    report = EvaluateCloudsCommand().execute(args.recon, args.truth, args.h_max)
    print(report.model_dump_json() if args.json else report.to_table())
    return ExitCodes.SUCCESS


def _run_stitch(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    threads = args.threads if args.threads is not None else get_settings().threads
    result = StitchManifestCommand(threads=threads).execute(
        args.manifest, args.out, config, args.g0
    )
    print(f"points={len(result.cloud)} rows={len(result.timings)}")
    return ExitCodes.SUCCESS


def _run_simulate(args: argparse.Namespace) -> int:
    field = CircularMask(
        center_u=(args.width - 1) / 2.0,
        center_v=(args.height - 1) / 2.0,
        radius=args.field_radius,
    )
    lattice = PinLattice(
        width=args.width,
        height=args.height,
        pin_radius=args.pin_radius,
        pitch=args.pitch,
        field=field,
    )
    primitive = ContactPrimitive(
        kind=args.primitive,
        dimensions=tuple(args.dims),
        x_mm=args.x_mm,
        y_mm=args.y_mm,
        yaw_deg=args.yaw_deg,
        indent_depth=args.depth,
    )
    exposure = ExposureModel(
        kappa=args.kappa,
        max_depth_mm=args.max_depth,
        saturation_depth_mm=args.saturation_depth,
    )
    geometry = SensorGeometry(radius_r=args.radius_mm, mask=field)
    written = SimulateContactCommand().execute(
        primitive, lattice, geometry, args.out, exposure, args.skirt_sigma, args.format
    )
    for path in written.values():
        print(path)
    return ExitCodes.SUCCESS


def _run_grey(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    written = GreyscaleStagesCommand().execute(args.frame, args.out, config, args.g0)
    for path in written.values():
        print(path)
    return ExitCodes.SUCCESS


COMMANDS = {
    "reconstruct": _run_reconstruct,
    "evaluate": _run_evaluate,
    "stitch": _run_stitch,
    "simulate": _run_simulate,
    "grey": _run_grey,
}


def _init_error_reporting() -> None:
    settings = get_settings()
    if settings.is_production and settings.rollbar_access_token:
        rollbar.init(settings.rollbar_access_token, environment=settings.environment)

        # Report ERROR and above to Rollbar
        rollbar_handler = RollbarHandler()
        rollbar_handler.setLevel(logging.ERROR)
        LoggingConfig().attach_handler(rollbar_handler)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    LoggingConfig()
    _init_error_reporting()
    try:
        return COMMANDS[args.command](args)
    except Exception as e:
        return handle_command_error(e)
