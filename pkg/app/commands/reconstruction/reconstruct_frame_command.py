from pathlib import Path
from time import perf_counter
from typing import NamedTuple, Optional, Union
from app.core.logging_config import get_logger
from app.exceptions import ShapeMismatchError
from app.schemas.geometry import HeightField, SensorGeometry
from app.schemas.image import CircularMask, GreyscaleField, RasterImage
from app.schemas.pipeline import PipelineConfig, ReconstructionSummary
from app.services.image_service import ImageService
from app.services.sfs_service import LiftResult, SfsService
from app.utils.image_io import read_image, write_height
from app.utils.point_cloud_io import write_ply

logger = get_logger("tacshade.reconstruct")


class ReconstructionResult(NamedTuple):
    """Everything a single-frame reconstruction produces."""

    height: HeightField
    lift: LiftResult
    geometry: SensorGeometry
    summary: ReconstructionSummary
    calibrated_alpha: Optional[float]


class GreyscaleStages(NamedTuple):
    """Intermediate images of the frame-to-greyscale stage."""

    masked: RasterImage
    binary: RasterImage
    ratio: GreyscaleField
    smoothed: GreyscaleField


class ReconstructFrameCommand:
    """Command to reconstruct the deformed skin from one tactile frame and its rest frame."""

    def __init__(self):
        self.image_service = ImageService()
        self.sfs_service = SfsService()

    def greyscale_stages(
        self,
        img: RasterImage,
        mask: CircularMask,
        config: PipelineConfig,
        threshold: Union[int, str, None] = None,
    ) -> GreyscaleStages:
        """
        Run mask, binarize, ratio convolution and TVD on one frame.

        :param img: Raw frame.
        :param mask: Circular field of view.
        :param config: Pipeline tunables.
        :param threshold: Threshold overriding config.threshold.
        :return: The image after each stage.
        """
        masked = self.image_service.apply_circular_mask(img, mask)
        binary = self.image_service.binarize(
            masked, config.threshold if threshold is None else threshold
        )
        ratio = self.image_service.ratio_convolution(binary, config.window, config.stride)
        smoothed = self.image_service.tvd_denoise(ratio, config.tvd_weight, config.tvd_iterations)
        return GreyscaleStages(
            masked=masked, binary=binary.to_raster(), ratio=ratio, smoothed=smoothed
        )

    def resolve_mask(self, g0: RasterImage, config: PipelineConfig) -> CircularMask:
        mask = config.mask()
        if mask is None:
            mask = self.image_service.estimate_mask(g0)
        return mask

    def resolve_threshold(
        self, g0: RasterImage, mask: CircularMask, config: PipelineConfig
    ) -> Union[int, str]:
        """Pick the auto threshold once from the rest frame so both frames share it."""
        if config.threshold != "auto":
            return config.threshold
        chosen = self.image_service.otsu_threshold(
            self.image_service.apply_circular_mask(g0, mask)
        )
        return "auto" if chosen is None else chosen

    def run(
        self,
        frame: RasterImage,
        g0: RasterImage,
        config: PipelineConfig,
        contact_depth_mm: Optional[float] = None,
    ) -> ReconstructionResult:
        """
        Reconstruct a frame in memory.

        :param frame: Frame captured during contact.
        :param g0: Rest frame of the same sensor.
        :param config: Pipeline tunables.
        :param contact_depth_mm: When given, alpha is calibrated so the deepest point matches it.
        :return: ReconstructionResult with the scaled height field and the lifted cloud.
        """
        started = perf_counter()
        if frame.data.shape != g0.data.shape:
            raise ShapeMismatchError(
                f"Frame is {frame.width}x{frame.height} but g0 is {g0.width}x{g0.height}"
            )

        mask = self.resolve_mask(g0, config)
        threshold = self.resolve_threshold(g0, mask, config)
        g0_field = self.greyscale_stages(g0, mask, config, threshold).smoothed
        g_field = self.greyscale_stages(frame, mask, config, threshold).smoothed
        greyscale_ms = (perf_counter() - started) * 1000.0

        sfs_config = config.reconstruction()
        g_d = self.sfs_service.delta_greyscale(g_field, g0_field, sfs_config.clamp_negative_gd)
        g_dn = self.sfs_service.normalize(g_d)
        g_h = self.sfs_service.shape_weighted_greyscale(g_dn, g0_field)
        g_hn = self.sfs_service.normalize(g_h)
        g_hn = self.sfs_service.contact_shading(g_hn, g_dn, config.contact_threshold)

        geometry = config.geometry(mask)
        unscaled = self.sfs_service.hybrid_sfs(g_hn, sfs_config, geometry)

        calibrated_alpha = None
        if contact_depth_mm is not None:
            calibrated_alpha = self.sfs_service.calibrate_alpha(unscaled, contact_depth_mm)
            geometry = geometry.model_copy(update={"alpha": calibrated_alpha})
            logger.info(f"Calibrated alpha={calibrated_alpha:.4f} for {contact_depth_mm} mm")

        height = self.sfs_service.scale_height(unscaled, geometry)
        lift = self.sfs_service.lift_to_hemisphere(height, geometry)
        wall_ms = (perf_counter() - started) * 1000.0
        logger.info(
            f"Reconstructed {frame.width}x{frame.height} frame: greyscale {greyscale_ms:.1f} ms, "
            f"total {wall_ms:.1f} ms"
        )

        summary = ReconstructionSummary(
            max_depth_mm=height.max_depth,
            in_domain_pixels=len(lift.cloud),
            skipped_pixels=lift.skipped,
            wall_time_ms=wall_ms,
        )
        return ReconstructionResult(
            height=height,
            lift=lift,
            geometry=geometry,
            summary=summary,
            calibrated_alpha=calibrated_alpha,
        )

    def execute(
        self,
        frame_path: Union[str, Path],
        g0_path: Union[str, Path],
        out_dir: Union[str, Path],
        config: PipelineConfig,
        contact_depth_mm: Optional[float] = None,
    ) -> ReconstructionResult:
        """
        Execute the command: read both frames, reconstruct, write cloud.ply and height.tshf.

        :param frame_path: Contact frame image.
        :param g0_path: Rest frame image.
        :param out_dir: Output directory.
        :param config: Pipeline tunables.
        :param contact_depth_mm: Optional depth for alpha calibration.
        :return: The reconstruction result.
        """
        frame = read_image(frame_path)
        g0 = read_image(g0_path)
        result = self.run(frame, g0, config, contact_depth_mm)

        out_dir = Path(out_dir)
        write_ply(out_dir / "cloud.ply", result.lift.cloud)
        write_height(out_dir / "height.tshf", result.height)
        logger.info(f"Wrote {out_dir / 'cloud.ply'} and {out_dir / 'height.tshf'}")
        return result
