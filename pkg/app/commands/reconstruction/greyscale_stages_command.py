from pathlib import Path
from typing import Dict, Optional, Union
from app.commands.reconstruction.reconstruct_frame_command import ReconstructFrameCommand
from app.core.logging_config import get_logger
from app.exceptions import ShapeMismatchError
from app.schemas.pipeline import PipelineConfig
from app.services.sfs_service import SfsService
from app.utils.image_io import greyscale_to_image, read_image, write_image

logger = get_logger("tacshade.grey")


class GreyscaleStagesCommand:
    """Command to write the intermediate greyscale images of a frame for inspection."""

    def __init__(self):
        self.reconstruct_command = ReconstructFrameCommand()
        self.sfs_service = SfsService()

    def execute(
        self,
        frame_path: Union[str, Path],
        out_dir: Union[str, Path],
        config: PipelineConfig,
        g0_path: Optional[Union[str, Path]] = None,
    ) -> Dict[str, Path]:
        """
        Execute the command.

        Writes masked.png, binary.png, ratio.png and smoothed.png; with a rest
        frame also delta.png (greyscale variation) and shape.png (shape-dependent
        greyscale). The mask comes from the config, else from the rest frame,
        else from the frame itself.

        :param frame_path: Frame to inspect.
        :param out_dir: Output directory.
        :param config: Pipeline tunables.
        :param g0_path: Optional rest frame.
        :return: Written files by stage name.
        """
        frame = read_image(frame_path)
        g0 = read_image(g0_path) if g0_path is not None else None
        if g0 is not None and g0.data.shape != frame.data.shape:
            raise ShapeMismatchError(
                f"Frame is {frame.width}x{frame.height} but g0 is {g0.width}x{g0.height}"
            )

        mask = self.reconstruct_command.resolve_mask(g0 if g0 is not None else frame, config)
        threshold = (
            self.reconstruct_command.resolve_threshold(g0, mask, config)
            if g0 is not None
            else config.threshold
        )
        stages = self.reconstruct_command.greyscale_stages(frame, mask, config, threshold)

        out_dir = Path(out_dir)
        written = {
            "masked": write_image(out_dir / "masked.png", stages.masked),
            "binary": write_image(out_dir / "binary.png", stages.binary),
            "ratio": write_image(out_dir / "ratio.png", greyscale_to_image(stages.ratio)),
            "smoothed": write_image(out_dir / "smoothed.png", greyscale_to_image(stages.smoothed)),
        }

        if g0 is not None:
            g0_field = self.reconstruct_command.greyscale_stages(g0, mask, config, threshold).smoothed
            g_d = self.sfs_service.delta_greyscale(
                stages.smoothed, g0_field, config.reconstruction().clamp_negative_gd
            )
            g_dn = self.sfs_service.normalize(g_d)
            g_h = self.sfs_service.shape_weighted_greyscale(g_dn, g0_field)
            written["delta"] = write_image(out_dir / "delta.png", greyscale_to_image(g_dn))
            written["shape"] = write_image(
                out_dir / "shape.png", greyscale_to_image(self.sfs_service.normalize(g_h))
            )

        for name, path in written.items():
            logger.info(f"Wrote {name} stage to {path}")
        return written
