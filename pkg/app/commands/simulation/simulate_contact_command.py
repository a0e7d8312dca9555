from pathlib import Path
from typing import Dict, Literal, Optional, Union
from app.constants.simulator import DEFAULT_SKIRT_SIGMA
from app.core.logging_config import get_logger
from app.schemas.geometry import SensorGeometry
from app.schemas.image import RasterImage
from app.schemas.simulator import ContactPrimitive, ExposureModel, PinLattice, SyntheticFrame
from app.services.sfs_service import SfsService
from app.services.simulator_service import SimulatorService
from app.utils.image_io import write_height, write_image
from app.utils.point_cloud_io import write_ply

logger = get_logger("tacshade.simulate")


class SimulateContactCommand:
    """Command to render a synthetic contact frame with its rest frame and ground truth."""

    def __init__(self):
        self.simulator_service = SimulatorService()
        self.sfs_service = SfsService()

    def execute(
        self,
        primitive: ContactPrimitive,
        lattice: PinLattice,
        geometry: SensorGeometry,
        out_dir: Union[str, Path],
        exposure: Optional[ExposureModel] = None,
        skirt_sigma: float = DEFAULT_SKIRT_SIGMA,
        image_format: Literal["png", "pgm"] = "png",
    ) -> Dict[str, Path]:
        """
        Execute the command.

        :param primitive: Object pressed into the skin.
        :param lattice: Pin lattice of the simulated sensor.
        :param geometry: Sensor geometry; its mask should be the lattice field.
        :param out_dir: Output directory.
        :param exposure: Pin shrink model.
        :param skirt_sigma: Gaussian skirt in pixels.
        :param image_format: png or pgm for the two frames.
        :return: Written files by name.
        """
        frame, rest = self.simulator_service.make_frame(
            primitive, geometry, lattice, exposure, skirt_sigma
        )
        return self.write(frame, rest, geometry, out_dir, image_format)

    def write(
        self,
        frame: SyntheticFrame,
        rest: RasterImage,
        geometry: SensorGeometry,
        out_dir: Union[str, Path],
        image_format: str = "png",
    ) -> Dict[str, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        truth_cloud = self.sfs_service.lift_to_hemisphere(frame.truth_height, geometry).cloud

        written = {
            "frame": write_image(out_dir / f"frame.{image_format}", frame.image),
            "rest": write_image(out_dir / f"rest.{image_format}", rest),
            "truth": write_height(out_dir / "truth.tshf", frame.truth_height),
            "truth_cloud": write_ply(out_dir / "truth.ply", truth_cloud),
        }
        meta_path = out_dir / "meta.json"
        meta_path.write_text(frame.meta.model_dump_json(indent=2) if frame.meta else "{}")
        written["meta"] = meta_path
        logger.info(
            f"Simulated contact (peak {frame.truth_height.max_depth:.3f} mm) into {out_dir}"
        )
        return written
