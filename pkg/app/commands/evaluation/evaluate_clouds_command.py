from pathlib import Path
from typing import Union
from app.core.logging_config import get_logger
from app.schemas.point_cloud import EvalReport
from app.services.point_cloud_service import PointCloudService
from app.utils.point_cloud_io import read_cloud

logger = get_logger("tacshade.evaluate")


class EvaluateCloudsCommand:
    """Command to score a reconstructed cloud against a ground-truth cloud."""

    def __init__(self):
        self.point_cloud_service = PointCloudService()

    def execute(
        self,
        recon_path: Union[str, Path],
        truth_path: Union[str, Path],
        h_max: float,
    ) -> EvalReport:
        """
        Execute the command.

        :param recon_path: Reconstructed cloud (PLY or CSV).
        :param truth_path: Ground-truth cloud (PLY or CSV).
        :param h_max: Maximum contact depth in mm.
        :return: EvalReport with ME, Chamfer distance and similarity degree.
        """
        recon = read_cloud(recon_path)
        truth = read_cloud(truth_path)
        report = self.point_cloud_service.evaluate(recon, truth, h_max)
        logger.info(
            f"Evaluated {len(recon)} points against {len(truth)}: "
            f"ME={report.me_mm:.4f} d_CD={report.chamfer_mm:.4f} SD={report.sd_percent:.2f}"
        )
        return report
