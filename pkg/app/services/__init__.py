from app.services.image_service import ImageService
from app.services.point_cloud_service import PointCloudService
from app.services.sfs_service import SfsService
from app.services.simulator_service import SimulatorService

__all__ = [
    "ImageService",
    "PointCloudService",
    "SfsService",
    "SimulatorService",
]
