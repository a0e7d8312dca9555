from typing import List, Sequence
import numpy as np
from scipy.spatial import cKDTree
from sklearn.cluster import KMeans
from app.constants.reconstruction import KMEANS_MAX_ITERATIONS
from app.core.logging_config import get_logger
from app.exceptions import (
    DegenerateClusterError,
    DomainError,
    EmptyPointCloudError,
    ShapeMismatchError,
)
from app.schemas.point_cloud import EvalReport, PointCloud, RigidTransform

logger = get_logger("tacshade.pointcloud")


class PointCloudService:
    """Contact extraction, quality metrics and large-area fusion."""

    def contact_cluster_mask(self, depths: np.ndarray) -> np.ndarray:
        """
        Split per-point depths into two clusters and flag the deeper one.

        1-D K-means with k=2 seeded at the minimum and maximum depth, run with
        Lloyd iterations until the assignment stops changing.

        :param depths: Depth of every point.
        :return: Boolean mask of the points in the deeper cluster.
        """
        depths = np.asarray(depths, dtype=np.float64).reshape(-1)
        if depths.size == 0:
            raise EmptyPointCloudError("Cannot cluster an empty point cloud")
        if depths.size == 1:
            return np.ones(1, dtype=bool)
        low, high = float(depths.min()), float(depths.max())
        if low == high:
            raise DegenerateClusterError(
                f"All {depths.size} depths equal {low}; no contact cluster to extract"
            )

        kmeans = KMeans(
            n_clusters=2,
            init=np.array([[low], [high]]),
            n_init=1,
            max_iter=KMEANS_MAX_ITERATIONS,
            tol=0.0,
            algorithm="lloyd",
        )
        labels = kmeans.fit_predict(depths.reshape(-1, 1))
        deeper = int(np.argmax(kmeans.cluster_centers_[:, 0]))
        mask = labels == deeper
        logger.debug(
            f"K-means split {depths.size} points: contact={int(mask.sum())} "
            f"after {kmeans.n_iter_} iterations"
        )
        return mask

    def extract_contact_cluster(self, cloud: PointCloud, depths: np.ndarray) -> PointCloud:
        """Keep the points of the deeper depth cluster."""
        if cloud.is_empty:
            raise EmptyPointCloudError("Cannot extract a contact cluster from an empty cloud")
        if len(depths) != len(cloud):
            raise ShapeMismatchError(f"{len(depths)} depths for {len(cloud)} points")
        mask = self.contact_cluster_mask(depths)
        return PointCloud(points=cloud.points[mask], frame=cloud.frame, transform=cloud.transform)

    def mean_error(self, recon: PointCloud, truth: PointCloud) -> float:
        """Mean distance from each reconstructed point to its nearest truth point."""
        self._check_non_empty(recon, truth)
        distances, _ = cKDTree(truth.points).query(recon.points, k=1)
        return float(np.mean(distances))

    def chamfer_distance(self, a: PointCloud, b: PointCloud) -> float:
        """Sum of the two directional mean nearest-neighbour distances."""
        return self.mean_error(a, b) + self.mean_error(b, a)

    def similarity_degree(self, d_cd: float, h_max: float) -> float:
        """100 * (1 - d_cd / h_max); negative when the distance exceeds the depth."""
        if h_max <= 0:
            raise DomainError(f"Maximum contact depth must be positive, got {h_max}")
        return 100.0 * (1.0 - d_cd / h_max)

    def evaluate(self, recon: PointCloud, truth: PointCloud, h_max: float) -> EvalReport:
        """
        Score a reconstruction against ground truth.

        :param recon: Reconstructed cloud.
        :param truth: Ground-truth cloud in the same frame.
        :param h_max: Maximum contact depth in mm.
        :return: ME, Chamfer distance and similarity degree.
        """
        me = self.mean_error(recon, truth)
        chamfer = self.chamfer_distance(recon, truth)
        sd = self.similarity_degree(chamfer, h_max)
        return EvalReport(me_mm=me, chamfer_mm=chamfer, sd_percent=sd, h_max_mm=h_max)

    def stitch(
        self, clouds: Sequence[PointCloud], poses: Sequence[RigidTransform]
    ) -> PointCloud:
        """Map every cloud into the world frame with its pose and concatenate in order."""
        if len(clouds) != len(poses):
            raise ShapeMismatchError(f"{len(clouds)} clouds but {len(poses)} poses")
        parts: List[np.ndarray] = [
            pose.apply(cloud.points) for cloud, pose in zip(clouds, poses)
        ]
        points = np.concatenate(parts, axis=0) if parts else np.zeros((0, 3))
        return PointCloud(points=points, frame="world")

    def smooth_z(self, cloud: PointCloud, radius: float) -> PointCloud:
        """
        Replace each z by the mean z of the points within radius in x-y.

        Every point counts itself as a neighbour; x and y are unchanged.
        """
        if radius <= 0:
            raise DomainError(f"Smoothing radius must be positive, got {radius}")
        if cloud.is_empty:
            return cloud

        xy = cloud.points[:, :2]
        z = cloud.points[:, 2]
        neighbours = cKDTree(xy).query_ball_point(xy, r=radius, return_sorted=True)
        counts = np.fromiter((len(n) for n in neighbours), dtype=np.int64, count=len(neighbours))
        flat = np.concatenate([np.asarray(n, dtype=np.int64) for n in neighbours])
        offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
        smoothed = cloud.points.copy()
        smoothed[:, 2] = np.add.reduceat(z[flat], offsets) / counts
        return PointCloud(points=smoothed, frame=cloud.frame, transform=cloud.transform)

    @staticmethod
    def _check_non_empty(*clouds: PointCloud) -> None:
        for cloud in clouds:
            if cloud.is_empty:
                raise EmptyPointCloudError("Point cloud metrics need at least one point")
