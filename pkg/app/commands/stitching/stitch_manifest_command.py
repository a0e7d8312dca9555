import csv
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from time import perf_counter
from typing import List, NamedTuple, Optional, Union
from app.commands.reconstruction.reconstruct_frame_command import ReconstructFrameCommand
from app.constants.reconstruction import SmoothOrder
from app.core.logging_config import get_logger
from app.exceptions import InvalidInputError, ManifestError, TacShadeError, TacShadeIOError
from app.schemas.pipeline import ManifestRow, PipelineConfig
from app.schemas.point_cloud import PointCloud
from app.services.point_cloud_service import PointCloudService
from app.utils.image_io import read_image
from app.utils.manifest import read_manifest
from app.utils.point_cloud_io import write_ply

logger = get_logger("tacshade.stitch")


class RowTiming(NamedTuple):
    """Reconstruction cost of one manifest row."""

    row_index: int
    frame: Path
    wall_time_ms: float
    points: int


class StitchResult(NamedTuple):
    """Fused cloud plus the per-row timings in manifest order."""

    cloud: PointCloud
    timings: List[RowTiming]


class StitchManifestCommand:
    """Command to reconstruct every manifest contact and fuse them into one world-frame cloud."""

    def __init__(self, threads: int = 1):
        self.threads = max(1, threads)
        self.reconstruct_command = ReconstructFrameCommand()
        self.point_cloud_service = PointCloudService()

    def execute(
        self,
        manifest_path: Union[str, Path],
        out_dir: Union[str, Path],
        config: PipelineConfig,
        default_g0: Optional[Union[str, Path]] = None,
    ) -> StitchResult:
        """
        Execute the command.

        Rows may be reconstructed in parallel; clusters are fused by a single
        writer in manifest order, so the output does not depend on the
        thread count.

        :param manifest_path: Manifest CSV.
        :param out_dir: Output directory for fused.ply and timing.csv.
        :param config: Pipeline tunables.
        :param default_g0: Rest frame for rows without a g0 entry.
        :return: StitchResult with the fused cloud and per-row timings.
        """
        manifest = read_manifest(manifest_path, default_g0)
        if not manifest.rows:
            raise InvalidInputError(f"Manifest {manifest_path} has no rows")
        logger.info(f"Stitching {len(manifest.rows)} contacts with {self.threads} thread(s)")

        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            futures = [
                executor.submit(self._process_row, index, row, config)
                for index, row in enumerate(manifest.rows)
            ]
            # Results are collected in submission order; the first failing row raises
            outcomes = [future.result() for future in futures]

        clusters = [cluster for cluster, _ in outcomes]
        timings = [timing for _, timing in outcomes]
        radius = config.smoothing_radius_mm

        if radius > 0 and config.smooth_order == SmoothOrder.BEFORE:
            clusters = [self.point_cloud_service.smooth_z(c, radius) for c in clusters]
        fused = self.point_cloud_service.stitch(clusters, [row.pose for row in manifest.rows])
        if radius > 0 and config.smooth_order == SmoothOrder.AFTER:
            fused = self.point_cloud_service.smooth_z(fused, radius)

        out_dir = Path(out_dir)
        write_ply(out_dir / "fused.ply", fused)
        self._write_timings(out_dir / "timing.csv", timings)
        logger.info(f"Wrote {len(fused)} fused points to {out_dir / 'fused.ply'}")
        return StitchResult(cloud=fused, timings=timings)

    def _process_row(self, index: int, row: ManifestRow, config: PipelineConfig):
        started = perf_counter()
        try:
            frame = read_image(row.frame)
            g0 = read_image(row.g0)
            depth = row.depth_mm if row.depth_mm > 0 else None
            result = self.reconstruct_command.run(frame, g0, config, depth)
            cluster = self.point_cloud_service.extract_contact_cluster(
                result.lift.cloud, result.lift.depths
            )
        except (TacShadeIOError, OSError) as e:
            raise TacShadeIOError(f"Manifest row {index}: {e}") from e
        except (TacShadeError, ValueError) as e:
            raise ManifestError(index, str(e)) from e

        wall_ms = (perf_counter() - started) * 1000.0
        logger.info(f"Row {index}: {len(cluster)} contact points in {wall_ms:.1f} ms")
        return cluster, RowTiming(
            row_index=index, frame=row.frame, wall_time_ms=wall_ms, points=len(cluster)
        )

    @staticmethod
    def _write_timings(path: Path, timings: List[RowTiming]) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["row", "frame", "wall_ms", "points"])
            for timing in timings:
                writer.writerow(
                    [timing.row_index, str(timing.frame), f"{timing.wall_time_ms:.1f}", timing.points]
                )
