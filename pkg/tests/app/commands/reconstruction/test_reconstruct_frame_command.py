import numpy as np
import pytest
from app.exceptions import ShapeMismatchError
from app.schemas.image import RasterImage
from app.services.point_cloud_service import PointCloudService
from app.utils.image_io import read_height
from app.utils.point_cloud_io import read_ply
from tests.fixtures.simulator_fixtures import FIVE_PRIMITIVES


class TestReconstructFrameCommand:
    """Test suite for ReconstructFrameCommand."""

    def test_rest_frame_against_itself_is_undeformed(
        self, reconstruct_command, simulator_service, small_lattice, pipeline_config
    ):
        """Test that frame = g0 gives zero height and points on the rest hemisphere."""
        rest = simulator_service.render_rest_frame(small_lattice)

        result = reconstruct_command.run(rest, rest, pipeline_config)

        assert np.all(result.height.data == 0.0)
        norms = np.linalg.norm(result.lift.cloud.points, axis=1)
        np.testing.assert_allclose(norms, pipeline_config.radius_mm, rtol=1e-6)
        assert result.summary.max_depth_mm == 0.0
        assert result.calibrated_alpha is None

    @pytest.mark.parametrize("kind,dimensions", FIVE_PRIMITIVES)
    def test_mean_error_below_indent_depth(
        self, reconstruct_command, write_contact, contact_config, tmp_path, kind, dimensions
    ):
        """Test that calibrated reconstructions of the five test objects stay close to the truth."""
        contact = write_contact(kind, kind, dimensions, 1.5)

        result = reconstruct_command.execute(
            contact / "frame.png", contact / "rest.png", tmp_path / "out", contact_config, 1.5
        )

        assert result.height.max_depth == pytest.approx(1.5)
        me = PointCloudService().mean_error(
            read_ply(tmp_path / "out" / "cloud.ply"), read_ply(contact / "truth.ply")
        )
        assert me < 1.5

    def test_ball_has_the_best_similarity(
        self, reconstruct_command, write_contact, contact_config, tmp_path
    ):
        """Test that the ball scores the highest SD of the five calibrated test objects."""
        scores = []
        for index, (kind, dimensions) in enumerate(FIVE_PRIMITIVES):
            contact = write_contact(f"{index}_{kind}", kind, dimensions, 1.5)
            out_dir = tmp_path / f"out_{index}"
            reconstruct_command.execute(
                contact / "frame.png", contact / "rest.png", out_dir, contact_config, 1.5
            )
            report = PointCloudService().evaluate(
                read_ply(out_dir / "cloud.ply"), read_ply(contact / "truth.ply"), 1.5
            )
            scores.append((report.sd_percent, kind))

        assert max(scores)[1] == "sphere"

    def test_execute_writes_cloud_and_height(
        self, reconstruct_command, write_contact, contact_config, tmp_path
    ):
        """Test the files written next to the returned result."""
        contact = write_contact("ball")

        result = reconstruct_command.execute(
            contact / "frame.png", contact / "rest.png", tmp_path / "out", contact_config
        )

        height = read_height(tmp_path / "out" / "height.tshf")
        np.testing.assert_allclose(height.data, result.height.data, rtol=1e-6, atol=1e-6)
        assert len(read_ply(tmp_path / "out" / "cloud.ply")) == result.summary.in_domain_pixels
        assert result.summary.skipped_pixels == result.lift.skipped

    def test_contact_is_deeper_than_surroundings(
        self, reconstruct_command, write_contact, contact_config, tmp_path
    ):
        """Test that the deepest reconstructed pixel lies near the pressed point."""
        contact = write_contact("ball", depth=2.0)

        result = reconstruct_command.execute(
            contact / "frame.png", contact / "rest.png", tmp_path / "out", contact_config
        )

        v, u = np.unravel_index(np.argmax(result.height.data), result.height.data.shape)
        assert np.hypot(u - 160, v - 120) < 40

    def test_frames_must_match(self, reconstruct_command, pipeline_config):
        """Test that frame and g0 of different sizes are rejected."""
        with pytest.raises(ShapeMismatchError):
            reconstruct_command.run(
                RasterImage(data=np.zeros((10, 10), dtype=np.uint8)),
                RasterImage(data=np.zeros((10, 12), dtype=np.uint8)),
                pipeline_config,
            )

    def test_auto_threshold_comes_from_rest_frame(
        self, reconstruct_command, simulator_service, small_lattice, pipeline_config
    ):
        """Test that auto mode resolves to a number taken from g0."""
        rest = simulator_service.render_rest_frame(small_lattice)
        mask = reconstruct_command.resolve_mask(rest, pipeline_config)

        threshold = reconstruct_command.resolve_threshold(rest, mask, pipeline_config)

        assert isinstance(threshold, int)
        assert 1 <= threshold <= 255
