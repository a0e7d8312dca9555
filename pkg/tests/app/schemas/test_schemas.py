import numpy as np
import pytest
from pydantic import ValidationError
from app.schemas.geometry import HeightField, LambertianModel, SensorGeometry
from app.schemas.image import BinaryImage, CircularMask, GreyscaleField, RasterImage, ValueRange
from app.schemas.pipeline import PipelineConfig
from app.schemas.point_cloud import EvalReport, PointCloud, RigidTransform
from app.schemas.simulator import ContactPrimitive, PinLattice


class TestImageSchemas:
    """Test suite for the image grid models."""

    def test_raster_rejects_out_of_range_samples(self):
        """Test that a raster must hold 8-bit values."""
        with pytest.raises(ValidationError):
            RasterImage(data=np.array([[0, 300]]))

    def test_raster_data_is_read_only(self):
        """Test that stored arrays cannot be mutated in place."""
        image = RasterImage(data=np.zeros((2, 2), dtype=np.uint8))

        with pytest.raises(ValueError):
            image.data[0, 0] = 1

    def test_binary_rejects_other_values(self):
        """Test that a binary image holds only 0 and 1."""
        with pytest.raises(ValidationError):
            BinaryImage(data=np.array([[0, 2]], dtype=np.uint8))

    def test_greyscale_respects_declared_range(self):
        """Test that samples must fit the value range."""
        GreyscaleField(data=np.array([[-3.0, 4.0]]), value_range=ValueRange.SIGNED)

        with pytest.raises(ValidationError):
            GreyscaleField(data=np.array([[-3.0, 4.0]]))
        with pytest.raises(ValidationError):
            GreyscaleField(data=np.array([[0.5, 1.5]]), value_range=ValueRange.NORMALIZED)

    def test_mask_fits(self):
        """Test that a mask fits when its center lies on the image."""
        assert CircularMask(center_u=9, center_v=0, radius=50).fits(10, 5)
        assert not CircularMask(center_u=10, center_v=0, radius=1).fits(10, 5)


class TestGeometrySchemas:
    """Test suite for SensorGeometry and LambertianModel."""

    def test_default_pitch_puts_equator_on_mask_edge(self):
        """Test that pitch defaults to radius_r / mask radius."""
        geom = SensorGeometry(radius_r=20.0, mask=CircularMask(center_u=50, center_v=40, radius=40))

        x, y = geom.pixel_to_mm(np.array([90.0]), np.array([40.0]))

        assert geom.pitch == 0.5
        assert x.tolist() == [20.0] and y.tolist() == [0.0]

    def test_camera_axis_is_fixed(self):
        """Test that a tilted camera axis is rejected."""
        with pytest.raises(ValidationError):
            SensorGeometry(
                mask=CircularMask(center_u=1, center_v=1, radius=1), camera_axis=(0.0, 0.1, -1.0)
            )

    def test_lambertian_product_bound(self):
        """Test that I * rho above 1 is rejected."""
        with pytest.raises(ValidationError):
            LambertianModel(intensity_I=2.0, reflectance_rho=0.8)


class TestPointCloudSchemas:
    """Test suite for RigidTransform, PointCloud and EvalReport."""

    def test_rotation_must_be_orthonormal(self):
        """Test that a scaled matrix is not a rotation."""
        with pytest.raises(ValidationError):
            RigidTransform(rotation=2.0 * np.eye(3))

    def test_reflection_is_rejected(self):
        """Test that determinant -1 is rejected."""
        with pytest.raises(ValidationError):
            RigidTransform(rotation=np.diag([1.0, 1.0, -1.0]))

    def test_row_major_round_trip(self):
        """Test the 12-number layout used by manifests."""
        values = [0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 3.0]

        pose = RigidTransform.from_row_major(values)

        assert pose.to_row_major() == values
        assert pose.apply(np.array([[1.0, 0.0, 0.0]])).tolist() == [[1.0, 3.0, 3.0]]

    def test_row_major_needs_twelve_numbers(self):
        """Test that short rows are rejected."""
        with pytest.raises(ValueError):
            RigidTransform.from_row_major([1.0, 0.0, 0.0])

    def test_points_must_be_triples(self):
        """Test that an (N, 2) array is not a cloud."""
        with pytest.raises(ValidationError):
            PointCloud(points=np.zeros((4, 2)))

    def test_models_accept_nested_lists(self):
        """Test that plain lists are coerced to read-only float arrays."""
        cloud = PointCloud(points=[[0.0, 0.0, 0.0], [1, 2, 3]])
        pose = RigidTransform(rotation=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], translation=[1, 2, 3])

        assert cloud.points.dtype == np.float64 and cloud.points.shape == (2, 3)
        assert pose.apply(cloud.points).tolist() == [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]
        assert HeightField(data=[[0.5, 1.0]]).max_depth == 1.0
        assert GreyscaleField(data=[[0.0, 255.0]]).shape == (1, 2)
        assert RasterImage(data=[[0, 255]]).data.dtype == np.uint8
        assert BinaryImage(data=[[0, 1]]).to_raster().data.tolist() == [[0, 255]]

    def test_empty_cloud(self):
        """Test that the default cloud is empty with shape (0, 3)."""
        cloud = PointCloud()

        assert cloud.is_empty
        assert cloud.points.shape == (0, 3)

    def test_report_table(self):
        """Test the text layout of an evaluation report."""
        report = EvalReport(me_mm=0.12345, chamfer_mm=0.3, sd_percent=85.0, h_max_mm=2.0)

        assert report.to_table().splitlines() == [
            "ME (mm)   0.1235",
            "d_CD (mm) 0.3000",
            "SD (%)    85.00",
        ]


class TestPipelineConfig:
    """Test suite for PipelineConfig parsing."""

    @pytest.mark.parametrize(
        "value,expected", [(15, (15, 15)), ("21", (21, 21)), ("21x15", (21, 15)), ((5, 3), (5, 3))]
    )
    def test_window_forms(self, value, expected):
        """Test the accepted spellings of a window size."""
        assert PipelineConfig(window=value).window == expected

    def test_threshold_forms(self):
        """Test auto and numeric thresholds."""
        assert PipelineConfig(threshold="AUTO").threshold == "auto"
        assert PipelineConfig(threshold="128").threshold == 128

    def test_threshold_range(self):
        """Test that thresholds above 255 are rejected."""
        with pytest.raises(ValidationError):
            PipelineConfig(threshold=256)

    def test_mask_fields_go_together(self):
        """Test that a partial mask is rejected and a full one is built."""
        with pytest.raises(ValidationError):
            PipelineConfig(mask_center_u=10.0)

        config = PipelineConfig(mask_center_u=10.0, mask_center_v=12.0, mask_radius=5.0)

        assert config.mask() == CircularMask(center_u=10.0, center_v=12.0, radius=5.0)
        assert PipelineConfig().mask() is None

    def test_reconstruction_settings(self):
        """Test that the Newton settings are forwarded."""
        config = PipelineConfig(iterations=7, initialization="zero", clamp_gd=False)

        cfg = config.reconstruction()

        assert (cfg.iterations, cfg.initialization, cfg.clamp_negative_gd) == (7, "zero", False)


class TestSimulatorSchemas:
    """Test suite for ContactPrimitive and PinLattice."""

    @pytest.mark.parametrize(
        "kind,dimensions",
        [("sphere", (1.0, 2.0)), ("box", (3.0,)), ("cylinder", (0.0, 4.0)), ("crescent", (2.0, 5.0, 1.0))],
    )
    def test_bad_dimensions(self, kind, dimensions):
        """Test dimension counts, signs and the crescent overlap rule."""
        with pytest.raises(ValidationError):
            ContactPrimitive(kind=kind, dimensions=dimensions, indent_depth=1.0)

    def test_dimension_lookup(self):
        """Test that dimensions are addressed by name."""
        primitive = ContactPrimitive(kind="cylinder", dimensions=(3.0, 8.0), indent_depth=1.0)

        assert primitive.dimension("length") == 8.0

    def test_unknown_kind(self):
        """Test that only the four primitive kinds exist."""
        with pytest.raises(ValidationError):
            ContactPrimitive(kind="cone", dimensions=(1.0,), indent_depth=1.0)

    def test_pins_must_not_merge(self, small_field):
        """Test that pin_radius must stay below half the pitch."""
        with pytest.raises(ValidationError):
            PinLattice(width=320, height=240, pin_radius=7.0, pitch=14.0, field=small_field)
