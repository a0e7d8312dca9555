import statistics
import pytest
from app.commands.reconstruction import ReconstructFrameCommand
from app.schemas.geometry import SensorGeometry
from app.schemas.image import CircularMask
from app.schemas.pipeline import PipelineConfig
from app.schemas.simulator import ContactPrimitive, PinLattice
from app.services.simulator_service import SimulatorService


@pytest.mark.benchmark
def test_full_size_frame_reconstructs_within_budget():
    """Test the median wall time of five 640x480 reconstructions at default settings."""
    field = CircularMask(center_u=320, center_v=240, radius=230)
    primitive = ContactPrimitive(kind="sphere", dimensions=(8.0,), indent_depth=2.0)
    frame, rest = SimulatorService().make_frame(
        primitive, SensorGeometry(mask=field), PinLattice(field=field)
    )
    command = ReconstructFrameCommand()

    times = [
        command.run(frame.image, rest, PipelineConfig()).summary.wall_time_ms for _ in range(5)
    ]

    assert statistics.median(times) <= 1800.0
