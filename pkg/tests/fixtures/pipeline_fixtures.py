from pathlib import Path
import pytest
from app.commands.reconstruction import ReconstructFrameCommand
from app.commands.simulation import SimulateContactCommand
from app.schemas.pipeline import PipelineConfig
from app.services.sfs_service import SfsService


@pytest.fixture
def sfs_service():
    """SfsService instance."""
    return SfsService()


@pytest.fixture
def pipeline_config():
    """Default pipeline configuration."""
    return PipelineConfig()


@pytest.fixture
def reconstruct_command():
    """ReconstructFrameCommand instance."""
    return ReconstructFrameCommand()


@pytest.fixture
def write_contact(tmp_path, simulator_service, small_lattice, small_geometry, make_primitive):
    """Factory writing a simulated contact (frame.png, rest.png, truth.*) into tmp_path/name."""

    def _write(name: str, kind: str = "sphere", dimensions=(5.0,), depth: float = 1.5) -> Path:
        primitive = make_primitive(kind, dimensions, depth)
        frame, rest = simulator_service.make_frame(primitive, small_geometry, small_lattice)
        out_dir = tmp_path / name
        SimulateContactCommand().write(frame, rest, small_geometry, out_dir)
        return out_dir

    return _write


@pytest.fixture
def contact_config():
    """Pipeline config with the mask of the 320x240 test sensor."""
    return PipelineConfig(mask_center_u=160, mask_center_v=120, mask_radius=110)
