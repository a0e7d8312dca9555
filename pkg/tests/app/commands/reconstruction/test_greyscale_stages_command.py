import numpy as np
from app.commands.reconstruction import GreyscaleStagesCommand
from app.utils.image_io import read_image


class TestGreyscaleStagesCommand:
    """Test suite for GreyscaleStagesCommand."""

    def test_stages_without_rest_frame(self, write_contact, contact_config, tmp_path):
        """Test the four frame-only stages."""
        contact = write_contact("ball")

        written = GreyscaleStagesCommand().execute(contact / "frame.png", tmp_path / "grey", contact_config)

        assert sorted(written) == ["binary", "masked", "ratio", "smoothed"]
        assert set(np.unique(read_image(written["binary"]).data)) <= {0, 255}

    def test_stages_with_rest_frame(self, write_contact, pipeline_config, tmp_path):
        """Test that a rest frame adds the variation and shape images."""
        contact = write_contact("ball")

        written = GreyscaleStagesCommand().execute(
            contact / "frame.png", tmp_path / "grey", pipeline_config, contact / "rest.png"
        )

        assert {"delta", "shape"} <= set(written)
        assert read_image(written["delta"]).data.shape == (240, 320)
