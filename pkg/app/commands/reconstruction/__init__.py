from .reconstruct_frame_command import ReconstructFrameCommand, ReconstructionResult
from .greyscale_stages_command import GreyscaleStagesCommand

__all__ = ["ReconstructFrameCommand", "ReconstructionResult", "GreyscaleStagesCommand"]
