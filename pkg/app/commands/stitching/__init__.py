from .stitch_manifest_command import StitchManifestCommand, StitchResult

__all__ = ["StitchManifestCommand", "StitchResult"]
