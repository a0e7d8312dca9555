from .evaluate_clouds_command import EvaluateCloudsCommand

__all__ = ["EvaluateCloudsCommand"]
