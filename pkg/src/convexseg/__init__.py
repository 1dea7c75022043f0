"""Two-phase image segmentation with a convex shape prior on level sets."""

from .admm import MODELS, AdmmConfig, SegResult, dice, run_segmentation
from .convexity import ConvexityReport, convexity_report, is_mask_convex, laplacian_violation
from .estimator import ConvexShapeSegmenter
from .exceptions import (
    AllBackgroundError,
    AllForegroundError,
    ConvexSegError,
    DegenerateClassError,
    EmptyLabelsError,
    EmptyObjectError,
    NonFiniteStateError,
)
from .forces import ForceConfig, LabelSet
from .sdf import mask_from_sdf, sdf_from_mask

__all__ = [
    "MODELS",
    "AdmmConfig",
    "AllBackgroundError",
    "AllForegroundError",
    "ConvexSegError",
    "ConvexShapeSegmenter",
    "ConvexityReport",
    "DegenerateClassError",
    "EmptyLabelsError",
    "EmptyObjectError",
    "ForceConfig",
    "LabelSet",
    "NonFiniteStateError",
    "SegResult",
    "convexity_report",
    "dice",
    "is_mask_convex",
    "laplacian_violation",
    "mask_from_sdf",
    "run_segmentation",
    "sdf_from_mask",
]
