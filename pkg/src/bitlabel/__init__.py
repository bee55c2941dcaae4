"""Label placement with a word-packed occupancy bitmap."""

from .bitmap import OccupancyBitmap
from .engine import ENGINES, place
from .model import AreaSeries, CandidatePosition, LabelConfig, LabelItem, Mark, PixelRect, Placement, Scene
from .scene_io import SceneError, parse_scene

__all__ = [
    "AreaSeries",
    "CandidatePosition",
    "ENGINES",
    "LabelConfig",
    "LabelItem",
    "Mark",
    "OccupancyBitmap",
    "PixelRect",
    "Placement",
    "Scene",
    "SceneError",
    "parse_scene",
    "place",
]
