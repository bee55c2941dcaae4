"""Engine dispatch: one entry point for every placement strategy."""

from __future__ import annotations

from typing import List, Optional

from .area import place_area_labels
from .bitmap import DEFAULT_WORD_BITS
from .greedy import place_labels_greedy
from .model import LabelConfig, Placement, Scene
from .particle import place_labels_particle

ENGINES = ("bitmap", "particle", "particle-improved")


def place(
    scene: Scene,
    config: LabelConfig,
    engine: str = "bitmap",
    word_bits: int = DEFAULT_WORD_BITS,
    events: Optional[list] = None,
    bitmap_out: Optional[list] = None,
) -> List[Placement]:
    """Place mark labels with ``engine``, then area labels with ``config.method``."""
    if engine == "bitmap":
        out = place_labels_greedy(scene, config, word_bits, events, bitmap_out)
    elif engine == "particle":
        out = place_labels_particle(scene, config, "original", events)
    elif engine == "particle-improved":
        out = place_labels_particle(scene, config, "improved", events)
    else:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    if any(it.area is not None for it in scene.items):
        out += place_area_labels(scene, config.method)
    return out
