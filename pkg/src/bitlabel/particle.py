"""Particle-based labeling baselines with image-based sampling.

Particles live in the cell frame, where pixel ``(x, y)`` is the unit square
``[x, x+1] x [y, y+1]``. A candidate label covering pixels ``x0..x1`` is tested
with the closed box through its pixel centers, ``[x0+0.5, x1+0.5]``, so a
label that only touches a particle-bearing edge is not blocked.

``original`` samples the plain center-rule image and puts one particle at the
center of every occupied pixel; a label can then cover part of a mark that
misses the pixel centers. ``improved`` samples every pixel the mark touches and
puts particles on the corners of outline pixels plus a sparse interior
lattice, which is enough for any label at least ``W_min x H_min`` in size.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from .greedy import Prepared, prepare, run_greedy
from .model import LabelConfig, PixelRect, Placement, Scene
from .raster import occupancy_array

VARIANTS = ("original", "improved")


class ParticleGrid:
    """Uniform trellis grid bucketing particles by cell."""

    __slots__ = ("cell_size", "cells", "count")

    def __init__(self, cell_size: float):
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        self.cell_size = float(cell_size)
        self.cells: Dict[Tuple[int, int], List[Tuple[float, float]]] = {}
        self.count = 0

    @classmethod
    def build(cls, particles, cell_size: float) -> "ParticleGrid":
        grid = cls(cell_size)
        grid.extend(particles)
        return grid

    def insert(self, x: float, y: float) -> None:
        cs = self.cell_size
        key = (math.floor(x / cs), math.floor(y / cs))
        bucket = self.cells.get(key)
        if bucket is None:
            self.cells[key] = [(x, y)]
        else:
            bucket.append((x, y))
        self.count += 1

    def extend(self, particles) -> None:
        arr = np.asarray(particles, dtype=float).reshape(-1, 2)
        if not len(arr):
            return
        cs = self.cell_size
        cols = np.floor(arr[:, 0] / cs).astype(np.int64).tolist()
        rows = np.floor(arr[:, 1] / cs).astype(np.int64).tolist()
        cells = self.cells
        for c, r, p in zip(cols, rows, arr.tolist()):
            bucket = cells.get((c, r))
            if bucket is None:
                cells[(c, r)] = [tuple(p)]
            else:
                bucket.append(tuple(p))
        self.count += len(arr)

    def query(self, x0: float, y0: float, x1: float, y1: float) -> bool:
        """True if some particle lies in the closed box; visits only overlapping cells."""
        cs = self.cell_size
        cells = self.cells
        c0, c1 = math.floor(x0 / cs), math.floor(x1 / cs)
        r0, r1 = math.floor(y0 / cs), math.floor(y1 / cs)
        for r in range(r0, r1 + 1):
            for c in range(c0, c1 + 1):
                bucket = cells.get((c, r))
                if not bucket:
                    continue
                for px, py in bucket:
                    if x0 <= px <= x1 and y0 <= py <= y1:
                        return True
        return False

    def particles(self) -> List[Tuple[float, float]]:
        return [p for bucket in self.cells.values() for p in bucket]


def grid_build(particles, cell_size: float) -> ParticleGrid:
    return ParticleGrid.build(particles, cell_size)


def grid_query(grid: ParticleGrid, rect) -> bool:
    return grid.query(*rect)


def label_box(rect: PixelRect) -> Tuple[float, float, float, float]:
    """Closed query box through the pixel centers of a label rect.

    A one-pixel-thin side falls back to the full pixel extent, otherwise the
    box would have no room for a corner particle.
    """
    if rect.x0 == rect.x1:
        x0, x1 = rect.x0, rect.x1 + 1.0
    else:
        x0, x1 = rect.x0 + 0.5, rect.x1 + 0.5
    if rect.y0 == rect.y1:
        y0, y1 = rect.y0, rect.y1 + 1.0
    else:
        y0, y1 = rect.y0 + 0.5, rect.y1 + 0.5
    return (x0, y0, x1, y1)


def center_particles(occ: np.ndarray, offset: int = 0) -> np.ndarray:
    """One particle at the center of every occupied pixel."""
    ys, xs = np.nonzero(occ)
    return np.column_stack([xs - offset + 0.5, ys - offset + 0.5]).astype(float)


def outline_mask(occ: np.ndarray) -> np.ndarray:
    """Occupied pixels with a free 4-neighbour; the array edge counts as free."""
    inner = np.zeros_like(occ)
    inner[1:-1, 1:-1] = (
        occ[1:-1, 1:-1] & occ[:-2, 1:-1] & occ[2:, 1:-1] & occ[1:-1, :-2] & occ[1:-1, 2:]
    )
    return occ & ~inner


def mask_corners(mask: np.ndarray) -> np.ndarray:
    """Distinct corners ``(x, y)`` of the selected pixels of ``mask``, in mask coordinates."""
    h, w = mask.shape
    c = np.zeros((h + 1, w + 1), dtype=bool)
    c[:-1, :-1] |= mask
    c[1:, :-1] |= mask
    c[:-1, 1:] |= mask
    c[1:, 1:] |= mask
    ys, xs = np.nonzero(c)
    return np.column_stack([xs, ys])


def _lattice(shape, x_origin: int, y_origin: int, w_min: int, h_min: int) -> np.ndarray:
    # lattice anchored at the global origin of the scene frame
    lat = np.zeros(shape, dtype=bool)
    lat[(-y_origin) % h_min :: h_min, (-x_origin) % w_min :: w_min] = True
    return lat


def corner_particles(occ: np.ndarray, w_min: int, h_min: int, offset: int = 0) -> np.ndarray:
    """Outline corners plus interior corners on a ``w_min x h_min`` lattice."""
    if w_min < 1 or h_min < 1:
        raise ValueError("w_min and h_min must be >= 1")
    outline = outline_mask(occ)
    interior = occ & ~outline
    lattice = _lattice(occ.shape, -offset, -offset, w_min, h_min)
    return (mask_corners(outline | (interior & lattice)) - offset).astype(float)


def rect_corner_particles(rect: PixelRect, w_min: int, h_min: int) -> np.ndarray:
    """Corner particles of a placed label treated as a filled mark."""
    full = np.ones((rect.height, rect.width), dtype=bool)
    outline = outline_mask(full)
    lattice = _lattice(full.shape, rect.x0, rect.y0, w_min, h_min)
    sel = outline | (full & ~outline & lattice)
    return (mask_corners(sel) + (rect.x0, rect.y0)).astype(float)


def rect_center_particles(rect: PixelRect) -> np.ndarray:
    xs, ys = np.meshgrid(np.arange(rect.x0, rect.x1 + 1), np.arange(rect.y0, rect.y1 + 1))
    return np.column_stack([xs.ravel() + 0.5, ys.ravel() + 0.5])


def scene_occupancy(scene: Scene, config: Optional[LabelConfig] = None, prep: Optional[Prepared] = None, conservative: bool = False):
    """Occupancy of the avoided marks over the padded chart.

    ``conservative=False`` is the center-sampled image of the original method.
    """
    config = config or LabelConfig()
    prep = prep or prepare(scene, config)
    pad = prep.padding
    exclude = () if config.avoid_base_mark else prep.base_marks
    occ = occupancy_array(
        scene.width + 2 * pad, scene.height + 2 * pad, scene.marks, conservative, config.avoid, exclude, pad
    )
    return occ, pad


def sample_original(scene: Scene, config: Optional[LabelConfig] = None) -> np.ndarray:
    occ, pad = scene_occupancy(scene, config)
    return center_particles(occ, pad)


def sample_improved(scene: Scene, config: Optional[LabelConfig] = None, w_min: Optional[int] = None, h_min: Optional[int] = None) -> np.ndarray:
    config = config or LabelConfig()
    prep = prepare(scene, config)
    occ, pad = scene_occupancy(scene, config, prep, conservative=True)
    return corner_particles(occ, w_min or prep.min_label_width, h_min or prep.min_label_height, pad)


def place_labels_particle(
    scene: Scene,
    config: LabelConfig,
    variant: str = "improved",
    events: Optional[list] = None,
) -> List[Placement]:
    """Greedy placement with particle-grid overlap tests instead of a bitmap."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown particle variant {variant!r}")
    prep = prepare(scene, config)
    occ, pad = scene_occupancy(scene, config, prep, conservative=(variant == "improved"))
    w_min, h_min = prep.min_label_width, prep.min_label_height
    if variant == "original":
        particles = center_particles(occ, pad)
    else:
        particles = corner_particles(occ, w_min, h_min, pad)
    cell = max((max(it.width, it.height) for it in prep.order), default=1)
    grid = ParticleGrid.build(particles, cell)

    def is_free(r: PixelRect) -> bool:
        return not grid.query(*label_box(r))

    def occupy(r: PixelRect) -> None:
        if variant == "original":
            grid.extend(rect_center_particles(r))
        else:
            grid.extend(rect_corner_particles(r, w_min, h_min))

    return run_greedy(prep, is_free, occupy, events)

