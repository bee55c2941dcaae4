"""Labels for stacked area charts.

Each label is centered on the candidate pixel that admits the largest
label-shaped rectangle clear of every area boundary and earlier label.
``flood-fill`` scores every interior pixel; ``reduced-search`` only the
vertical runs between the boundary pairs; ``naive`` skips scoring and uses the
middle of the widest pair.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

from .bitmap import OccupancyBitmap
from .model import AreaSeries, CandidatePosition, LabelItem, PixelRect, Placement, Scene
from .raster import area_boundary_spans

METHODS = ("flood-fill", "reduced-search", "naive")
Pixel = Tuple[int, int]


def centered_rect(cx: int, cy: int, w: int, h: int) -> PixelRect:
    x0 = cx - w // 2
    y0 = cy - h // 2
    return PixelRect(x0, y0, x0 + w - 1, y0 + h - 1)


def rasterize_area_boundaries(b: OccupancyBitmap, areas: Sequence[AreaSeries]) -> None:
    """Mark the lower and upper boundary lines of every area (stroke width 1)."""
    if not areas:
        raise ValueError("no areas to rasterize")
    bounds = (0, 0, b.width - 1, b.height - 1)
    for area in areas:
        for y, x0, x1 in area_boundary_spans(area, True, bounds):
            b.mark_range(y, x0, x1)


def _fit_rect(center: Pixel, h: int, aspect: float) -> PixelRect:
    w = max(1, math.floor(h * aspect + 0.5))
    return centered_rect(center[0], center[1], w, h)


def fits(b: OccupancyBitmap, center: Pixel, h: int, aspect: float) -> bool:
    """Whether the height-``h`` rectangle of the given aspect is free and inside the chart.

    Rectangles grow monotonically with ``h``, which is what makes the binary
    search in :func:`fit_scale` valid.
    """
    if h <= 0:
        return True
    r = _fit_rect(center, h, aspect)
    if not r.inside(0, 0, b.width - 1, b.height - 1):
        return False
    return not b.rect_occupied(r.x0, r.y0, r.x1, r.y1)


def fit_scale(b: OccupancyBitmap, center: Pixel, aspect: float, max_h: int) -> int:
    """Largest height ``h <= max_h`` whose centered rectangle fits, by binary search."""
    if aspect <= 0:
        raise ValueError("aspect must be positive")
    lo, hi = 0, max(0, int(max_h))
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if fits(b, center, mid, aspect):
            lo = mid
        else:
            hi = mid - 1
    return lo


def _interp(pairs, x: float) -> Tuple[float, float]:
    # linear interpolation of both boundaries at x (x within the pair range)
    for (xa, la, ua), (xb, lb, ub) in zip(pairs[:-1], pairs[1:]):
        if xa <= x <= xb:
            t = (x - xa) / (xb - xa)
            return la + t * (lb - la), ua + t * (ub - ua)
    _, lo, hi = pairs[0]
    return lo, hi


def interior_pixels(area: AreaSeries) -> List[Pixel]:
    """Pixels whose center lies strictly between the two boundaries, ordered by (x, y)."""
    pairs = area.pairs
    out = []
    for x in range(math.ceil(pairs[0][0]), math.floor(pairs[-1][0]) + 1):
        lo, hi = _interp(pairs, x)
        y = math.floor(lo) + 1
        while y < hi:
            out.append((x, y))
            y += 1
    return out


def reduced_search_pixels(area: AreaSeries) -> List[Pixel]:
    """Pixels on the vertical run of every pair, endpoints included, ordered by (x, y)."""
    seen = set()
    for x, lo, hi in area.pairs:
        px = math.floor(x + 0.5)
        for y in range(math.ceil(lo), math.floor(hi) + 1):
            seen.add((px, y))
    return sorted(seen)


def contains(area: AreaSeries, px: int, py: int, strict: bool = False) -> bool:
    """Whether pixel center ``(px, py)`` lies in the area (closed unless ``strict``).

    Columns within half a pixel of the first or last pair count as that pair.
    """
    first, last = area.pairs[0][0], area.pairs[-1][0]
    if not first - 0.5 <= px <= last + 0.5:
        return False
    lo, hi = _interp(area.pairs, min(max(px, first), last))
    if strict:
        return lo < py < hi
    return lo <= py <= hi


def max_height(area: AreaSeries) -> int:
    """Pixel rows spanned by the area's bounding box."""
    top = min(lo for _, lo, _ in area.pairs)
    bottom = max(hi for _, _, hi in area.pairs)
    return max(0, math.floor(bottom) - math.ceil(top) + 1)


def best_center(b: OccupancyBitmap, pixels: Sequence[Pixel], aspect: float, max_h: int):
    """Highest-scoring candidate; ties go to the smallest x, then smallest y."""
    best, best_score = None, -1
    for p in sorted(pixels):
        s = fit_scale(b, p, aspect, max_h)
        if s > best_score:
            best, best_score = p, s
    return best, best_score


def naive_center(area: AreaSeries) -> Pixel:
    x, lo, hi = max(area.pairs, key=lambda p: p[2] - p[1])
    return math.floor(x + 0.5), math.floor((lo + hi) / 2.0 + 0.5)


def place_area_labels(
    scene: Scene,
    method: str = "reduced-search",
    items: Optional[Sequence[LabelItem]] = None,
    scores: Optional[Dict[str, int]] = None,
) -> List[Placement]:
    """Place one label per area, areas in input order.

    The score bitmap holds boundaries plus placed labels; the hard constraint
    only forbids overlapping earlier labels, so a label that cannot fit its
    area may spill over the boundary lines.
    """
    if method not in METHODS:
        raise ValueError(f"unknown area method {method!r}")
    if items is None:
        items = [it for it in scene.items if it.area is not None]
    by_area = {it.area: it for it in items}
    out: List[Placement] = []
    if not by_area:
        return out
    W, H = scene.width, scene.height
    middle = CandidatePosition("middle")

    if method == "naive":
        for area in scene.areas:
            item = by_area.get(area.id)
            if item is None:
                continue
            cx, cy = naive_center(area)
            out.append(Placement(item.id, "placed", centered_rect(cx, cy, item.width, item.height), middle))
        return out

    score_map = OccupancyBitmap(W, H)
    labels_only = OccupancyBitmap(W, H)
    rasterize_area_boundaries(score_map, scene.areas)
    for area in scene.areas:
        item = by_area.get(area.id)
        if item is None:
            continue
        pixels = interior_pixels(area) if method == "flood-fill" else reduced_search_pixels(area)
        pixels = [(x, y) for x, y in pixels if 0 <= x < W and 0 <= y < H]
        if not pixels:
            out.append(Placement(item.id, "omitted", reason="no candidate pixels"))
            continue
        center, score = best_center(score_map, pixels, item.width / item.height, max_height(area))
        if scores is not None:
            scores[item.id] = score
        rect = centered_rect(center[0], center[1], item.width, item.height)
        if not rect.inside(0, 0, W - 1, H - 1):
            out.append(Placement(item.id, "omitted", reason="label leaves the chart"))
            continue
        if labels_only.rect_occupied(*rect.as_tuple()):
            out.append(Placement(item.id, "omitted", reason="overlaps another label"))
            continue
        score_map.mark_rect(*rect.as_tuple())
        labels_only.mark_rect(*rect.as_tuple())
        out.append(Placement(item.id, "placed", rect, middle))
    return out
