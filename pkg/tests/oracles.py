"""Brute-force reference implementations used as test oracles.

Nothing here reuses the package's own geometry: occupancy is a plain numpy
boolean matrix and coverage is decided with shapely distances.
"""

from __future__ import annotations

import random
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import shapely
from shapely.geometry import LineString, Point, box

from bitlabel.model import LabelConfig, LabelItem, Mark, PixelRect, Scene


class BoolGrid:
    """Naive occupancy: one bool per pixel, updates clip silently."""

    def __init__(self, width: int, height: int):
        self.a = np.zeros((height, width), dtype=bool)

    def set_pixel(self, x, y):
        h, w = self.a.shape
        if 0 <= x < w and 0 <= y < h:
            self.a[y, x] = True

    def mark_range(self, y, x0, x1):
        h, w = self.a.shape
        if 0 <= y < h:
            self.a[y, max(x0, 0) : max(min(x1, w - 1) + 1, 0)] = True

    def mark_rect(self, x0, y0, x1, y1):
        for y in range(y0, y1 + 1):
            self.mark_range(y, x0, x1)

    def prefix(self) -> np.ndarray:
        p = np.zeros((self.a.shape[0] + 1, self.a.shape[1] + 1), dtype=np.int64)
        p[1:, 1:] = self.a.cumsum(0).cumsum(1)
        return p


def rect_any(prefix: np.ndarray, x0, y0, x1, y1):
    """Vectorized 'any pixel set' over clipped inclusive rects using a prefix-sum table."""
    h, w = prefix.shape[0] - 1, prefix.shape[1] - 1
    x0 = np.clip(x0, 0, w)
    y0 = np.clip(y0, 0, h)
    x1 = np.clip(np.asarray(x1) + 1, 0, w)
    y1 = np.clip(np.asarray(y1) + 1, 0, h)
    x1 = np.maximum(x1, x0)
    y1 = np.maximum(y1, y0)
    s = prefix[y1, x1] - prefix[y0, x1] - prefix[y1, x0] + prefix[y0, x0]
    return s > 0


def mark_geometry(m: Mark):
    """Shapely geometry and inflation radius of a mark (geometry grown by radius = the mark)."""
    if m.kind == "point":
        return Point(m.center), m.radius
    if m.kind == "polyline":
        pts = m.points if len(m.points) > 1 else [m.points[0], m.points[0]]
        return LineString(pts), m.stroke_width / 2.0
    if m.kind in ("rect", "textBox"):
        x0, y0, x1, y1 = m.rect
        g = box(min(x0, x1), min(y0, y1), max(x0, x1), max(y0, y1))
        return (g if m.filled else g.exterior), 0.0
    if m.kind == "areaBoundary":
        lines = []
        for line in (m.area.lower(), m.area.upper()):
            lines.append(LineString(line if len(line) > 1 else [line[0], line[0]]))
        return shapely.union_all(lines), 0.5
    raise ValueError(m.kind)


def oracle_occupancy(width: int, height: int, marks: Iterable[Mark], conservative=True) -> np.ndarray:
    """Per-pixel coverage by distance: pixel square (conservative) or pixel center within reach."""
    occ = np.zeros((height, width), dtype=bool)
    ys, xs = np.mgrid[0:height, 0:width]
    xs = xs.ravel().astype(float)
    ys = ys.ravel().astype(float)
    if conservative:
        probes = shapely.box(xs - 0.5, ys - 0.5, xs + 0.5, ys + 0.5)
    else:
        probes = shapely.points(xs, ys)
    for m in marks:
        if m.opacity <= 0:
            continue
        g, r = mark_geometry(m)
        hit = shapely.distance(probes, g) <= r
        occ |= hit.reshape(height, width)
    return occ


def label_region(r: PixelRect):
    """Closed continuous region covered by the pixels of a label rect."""
    return box(r.x0 - 0.5, r.y0 - 0.5, r.x1 + 0.5, r.y1 + 0.5)


def audit_overlaps(scene: Scene, placements, avoided: Sequence[Mark], pad: int = 0) -> List[str]:
    """Every way a placed label touches an avoided mark, another label, or leaves the padded chart."""
    problems = []
    placed = [p for p in placements if p.placed and p.rect is not None]
    rects = [p.rect for p in placed]
    for p in placed:
        r = p.rect
        if r.x0 < -pad or r.y0 < -pad or r.x1 > scene.width - 1 + pad or r.y1 > scene.height - 1 + pad:
            problems.append(f"{p.item_id} leaves the chart")
    # label vs label: pixel rects must be disjoint
    order = sorted(range(len(rects)), key=lambda i: rects[i].x0)
    for a_i, i in enumerate(order):
        for j in order[a_i + 1 :]:
            if rects[j].x0 > rects[i].x1:
                break
            if rects[i].intersects(rects[j]):
                problems.append(f"{placed[i].item_id} overlaps {placed[j].item_id}")
    if not placed or not avoided:
        return problems
    geoms, radii = zip(*(mark_geometry(m) for m in avoided if m.opacity > 0))
    radii = np.array(radii)
    tree = shapely.STRtree(list(geoms))
    regions = [label_region(r) for r in rects]
    li, gi = tree.query(regions, predicate="dwithin", distance=float(radii.max()) + 1e-9)
    if len(li):
        d = shapely.distance(np.array(regions, dtype=object)[li], np.array(geoms, dtype=object)[gi])
        for k in np.nonzero(d <= radii[gi])[0]:
            problems.append(f"{placed[li[k]].item_id} touches mark #{gi[k]}")
    return problems


def random_point_scene(rng: random.Random, width: int, height: int, n_points: int, n_lines: int, label=(12, 6)) -> Scene:
    """Random scatter with obstacle polylines; every point carries a label."""
    marks = []
    items = []
    for i in range(n_lines):
        k = rng.randint(2, 5)
        pts = [(rng.uniform(0, width - 1), rng.uniform(0, height - 1)) for _ in range(k)]
        marks.append(Mark("polyline", id=f"l{i}", group="lines", points=pts, stroke_width=rng.choice([1.0, 1.5, 2.0])))
    for i in range(n_points):
        c = (rng.uniform(0, width - 1), rng.uniform(0, height - 1))
        marks.append(Mark("point", id=f"p{i}", group="points", center=c, radius=rng.choice([0.0, 1.0, 1.5, 2.5])))
        w = rng.randint(label[0] // 2, label[0])
        items.append(LabelItem(id=f"t{i}", text="x" * max(1, w // 6), width=w, height=label[1], mark=f"p{i}"))
    return Scene(width, height, marks, items)


def witness_scene() -> Tuple[Scene, LabelConfig]:
    """A width-1 line whose stroke reaches 0.3 px into the row just below a point's bottom edge.

    The point's only candidate sits directly below it, so the label's top row
    shares a sliver of the line's stroke but none of the line's pixel centers.
    """
    from bitlabel.model import CandidatePosition

    marks = [
        Mark("polyline", id="rule", group="lines", points=[(0.0, 3.3), (40.0, 3.3)], stroke_width=1.0),
        Mark("point", id="p", group="points", center=(20.0, 2.0), radius=1.0),
    ]
    items = [LabelItem(id="lab", text="ab", width=10, height=5, mark="p")]
    scene = Scene(41, 20, marks, items)
    return scene, LabelConfig(positions=[CandidatePosition("bottom")])


WITNESS_DOC = {
    "width": 41,
    "height": 20,
    "marks": [
        {"kind": "polyline", "id": "rule", "group": "lines", "points": [[0, 3.3], [40, 3.3]], "strokeWidth": 1},
        {"kind": "point", "id": "p", "group": "points", "x": 20, "y": 2, "radius": 1},
    ],
    "items": [{"id": "lab", "text": "ab", "mark": "p", "width": 10, "height": 5}],
    "config": {"positions": [{"anchor": "bottom"}]},
}


def fit_scale_oracle(occ: np.ndarray, center, aspect: float, max_h: int) -> int:
    """Grow h one pixel at a time until the centered rect leaves the chart or hits a set pixel."""
    H, W = occ.shape
    h = 0
    while h < max_h:
        n = h + 1
        w = max(1, int(np.floor(n * aspect + 0.5)))
        x0 = center[0] - w // 2
        y0 = center[1] - n // 2
        if x0 < 0 or y0 < 0 or x0 + w > W or y0 + n > H:
            break
        if occ[y0 : y0 + n, x0 : x0 + w].any():
            break
        h = n
    return h


def interp_bounds(pairs, x: float) -> Optional[Tuple[float, float]]:
    """Boundaries at ``x`` by linear interpolation between neighbouring pairs."""
    xs = [p[0] for p in pairs]
    if x < xs[0] or x > xs[-1]:
        return None
    return float(np.interp(x, xs, [p[1] for p in pairs])), float(np.interp(x, xs, [p[2] for p in pairs]))
