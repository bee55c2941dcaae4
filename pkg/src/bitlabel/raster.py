"""Rasterization of marks onto occupancy bitmaps.

Two coverage rules are supported. The conservative rule (default) marks every
pixel whose closed unit square touches the mark geometry, so a label that
avoids the marked pixels cannot touch the mark. The center rule marks pixels
whose center lies inside the geometry; it is what a plain image rasterizer
produces and is kept for the original particle baseline.

Every shape is a convex piece (disc, capsule, rectangle), so its pixels in a
row form one interval. Spans are estimated analytically and the two ends are
then settled with the exact per-pixel predicate.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .bitmap import OccupancyBitmap
from .model import Mark, PixelRect, Point

Span = Tuple[int, int, int]  # (y, x0, x1)
Bounds = Tuple[int, int, int, int]  # inclusive x0, y0, x1, y1

_HALF_DIAG = math.sqrt(0.5) + 1e-6
_EPS = 1e-9


def _point_box_d2(px, py, x0, y0, x1, y1):
    dx = x0 - px if px < x0 else (px - x1 if px > x1 else 0.0)
    dy = y0 - py if py < y0 else (py - y1 if py > y1 else 0.0)
    return dx * dx + dy * dy


def _point_seg_d2(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        ex, ey = px - ax, py - ay
        return ex * ex + ey * ey
    t = ((px - ax) * dx + (py - ay) * dy) / l2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    ex = px - (ax + t * dx)
    ey = py - (ay + t * dy)
    return ex * ex + ey * ey


def _seg_hits_box(ax, ay, bx, by, x0, y0, x1, y1):
    # Liang-Barsky clip of the segment against the closed box
    t0, t1 = 0.0, 1.0
    dx, dy = bx - ax, by - ay
    for p, q in ((-dx, ax - x0), (dx, x1 - ax), (-dy, ay - y0), (dy, y1 - ay)):
        if p == 0.0:
            if q < 0.0:
                return False
        else:
            r = q / p
            if p < 0.0:
                if r > t1:
                    return False
                if r > t0:
                    t0 = r
            else:
                if r < t0:
                    return False
                if r < t1:
                    t1 = r
    return True


def seg_box_d2(ax, ay, bx, by, x0, y0, x1, y1) -> float:
    """Squared distance between segment AB and the closed box."""
    if _seg_hits_box(ax, ay, bx, by, x0, y0, x1, y1):
        return 0.0
    d = min(_point_box_d2(ax, ay, x0, y0, x1, y1), _point_box_d2(bx, by, x0, y0, x1, y1))
    for cx, cy in ((x0, y0), (x1, y0), (x0, y1), (x1, y1)):
        d = min(d, _point_seg_d2(cx, cy, ax, ay, bx, by))
    return d


def pixel_hits_segment(x: int, y: int, a: Point, b: Point, half_width: float, conservative=True) -> bool:
    """Per-pixel coverage predicate for a round-capped stroke from ``a`` to ``b``."""
    r2 = half_width * half_width
    if conservative:
        return seg_box_d2(a[0], a[1], b[0], b[1], x - 0.5, y - 0.5, x + 0.5, y + 0.5) <= r2
    return _point_seg_d2(x, y, a[0], a[1], b[0], b[1]) <= r2


def pixel_hits_disc(x: int, y: int, center: Point, radius: float, conservative=True) -> bool:
    cx, cy = center
    if conservative:
        return _point_box_d2(cx, cy, x - 0.5, y - 0.5, x + 0.5, y + 0.5) <= radius * radius
    return (x - cx) ** 2 + (y - cy) ** 2 <= radius * radius


def _linear_interval(c0, c1, lo, hi, x_lo, x_hi):
    """Restrict [x_lo, x_hi] to x with lo <= c0 + c1*x <= hi."""
    if c1 == 0.0:
        if lo <= c0 <= hi:
            return x_lo, x_hi
        return None
    a = (lo - c0) / c1
    b = (hi - c0) / c1
    if a > b:
        a, b = b, a
    x_lo = max(x_lo, a)
    x_hi = min(x_hi, b)
    if x_lo > x_hi:
        return None
    return x_lo, x_hi


def _disc_row(cx, cy, r, y):
    dy = y - cy
    if dy * dy > r * r:
        return None
    h = math.sqrt(r * r - dy * dy)
    return cx - h, cx + h


def _capsule_row(ax, ay, bx, by, r, y):
    """Continuous x-extent of a capsule on the horizontal line at height ``y``."""
    parts = [p for p in (_disc_row(ax, ay, r, y), _disc_row(bx, by, r, y)) if p is not None]
    dx, dy = bx - ax, by - ay
    l2 = dx * dx + dy * dy
    if l2 > 0.0:
        length = math.sqrt(l2)
        inf = float("inf")
        # projection parameter t in [0, 1]
        # solved in u = x - ax, then shifted back
        iv = _linear_interval((y - ay) * dy / l2, dx / l2, 0.0, 1.0, -inf, inf)
        if iv is not None:
            # signed perpendicular distance within [-r, r]
            iv = _linear_interval(-(y - ay) * dx / length, dy / length, -r, r, iv[0], iv[1])
        if iv is not None:
            parts.append((iv[0] + ax, iv[1] + ax))
    if not parts:
        return None
    return min(p[0] for p in parts), max(p[1] for p in parts)


def _settle(lo: int, hi: int, d2, r2: float) -> Optional[Tuple[int, int]]:
    """Shrink the superset ``[lo, hi]`` to the exact run where ``d2(x) <= r2``.

    ``d2`` is convex along a row (distance between convex sets under
    translation), so wide rows use a ternary search for an inside pixel and
    binary searches for the two edges.
    """
    if hi - lo <= 8:
        while lo <= hi and d2(lo) > r2:
            lo += 1
        while hi >= lo and d2(hi) > r2:
            hi -= 1
        return (lo, hi) if lo <= hi else None
    a, b = lo, hi
    while b - a > 2:
        m1 = a + (b - a) // 3
        m2 = b - (b - a) // 3
        if d2(m1) <= d2(m2):
            b = m2
        else:
            a = m1
    mid = min(range(a, b + 1), key=d2)
    if d2(mid) > r2:
        return None
    # first inside pixel in [lo, mid]
    a, b = lo, mid
    while a < b:
        m = (a + b) // 2
        if d2(m) <= r2:
            b = m
        else:
            a = m + 1
    left = a
    a, b = mid, hi
    while a < b:
        m = (a + b + 1) // 2
        if d2(m) <= r2:
            a = m
        else:
            b = m - 1
    return left, a


def _row_range(lo: float, hi: float, bounds: Optional[Bounds]):
    y0 = math.ceil(lo)
    y1 = math.floor(hi)
    if bounds is not None:
        y0 = max(y0, bounds[1])
        y1 = min(y1, bounds[3])
    return y0, y1


def _clip_span(span, bounds):
    if span is None:
        return None
    lo, hi = span
    if bounds is not None:
        lo = max(lo, bounds[0])
        hi = min(hi, bounds[2])
        if lo > hi:
            return None
    return lo, hi


def disc_spans(center: Point, radius: float, conservative=True, bounds: Optional[Bounds] = None) -> Iterator[Span]:
    cx, cy = center
    r2 = radius * radius
    pad = 0.5 if conservative else 0.0
    grow = _HALF_DIAG if conservative else _EPS
    y0, y1 = _row_range(cy - radius - pad - _EPS, cy + radius + pad + _EPS, bounds)
    for y in range(y0, y1 + 1):
        row = _disc_row(cx, cy, radius + grow, y)
        if row is None:
            continue
        if conservative:
            d2 = lambda x, y=y: _point_box_d2(cx, cy, x - 0.5, y - 0.5, x + 0.5, y + 0.5)
        else:
            d2 = lambda x, y=y: (x - cx) ** 2 + (y - cy) ** 2
        span = _settle(math.ceil(row[0]), math.floor(row[1]), d2, r2)
        # settle against the full row before clipping so chart edges never bias it
        span = _clip_span(span, bounds)
        if span is not None:
            yield (y, span[0], span[1])


def _convex_hull(pts):
    """Counter-clockwise hull of a few points (monotone chain), duplicates dropped."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _inflated_rows(vx, vy, r, ys):
    """Per-row x-extent of a convex polygon grown by a disc of radius ``r``.

    The grown polygon is the union of discs at the vertices and slabs along
    the edges, so each row's extent is the hull of those pieces. Empty rows
    come back as ``(inf, -inf)``.
    """
    import numpy as np

    inf = np.inf
    Y = ys[None, :]
    dyv = Y - vy[:, None]
    h2 = r * r - dyv * dyv
    ok = h2 >= 0.0
    h = np.sqrt(np.where(ok, h2, 0.0))
    lo = np.where(ok, vx[:, None] - h, inf).min(axis=0)
    hi = np.where(ok, vx[:, None] + h, -inf).max(axis=0)
    n = len(vx)
    if n < 2:
        return lo, hi
    ax, ay = vx, vy
    ex = np.roll(vx, -1) - vx
    ey = np.roll(vy, -1) - vy
    if n == 2:
        ax, ay, ex, ey = ax[:1], ay[:1], ex[:1], ey[:1]
    l2 = ex * ex + ey * ey
    keep = l2 > 0.0
    ax, ay, ex, ey, l2 = ax[keep], ay[keep], ex[keep], ey[keep], l2[keep]
    if len(ax) == 0:
        return lo, hi
    length = np.sqrt(l2)
    ax_, ay_, ex_, ey_, l2_, len_ = (v[:, None] for v in (ax, ay, ex, ey, l2, length))
    w = (Y - ay_)
    with np.errstate(divide="ignore", invalid="ignore"):
        # projection onto the edge stays within [0, l2]
        t0 = ax_ + (0.0 - w * ey_) / ex_
        t1 = ax_ + (l2_ - w * ey_) / ex_
        tin = (w * ey_ >= 0.0) & (w * ey_ <= l2_)
        t_lo = np.where(ex_ != 0.0, np.minimum(t0, t1), np.where(tin, -inf, inf))
        t_hi = np.where(ex_ != 0.0, np.maximum(t0, t1), np.where(tin, inf, -inf))
        # perpendicular distance stays within [-r, r]
        p0 = ax_ + (w * ex_ - r * len_) / ey_
        p1 = ax_ + (w * ex_ + r * len_) / ey_
        pin = np.abs(w * ex_) <= r * len_
        p_lo = np.where(ey_ != 0.0, np.minimum(p0, p1), np.where(pin, -inf, inf))
        p_hi = np.where(ey_ != 0.0, np.maximum(p0, p1), np.where(pin, inf, -inf))
    s_lo = np.maximum(t_lo, p_lo)
    s_hi = np.minimum(t_hi, p_hi)
    empty = s_lo > s_hi
    lo = np.minimum(lo, np.where(empty, inf, s_lo).min(axis=0))
    hi = np.maximum(hi, np.where(empty, -inf, s_hi).max(axis=0))
    return lo, hi


_VEC_MIN_ROWS = 12


def _hull_spans(verts, r, pred, bounds, ys_lo, ys_hi) -> Iterator[Span]:
    """Exact spans of ``verts`` grown by ``r`` under the pixel predicate ``pred``.

    Rows are bracketed by a slightly grown and a slightly shrunk analytic
    extent; only pixels between the two brackets are tested one by one,
    which keeps float rounding from ever deciding coverage.
    """
    import numpy as np

    y0, y1 = _row_range(ys_lo, ys_hi, bounds)
    if y0 > y1:
        return
    ys = np.arange(y0, y1 + 1, dtype=float)
    vx = np.array([v[0] for v in verts], dtype=float)
    vy = np.array([v[1] for v in verts], dtype=float)
    scale = 1.0 + float(np.abs(vx).max() + np.abs(vy).max() + r)
    eps = 1e-9 * scale
    lo_o, hi_o = _inflated_rows(vx, vy, r + eps, ys)
    lo_i, hi_i = _inflated_rows(vx, vy, max(r - eps, 0.0), ys)
    fin_o = np.isfinite(lo_o)
    lo_o = np.where(fin_o, np.ceil(lo_o - eps), 1).astype(np.int64).tolist()
    hi_o = np.where(fin_o, np.floor(hi_o + eps), 0).astype(np.int64).tolist()
    fin_i = np.isfinite(lo_i) & (hi_i - lo_i > 2 * eps)
    lo_i = np.where(fin_i, np.ceil(lo_i + eps), 1).astype(np.int64).tolist()
    hi_i = np.where(fin_i, np.floor(hi_i - eps), 0).astype(np.int64).tolist()
    for k, y in enumerate(range(y0, y1 + 1)):
        a, b = lo_o[k], hi_o[k]
        if a > b:
            continue
        ia, ib = lo_i[k], hi_i[k]
        if ia > ib:
            # no pixel is certainly inside: scan the bracket from both ends
            while a <= b and not pred(a, y):
                a += 1
            if a > b:
                continue
            while b > a and not pred(b, y):
                b -= 1
        else:
            while a < ia and not pred(a, y):
                a += 1
            while b > ib and not pred(b, y):
                b -= 1
        span = _clip_span((a, b), bounds)
        if span is not None:
            yield (y, span[0], span[1])


def segment_spans(a: Point, b: Point, half_width: float, conservative=True, bounds: Optional[Bounds] = None) -> Iterator[Span]:
    ax, ay = a
    bx, by = b
    r2 = half_width * half_width
    pad = 0.5 if conservative else 0.0
    lo_y = min(ay, by) - half_width - pad - _EPS
    hi_y = max(ay, by) + half_width + pad + _EPS
    if hi_y - lo_y >= _VEC_MIN_ROWS:
        if conservative:
            pred = lambda x, y: seg_box_d2(ax, ay, bx, by, x - 0.5, y - 0.5, x + 0.5, y + 0.5) <= r2
            verts = _convex_hull([(px + sx, py + sy) for px, py in (a, b) for sx in (-0.5, 0.5) for sy in (-0.5, 0.5)])
        else:
            pred = lambda x, y: _point_seg_d2(x, y, ax, ay, bx, by) <= r2
            verts = [a] if a == b else [a, b]
        yield from _hull_spans(verts, half_width, pred, bounds, lo_y, hi_y)
        return
    grow = _HALF_DIAG if conservative else _EPS
    y0, y1 = _row_range(lo_y, hi_y, bounds)
    for y in range(y0, y1 + 1):
        row = _capsule_row(ax, ay, bx, by, half_width + grow, y)
        if row is None:
            continue
        if conservative:
            d2 = lambda x, y=y: seg_box_d2(ax, ay, bx, by, x - 0.5, y - 0.5, x + 0.5, y + 0.5)
        else:
            d2 = lambda x, y=y: _point_seg_d2(x, y, ax, ay, bx, by)
        span = _settle(math.ceil(row[0]), math.floor(row[1]), d2, r2)
        span = _clip_span(span, bounds)
        if span is not None:
            yield (y, span[0], span[1])


def polyline_spans(vertices: Sequence[Point], stroke_width: float, conservative=True, bounds=None) -> Iterator[Span]:
    if len(vertices) < 2:
        raise ValueError("polyline needs at least 2 vertices")
    hw = stroke_width / 2.0
    for a, b in zip(vertices[:-1], vertices[1:]):
        yield from segment_spans(a, b, hw, conservative, bounds)


def rect_spans(rect, filled=True, conservative=True, bounds=None) -> Iterator[Span]:
    """Spans of an axis-aligned rect ``(x0, y0, x1, y1)`` in continuous coordinates."""
    x0, y0, x1, y1 = rect
    if x0 > x1:
        x0, x1 = x1, x0
    if y0 > y1:
        y0, y1 = y1, y0
    if not filled:
        corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
        for a, b in zip(corners[:-1], corners[1:]):
            yield from segment_spans(a, b, 0.0, conservative, bounds)
        return
    pad = 0.5 if conservative else 0.0
    span = _clip_span((math.ceil(x0 - pad), math.floor(x1 + pad)), bounds)
    if span is None or span[0] > span[1]:
        return
    r0, r1 = _row_range(y0 - pad, y1 + pad, bounds)
    for y in range(r0, r1 + 1):
        yield (y, span[0], span[1])


def mark_spans(mark: Mark, conservative=True, bounds: Optional[Bounds] = None) -> Iterator[Span]:
    """Covered pixel runs of one mark. Transparent marks cover nothing."""
    if mark.opacity <= 0.0:
        return
    kind = mark.kind
    if kind == "point":
        yield from disc_spans(mark.center, mark.radius, conservative, bounds)
    elif kind == "polyline":
        yield from polyline_spans(mark.points, mark.stroke_width, conservative, bounds)
    elif kind in ("rect", "textBox"):
        yield from rect_spans(mark.rect, mark.filled, conservative, bounds)
    elif kind == "areaBoundary":
        yield from area_boundary_spans(mark.area, conservative, bounds)
    else:
        raise ValueError(f"unknown mark kind {kind!r}")


def area_boundary_spans(area, conservative=True, bounds=None) -> Iterator[Span]:
    for line in (area.lower(), area.upper()):
        if len(line) == 1:
            yield from disc_spans(line[0], 0.5, conservative, bounds)
        else:
            yield from polyline_spans(line, 1.0, conservative, bounds)


def mark_bbox(mark: Mark) -> PixelRect:
    """Pixel bounding box of a mark under conservative coverage."""
    if mark.kind == "point":
        cx, cy = mark.center
        r = mark.radius + 0.5
        return PixelRect(math.ceil(cx - r), math.ceil(cy - r), math.floor(cx + r), math.floor(cy + r))
    if mark.kind in ("rect", "textBox"):
        x0, y0, x1, y1 = mark.rect
        return PixelRect(
            math.ceil(min(x0, x1) - 0.5),
            math.ceil(min(y0, y1) - 0.5),
            math.floor(max(x0, x1) + 0.5),
            math.floor(max(y0, y1) + 0.5),
        )
    xs0, ys0, xs1, ys1 = [], [], [], []
    for y, x0, x1 in mark_spans(mark):
        xs0.append(x0)
        xs1.append(x1)
        ys0.append(y)
    if not ys0:
        raise ValueError(f"mark {mark.id!r} covers no pixels")
    return PixelRect(min(xs0), min(ys0), max(xs1), max(ys0))


def _bitmap_bounds(b: OccupancyBitmap, offset: int) -> Bounds:
    return (-offset, -offset, b.width - 1 - offset, b.height - 1 - offset)


def _apply(b: OccupancyBitmap, spans: Iterable[Span], offset: int) -> None:
    mark = b.mark_range
    for y, x0, x1 in spans:
        mark(y + offset, x0 + offset, x1 + offset)


def rasterize_point(b: OccupancyBitmap, center: Point, radius: float, offset: int = 0) -> None:
    if radius < 0:
        raise ValueError("radius must be >= 0")
    _apply(b, disc_spans(center, radius, True, _bitmap_bounds(b, offset)), offset)


def rasterize_polyline(b: OccupancyBitmap, vertices: Sequence[Point], stroke_width: float, offset: int = 0) -> None:
    _apply(b, polyline_spans(vertices, stroke_width, True, _bitmap_bounds(b, offset)), offset)


def rasterize_rect(b: OccupancyBitmap, rect: PixelRect, filled: bool = True, min_label_height: int = 1, offset: int = 0) -> None:
    """Occupy a pixel rectangle, e.g. a placed label box.

    Filled rects use the row-skipping update; outlines mark the border rows
    and columns only.
    """
    x0, y0, x1, y1 = (v + offset for v in rect.as_tuple())
    if filled:
        b.mark_rect(x0, y0, x1, y1, min_label_height)
        return
    b.mark_range(y0, x0, x1)
    b.mark_range(y1, x0, x1)
    for y in range(y0 + 1, y1):
        b.mark_range(y, x0, x0)
        b.mark_range(y, x1, x1)


def rasterize_mark(b: OccupancyBitmap, mark: Mark, min_label_height: int = 1, offset: int = 0) -> None:
    if mark.opacity <= 0.0:
        return
    if mark.kind in ("rect", "textBox") and mark.filled:
        bb = mark_bbox(mark)
        b.mark_rect(bb.x0 + offset, bb.y0 + offset, bb.x1 + offset, bb.y1 + offset, min_label_height)
        return
    _apply(b, mark_spans(mark, True, _bitmap_bounds(b, offset)), offset)


def rasterize_scene(
    b: OccupancyBitmap,
    marks: Sequence[Mark],
    groups: Optional[Iterable[str]] = None,
    min_label_height: int = 1,
    offset: int = 0,
    exclude: Optional[Iterable[str]] = None,
) -> None:
    """Rasterize every visible mark whose group is selected.

    ``groups=None`` selects all groups. ``exclude`` lists mark ids to skip.
    ``offset`` translates scene coordinates into a padded bitmap.
    """
    selected = None if groups is None else set(groups)
    skip = set(exclude or ())
    for m in marks:
        if m.kind not in ("point", "polyline", "rect", "areaBoundary", "textBox"):
            raise ValueError(f"unknown mark kind {m.kind!r}")
        if selected is not None and m.group not in selected:
            continue
        if m.id and m.id in skip:
            continue
        rasterize_mark(b, m, min_label_height, offset)


def occupancy_array(width: int, height: int, marks: Sequence[Mark], conservative=True, groups=None, exclude=None, offset: int = 0):
    """Boolean ``(height, width)`` array of the pixels covered by ``marks``."""
    import numpy as np

    occ = np.zeros((height, width), dtype=bool)
    bounds = (-offset, -offset, width - 1 - offset, height - 1 - offset)
    selected = None if groups is None else set(groups)
    skip = set(exclude or ())
    for m in marks:
        if selected is not None and m.group not in selected:
            continue
        if m.id and m.id in skip:
            continue
        for y, x0, x1 in mark_spans(m, conservative, bounds):
            occ[y + offset, x0 + offset : x1 + offset + 1] = True
    return occ
