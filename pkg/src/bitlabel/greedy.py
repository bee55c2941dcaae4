"""One-pass greedy label placement over an occupancy bitmap."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import candidates as cand
from .bitmap import DEFAULT_WORD_BITS, OccupancyBitmap
from .model import CandidatePosition, LabelConfig, LabelItem, PixelRect, Placement, Scene
from .raster import mark_bbox, rasterize_scene

log = logging.getLogger(__name__)


@dataclass
class Prepared:
    """Everything an engine needs, independent of how occupancy is stored."""

    order: List[LabelItem]
    candidates: Dict[str, List[Tuple[CandidatePosition, PixelRect]]]
    padding: int
    min_label_height: int
    min_label_width: int
    base_marks: set
    bounds: Tuple[int, int, int, int]


def sort_items(items: Sequence[LabelItem], key: Optional[str]) -> List[LabelItem]:
    """Order items for placement. ``key`` is a field name, ``-`` prefix for descending."""
    if not key:
        return list(items)
    reverse = key.startswith("-")
    name = key.lstrip("-")
    if name not in ("priority", "text", "id", "width", "height"):
        raise ValueError(f"cannot sort labels by {name!r}")
    return sorted(items, key=lambda it: getattr(it, name), reverse=reverse)


def item_candidates(scene: Scene, config: LabelConfig, item: LabelItem, marks: Optional[dict] = None) -> List[Tuple[CandidatePosition, PixelRect]]:
    mark = marks[item.mark] if marks is not None else scene.mark_by_id(item.mark)
    size = (item.width, item.height)
    if mark.kind == "polyline":
        line_anchor = config.line_anchor
        pos = cand.line_end_positions(line_anchor)
        base = cand.line_end_base(mark.points, line_anchor, mark.stroke_width)
    else:
        base = mark_bbox(mark)
        pos = config.positions
        if not pos:
            orientation = cand.bar_orientation(base) if config.mark_type == "bar" else None
            pos = cand.default_positions(config.mark_type, orientation, config.line_anchor)
    return list(zip(pos, cand.candidate_sequence(base, size, pos)))


def prepare(scene: Scene, config: LabelConfig) -> Prepared:
    items = [it for it in scene.items if it.mark is not None]
    order = sort_items(items, config.sort)
    pad = config.resolved_padding(scene)
    marks = {m.id: m for m in scene.marks if m.id}
    return Prepared(
        order=order,
        candidates={it.id: item_candidates(scene, config, it, marks) for it in order},
        padding=pad,
        min_label_height=min((it.height for it in order), default=1),
        min_label_width=min((it.width for it in order), default=1),
        base_marks={it.mark for it in order},
        bounds=(-pad, -pad, scene.width - 1 + pad, scene.height - 1 + pad),
    )


def run_greedy(
    prep: Prepared,
    is_free: Callable[[PixelRect], bool],
    occupy: Callable[[PixelRect], None],
    events: Optional[list] = None,
) -> List[Placement]:
    """The shared control flow: first free candidate wins, then it becomes occupied."""
    bx0, by0, bx1, by1 = prep.bounds
    out = []
    for item in prep.order:
        chosen = None
        for idx, (pos, rect) in enumerate(prep.candidates[item.id]):
            if not rect.inside(bx0, by0, bx1, by1):
                result = "out-of-bounds"
            elif is_free(rect):
                result = "placed"
                chosen = (pos, rect)
            else:
                result = "occupied"
            if events is not None:
                events.append({"itemId": item.id, "candidate": idx, "result": result})
            if chosen:
                break
        if chosen is None:
            reason = None
            if item.width > bx1 - bx0 + 1 or item.height > by1 - by0 + 1:
                reason = "label larger than padded chart"
                log.warning("label %s (%dx%d) does not fit the chart", item.id, item.width, item.height)
            out.append(Placement(item.id, "omitted", reason=reason))
            continue
        occupy(chosen[1])
        out.append(Placement(item.id, "placed", chosen[1], chosen[0]))
    return out


def build_bitmap(scene: Scene, config: LabelConfig, prep: Prepared, word_bits: int = DEFAULT_WORD_BITS) -> OccupancyBitmap:
    """Padded bitmap with every avoided mark rasterized."""
    pad = prep.padding
    b = OccupancyBitmap(scene.width + 2 * pad, scene.height + 2 * pad, word_bits)
    # with avoidBaseMark off the base marks never enter the bitmap, so labels may cover them
    exclude = () if config.avoid_base_mark else prep.base_marks
    rasterize_scene(b, scene.marks, config.avoid, prep.min_label_height, pad, exclude)
    return b


def place_labels_greedy(
    scene: Scene,
    config: LabelConfig,
    word_bits: int = DEFAULT_WORD_BITS,
    events: Optional[list] = None,
    bitmap_out: Optional[list] = None,
) -> List[Placement]:
    """Greedy placement of every mark-anchored label in ``scene``.

    Placements come back in processing order. ``events`` collects one record
    per candidate tried; ``bitmap_out`` receives the final bitmap.
    """
    prep = prepare(scene, config)
    b = build_bitmap(scene, config, prep, word_bits)
    pad = prep.padding
    min_h = prep.min_label_height

    def is_free(r: PixelRect) -> bool:
        return not b.rect_occupied(r.x0 + pad, r.y0 + pad, r.x1 + pad, r.y1 + pad)

    def occupy(r: PixelRect) -> None:
        b.mark_rect(r.x0 + pad, r.y0 + pad, r.x1 + pad, r.y1 + pad, min_h)

    placements = run_greedy(prep, is_free, occupy, events)
    if bitmap_out is not None:
        bitmap_out.append(b)
    return placements
