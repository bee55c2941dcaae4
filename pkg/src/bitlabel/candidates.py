"""Candidate label rectangles around a mark.

Rectangles are inclusive pixel boxes. An outside anchor puts the label in the
pixels adjacent to the base box (offset 0 means touching); centered
coordinates round toward negative infinity.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

from .model import CandidatePosition, PixelRect, Point

ANCHORS = (
    "top-left",
    "top",
    "top-right",
    "right",
    "bottom-right",
    "bottom",
    "bottom-left",
    "left",
    "middle",
)

# preference order used for point-like marks
EIGHT_POSITION = (
    "top-right",
    "top",
    "top-left",
    "left",
    "bottom-left",
    "bottom",
    "bottom-right",
    "right",
)
FOUR_POSITION = ("top-right", "top-left", "bottom-left", "bottom-right")

MARK_TYPES = ("bar", "line", "rect", "circle", "point", "square", "area")

Size = Tuple[int, int]


def label_bounds(anchor: str, offset: int, base: PixelRect, size: Size, inside: bool = False) -> PixelRect:
    """Place a ``size = (width, height)`` label against ``base`` in direction ``anchor``."""
    if anchor not in ANCHORS:
        raise ValueError(f"unknown anchor {anchor!r}")
    w, h = size
    if anchor == "middle":
        offset = 0
    if "left" in anchor:
        x0 = base.x0 + offset if inside else base.x0 - offset - w
    elif "right" in anchor:
        x0 = base.x1 - offset - w + 1 if inside else base.x1 + 1 + offset
    else:
        x0 = (base.x0 + base.x1 - w + 1) // 2
    if anchor.startswith("top"):
        y0 = base.y0 + offset if inside else base.y0 - offset - h
    elif anchor.startswith("bottom"):
        y0 = base.y1 - offset - h + 1 if inside else base.y1 + 1 + offset
    else:
        y0 = (base.y0 + base.y1 - h + 1) // 2
    return PixelRect(x0, y0, x0 + w - 1, y0 + h - 1)


def candidate_sequence(base: PixelRect, size: Size, positions: Sequence[CandidatePosition]) -> List[PixelRect]:
    """Candidate rects in preference order; nothing is filtered here."""
    if not positions:
        raise ValueError("candidate position list is empty")
    return [label_bounds(p.anchor, p.offset, base, size, p.inside) for p in positions]


def positions(anchors: Sequence[str], offset: int = 0) -> List[CandidatePosition]:
    return [CandidatePosition(a, offset) for a in anchors]


def zip_parallel(anchors: Sequence[str], offsets: Sequence[int]) -> List[CandidatePosition]:
    """Pair up separate anchor and offset lists. A single offset applies to every anchor."""
    if len(offsets) == 1:
        offsets = list(offsets) * len(anchors)
    if len(offsets) != len(anchors):
        raise ValueError(f"{len(anchors)} anchors but {len(offsets)} offsets")
    return [CandidatePosition(a, int(o)) for a, o in zip(anchors, offsets)]


def line_end_positions(line_anchor: str = "end", offset: int = 0) -> List[CandidatePosition]:
    if line_anchor == "end":
        return positions(("top-right", "right", "bottom-right"), offset)
    if line_anchor == "begin":
        return positions(("top-left", "left", "bottom-left"), offset)
    raise ValueError(f"lineAnchor must be 'begin' or 'end', got {line_anchor!r}")


def line_end_base(line: Sequence[Point], line_anchor: str = "end", stroke_width: float = 0.0) -> PixelRect:
    """Pixel box of the line's end cap, which the end label attaches to."""
    if not line:
        raise ValueError("line has no vertices")
    x, y = line[-1] if line_anchor == "end" else line[0]
    r = stroke_width / 2.0 + 0.5
    return PixelRect(math.ceil(x - r), math.ceil(y - r), math.floor(x + r), math.floor(y + r))


def line_end_candidates(
    line: Sequence[Point], line_anchor: str, size: Size, stroke_width: float = 0.0, offset: int = 0
) -> List[PixelRect]:
    base = line_end_base(line, line_anchor, stroke_width)
    return candidate_sequence(base, size, line_end_positions(line_anchor, offset))


def bar_orientation(base: PixelRect) -> str:
    return "vertical" if base.height >= base.width else "horizontal"


def default_positions(mark_type: str, orientation: Optional[str] = None, line_anchor: str = "end") -> List[CandidatePosition]:
    """Candidate positions used when the config does not list any."""
    if mark_type == "bar":
        if orientation == "horizontal":
            return [CandidatePosition("right"), CandidatePosition("right", 0, inside=True)]
        return [CandidatePosition("top"), CandidatePosition("top", 0, inside=True)]
    if mark_type == "line":
        return line_end_positions(line_anchor)
    if mark_type in ("rect", "area"):
        return [CandidatePosition("middle")]
    if mark_type in ("circle", "point", "square"):
        return positions(EIGHT_POSITION)
    raise ValueError(f"unknown mark type {mark_type!r}; expected one of {MARK_TYPES}")


def slider_candidates(side: str, base: PixelRect, size: Size, step: int, offset: int = 0) -> List[PixelRect]:
    """Discretized slider model: the label slides along one side of ``base``.

    Positions are ``step`` pixels apart, starting centered on the side and
    alternating outward; every position keeps at least one pixel of contact
    with the side.
    """
    if side not in ("top", "bottom", "left", "right"):
        raise ValueError(f"unknown side {side!r}")
    if step < 1:
        raise ValueError("step must be >= 1")
    w, h = size
    centered = label_bounds(side, offset, base, size)
    if side in ("top", "bottom"):
        lo, hi, start = base.x0 - w + 1, base.x1, centered.x0
    else:
        lo, hi, start = base.y0 - h + 1, base.y1, centered.y0
    out = [centered]
    k = 1
    while start - k * step >= lo or start + k * step <= hi:
        for shift in (-k * step, k * step):
            if lo <= start + shift <= hi:
                if side in ("top", "bottom"):
                    out.append(centered.shifted(shift, 0))
                else:
                    out.append(centered.shifted(0, shift))
        k += 1
    return out
