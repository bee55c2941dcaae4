"""Core data types shared by the placement engines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

Point = Tuple[float, float]

MARK_KINDS = ("point", "polyline", "rect", "areaBoundary", "textBox")


@dataclass(frozen=True)
class PixelRect:
    """Inclusive integer pixel rectangle."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"degenerate PixelRect {self.as_tuple()}")

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def height(self) -> int:
        return self.y1 - self.y0 + 1

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.x0, self.y0, self.x1, self.y1)

    def shifted(self, dx: int, dy: int) -> "PixelRect":
        return PixelRect(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)

    def intersects(self, other: "PixelRect") -> bool:
        return not (
            other.x0 > self.x1 or other.x1 < self.x0 or other.y0 > self.y1 or other.y1 < self.y0
        )

    def inside(self, x0: int, y0: int, x1: int, y1: int) -> bool:
        return self.x0 >= x0 and self.y0 >= y0 and self.x1 <= x1 and self.y1 <= y1


@dataclass
class AreaSeries:
    """One stacked-area band given as vertical ``(x, y_lower, y_upper)`` pairs."""

    pairs: List[Tuple[float, float, float]]
    id: str = ""

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("area needs at least one pair")
        self.pairs = [tuple(float(v) for v in p) for p in self.pairs]
        prev = None
        for x, lo, hi in self.pairs:
            if lo > hi:
                raise ValueError(f"area {self.id!r}: y_lower {lo} > y_upper {hi} at x={x}")
            if prev is not None and x <= prev:
                raise ValueError(f"area {self.id!r}: x must be strictly increasing")
            prev = x

    def lower(self) -> List[Point]:
        return [(x, lo) for x, lo, _ in self.pairs]

    def upper(self) -> List[Point]:
        return [(x, hi) for x, _, hi in self.pairs]


@dataclass
class Mark:
    """A graphical mark that labels may have to avoid.

    Geometry fields are used per ``kind``: ``center``/``radius`` for points,
    ``points``/``stroke_width`` for polylines, ``rect`` for rects and text
    boxes, ``area`` for area boundaries. Coordinates put pixel centers on
    integers, so pixel ``(x, y)`` covers ``[x-0.5, x+0.5] x [y-0.5, y+0.5]``.
    """

    kind: str
    id: str = ""
    group: str = "marks"
    opacity: float = 1.0
    center: Optional[Point] = None
    radius: float = 0.0
    points: Optional[List[Point]] = None
    stroke_width: float = 1.0
    rect: Optional[Tuple[float, float, float, float]] = None
    filled: bool = True
    area: Optional[AreaSeries] = None
    text: Optional[str] = None

    def __post_init__(self):
        if self.kind not in MARK_KINDS:
            raise ValueError(f"unknown mark kind {self.kind!r}")
        if not 0.0 <= self.opacity <= 1.0:
            raise ValueError(f"opacity out of [0, 1]: {self.opacity}")
        if self.kind == "point":
            if self.center is None or self.radius < 0:
                raise ValueError("point mark needs a center and radius >= 0")
        elif self.kind == "polyline":
            if not self.points or len(self.points) < 2:
                raise ValueError("polyline mark needs at least 2 vertices")
            if self.stroke_width <= 0:
                raise ValueError("polyline stroke width must be positive")
        elif self.kind in ("rect", "textBox"):
            if self.rect is None:
                raise ValueError(f"{self.kind} mark needs a rect")
        elif self.kind == "areaBoundary" and self.area is None:
            raise ValueError("areaBoundary mark needs an area")


@dataclass
class LabelItem:
    id: str
    text: str
    width: int
    height: int
    mark: Optional[str] = None
    area: Optional[str] = None
    priority: float = 0.0
    font_size: float = 10.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"label {self.id!r} must have a positive size")


@dataclass
class Scene:
    width: int
    height: int
    marks: List[Mark] = field(default_factory=list)
    items: List[LabelItem] = field(default_factory=list)
    areas: List[AreaSeries] = field(default_factory=list)
    char_width_factor: float = 0.6

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("scene width and height must be >= 1")

    def mark_by_id(self, mark_id: str) -> Mark:
        for m in self.marks:
            if m.id == mark_id:
                return m
        raise KeyError(mark_id)

    def area_by_id(self, area_id: str) -> AreaSeries:
        for a in self.areas:
            if a.id == area_id:
                return a
        raise KeyError(area_id)


@dataclass(frozen=True)
class CandidatePosition:
    """An anchor direction plus outward offset.

    ``inside`` flips the label to the inner side of the anchored edge, which is
    how bar labels sit at the end of the bar but within it.
    """

    anchor: str
    offset: int = 0
    inside: bool = False

    def __post_init__(self):
        from .candidates import ANCHORS

        if self.anchor not in ANCHORS:
            raise ValueError(f"unknown anchor {self.anchor!r}")
        if self.offset < 0:
            raise ValueError("offset must be >= 0")

    def to_json(self) -> dict:
        out = {"anchor": self.anchor, "offset": self.offset}
        if self.inside:
            out["inside"] = True
        return out


@dataclass
class LabelConfig:
    positions: Optional[List[CandidatePosition]] = None
    mark_type: str = "point"
    avoid_base_mark: bool = True
    avoid: Optional[List[str]] = None
    line_anchor: str = "end"
    method: str = "reduced-search"
    padding: Optional[int] = None
    sort: Optional[str] = None
    orient: str = "vertical"

    def __post_init__(self):
        if self.line_anchor not in ("begin", "end"):
            raise ValueError(f"lineAnchor must be 'begin' or 'end', got {self.line_anchor!r}")
        if self.method not in ("flood-fill", "reduced-search", "naive"):
            raise ValueError(f"unknown area method {self.method!r}")
        if self.padding is not None and self.padding < 0:
            raise ValueError("padding must be >= 0")
        if self.orient not in ("vertical", "horizontal"):
            raise ValueError(f"unknown orient {self.orient!r}")

    def resolved_padding(self, scene: Scene) -> int:
        if self.padding is not None:
            return int(self.padding)
        if self.mark_type == "line":
            # multi-series line charts leave room for end labels
            extent = scene.width if self.orient == "vertical" else scene.height
            return int(0.2 * extent)
        return 0


@dataclass
class Placement:
    item_id: str
    status: str
    rect: Optional[PixelRect] = None
    anchor: Optional[CandidatePosition] = None
    reason: Optional[str] = None

    @property
    def placed(self) -> bool:
        return self.status == "placed"

    def to_json(self) -> dict:
        out = {"itemId": self.item_id, "status": self.status}
        if self.rect is not None:
            out["rect"] = list(self.rect.as_tuple())
        if self.anchor is not None:
            out["anchorUsed"] = self.anchor.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out
