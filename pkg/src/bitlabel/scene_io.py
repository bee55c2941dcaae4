"""Scene documents in, placements / SVG / PGM out."""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import jsonschema

from . import candidates as cand
from .bitmap import OccupancyBitmap
from .model import AreaSeries, CandidatePosition, LabelConfig, LabelItem, Mark, Placement, Scene


class SceneError(ValueError):
    """A scene document that does not match the schema or is inconsistent."""


_SCHEMA = None


def schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        text = resources.files("bitlabel").joinpath("scene.schema.json").read_text()
        _SCHEMA = json.loads(text)
    return _SCHEMA


def label_size(text: str, font_size: float, char_width_factor: float) -> Tuple[int, int]:
    """Synthetic monospace metric: ``len(text) * factor * fontSize`` by ``fontSize``."""
    # round before ceil so 4 * 0.6 * 10 stays 24
    w = math.ceil(round(max(len(text), 1) * char_width_factor * font_size, 6))
    h = math.ceil(round(font_size, 6))
    return max(w, 1), max(h, 1)


def _mark_from_json(d: dict, areas: dict) -> Mark:
    kw = dict(kind=d["kind"], id=d.get("id", ""), group=d.get("group", "marks"), opacity=d.get("opacity", 1.0))
    kind = d["kind"]
    if kind == "point":
        kw.update(center=(float(d["x"]), float(d["y"])), radius=float(d.get("radius", 0.0)))
    elif kind == "polyline":
        kw.update(points=[(float(x), float(y)) for x, y in d["points"]], stroke_width=float(d.get("strokeWidth", 1.0)))
    elif kind in ("rect", "textBox"):
        kw.update(rect=(float(d["x0"]), float(d["y0"]), float(d["x1"]), float(d["y1"])), filled=d.get("filled", True))
        if "text" in d:
            kw["text"] = d["text"]
    else:
        if d["area"] not in areas:
            raise SceneError(f"$.marks[{d.get('id', '?')}]: unknown area {d['area']!r}")
        kw["area"] = areas[d["area"]]
    return Mark(**kw)


def _config_from_json(d: dict) -> LabelConfig:
    positions = None
    if "positions" in d:
        positions = [CandidatePosition(p["anchor"], p.get("offset", 0), p.get("inside", False)) for p in d["positions"]]
    elif "anchor" in d:
        positions = cand.zip_parallel(d["anchor"], d.get("offset", [0]))
    return LabelConfig(
        positions=positions,
        mark_type=d.get("markType", "point"),
        avoid_base_mark=d.get("avoidBaseMark", True),
        avoid=d.get("avoid"),
        line_anchor=d.get("lineAnchor", "end"),
        method=d.get("method", "reduced-search"),
        padding=d.get("padding"),
        sort=d.get("sort"),
        orient=d.get("orient", "vertical"),
    )


def parse_scene(document) -> Tuple[Scene, LabelConfig]:
    """Validate and load a scene document (JSON text or an already-decoded dict)."""
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SceneError(f"invalid JSON: {exc}") from exc
    else:
        doc = document
    errors = sorted(jsonschema.Draft202012Validator(schema()).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        msg = "; ".join(f"{e.json_path}: {e.message}" for e in errors[:10])
        raise SceneError(msg)

    try:
        areas = {}
        for a in doc.get("areas", []):
            if a["id"] in areas:
                raise SceneError(f"$.areas: duplicate id {a['id']!r}")
            areas[a["id"]] = AreaSeries([tuple(p) for p in a["pairs"]], id=a["id"])
        marks = [_mark_from_json(m, areas) for m in doc.get("marks", [])]
        mark_ids = [m.id for m in marks if m.id]
        if len(set(mark_ids)) != len(mark_ids):
            raise SceneError("$.marks: duplicate mark ids")
        factor = doc.get("fontMetric", {}).get("charWidthFactor", 0.6)
        items = []
        for i, it in enumerate(doc.get("items", [])):
            if "mark" in it and it["mark"] not in mark_ids:
                raise SceneError(f"$.items[{i}].mark: unknown mark {it['mark']!r}")
            if "area" in it and it["area"] not in areas:
                raise SceneError(f"$.items[{i}].area: unknown area {it['area']!r}")
            font_size = float(it.get("fontSize", 10))
            w, h = label_size(it["text"], font_size, factor)
            items.append(
                LabelItem(
                    id=it["id"],
                    text=it["text"],
                    width=it.get("width", w),
                    height=it.get("height", h),
                    mark=it.get("mark"),
                    area=it.get("area"),
                    priority=float(it.get("priority", 0.0)),
                    font_size=font_size,
                )
            )
        item_ids = [it.id for it in items]
        if len(set(item_ids)) != len(item_ids):
            raise SceneError("$.items: duplicate item ids")
        scene = Scene(doc["width"], doc["height"], marks, items, list(areas.values()), factor)
        config = _config_from_json(doc.get("config", {}))
    except (ValueError, KeyError) as exc:
        if isinstance(exc, SceneError):
            raise
        raise SceneError(str(exc)) from exc
    return scene, config


def load_scene(path) -> Tuple[Scene, LabelConfig]:
    return parse_scene(Path(path).read_text())


def _num(v: float):
    return int(v) if float(v).is_integer() else v


def mark_to_json(m: Mark) -> dict:
    d = {"kind": m.kind}
    if m.id:
        d["id"] = m.id
    d["group"] = m.group
    if m.opacity != 1.0:
        d["opacity"] = m.opacity
    if m.kind == "point":
        d.update(x=_num(m.center[0]), y=_num(m.center[1]), radius=_num(m.radius))
    elif m.kind == "polyline":
        d["points"] = [[_num(x), _num(y)] for x, y in m.points]
        d["strokeWidth"] = _num(m.stroke_width)
    elif m.kind in ("rect", "textBox"):
        x0, y0, x1, y1 = m.rect
        d.update(x0=_num(x0), y0=_num(y0), x1=_num(x1), y1=_num(y1), filled=m.filled)
        if m.text is not None:
            d["text"] = m.text
    else:
        d["area"] = m.area.id
    return d


def config_to_json(c: LabelConfig) -> dict:
    d = {
        "markType": c.mark_type,
        "avoidBaseMark": c.avoid_base_mark,
        "lineAnchor": c.line_anchor,
        "method": c.method,
        "orient": c.orient,
    }
    if c.positions is not None:
        d["positions"] = [p.to_json() for p in c.positions]
    if c.avoid is not None:
        d["avoid"] = list(c.avoid)
    if c.padding is not None:
        d["padding"] = c.padding
    if c.sort is not None:
        d["sort"] = c.sort
    return d


def scene_to_document(scene: Scene, config: Optional[LabelConfig] = None) -> dict:
    """Inverse of :func:`parse_scene`; label sizes are written out explicitly."""
    doc = {
        "width": scene.width,
        "height": scene.height,
        "fontMetric": {"charWidthFactor": scene.char_width_factor},
        "marks": [mark_to_json(m) for m in scene.marks],
        "items": [],
        "areas": [{"id": a.id, "pairs": [[_num(v) for v in p] for p in a.pairs]} for a in scene.areas],
    }
    for it in scene.items:
        d = {"id": it.id, "text": it.text}
        if it.mark is not None:
            d["mark"] = it.mark
        if it.area is not None:
            d["area"] = it.area
        d.update(fontSize=_num(it.font_size), width=it.width, height=it.height, priority=_num(it.priority))
        doc["items"].append(d)
    if config is not None:
        doc["config"] = config_to_json(config)
    return doc


def placements_json(placements: Sequence[Placement], engine: Optional[str] = None) -> str:
    doc = {}
    if engine:
        doc["engine"] = engine
    doc["placements"] = [p.to_json() for p in placements]
    return json.dumps(doc, indent=2) + "\n"


def _fmt(v: float) -> str:
    return f"{v:g}"


def _mark_svg(m: Mark) -> str:
    op = "" if m.opacity == 1.0 else f' opacity="{_fmt(m.opacity)}"'
    mid = f' id="{escape(m.id)}"' if m.id else ""
    if m.kind == "point":
        cx, cy = m.center
        return f'<circle{mid} cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(m.radius)}"{op}/>'
    if m.kind == "polyline":
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in m.points)
        return f'<polyline{mid} points="{pts}" fill="none" stroke="#333" stroke-width="{_fmt(m.stroke_width)}"{op}/>'
    if m.kind in ("rect", "textBox"):
        x0, y0, x1, y1 = m.rect
        fill = "#c33" if m.kind == "textBox" else "#666"
        style = f'fill="{fill}"' if m.filled else f'fill="none" stroke="{fill}"'
        body = f'<rect{mid} x="{_fmt(min(x0, x1))}" y="{_fmt(min(y0, y1))}" width="{_fmt(abs(x1 - x0))}" height="{_fmt(abs(y1 - y0))}" {style}{op}/>'
        if m.text:
            body += f'<text x="{_fmt(min(x0, x1))}" y="{_fmt(max(y0, y1))}" font-size="10" fill="#fff">{escape(m.text)}</text>'
        return body
    pts = m.area.upper() + list(reversed(m.area.lower()))
    pts_s = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    return f'<polygon{mid} points="{pts_s}" fill="#ddd" stroke="#333" stroke-width="1"{op}/>'


def render_svg(scene: Scene, placements: Sequence[Placement], padding: int = 0) -> str:
    """SVG 1.1 of the marks plus placed labels.

    Mark geometry puts pixel centers on integers, so marks are shifted by half
    a pixel; label ``<rect>`` attributes are the placement's pixel indices.
    """
    items = {it.id: it for it in scene.items}
    w, h = scene.width + 2 * padding, scene.height + 2 * padding
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="{-padding} {-padding} {w} {h}">',
        '<g class="marks" transform="translate(0.5 0.5)">',
    ]
    groups: dict = {}
    for m in scene.marks:
        groups.setdefault(m.group, []).append(m)
    for name, marks in groups.items():
        out.append(f'<g class="group" data-group="{escape(name)}">')
        out.extend(_mark_svg(m) for m in marks)
        out.append("</g>")
    out.append("</g>")
    out.append('<g class="labels">')
    for p in placements:
        if not p.placed:
            continue
        it = items.get(p.item_id)
        r = p.rect
        text = escape(it.text) if it else ""
        size = _fmt(it.font_size) if it else "10"
        out.append(
            f'<g class="label" data-item="{escape(p.item_id)}">'
            f'<rect x="{r.x0}" y="{r.y0}" width="{r.width}" height="{r.height}" fill="none" stroke="#088" stroke-width="0.5"/>'
            f'<text x="{r.x0}" y="{r.y1 + 1}" font-family="monospace" font-size="{size}" fill="#088">{text}</text>'
            "</g>"
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_outputs(
    scene: Scene,
    placements: Sequence[Placement],
    out: Optional[str] = None,
    svg: Optional[str] = None,
    pgm: Optional[str] = None,
    bitmap: Optional[OccupancyBitmap] = None,
    padding: int = 0,
    engine: Optional[str] = None,
) -> List[Path]:
    """Write the requested artifacts and return their paths."""
    written = []
    if out:
        Path(out).write_text(placements_json(placements, engine))
        written.append(Path(out))
    if svg:
        Path(svg).write_text(render_svg(scene, placements, padding))
        written.append(Path(svg))
    if pgm:
        if bitmap is None:
            raise ValueError("a bitmap is required for the PGM dump")
        Path(pgm).write_text(bitmap.to_pgm())
        written.append(Path(pgm))
    return written
