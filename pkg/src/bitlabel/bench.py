"""Synthetic airport-map benchmark: engines x chart widths, median of repeated runs."""

from __future__ import annotations

import csv
import gc
import io
import logging
import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .candidates import EIGHT_POSITION, positions
from .engine import ENGINES, place
from .model import LabelConfig, LabelItem, Mark, Scene

log = logging.getLogger(__name__)

CSV_FIELDS = ("engine", "width", "median_ms", "labels_placed", "reps", "seed")

LABEL_FONT = 10.0
CHAR_FACTOR = 0.6


def airport_code(i: int) -> str:
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    return letters[(i // 676) % 26] + letters[(i // 26) % 26] + letters[i % 26]


def _outlines(rng: random.Random, cols: int = 9, rows: int = 6, wiggle: int = 5) -> List[List[Tuple[float, float]]]:
    """Jittered lattice of border lines in unit coordinates, like state borders."""
    xs = [0.03 + 0.94 * i / cols for i in range(cols + 1)]
    ys = [0.03 + 0.94 * j / rows for j in range(rows + 1)]
    nodes = {}
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            inner = 0 < i < cols and 0 < j < rows
            jx = rng.uniform(-0.02, 0.02) if inner else 0.0
            jy = rng.uniform(-0.02, 0.02) if inner else 0.0
            nodes[i, j] = (x + jx, y + jy)
    lines = []

    def edge(a, b):
        pts = [a]
        for k in range(1, wiggle):
            t = k / wiggle
            pts.append(
                (
                    a[0] + t * (b[0] - a[0]) + rng.uniform(-0.006, 0.006),
                    a[1] + t * (b[1] - a[1]) + rng.uniform(-0.006, 0.006),
                )
            )
        pts.append(b)
        return pts

    for j in range(rows + 1):
        line = []
        for i in range(cols):
            seg = edge(nodes[i, j], nodes[i + 1, j])
            line.extend(seg if not line else seg[1:])
        lines.append(line)
    for i in range(cols + 1):
        line = []
        for j in range(rows):
            seg = edge(nodes[i, j], nodes[i, j + 1])
            line.extend(seg if not line else seg[1:])
        lines.append(line)
    return lines


def gen_synthetic_map(n_points: int = 3320, n_routes: int = 56, width: int = 1000, seed: int = 0) -> Scene:
    """Map-like benchmark scene at a 5:8 aspect ratio.

    A hub airport connects to ``n_routes`` airports by straight route lines;
    each of those carries a pre-placed red label box. Border lines and every
    point are obstacles; the remaining airports are the labels to place. The
    layout is generated in unit coordinates and scaled, so widths share one map.
    """
    if n_points < 1 or n_routes < 0 or n_routes >= n_points:
        raise ValueError("need n_points >= 1 and 0 <= n_routes < n_points")
    if width < 8:
        raise ValueError("width must be >= 8")
    height = width * 5 // 8
    rng = random.Random(seed)
    n_clusters = 40
    centers = [(rng.uniform(0.08, 0.92), rng.uniform(0.1, 0.9)) for _ in range(n_clusters)]
    spreads = [rng.uniform(0.02, 0.08) for _ in range(n_clusters)]
    pts = [(0.12, 0.15)]
    while len(pts) < n_points:
        k = rng.randrange(n_clusters)
        x = rng.gauss(centers[k][0], spreads[k])
        y = rng.gauss(centers[k][1], spreads[k] * 0.8)
        if 0.02 < x < 0.98 and 0.02 < y < 0.98:
            pts.append((x, y))
    routed = set(range(1, n_routes + 1))

    def px(p):
        return (round(p[0] * (width - 1), 2), round(p[1] * (height - 1), 2))

    marks: List[Mark] = []
    for line in _outlines(rng):
        marks.append(Mark("polyline", group="outlines", points=[px(p) for p in line], stroke_width=1.0))
    hub = px(pts[0])
    for i in sorted(routed):
        marks.append(Mark("polyline", id=f"route{i}", group="routes", points=[hub, px(pts[i])], stroke_width=1.0))
    lw = math.ceil(round(3 * CHAR_FACTOR * LABEL_FONT, 6))
    lh = math.ceil(LABEL_FONT)
    items = []
    for i, p in enumerate(pts):
        c = px(p)
        if i == 0 or i in routed:
            marks.append(Mark("point", id=f"a{i}", group="points", center=c, radius=2.0))
            x, y = c
            # red label box sits at the top-right of its airport
            marks.append(
                Mark("textBox", id=f"red{i}", group="redLabels", rect=(x + 3, y - 3 - lh, x + 3 + lw, y - 3), text=airport_code(i))
            )
        else:
            marks.append(Mark("point", id=f"a{i}", group="points", center=c, radius=1.5))
            items.append(LabelItem(id=f"a{i}", text=airport_code(i), width=lw, height=lh, mark=f"a{i}", font_size=LABEL_FONT))
    return Scene(width, height, marks, items, [], CHAR_FACTOR)


def bench_config() -> LabelConfig:
    return LabelConfig(positions=positions(EIGHT_POSITION), mark_type="point")


@dataclass
class BenchCell:
    engine: str
    width: int
    median_ms: float
    labels_placed: int
    reps: int
    seed: int
    times_ms: List[float] = field(default_factory=list)
    error: Optional[str] = None


@dataclass
class BenchReport:
    cells: List[BenchCell]

    def cell(self, engine: str, width: int) -> BenchCell:
        for c in self.cells:
            if c.engine == engine and c.width == width:
                return c
        raise KeyError((engine, width))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for c in self.cells:
            median = "nan" if c.error else f"{c.median_ms:.3f}"
            w.writerow([c.engine, c.width, median, c.labels_placed, c.reps, c.seed])
        return buf.getvalue()


def time_engine(scene: Scene, config: LabelConfig, engine: str, reps: int) -> Tuple[List[float], int]:
    """Wall-clock of ``reps`` placement calls; label counts must not vary.

    One untimed warm-up call runs first. Garbage left by the previous call is
    collected before each timed call; the collector stays on while timing,
    since allocation cost is part of what the engines are compared on.
    """
    counts = {sum(p.placed for p in place(scene, config, engine))}
    times = []
    for _ in range(reps):
        gc.collect()
        t0 = time.perf_counter()
        placements = place(scene, config, engine)
        times.append((time.perf_counter() - t0) * 1000.0)
        counts.add(sum(p.placed for p in placements))
    if len(counts) != 1:
        raise RuntimeError(f"{engine}: label count changed between runs: {sorted(counts)}")
    return times, counts.pop()


def _run_cell(args) -> BenchCell:
    engine, width, reps, seed, n_points, n_routes = args
    try:
        scene = gen_synthetic_map(n_points, n_routes, width, seed)
        times, count = time_engine(scene, bench_config(), engine, reps)
        return BenchCell(engine, width, statistics.median(times), count, reps, seed, times)
    except Exception as exc:  # one failing cell must not sink the report
        log.exception("bench cell %s@%d failed", engine, width)
        return BenchCell(engine, width, float("nan"), -1, reps, seed, error=repr(exc))


def run_bench(
    engines: Sequence[str] = ENGINES,
    widths: Sequence[int] = (1000, 2000, 4000, 8000),
    reps: int = 20,
    seed: int = 0,
    n_points: int = 3320,
    n_routes: int = 56,
    parallel: bool = False,
) -> BenchReport:
    if reps < 1:
        raise ValueError("reps must be >= 1")
    for e in engines:
        if e not in ENGINES:
            raise ValueError(f"unknown engine {e!r}")
    jobs = [(e, w, reps, seed, n_points, n_routes) for e in engines for w in widths]
    if parallel:
        with ProcessPoolExecutor() as pool:
            cells = list(pool.map(_run_cell, jobs))
    else:
        cells = [_run_cell(j) for j in jobs]
    return BenchReport(cells)


def relative_gap(report: BenchReport, fast: str, slow: str, width: int) -> float:
    """Fraction of the slow engine's median time saved by the fast one."""
    s = report.cell(slow, width).median_ms
    return (s - report.cell(fast, width).median_ms) / s


def label_counts(report: BenchReport) -> Dict[Tuple[str, int], int]:
    return {(c.engine, c.width): c.labels_placed for c in report.cells}
