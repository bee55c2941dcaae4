"""Command-line entry point: ``bitlabel label|bench|dump``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .bench import run_bench
from .bitmap import WORD_SIZES
from .engine import ENGINES, place
from .greedy import build_bitmap, prepare
from .scene_io import SceneError, emit_outputs, load_scene, placements_json

log = logging.getLogger("bitlabel")


def _widths(text: str) -> List[int]:
    try:
        widths = [int(w) for w in text.split(",") if w.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad width list {text!r}")
    if not widths or any(w < 8 for w in widths):
        raise argparse.ArgumentTypeError("widths must be integers >= 8")
    return widths


def _engines(text: str) -> List[str]:
    engines = [e.strip() for e in text.split(",") if e.strip()]
    bad = [e for e in engines if e not in ENGINES]
    if not engines or bad:
        raise argparse.ArgumentTypeError(f"unknown engine(s) {bad}; choose from {', '.join(ENGINES)}")
    return engines


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bitlabel", description="Greedy chart label placement.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    lab = sub.add_parser("label", help="place labels for a scene document")
    lab.add_argument("--scene", required=True, help="scene JSON path")
    lab.add_argument("--engine", choices=ENGINES, default="bitmap")
    lab.add_argument("--out", help="placements JSON path (default: stdout)")
    lab.add_argument("--svg", help="write an SVG rendering")
    lab.add_argument("--dump-bitmap", dest="dump_bitmap", help="write the final bitmap as PGM (bitmap engine only)")
    lab.add_argument("--word-bits", dest="word_bits", type=int, choices=WORD_SIZES, default=64)
    lab.add_argument("--events", help="write the per-candidate decision log as JSON")

    ben = sub.add_parser("bench", help="run the synthetic-map benchmark")
    ben.add_argument("--widths", type=_widths, default=[1000, 2000, 4000, 8000])
    ben.add_argument("--reps", type=_positive, default=20)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--engines", type=_engines, default=list(ENGINES))
    ben.add_argument("--points", type=_positive, default=3320)
    ben.add_argument("--routes", type=int, default=56)
    ben.add_argument("--parallel", action="store_true", help="run cells in parallel (timings interfere)")
    ben.add_argument("--out", help="CSV path (default: stdout)")

    dmp = sub.add_parser("dump", help="write the bitmap after mark rasterization as PGM")
    dmp.add_argument("--scene", required=True)
    dmp.add_argument("--out", required=True, help="PGM path")
    dmp.add_argument("--word-bits", dest="word_bits", type=int, choices=WORD_SIZES, default=64)
    return p


def _write(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_label(args) -> int:
    scene, config = load_scene(args.scene)
    if args.dump_bitmap and args.engine != "bitmap":
        raise SceneError("--dump-bitmap needs --engine bitmap")
    events = [] if args.events else None
    bitmaps: list = []
    placements = place(scene, config, args.engine, args.word_bits, events, bitmaps)
    pad = config.resolved_padding(scene)
    emit_outputs(scene, placements, args.out, args.svg, args.dump_bitmap, bitmaps[0] if bitmaps else None, pad, args.engine)
    if not args.out:
        sys.stdout.write(placements_json(placements, args.engine))
    if args.events:
        Path(args.events).write_text(json.dumps(events, indent=2) + "\n")
    placed = sum(p.placed for p in placements)
    log.info("%s: placed %d of %d labels", args.engine, placed, len(placements))
    return 0


def _cmd_bench(args) -> int:
    report = run_bench(args.engines, args.widths, args.reps, args.seed, args.points, args.routes, args.parallel)
    _write(report.to_csv(), args.out)
    failed = [c for c in report.cells if c.error]
    for c in failed:
        print(f"bitlabel: bench cell {c.engine}@{c.width} failed: {c.error}", file=sys.stderr)
    return 1 if failed else 0


def _cmd_dump(args) -> int:
    scene, config = load_scene(args.scene)
    prep = prepare(scene, config)
    b = build_bitmap(scene, config, prep, args.word_bits)
    Path(args.out).write_text(b.to_pgm())
    return 0


COMMANDS = {"label": _cmd_label, "bench": _cmd_bench, "dump": _cmd_dump}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; argparse exits with 2 on bad flags, engine and scene errors return 1."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (SceneError, ValueError, RuntimeError, OSError) as exc:
        print(f"bitlabel: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
