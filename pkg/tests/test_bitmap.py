import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bitlabel.bitmap import WORD_SIZES, OccupancyBitmap, create, marked_rows

from oracles import BoolGrid, rect_any


def test_create_word_counts():
    assert len(create(16, 6, 4).words) == 24
    assert not any(create(16, 6, 4).words)
    assert len(create(8000, 5000, 64).words) == 625_000


@pytest.mark.parametrize("w,h", [(0, 5), (5, 0), (-1, 3)])
def test_create_rejects_empty(w, h):
    with pytest.raises(ValueError):
        create(w, h, 32)


def test_create_rejects_odd_word_size():
    with pytest.raises(ValueError):
        OccupancyBitmap(4, 4, 12)


def test_set_pixel_is_msb_first():
    b = create(16, 6, 4)
    b.set_pixel(2, 1)
    assert b.words[4] == 0b0010
    assert [i for i, v in enumerate(b.words) if v] == [4]
    b.set_pixel(2, 1)
    assert b.words[4] == 0b0010


def test_out_of_range_is_ignored_and_free():
    b = create(10, 10, 8)
    b.set_pixel(-1, 3)
    b.set_pixel(10, 3)
    b.mark_range(20, 0, 9)
    assert b.count() == 0
    assert not b.rect_occupied(-20, -20, -1, -1)
    assert not b.rect_occupied(10, 0, 30, 9)
    assert not b.get(-1, 0)


def test_worked_row_lookup_and_update():
    b = create(16, 6, 4)
    for x in (0, 1, 14, 15):
        b.set_pixel(x, 1)
    assert b.words[7] == 0b0011
    # columns 2..12 of row 1: word 4 partly, words 5 and 6 fully, word 7 only its top bit
    assert not b.range_occupied(1, 2, 12)
    assert b.words[7] & b._mask(0, 0) == 0
    b.mark_range(1, 2, 12)
    assert b.words[4] == 0b1111
    assert b.words[5] == b.words[6] == 0b1111
    assert b.words[7] == 0b1011


def test_mark_rect_skips_rows():
    b = create(16, 6, 4)
    b.mark_rect(2, 1, 12, 4, 2)
    rows = [y for y in range(6) if b.range_occupied(y, 0, 15)]
    assert rows == [1, 3, 4]
    assert marked_rows(1, 4, 2) == [1, 3, 4]
    assert marked_rows(0, 0, 5) == [0]


def test_mark_rect_rejects_zero_stride():
    with pytest.raises(ValueError):
        create(4, 4).mark_rect(0, 0, 1, 1, 0)


def test_clipped_rect_keeps_visible_edge_rows():
    b = create(10, 10, 8)
    b.mark_rect(0, -3, 4, 12, 5)
    rows = [y for y in range(10) if b.get(0, y)]
    # rows 2 and 7 come from the stride anchored at -3, rows 0 and 9 from clipping
    assert rows == [0, 2, 7, 9]


@pytest.mark.parametrize("word_bits", WORD_SIZES)
def test_random_workload_matches_boolean_matrix(word_bits):
    rng = random.Random(word_bits)
    W, H = 53, 17
    b = create(W, H, word_bits)
    g = BoolGrid(W, H)
    for _ in range(120):
        op = rng.random()
        if op < 0.4:
            x, y = rng.randrange(-2, W + 2), rng.randrange(-2, H + 2)
            b.set_pixel(x, y)
            g.set_pixel(x, y)
        elif op < 0.8:
            y, x0 = rng.randrange(-1, H + 1), rng.randrange(-5, W)
            x1 = x0 + rng.randrange(0, 20)
            b.mark_range(y, x0, x1)
            g.mark_range(y, x0, x1)
        else:
            x0, y0 = rng.randrange(-3, W), rng.randrange(-3, H)
            x1, y1 = x0 + rng.randrange(0, 8), y0 + rng.randrange(0, 5)
            b.mark_rect(x0, y0, x1, y1, 1)
            g.mark_rect(x0, y0, x1, y1)
        assert np.array_equal(b.to_array(), g.a)
    p = g.prefix()
    for _ in range(500):
        x0, y0 = rng.randrange(-4, W), rng.randrange(-4, H)
        x1, y1 = x0 + rng.randrange(0, 10), y0 + rng.randrange(0, 4)
        assert b.rect_occupied(x0, y0, x1, y1) == bool(rect_any(p, x0, y0, x1, y1))
        assert b.range_occupied(y0, x0, x1) == bool(rect_any(p, x0, y0, x1, y0))


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(WORD_SIZES),
    st.lists(st.tuples(st.integers(0, 40), st.integers(0, 9), st.integers(0, 40)), max_size=12),
    st.tuples(st.integers(-3, 42), st.integers(-3, 11), st.integers(0, 12), st.integers(0, 4)),
)
def test_range_marks_property(word_bits, ranges, query):
    b = create(41, 10, word_bits)
    g = BoolGrid(41, 10)
    for y, a, c in ranges:
        lo, hi = min(a, c), max(a, c)
        b.mark_range(y, lo, hi)
        g.mark_range(y, lo, hi)
    x0, y0, dw, dh = query
    got = b.rect_occupied(x0, y0, x0 + dw, y0 + dh)
    assert got == bool(rect_any(g.prefix(), x0, y0, x0 + dw, y0 + dh))


def test_word_sizes_agree():
    arrays = []
    for n in WORD_SIZES:
        b = create(37, 11, n)
        r = random.Random(9)
        for _ in range(60):
            b.mark_range(r.randrange(11), r.randrange(37), r.randrange(37) + 3)
        arrays.append(b.to_array())
    for a in arrays[1:]:
        assert np.array_equal(a, arrays[0])


def test_pgm_dump_dimensions():
    b = create(5, 3, 4)
    b.set_pixel(4, 2)
    lines = b.to_pgm().splitlines()
    assert lines[:3] == ["P2", "5 3", "1"]
    assert len(lines) == 3 + 3
    assert lines[-1].split() == ["0", "0", "0", "0", "1"]
    assert sum(len(l.split()) for l in lines[3:]) == 15


def test_marking_never_clears():
    rng = random.Random(2)
    b = create(30, 12, 8)
    last = 0
    for _ in range(200):
        x0, y0 = rng.randrange(30), rng.randrange(12)
        b.mark_rect(x0, y0, x0 + rng.randrange(6), y0 + rng.randrange(4), rng.randint(1, 3))
        assert b.count() >= last
        last = b.count()
