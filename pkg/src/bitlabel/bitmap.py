"""Word-packed occupancy bitmap.

Pixel ``(x, y)`` lives at flat index ``i = y * width + x``; its bit is stored in
word ``i // word_bits`` at offset ``i % word_bits`` counted from the most
significant bit. A horizontal run of pixels is therefore a contiguous run of
flat bits, so lookups and updates touch whole words where they can and mask
only the two edge words.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

WORD_SIZES = (4, 8, 16, 32, 64)
DEFAULT_WORD_BITS = 64


class OccupancyBitmap:
    __slots__ = ("width", "height", "word_bits", "words", "_full")

    def __init__(self, width: int, height: int, word_bits: int = DEFAULT_WORD_BITS):
        if width < 1 or height < 1:
            raise ValueError(f"bitmap dimensions must be positive, got {width}x{height}")
        if word_bits not in WORD_SIZES:
            raise ValueError(f"word_bits must be one of {WORD_SIZES}, got {word_bits}")
        self.width = int(width)
        self.height = int(height)
        self.word_bits = word_bits
        n_words = -(-(self.width * self.height) // word_bits)
        self.words = [0] * n_words
        self._full = (1 << word_bits) - 1

    def __repr__(self) -> str:
        return f"OccupancyBitmap({self.width}x{self.height}, word_bits={self.word_bits})"

    def word_index(self, x: int, y: int) -> Tuple[int, int]:
        """Return ``(word index, bit position)`` of pixel ``(x, y)``."""
        i = y * self.width + x
        return i // self.word_bits, self.word_bits - 1 - (i % self.word_bits)

    def _mask(self, k0: int, k1: int) -> int:
        # offsets k0..k1 within a word, MSB-first
        n = self.word_bits
        return ((1 << (k1 - k0 + 1)) - 1) << (n - 1 - k1)

    def get(self, x: int, y: int) -> bool:
        if not (0 <= x < self.width and 0 <= y < self.height):
            return False
        w, b = self.word_index(x, y)
        return bool((self.words[w] >> b) & 1)

    def set_pixel(self, x: int, y: int) -> None:
        if 0 <= x < self.width and 0 <= y < self.height:
            w, b = self.word_index(x, y)
            self.words[w] |= 1 << b

    def _clip_range(self, y: int, x0: int, x1: int):
        if y < 0 or y >= self.height:
            return None
        if x0 < 0:
            x0 = 0
        if x1 >= self.width:
            x1 = self.width - 1
        if x0 > x1:
            return None
        return x0, x1

    def range_occupied(self, y: int, x0: int, x1: int) -> bool:
        """True if any pixel of row ``y`` in columns ``[x0, x1]`` is occupied."""
        clipped = self._clip_range(y, x0, x1)
        if clipped is None:
            return False
        return self._row_test(y * self.width + clipped[0], y * self.width + clipped[1])

    def _row_test(self, i0: int, i1: int) -> bool:
        n = self.word_bits
        words = self.words
        w0, k0 = divmod(i0, n)
        w1, k1 = divmod(i1, n)
        if w0 == w1:
            return bool(words[w0] & self._mask(k0, k1))
        if words[w0] & self._mask(k0, n - 1):
            return True
        for w in range(w0 + 1, w1):
            if words[w]:
                return True
        return bool(words[w1] & self._mask(0, k1))

    def mark_range(self, y: int, x0: int, x1: int) -> None:
        """Set every pixel of row ``y`` in columns ``[x0, x1]``."""
        clipped = self._clip_range(y, x0, x1)
        if clipped is None:
            return
        self._row_mark(y * self.width + clipped[0], y * self.width + clipped[1])

    def _row_mark(self, i0: int, i1: int) -> None:
        n = self.word_bits
        words = self.words
        w0, k0 = divmod(i0, n)
        w1, k1 = divmod(i1, n)
        if w0 == w1:
            words[w0] |= self._mask(k0, k1)
            return
        words[w0] |= self._mask(k0, n - 1)
        full = self._full
        for w in range(w0 + 1, w1):
            words[w] = full
        words[w1] |= self._mask(0, k1)

    def _clip_rect(self, x0: int, y0: int, x1: int, y1: int):
        x0 = max(x0, 0)
        y0 = max(y0, 0)
        x1 = min(x1, self.width - 1)
        y1 = min(y1, self.height - 1)
        if x0 > x1 or y0 > y1:
            return None
        return x0, y0, x1, y1

    def rect_occupied(self, x0: int, y0: int, x1: int, y1: int) -> bool:
        """True if any pixel in the inclusive rectangle is occupied.

        Every row is inspected; rows cannot be skipped on lookup because the
        rows skipped by :meth:`mark_rect` are only safe for the writer.
        """
        clipped = self._clip_rect(x0, y0, x1, y1)
        if clipped is None:
            return False
        x0, y0, x1, y1 = clipped
        w = self.width
        test = self._row_test
        for y in range(y0, y1 + 1):
            base = y * w
            if test(base + x0, base + x1):
                return True
        return False

    def mark_rect(self, x0: int, y0: int, x1: int, y1: int, min_label_height: int = 1) -> None:
        """Mark the first row, the last row and every ``min_label_height``-th row between.

        Any query rectangle at least ``min_label_height`` rows tall that intersects
        the marked rectangle still hits a marked row.
        """
        if min_label_height < 1:
            raise ValueError("min_label_height must be >= 1")
        # stride is anchored at the unclipped top so clipping never shifts the pattern
        top, bottom = y0, y1
        clipped = self._clip_rect(x0, y0, x1, y1)
        if clipped is None:
            return
        x0, y0, x1, y1 = clipped
        w = self.width
        for y in marked_rows(top, bottom, min_label_height):
            if y0 <= y <= y1:
                self._row_mark(y * w + x0, y * w + x1)
        # rows clipped away at the top or bottom would leave the visible part unmarked
        if top < y0:
            self._row_mark(y0 * w + x0, y0 * w + x1)
        if bottom > y1:
            self._row_mark(y1 * w + x0, y1 * w + x1)

    def count(self) -> int:
        return sum(bin(v).count("1") for v in self.words)

    def to_array(self):
        """Unpack into a ``(height, width)`` boolean numpy array."""
        n = self.word_bits
        total = self.width * self.height
        arr = np.array(self.words, dtype=np.uint64)
        bits = np.empty((len(self.words), n), dtype=bool)
        for k in range(n):
            bits[:, k] = (arr >> np.uint64(n - 1 - k)) & np.uint64(1)
        bits = bits.reshape(-1)
        return bits[:total].reshape(self.height, self.width)

    def to_pgm(self) -> str:
        """Plain PGM (P2) text, one sample per pixel, 1 = occupied."""
        occ = self.to_array()
        lines = ["P2", f"{self.width} {self.height}", "1"]
        for row in occ:
            lines.append(" ".join("1" if v else "0" for v in row))
        return "\n".join(lines) + "\n"


def marked_rows(top: int, bottom: int, stride: int) -> list:
    """Rows written by a row-skipping rectangle update."""
    rows = list(range(top, bottom + 1, stride))
    if rows[-1] != bottom:
        rows.append(bottom)
    return rows


def create(width: int, height: int, word_bits: int = DEFAULT_WORD_BITS) -> OccupancyBitmap:
    return OccupancyBitmap(width, height, word_bits)
