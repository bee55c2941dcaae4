import random

import numpy as np
import pytest

from bitlabel.greedy import place_labels_greedy
from bitlabel.model import LabelConfig, Mark, PixelRect
from bitlabel.particle import (
    ParticleGrid,
    center_particles,
    corner_particles,
    label_box,
    place_labels_particle,
    rect_corner_particles,
)
from bitlabel.raster import occupancy_array

from oracles import audit_overlaps, random_point_scene, witness_scene


def linear_scan(particles, box):
    x0, y0, x1, y1 = box
    return any(x0 <= x <= x1 and y0 <= y <= y1 for x, y in particles)


def test_center_particle_of_one_pixel():
    occ = np.zeros((6, 6), dtype=bool)
    occ[3, 3] = True
    assert center_particles(occ).tolist() == [[3.5, 3.5]]
    assert center_particles(np.zeros((4, 4), dtype=bool)).shape == (0, 2)


def test_isolated_pixel_gets_four_corners():
    occ = np.zeros((6, 6), dtype=bool)
    occ[3, 3] = True
    assert sorted(map(tuple, corner_particles(occ, 2, 2).tolist())) == [(3, 3), (3, 4), (4, 3), (4, 4)]


def test_filled_square_is_sparse_and_sound():
    occ = np.zeros((20, 20), dtype=bool)
    occ[5:15, 5:15] = True
    parts = corner_particles(occ, 4, 4)
    assert len(parts) < 4 * 100
    grid = ParticleGrid.build(parts, 8)
    for x0 in range(0, 17):
        for y0 in range(0, 17):
            for w in (4, 5, 7):
                for h in (4, 6):
                    if x0 + w > 20 or y0 + h > 20:
                        continue
                    r = PixelRect(x0, y0, x0 + w - 1, y0 + h - 1)
                    if occ[r.y0 : r.y1 + 1, r.x0 : r.x1 + 1].any():
                        assert grid.query(*label_box(r)), r


def test_grid_query_closed_and_empty():
    grid = ParticleGrid.build([(5.0, 5.0)], 4)
    assert grid.query(5.0, 1.0, 9.0, 5.0)
    assert not grid.query(5.5, 0.0, 9.0, 9.0)
    assert not ParticleGrid(3).query(0, 0, 100, 100)
    with pytest.raises(ValueError):
        ParticleGrid(0)


def test_grid_matches_linear_scan():
    rng = random.Random(12)
    parts = [(rng.uniform(0, 200), rng.uniform(0, 120)) for _ in range(400)]
    parts += [(float(rng.randrange(200)), float(rng.randrange(120))) for _ in range(400)]
    grid = ParticleGrid.build(parts, 13)
    assert grid.count == 800
    for _ in range(10_000):
        x0, y0 = rng.randrange(-10, 200), rng.randrange(-10, 120)
        box = (x0 + 0.5 * rng.randrange(2), y0, x0 + rng.randrange(0, 30), y0 + rng.randrange(0, 15) + 0.5)
        assert grid.query(*box) == linear_scan(parts, box)


def test_label_box_through_pixel_centers():
    assert label_box(PixelRect(2, 3, 5, 4)) == (2.5, 3.5, 5.5, 4.5)
    assert label_box(PixelRect(2, 3, 2, 3)) == (2, 3, 3, 4)


def test_placed_label_particles_block_later_labels():
    r = PixelRect(10, 10, 33, 19)
    grid = ParticleGrid.build(rect_corner_particles(r, 6, 5), 24)
    for dx in range(-30, 30, 3):
        for dy in range(-12, 12, 2):
            q = PixelRect(10 + dx, 10 + dy, 10 + dx + 5, 10 + dy + 4)
            assert grid.query(*label_box(q)) == q.intersects(r)


def test_witness_half_pixel_overlap():
    scene, config = witness_scene()
    (orig,) = place_labels_particle(scene, config, "original")
    (imp,) = place_labels_particle(scene, config, "improved")
    (bit,) = place_labels_greedy(scene, config)
    assert orig.placed and orig.rect.y0 == 4
    assert not imp.placed and not bit.placed
    # the original label really shares pixel area with the stroke
    assert audit_overlaps(scene, [orig], scene.marks) != []


def test_improved_matches_bitmap_decisions():
    rng = random.Random(30)
    for _ in range(10):
        scene = random_point_scene(rng, 150, 90, rng.randint(10, 70), rng.randint(0, 6))
        assert place_labels_particle(scene, LabelConfig(), "improved") == place_labels_greedy(scene, LabelConfig())


def test_improved_is_overlap_free():
    rng = random.Random(31)
    for _ in range(8):
        scene = random_point_scene(rng, 150, 90, 60, 5)
        assert audit_overlaps(scene, place_labels_particle(scene, LabelConfig(), "improved"), scene.marks) == []


def test_improved_samples_fewer_particles_on_filled_marks():
    marks = [Mark("rect", rect=(5.0, 5.0, 60.0, 40.0)), Mark("point", center=(80, 30), radius=8)]
    cons = occupancy_array(100, 50, marks, True)
    cent = occupancy_array(100, 50, marks, False)
    assert len(corner_particles(cons, 12, 6)) < len(center_particles(cent))


def test_unknown_variant():
    scene, config = witness_scene()
    with pytest.raises(ValueError):
        place_labels_particle(scene, config, "fancy")
