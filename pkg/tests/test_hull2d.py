from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phylotrop.errors import ValidationError
from phylotrop.hull2d import from_plane, in_hull, to_plane, trop_hull_2d
from phylotrop.tropical import in_tropical_polytope, trop_segment

MATRIX = [
    "77/100 1 21/25 1 1 21/25 1 1 13/25 1",
    "1 1 1 1 8/25 3/4 3/4 3/4 3/4 23/50",
    "1 1 1 49/50 16/25 16/25 1 3/100 1 1",
]
COLUMNS = [list(c) for c in zip(*[[F(x) for x in r.split()] for r in MATRIX])]


@pytest.fixture(scope="module")
def example():
    return trop_hull_2d(COLUMNS)


def test_example_counts(example):
    assert example.counts == (23, 35, 13)
    assert example.euler_characteristic() == 1


def test_example_area(example):
    def shoelace(poly):
        return abs(sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(poly, poly[1:] + poly[:1]))) / 2

    area = sum(shoelace(p) for p in example.cell_polygons())
    # grid estimate, with membership decided by the projection fixed point
    xs = [p[0] for p in example.nodes]
    ys = [p[1] for p in example.nodes]
    n = 60
    gx = np.linspace(float(min(xs)), float(max(xs)), n)
    gy = np.linspace(float(min(ys)), float(max(ys)), n)
    cell = (gx[1] - gx[0]) * (gy[1] - gy[0])
    hits = sum(
        in_tropical_polytope(from_plane((F(x), F(y))), COLUMNS) for x in gx for y in gy
    )
    box = float((max(xs) - min(xs)) * (max(ys) - min(ys)))
    assert float(area) == pytest.approx(hits * cell, abs=0.03 * box)


def test_generators_and_nodes_in_hull(example):
    gens = example.generators
    assert all(in_hull(g, gens) for g in gens)
    assert all(in_hull(v, gens) for v in example.nodes)
    assert set(gens) <= set(example.nodes)


def test_single_point():
    cx = trop_hull_2d([[0, 1, 2]])
    assert cx.counts == (1, 0, 0)


def test_repeated_point_modulo_ones():
    cx = trop_hull_2d([[0, 1, 2], [3, 4, 5]])
    assert cx.counts == (1, 0, 0)


def test_two_points_bend_once():
    cx = trop_hull_2d([[0, 0, 0], [0, 2, 1]])
    assert cx.counts == (3, 2, 0)


def test_two_points_on_a_ray():
    assert trop_hull_2d([[0, 0, 0], [0, 1, 0]]).counts == (2, 1, 0)


def test_rejects_wrong_dimension():
    with pytest.raises(ValidationError):
        trop_hull_2d([[0, 1]])
    with pytest.raises(ValidationError):
        trop_hull_2d([])


def test_plane_round_trip():
    assert to_plane(from_plane((F(1, 3), F(-2)))) == (F(1, 3), F(-2))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=6))
def test_hulls_are_contractible(pts):
    cx = trop_hull_2d([from_plane(p) for p in pts])
    assert cx.euler_characteristic() == 1
    gens = cx.generators
    for a, b in cx.edges:
        p, q = cx.nodes[a], cx.nodes[b]
        assert in_hull(((p[0] + q[0]) / 2, (p[1] + q[1]) / 2), gens)


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_two_point_hull_is_the_segment(p, q):
    cx = trop_hull_2d([from_plane(p), from_plane(q)])
    seg = trop_segment(from_plane(p), from_plane(q))
    assert set(cx.nodes) == {to_plane(b.coords) for b in seg.breakpoints}
    assert cx.counts[2] == 0
