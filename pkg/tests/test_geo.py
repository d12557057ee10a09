import math

import pytest
from hypothesis import given, strategies as st

from longhaul.geo import Point, Polyline, euclid_km, point_along, polyline_from

coord = st.floats(-1e4, 1e4, allow_nan=False)


@pytest.mark.parametrize("a,b,want", [((0, 0), (0, 0), 0.0), ((0, 0), (3, 4), 5.0), ((1, 1), (4, 5), 5.0)])
def test_euclid_examples(a, b, want):
    assert euclid_km(Point(*a), Point(*b)) == want


@given(coord, coord, coord, coord)
def test_euclid_symmetric_and_nonnegative(x1, y1, x2, y2):
    a, b = Point(x1, y1), Point(x2, y2)
    assert euclid_km(a, b) == euclid_km(b, a) >= 0


def test_point_rejects_nan():
    with pytest.raises(ValueError):
        Point(math.nan, 0)


@pytest.mark.parametrize("pts,s,want", [
    ([(0, 0), (10, 0)], 0, (0, 0)),
    ([(0, 0), (10, 0)], 5, (5, 0)),
    ([(0, 0), (10, 0), (10, 10)], 15, (10, 5)),
])
def test_point_along_examples(pts, s, want):
    p = point_along(polyline_from(pts), s)
    assert (p.x, p.y) == pytest.approx(want)


@pytest.mark.parametrize("s", [-0.1, 20.0001])
def test_point_along_out_of_range(s):
    with pytest.raises(ValueError):
        point_along(polyline_from([(0, 0), (10, 0), (10, 10)]), s)


def test_polyline_needs_two_vertices():
    with pytest.raises(ValueError):
        polyline_from([(0, 0)])


def test_polyline_running_length_not_shorter_than_chord():
    with pytest.raises(ValueError):
        Polyline((Point(0, 0), Point(10, 0)), (0.0, 9.0))


def test_point_along_on_road_lengths():
    # a road 20 km long over a 10 km chord: positions scale with the running length
    p = Polyline((Point(0, 0), Point(10, 0)), (0.0, 20.0))
    assert p.length == 20.0
    assert point_along(p, 10.0).x == pytest.approx(5.0)


@given(st.lists(st.tuples(coord, coord), min_size=2, max_size=6), st.floats(0, 1))
def test_point_along_stays_within_distance_of_start(pts, frac):
    poly = polyline_from(pts)
    s = frac * poly.length
    q = point_along(poly, s)
    # a point reached after s km along the line is at most s km from the start, as the crow flies
    assert euclid_km(poly.vertices[0], q) <= s + 1e-6 * (1 + s)
