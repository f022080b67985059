import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fractube.errors import DegenerateShape
from fractube.geometry2d import (ConvexPolygon, PolygonSampler, RoundedCornerSquare,
                                 chebyshev_center, equilateral_triangle, exact_tube_area,
                                 first_erosion_event, inner_parallel_body, montecarlo_tube_area,
                                 polygon_area, polygon_inradius, regular_polygon, square)

SQ = square(1.0)


def test_areas():
    assert polygon_area(SQ) == pytest.approx(1.0, abs=1e-15)
    assert polygon_area(equilateral_triangle(0.5)) == pytest.approx(math.sqrt(3) / 16, rel=1e-14)
    assert polygon_area(equilateral_triangle(1 / 3)) == pytest.approx(math.sqrt(3) / 36, rel=1e-14)


def test_inradii():
    assert polygon_inradius(equilateral_triangle(0.5)) == pytest.approx(1 / (4 * math.sqrt(3)), rel=1e-12)
    assert polygon_inradius(equilateral_triangle(1 / 3)) == pytest.approx(math.sqrt(3) / 18, rel=1e-12)
    assert polygon_inradius(SQ) == pytest.approx(0.5, rel=1e-12)
    rect = ConvexPolygon([(0, 0), (3, 0), (3, 1), (0, 1)])
    assert polygon_inradius(rect) == pytest.approx(0.5, rel=1e-12)
    c, r = chebyshev_center(rect)
    assert c[1] == pytest.approx(0.5, abs=1e-12)


def test_clockwise_input_is_reoriented():
    p = ConvexPolygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert polygon_area(p) == pytest.approx(1.0)


@pytest.mark.parametrize("verts", [
    [(0, 0), (1, 0), (2, 0)],
    [(0, 0), (1, 0), (1, 1), (1, 1), (0, 1)],
    [(0, 0), (1, 0), (0.5, 0.0), (1, 1), (0, 1)],
    [(0, 0), (2, 0), (1, 0.2), (2, 2), (0, 2)],
])
def test_rejects_bad_polygons(verts):
    with pytest.raises(DegenerateShape):
        ConvexPolygon(verts)


def test_vertices_are_read_only():
    with pytest.raises(ValueError):
        SQ.vertices[0, 0] = 5.0


def test_inner_parallel_body():
    assert polygon_area(inner_parallel_body(SQ, 0.0)) == pytest.approx(1.0, rel=1e-14)
    core = inner_parallel_body(SQ, 0.25)
    v = core.vertices
    assert polygon_area(core) == pytest.approx(0.25, rel=1e-12)
    assert v.mean(axis=0) == pytest.approx([0.5, 0.5], abs=1e-12)
    assert inner_parallel_body(SQ, 0.5) is None
    assert inner_parallel_body(SQ, 0.7) is None


def test_exact_tube_area():
    t = equilateral_triangle(0.5)
    g = polygon_inradius(t)
    for eps in np.linspace(0.01, 0.99, 7) * g:
        assert exact_tube_area(t, eps) == pytest.approx(3 * math.sqrt(3) * (2 * g * eps - eps ** 2), rel=1e-10)
    assert exact_tube_area(SQ, 0.1) == pytest.approx(0.36, rel=1e-12)
    assert exact_tube_area(SQ, 2.0) == pytest.approx(1.0)


def test_tube_monotone_and_perimeter_limit():
    p = ConvexPolygon([(0, 0), (3, 0), (4, 1), (2, 3), (0, 2)])
    g = polygon_inradius(p)
    eps = np.linspace(0, 1.2 * g, 60)
    vals = np.array([exact_tube_area(p, e) for e in eps])
    assert np.all(np.diff(vals) >= -1e-12)
    assert vals[-1] == pytest.approx(polygon_area(p))
    assert exact_tube_area(p, 1e-7) / 1e-7 == pytest.approx(p.perimeter(), rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(0.1, 10), frac=st.floats(0.0, 0.95))
def test_erosion_homogeneity(lam, frac):
    p = ConvexPolygon([(0, 0), (3, 0), (4, 1), (2, 3), (0, 2)])
    eps = frac * polygon_inradius(p)
    a = inner_parallel_body(p.scaled(lam), lam * eps)
    b = inner_parallel_body(p, eps)
    assert polygon_area(a) == pytest.approx(lam ** 2 * polygon_area(b), rel=1e-9)


def test_first_erosion_event_regular_polygon_is_inradius():
    hexagon = regular_polygon(6, inradius=1.0)
    assert first_erosion_event(hexagon) == pytest.approx(1.0, rel=1e-12)
    kite = ConvexPolygon([(0, 0), (4, 0), (4, 1), (0, 3)])
    assert first_erosion_event(kite) < polygon_inradius(kite)


def test_montecarlo_saturated_square():
    est = montecarlo_tube_area(PolygonSampler(SQ), 0.6, 20000, seed=1)
    assert abs(est.estimate - 1.0) <= 3 * est.std_error + 1e-12


def test_montecarlo_matches_exact_polygon_tubes():
    p = ConvexPolygon([(0, 0), (3, 0), (4, 1), (2, 3), (0, 2)])
    eps = np.linspace(0.05, 1.0, 10) * polygon_inradius(p)
    ests = montecarlo_tube_area(PolygonSampler(p), eps, 200_000, seed=3)
    for e, est in zip(eps, ests):
        assert abs(est.estimate - exact_tube_area(p, e)) <= 4 * est.std_error


def test_montecarlo_deterministic_across_workers():
    shape = RoundedCornerSquare()
    a = montecarlo_tube_area(shape, [0.25, 0.75], 600_000, seed=11, workers=1)
    b = montecarlo_tube_area(shape, [0.25, 0.75], 600_000, seed=11, workers=4)
    assert a == b


def test_montecarlo_validation():
    with pytest.raises(ValueError):
        montecarlo_tube_area(PolygonSampler(SQ), 0.1, 10, seed=0)
    with pytest.raises(ValueError):
        montecarlo_tube_area(PolygonSampler(SQ), -0.1, 1000, seed=0)


def test_rounded_square_predicates():
    s = RoundedCornerSquare()
    pts = np.array([[1.0, 1.0], [1.95, 1.95], [1.5 + 0.3, 1.5 + 0.3], [0.1, 1.0]])
    assert s.contains(pts).tolist() == [True, False, True, True]
    d = s.boundary_distance(pts[[0, 3]])
    assert d == pytest.approx([1.0, 0.1])
    assert s.area() == pytest.approx(4 - (1 - math.pi / 4) / 4)


def test_rounded_square_tube_at_half_and_three_quarters():
    # the eroded core is a square minus an arc region; cross-checked by sampling
    s = RoundedCornerSquare()
    for eps, exact in [(0.25, (7 + math.pi / 4) * 0.25 - (3 + math.pi / 4) * 0.0625),
                       (0.75, (math.pi - 4) / 16 + 8 * 0.75 - 4 * 0.5625)]:
        est = montecarlo_tube_area(s, eps, 1_000_000, seed=5)
        assert abs(est.estimate - exact) <= 3 * est.std_error
