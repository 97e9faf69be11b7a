from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holoelastic.cases import FREE, get_case
from holoelastic.errors import EmptyDomain
from holoelastic.geometry import (Arc, BoundarySegment, Dirichlet, DomainSpec, Line,
                                  SamplingPlan, Traction, mc_area, sample_all_boundaries,
                                  sample_boundary, sample_interior)


def unit_square():
    inside = lambda z: (z.real >= 0) & (z.real <= 1) & (z.imag >= 0) & (z.imag <= 1)
    segs = [BoundarySegment("s", Line(0j, 1 + 0j), FREE, FREE)]
    return DomainSpec(inside, (0.0, 0.0, 1.0, 1.0), segs)


def test_mc_area_full_square_is_exact():
    for n in (1, 10, 12345):
        assert mc_area(unit_square(), n, seed=n) == 1.0


def test_mc_area_hole_plate():
    area = mc_area(get_case("hole").domain, 1_000_000, seed=0)
    assert area == pytest.approx(6.25 - np.pi / 4, rel=0.01)


def test_mc_area_annulus_quadrant():
    area = mc_area(get_case("tube").domain, 1_000_000, seed=1)
    assert area == pytest.approx(np.pi / 4 * 0.75, rel=0.01)


@pytest.mark.parametrize("sequence", ["uniform", "halton"])
def test_unit_square_interior(sequence):
    plan = SamplingPlan(n_interior=100, sequence=sequence)
    dom = unit_square()
    dom.analytic_area = 1.0
    pts, w = sample_interior(dom, plan)
    assert pts.size == 100 and dom.contains(pts).all()
    assert w.sum() == pytest.approx(1.0)


def test_annulus_points_inside():
    case = get_case("tube")
    pts, w = sample_interior(case.domain, case.plan)
    r = np.abs(pts)
    assert ((r >= 0.5) & (r <= 1.0) & (pts.real >= 0) & (pts.imag >= 0)).all()
    assert w.sum() == pytest.approx(np.pi / 4 * 0.75)


def test_sampling_is_deterministic():
    case = get_case("tube")
    a, _ = sample_interior(case.domain, case.plan)
    b, _ = sample_interior(case.domain, case.plan)
    c, _ = sample_interior(case.domain, replace(case.plan, seed=1))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sent_grid_and_rings():
    case = get_case("sent")
    pts, w = sample_interior(case.domain, case.plan)
    crack = case.crack
    grid_part = w == w.max()
    assert grid_part.sum() <= 120 * 120
    # the innermost ring lies on the core circle itself
    assert (np.abs(pts - crack.tips[0].position) >= crack.core_radius * (1 - 1e-12)).all()
    assert not crack.near_cut(pts, 1e-12 * crack.length).any()
    assert case.domain.contains(pts).all()
    assert w.sum() == pytest.approx(32.0, rel=1e-3)


def test_empty_domain_raises():
    dom = DomainSpec(lambda z: np.zeros(z.shape, bool), (0.0, 0.0, 1.0, 1.0), [])
    with pytest.raises(EmptyDomain):
        sample_interior(dom, SamplingPlan(n_interior=5, area_samples=10))


def test_boundary_examples():
    seg = BoundarySegment("u", Line(0j, 1 + 0j), FREE, FREE)
    b = sample_boundary(seg, 4)
    np.testing.assert_allclose(b.weights, 0.25)
    arc = BoundarySegment("q", Arc(0j, 1.0, 0.0, np.pi / 2), FREE, FREE)
    assert sample_boundary(arc, 10).weights.sum() == pytest.approx(np.pi / 2)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 3), st.floats(-np.pi, np.pi), st.floats(0.1, 3), st.integers(1, 50))
def test_arc_samples_on_curve_with_outward_normals(radius, t0, sweep, n):
    seg = BoundarySegment("a", Arc(0.5 + 0.5j, radius, t0, t0 + sweep), FREE, FREE)
    b = sample_boundary(seg, n)
    assert np.max(np.abs(np.abs(b.points - (0.5 + 0.5j)) - radius)) < 1e-12 * (1 + radius)
    assert b.weights.sum() == pytest.approx(seg.length)
    # counter-clockwise arc: material on the left is the disc interior, so normals point out
    radial = (b.points - (0.5 + 0.5j)) / radius
    np.testing.assert_allclose(b.normals, radial, atol=1e-12)


def test_tube_boundary_total_length_and_normals():
    case = get_case("tube")
    samples = sample_all_boundaries(case.domain, case.plan)
    total = sum(s.weights.sum() for s in samples)
    assert total == pytest.approx(0.5 + 0.5 + np.pi / 2 * (1 + 0.5))
    inner = next(s for s in samples if s.segment.name == "inner")
    np.testing.assert_allclose(inner.normals, -inner.points / np.abs(inner.points), atol=1e-12)
    bottom = next(s for s in samples if s.segment.name == "bottom")
    np.testing.assert_allclose(bottom.normals, -1j)


def test_bc_evaluation():
    z = np.array([1 + 1j, 2 + 0j])
    np.testing.assert_array_equal(Dirichlet(2.0)(z), [2.0, 2.0])
    np.testing.assert_array_equal(Traction(lambda p: p.real)(z), [1.0, 2.0])
    assert Traction(0.0).is_zero and not Traction(lambda p: 0 * p.real).is_zero


def test_plan_validation():
    with pytest.raises(ValueError):
        SamplingPlan(sequence="sobol")
    with pytest.raises(ValueError):
        SamplingPlan(grid=(0, 3))
    seg = BoundarySegment("s", Line(0j, 10 + 0j), FREE, FREE)
    assert SamplingPlan(boundary_density=2).boundary_count(seg) == 20
    assert SamplingPlan(boundary_counts={"s": 3}).boundary_count(seg) == 3
