"""Boundary curves, domains and the sampling plans used for quadrature."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .errors import EmptyDomain

SEQUENCES = ("halton", "uniform")


# -- curves -----------------------------------------------------------------

@dataclass(frozen=True)
class Line:
    p0: complex
    p1: complex

    @property
    def length(self):
        return abs(self.p1 - self.p0)

    def point(self, t):
        return self.p0 + (self.p1 - self.p0) * np.asarray(t, dtype=float)

    def tangent(self, t):
        d = (self.p1 - self.p0) / self.length
        return np.full(np.shape(t), d, dtype=complex)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    @property
    def length(self):
        return self.radius * abs(self.theta1 - self.theta0)

    def _theta(self, t):
        return self.theta0 + (self.theta1 - self.theta0) * np.asarray(t, dtype=float)

    def point(self, t):
        return self.center + self.radius * np.exp(1j * self._theta(t))

    def tangent(self, t):
        sign = np.sign(self.theta1 - self.theta0)
        return sign * 1j * np.exp(1j * self._theta(t))


# -- boundary conditions ------------------------------------------------------

def _evaluate(value, z):
    if callable(value):
        return np.asarray(value(z), dtype=float) * np.ones(np.shape(z))
    return np.full(np.shape(z), float(value))


@dataclass(frozen=True)
class Dirichlet:
    value: Callable | float = 0.0

    def __call__(self, z):
        return _evaluate(self.value, z)


@dataclass(frozen=True)
class Traction:
    value: Callable | float = 0.0

    def __call__(self, z):
        return _evaluate(self.value, z)

    @property
    def is_zero(self):
        return not callable(self.value) and float(self.value) == 0.0


@dataclass(frozen=True)
class BoundarySegment:
    """One analytic boundary curve, traversed with the material on its left."""

    name: str
    curve: Line | Arc
    bc_x: Dirichlet | Traction
    bc_y: Dirichlet | Traction

    @property
    def length(self):
        return self.curve.length

    def normal(self, t):
        """Outward unit normal (pointing away from the material)."""
        return -1j * self.curve.tangent(t)


@dataclass
class DomainSpec:
    indicator: Callable
    bbox: tuple                     # (xmin, ymin, xmax, ymax)
    segments: list
    crack: object = None
    analytic_area: float | None = None

    @property
    def bbox_area(self):
        x0, y0, x1, y1 = self.bbox
        return (x1 - x0) * (y1 - y0)

    def segment(self, name):
        for s in self.segments:
            if s.name == name:
                return s
        raise KeyError(name)

    def contains(self, z):
        return np.asarray(self.indicator(np.asarray(z, dtype=complex)), dtype=bool)


@dataclass
class SamplingPlan:
    n_interior: int = 1000
    grid: tuple | None = None       # (nx, ny) structured grid instead of random points
    boundary_density: float = 64.0  # points per unit length
    boundary_min: int = 16
    boundary_counts: dict = field(default_factory=dict)
    ring_points: int = 16
    ring_max_factor: float = 0.2    # refinement radius as a fraction of the crack length
    core_factor: float = 1e-3
    area_samples: int = 1_000_000
    seed: int = 0
    sequence: str = "halton"        # crack-free interior points: "halton" or "uniform"

    def __post_init__(self):
        if self.sequence not in SEQUENCES:
            raise ValueError(f"sequence must be one of {SEQUENCES}")
        if self.n_interior < 1 or self.boundary_min < 1 or self.ring_points < 1:
            raise ValueError("sample counts must be >= 1")
        if self.grid is not None:
            self.grid = tuple(int(g) for g in self.grid)
            if min(self.grid) < 1:
                raise ValueError("grid dimensions must be >= 1")

    def boundary_count(self, seg):
        if seg.name in self.boundary_counts:
            return int(self.boundary_counts[seg.name])
        return max(self.boundary_min, int(np.ceil(self.boundary_density * seg.length)))


# -- operations -------------------------------------------------------------------

def _uniform_in_bbox(rng, bbox, n):
    x0, y0, x1, y1 = bbox
    return rng.uniform(x0, x1, n) + 1j * rng.uniform(y0, y1, n)


class _PointStream:
    """Candidate points in the bounding box, pseudo-random or scrambled Halton."""

    def __init__(self, bbox, sequence, seed):
        self.bbox = bbox
        if sequence == "halton":
            self.engine = qmc.Halton(d=2, scramble=True, seed=seed)
        else:
            self.engine = None
            self.rng = np.random.default_rng(seed)

    def draw(self, n):
        if self.engine is None:
            return _uniform_in_bbox(self.rng, self.bbox, n)
        x0, y0, x1, y1 = self.bbox
        u = self.engine.random(n)
        return (x0 + (x1 - x0) * u[:, 0]) + 1j * (y0 + (y1 - y0) * u[:, 1])


def mc_area(dom, n, seed=0, batch=250_000):
    """Bounding-box area times the fraction of uniform points inside."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    hits, left = 0, int(n)
    while left > 0:
        m = min(batch, left)
        hits += int(np.count_nonzero(dom.contains(_uniform_in_bbox(rng, dom.bbox, m))))
        left -= m
    return dom.bbox_area * hits / n


def domain_area(dom, plan):
    if dom.analytic_area is not None:
        return float(dom.analytic_area)
    return mc_area(dom, plan.area_samples, plan.seed)


def _excluded(dom, plan, z):
    """Mask of points inside a tip core or (numerically) on the crack line."""
    crack = dom.crack
    if crack is None:
        return np.zeros(np.shape(z), dtype=bool)
    core = plan.core_factor * crack.length
    bad = crack.near_cut(z, 1e-12 * crack.length)
    for tip in crack.tip_positions:
        bad |= np.abs(z - tip) < core
    return bad


def _tip_rings(dom, plan):
    """Dyadic rings around each tip with annulus-area weights."""
    crack = dom.crack
    core = plan.core_factor * crack.length
    r_max = plan.ring_max_factor * crack.length
    radii = [core]
    while radii[-1] * 2 <= r_max:
        radii.append(radii[-1] * 2)
    radii = np.array(radii)
    bounds = np.concatenate([[core], np.sqrt(radii[:-1] * radii[1:]), [r_max]])
    ring_area = np.pi * (bounds[1:] ** 2 - bounds[:-1] ** 2)
    m = plan.ring_points
    alpha = -np.pi + (np.arange(m) + 0.5) * 2 * np.pi / m
    pts, wts = [], []
    for tip in crack.tips:
        for r, area in zip(radii, ring_area):
            pts.append(tip.position + r * np.exp(1j * (tip.direction + alpha)))
            wts.append(np.full(m, area / m))
    return np.concatenate(pts), np.concatenate(wts), r_max


def sample_interior(dom, plan):
    """Interior quadrature points and weights (weights sum to the area)."""
    if plan.grid is not None:
        return _grid_samples(dom, plan)
    stream = _PointStream(dom.bbox, plan.sequence, plan.seed)
    pts, need, tries = [], plan.n_interior, 0
    while need > 0:
        cand = stream.draw(max(4 * need, 256))
        keep = cand[dom.contains(cand) & ~_excluded(dom, plan, cand)]
        pts.append(keep[:need])
        need -= min(need, keep.size)
        tries += 1
        if tries > 200 and need == plan.n_interior:
            raise EmptyDomain("no candidate point fell inside the domain")
    points = np.concatenate(pts)
    area = domain_area(dom, plan)
    return points, np.full(points.size, area / points.size)


def _grid_samples(dom, plan):
    nx, ny = plan.grid
    x0, y0, x1, y1 = dom.bbox
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    xs = x0 + (np.arange(nx) + 0.5) * hx
    ys = y0 + (np.arange(ny) + 0.5) * hy
    grid = (xs[None, :] + 1j * ys[:, None]).ravel()
    keep = dom.contains(grid) & ~_excluded(dom, plan, grid)
    if dom.crack is None:
        pts = grid[keep]
        if pts.size == 0:
            raise EmptyDomain("no grid point fell inside the domain")
        return pts, np.full(pts.size, hx * hy)
    ring_pts, ring_w, r_max = _tip_rings(dom, plan)
    for tip in dom.crack.tip_positions:
        keep &= np.abs(grid - tip) >= r_max
    ring_ok = dom.contains(ring_pts)
    pts = np.concatenate([grid[keep], ring_pts[ring_ok]])
    if pts.size == 0:
        raise EmptyDomain("no grid point fell inside the domain")
    wts = np.concatenate([np.full(int(keep.sum()), hx * hy), ring_w[ring_ok]])
    return pts, wts


@dataclass
class BoundarySample:
    segment: BoundarySegment
    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray


def sample_boundary(seg, n):
    """Arc-length midpoint samples; every weight is |segment| / n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t = (np.arange(n) + 0.5) / n
    return BoundarySample(seg, seg.curve.point(t), seg.normal(t), np.full(n, seg.length / n))


def sample_all_boundaries(dom, plan):
    return [sample_boundary(s, plan.boundary_count(s)) for s in dom.segments]
