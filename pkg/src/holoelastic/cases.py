"""Built-in benchmark cases: geometry, loads, material, sampling and defaults."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .crack import CrackSpec
from .elasticity import Material
from .energy import TrainConfig
from .geometry import (Arc, BoundarySegment, Dirichlet, DomainSpec, Line, SamplingPlan,
                       Traction)
from .network import NetworkSpec
from .oracles import TubeSpec, tube_exact

FREE = Traction(0.0)
FIXED = Dirichlet(0.0)


@dataclass
class CaseSpec:
    name: str
    domain: DomainSpec
    material: Material
    plan: SamplingPlan
    network: NetworkSpec
    train: TrainConfig
    exact: Callable | None = None          # z -> FieldSample
    params: dict = field(default_factory=dict)
    sif_radius: float | None = None
    description: str = ""

    @property
    def crack(self):
        return self.domain.crack


def _rect(x0, y0, x1, y1):
    def inside(z):
        return (z.real >= x0) & (z.real <= x1) & (z.imag >= y0) & (z.imag <= y1)
    return inside


# -- crack-free cases ---------------------------------------------------------------

def tube_case(r_in=0.5, r_out=1.0, p_in=5.0, p_out=10.0):
    """Quarter of a pressurized thick-walled tube with symmetry lines on the axes."""
    tube = TubeSpec(r_in, r_out, p_in, p_out)
    mat = Material.from_lame(1.0, 1.0)

    def inside(z):
        r = np.abs(z)
        return (r >= r_in) & (r <= r_out) & (z.real >= 0) & (z.imag >= 0)

    def radial(p):
        return lambda z: p * z / np.abs(z)

    t_in, t_out = radial(p_in), radial(-p_out)
    segments = [
        BoundarySegment("bottom", Line(r_in, r_out), FREE, FIXED),
        BoundarySegment("outer", Arc(0j, r_out, 0.0, np.pi / 2),
                        Traction(lambda z: t_out(z).real), Traction(lambda z: t_out(z).imag)),
        BoundarySegment("left", Line(1j * r_out, 1j * r_in), FIXED, FREE),
        BoundarySegment("inner", Arc(0j, r_in, np.pi / 2, 0.0),
                        Traction(lambda z: t_in(z).real), Traction(lambda z: t_in(z).imag)),
    ]
    dom = DomainSpec(inside, (0.0, 0.0, r_out, r_out), segments,
                     analytic_area=np.pi / 4 * (r_out ** 2 - r_in ** 2))
    return CaseSpec(
        "tube", dom, mat, SamplingPlan(n_interior=1000, boundary_density=128.0),
        NetworkSpec((20, 20, 20)), TrainConfig(),
        exact=lambda z: tube_exact(z, tube, mat),
        params={"r_in": r_in, "r_out": r_out, "p_in": p_in, "p_out": p_out},
        description="pressurized thick-walled tube, quadrant model",
    )


def hole_case(half_width=2.5, radius=1.0, t0=1.0):
    """Quarter of a square plate with a central hole under uniaxial tension in x."""
    L = half_width

    def inside(z):
        return _rect(0, 0, L, L)(z) & (np.abs(z) >= radius)

    segments = [
        BoundarySegment("bottom", Line(radius, L), FREE, FIXED),
        BoundarySegment("right", Line(L, L + 1j * L), Traction(t0), FREE),
        BoundarySegment("top", Line(L + 1j * L, 1j * L), FREE, FREE),
        BoundarySegment("left", Line(1j * L, 1j * radius), FIXED, FREE),
        BoundarySegment("hole", Arc(0j, radius, np.pi / 2, 0.0), FREE, FREE),
    ]
    dom = DomainSpec(inside, (0.0, 0.0, L, L), segments,
                     analytic_area=L * L - np.pi * radius ** 2 / 4)
    return CaseSpec("hole", dom, Material.from_lame(1.0, 1.0), SamplingPlan(n_interior=1000),
                    NetworkSpec((20, 20, 20)), TrainConfig(),
                    params={"half_width": L, "radius": radius, "t0": t0},
                    description="plate with a circular hole, quadrant model")


def nonuniform_case(u0=0.1, lam=1.0, mu=1.0):
    """Unit square pulled by a sinusoidal displacement on its top edge."""
    amp = u0 * (lam + 2 * mu)
    segments = [
        BoundarySegment("bottom", Line(0j, 1 + 0j), FIXED, FIXED),
        BoundarySegment("right", Line(1 + 0j, 1 + 1j), FIXED, FREE),
        BoundarySegment("top", Line(1 + 1j, 1j), FREE,
                        Dirichlet(lambda z: amp * np.sin(np.pi * z.real))),
        BoundarySegment("left", Line(1j, 0j), FIXED, FREE),
    ]
    dom = DomainSpec(_rect(0, 0, 1, 1), (0.0, 0.0, 1.0, 1.0), segments, analytic_area=1.0)
    return CaseSpec("nonuniform", dom, Material.from_lame(lam, mu), SamplingPlan(n_interior=1000),
                    NetworkSpec((20, 20, 20)), TrainConfig(),
                    params={"u0": u0, "amplitude": amp},
                    description="unit square under non-uniform displacement loading")


# -- cracked cases ---------------------------------------------------------------------

def sent_case(a_over_L=0.5, L=4.0, half_height=4.0, sigma0=1.0, E=210000.0, nu=0.3,
              mode="plane_strain"):
    """Edge-cracked strip of width L; crack mouth at the origin on the left edge."""
    a0 = a_over_L * L
    h = half_height
    crack = CrackSpec.edge(complex(a0, 0.0), a0, 0.0)
    segments = [
        BoundarySegment("bottom", Line(-1j * h, L - 1j * h), FIXED, FIXED),
        BoundarySegment("right", Line(L - 1j * h, L + 1j * h), FREE, FREE),
        BoundarySegment("top", Line(L + 1j * h, 1j * h), FREE, Traction(sigma0)),
        BoundarySegment("left_upper", Line(1j * h, 0j), FREE, FREE),
        BoundarySegment("left_lower", Line(0j, -1j * h), FREE, FREE),
    ]
    dom = DomainSpec(_rect(0, -h, L, h), (0.0, -h, L, h), segments, crack=crack,
                     analytic_area=2 * h * L)
    return CaseSpec(
        "sent", dom, Material(E, nu, mode),
        SamplingPlan(grid=(120, 120), boundary_density=32.0),
        NetworkSpec((10, 10, 10)), TrainConfig(iterations=2000),
        params={"a_over_L": a_over_L, "a0": a0, "L": L, "half_height": h, "sigma0": sigma0},
        sif_radius=0.5 * a0,
        description="single-edge-notched tension strip",
    )


def occt_case(half_width=4.0, half_length=2.0, angle_deg=45.0, sigma0=10.0, E=100000.0,
              nu=0.3, mode="plane_strain"):
    """Square plate with an inclined central crack and a sinusoidal top load."""
    L = half_width
    crack = CrackSpec.internal(0j, half_length, np.deg2rad(angle_deg))
    top_load = Traction(lambda z: sigma0 * np.sin(np.pi * (z.real + L) / (2 * L)))
    segments = [
        BoundarySegment("bottom", Line(-L - 1j * L, L - 1j * L), FIXED, FIXED),
        BoundarySegment("right", Line(L - 1j * L, L + 1j * L), FREE, FREE),
        BoundarySegment("top", Line(L + 1j * L, -L + 1j * L), FREE, top_load),
        BoundarySegment("left", Line(-L + 1j * L, -L - 1j * L), FREE, FREE),
    ]
    dom = DomainSpec(_rect(-L, -L, L, L), (-L, -L, L, L), segments, crack=crack,
                     analytic_area=4 * L * L)
    return CaseSpec(
        "occt", dom, Material(E, nu, mode),
        SamplingPlan(grid=(120, 120), boundary_density=32.0),
        NetworkSpec((20, 20, 20)), TrainConfig(iterations=2000),
        params={"half_width": L, "half_length": half_length, "angle_deg": angle_deg,
                "sigma0": sigma0},
        sif_radius=0.5,
        description="oblique centre-cracked plate under sinusoidal tension",
    )


CASE_FACTORIES = {
    "tube": tube_case,
    "hole": hole_case,
    "nonuniform": nonuniform_case,
    "sent": sent_case,
    "occt": occt_case,
}


def get_case(name, **params):
    try:
        factory = CASE_FACTORIES[name]
    except KeyError:
        raise KeyError(f"unknown case {name!r}; choose from {sorted(CASE_FACTORIES)}") from None
    return factory(**params)


def builtin_cases():
    return [factory() for factory in CASE_FACTORIES.values()]
