"""Cracked-domain potentials: characteristic function and Woo-type ansatz.

All crack geometry is handled in the crack frame: ``w = exp(-i angle) (z - origin)``
puts the crack on the real axis (internal crack on [-a, a], edge crack on
(-inf, 0] with its tip at the origin).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autodiff import concatenate, value_of
from .elasticity import Material, km_fields
from .errors import ModeMismatch
from .jets import HoloJet2, jet_conj, jet_mul, jet_scale, jet_seed, jet_sqrt

CORE_FACTOR = 1e-3


@dataclass(frozen=True)
class Tip:
    index: int
    position: complex
    direction: float   # angle of the crack extension direction
    label: str


@dataclass(frozen=True)
class CrackSpec:
    kind: str          # "internal" or "edge"
    origin: complex    # centre (internal) or tip (edge)
    length: float      # half-length a (internal) or crack length (edge)
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in ("internal", "edge"):
            raise ValueError(f"unknown crack kind {self.kind!r}")
        if not self.length > 0:
            raise ValueError("crack length must be positive")
        object.__setattr__(self, "origin", complex(self.origin))

    @classmethod
    def internal(cls, center, half_length, angle=0.0):
        return cls("internal", center, half_length, angle)

    @classmethod
    def edge(cls, tip, length, angle=0.0):
        return cls("edge", tip, length, angle)

    @property
    def rotation(self):
        return np.exp(1j * self.angle)

    @property
    def scale(self):
        return self.length

    @property
    def core_radius(self):
        return CORE_FACTOR * self.length

    @property
    def tips(self):
        if self.kind == "edge":
            return [Tip(0, self.origin, self.angle, "tip")]
        off = self.length * self.rotation
        return [
            Tip(0, self.origin - off, self.angle + np.pi, "left"),
            Tip(1, self.origin + off, self.angle, "right"),
        ]

    @property
    def tip_positions(self):
        return [t.position for t in self.tips]

    def to_local(self, z):
        return (np.asarray(z, dtype=complex) - self.origin) * np.conj(self.rotation)

    def to_global(self, w):
        return np.asarray(w, dtype=complex) * self.rotation + self.origin

    def face_span(self):
        """Local real-axis interval occupied by the crack."""
        if self.kind == "internal":
            return -self.length, self.length
        return -self.length, 0.0

    def near_cut(self, z, tol):
        """True where ``z`` lies within ``tol`` of the crack segment."""
        w = self.to_local(z)
        lo, hi = self.face_span()
        return (np.abs(w.imag) <= tol) & (w.real >= lo - tol) & (w.real <= hi + tol)


def crack_to_dict(c):
    return {"kind": c.kind, "origin": [c.origin.real, c.origin.imag],
            "length": c.length, "angle": c.angle}


def crack_from_dict(d):
    return CrackSpec(d["kind"], complex(*d["origin"]), float(d["length"]), float(d["angle"]))


def zeta(w, spec):
    """Jet of the characteristic function at local points ``w``."""
    w = np.asarray(w, dtype=complex)
    if spec.kind == "edge":
        return jet_sqrt(jet_seed(w))
    a = spec.length
    t = jet_scale(jet_seed(w), 1.0 / a)
    left = jet_sqrt(t - 1.0)
    right = jet_sqrt(t + 1.0)
    return jet_scale(jet_mul(left, right), a)


def _slice_jet(j, sl):
    return HoloJet2(j.f[sl], j.d1[sl], j.d2[sl])


def regular_parts(model, w, params=None):
    """Jets of F1, F2 at ``w`` and of their star transforms F1*, F2*."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    n = w.size
    both = np.concatenate([w, np.conj(w)])
    f1, f2 = model.raw_jets(both, params)
    here, mirror = slice(0, n), slice(n, 2 * n)
    return (_slice_jet(f1, here), _slice_jet(f2, here),
            jet_conj(_slice_jet(f1, mirror)), jet_conj(_slice_jet(f2, mirror)))


def woo_potentials(zeta_jet, f1, f2, f1s, f2s, w):
    """phi, psi from the regular parts; psi carries no second derivative."""
    phi = zeta_jet * f1 + f2
    omega = zeta_jet * f1s - f2s
    psi = HoloJet2(
        omega.f - w * phi.d1,
        omega.d1 - phi.d1 - w * phi.d2,
        None,
    )
    return phi, psi


def crack_potentials(model, z, params=None):
    """Crack-frame jets of (phi, psi) at global points ``z``."""
    if model.crack is None:
        raise ModeMismatch("model is not in crack mode")
    w = model.crack.to_local(np.atleast_1d(z))
    z_jet = zeta(w, model.crack)
    f1, f2, f1s, f2s = regular_parts(model, w, params)
    return woo_potentials(z_jet, f1, f2, f1s, f2s, w)


def face_points(spec, n, eps_factor=1e-6, tip_margin=0.02):
    """Local points just above and below the crack faces, tip zones excluded."""
    lo, hi = spec.face_span()
    span = hi - lo
    if spec.kind == "internal":
        lo, hi = lo + tip_margin * span, hi - tip_margin * span
    else:
        hi = hi - tip_margin * span
    s = lo + (hi - lo) * (np.arange(n) + 0.5) / n
    eps = eps_factor * spec.length
    return s + 1j * eps, s - 1j * eps


def traction_free_residual(model, n_face_points=200, material=None):
    """Largest |sigma . n| over points hugging both crack faces.

    Returns (residual, scale) where ``scale`` is the largest stress component
    magnitude seen at the same points.
    """
    if model.crack is None:
        raise ModeMismatch("traction-free check needs a crack-mode model")
    mat = material or Material(1.0, 0.3)
    upper, lower = face_points(model.crack, n_face_points)
    w = np.concatenate([upper, lower])
    phi, psi = crack_potentials(model, model.crack.to_global(w))
    s = km_fields(phi, psi, w, mat)
    sxx, syy, sxy = (np.asarray(value_of(v)) for v in (s.sxx, s.syy, s.sxy))
    traction = np.hypot(sxy, syy)
    scale = float(np.max(np.abs(np.stack([sxx, syy, sxy])))) if w.size else 0.0
    return float(np.max(traction)), scale


__all__ = ["CrackSpec", "Tip", "zeta", "crack_potentials", "regular_parts",
           "woo_potentials", "traction_free_residual", "face_points",
           "crack_to_dict", "crack_from_dict", "concatenate"]
