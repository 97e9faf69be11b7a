"""Crack-tip post-processing: J and interaction integrals, SIFs and opening."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elasticity import FieldSample, compliance_strain
from .errors import ContourOutsideDomain, ModeMismatch
from .oracles import as_numpy

DEFAULT_N = 256


@dataclass
class AuxFields:
    """Unit-K first-term tip fields in the tip frame."""

    sxx: np.ndarray
    syy: np.ndarray
    sxy: np.ndarray
    ux: np.ndarray
    uy: np.ndarray
    dux_dx: np.ndarray
    duy_dx: np.ndarray
    dux_dy: np.ndarray
    duy_dy: np.ndarray


@dataclass
class SifResult:
    K_I: float
    K_II: float
    tip: str
    radius: float
    n_quadrature: int
    method: str = "interaction"

    def as_dict(self):
        return dict(self.__dict__)


def williams_aux(r, theta, mode, material):
    """Leading-order Williams field for unit K of mode "I" or "II".

    Displacement derivatives use the polar chain rule
    d/dx = cos(theta) d/dr - sin(theta)/r d/dtheta and
    d/dy = sin(theta) d/dr + cos(theta)/r d/dtheta, with d/dr = 1/(2r) on sqrt(r).
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    kappa, mu = material.kappa, material.mu
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    c3, s3 = np.cos(1.5 * theta), np.sin(1.5 * theta)
    fs = 1 / np.sqrt(2 * np.pi * r)
    fu = np.sqrt(r / (2 * np.pi)) / (2 * mu)
    if mode == "I":
        sxx = fs * c * (1 - s * s3)
        syy = fs * c * (1 + s * s3)
        sxy = fs * s * c * c3
        gx = c * (kappa - 1 + 2 * s * s)
        gy = s * (kappa + 1 - 2 * c * c)
        dgx = -0.5 * s * (kappa - 1 + 2 * s * s) + 2 * s * c * c
        dgy = 0.5 * c * (kappa + 1 - 2 * c * c) + 2 * s * s * c
    elif mode == "II":
        sxx = -fs * s * (2 + c * c3)
        syy = fs * s * c * c3
        sxy = fs * c * (1 - s * s3)
        gx = s * (kappa + 1 + 2 * c * c)
        gy = -c * (kappa - 1 - 2 * s * s)
        dgx = 0.5 * c * (kappa + 1 + 2 * c * c) - 2 * s * s * c
        dgy = 0.5 * s * (kappa - 1 - 2 * s * s) + 2 * s * c * c
    else:
        raise ValueError(f"mode must be 'I' or 'II', got {mode!r}")
    ux, uy = fu * gx, fu * gy
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    dux_dx = cos_t * ux / (2 * r) - sin_t / r * fu * dgx
    duy_dx = cos_t * uy / (2 * r) - sin_t / r * fu * dgy
    dux_dy = sin_t * ux / (2 * r) + cos_t / r * fu * dgx
    duy_dy = sin_t * uy / (2 * r) + cos_t / r * fu * dgy
    return AuxFields(sxx, syy, sxy, ux, uy, dux_dx, duy_dx, dux_dy, duy_dy)


# -- contour integrals -------------------------------------------------------------

def _contour(tip, radius, n, domain=None):
    if radius <= 0 or n < 1:
        raise ValueError("radius and n must be positive")
    alpha = -np.pi + (np.arange(n) + 0.5) * 2 * np.pi / n
    z = tip.position + radius * np.exp(1j * (tip.direction + alpha))
    if domain is not None and not np.all(domain.contains(z)):
        raise ContourOutsideDomain(f"contour of radius {radius:g} leaves the domain")
    return alpha, z, 2 * np.pi * radius / n


def _local_fields(provider, tip, z):
    f = provider(z)
    return as_numpy(f).rotated(-tip.direction)


def _sig_eps(s, e):
    return s[0] * e[0] + s[1] * e[1] + 2 * s[2] * e[2]


def j_integral(provider, tip, radius, material, n=DEFAULT_N, domain=None):
    """Rice J on a circle of ``radius`` around ``tip`` (midpoint rule, n points).

    ``provider`` maps global points to a FieldSample in the global frame.
    """
    alpha, z, ds = _contour(tip, radius, n, domain)
    f = _local_fields(provider, tip, z)
    n1, n2 = np.cos(alpha), np.sin(alpha)
    sig = (f.sxx, f.syy, f.sxy)
    eps = compliance_strain(*sig, material)
    w = 0.5 * _sig_eps(sig, eps)
    tx = f.sxx * n1 + f.sxy * n2
    ty = f.sxy * n1 + f.syy * n2
    return float(np.sum(w * n1 - (tx * f.dux_dx + ty * f.duy_dx)) * ds)


def interaction_integral(provider, tip, radius, mode, material, n=DEFAULT_N, domain=None):
    """Cross-term contour integral against the unit auxiliary field of ``mode``."""
    alpha, z, ds = _contour(tip, radius, n, domain)
    f = _local_fields(provider, tip, z)
    aux = williams_aux(np.full(n, radius), alpha, mode, material)
    n1, n2 = np.cos(alpha), np.sin(alpha)
    eps_aux = compliance_strain(aux.sxx, aux.syy, aux.sxy, material)
    cross = _sig_eps((f.sxx, f.syy, f.sxy), eps_aux)
    tx = f.sxx * n1 + f.sxy * n2
    ty = f.sxy * n1 + f.syy * n2
    tax = aux.sxx * n1 + aux.sxy * n2
    tay = aux.sxy * n1 + aux.syy * n2
    integrand = (cross * n1 - (tx * aux.dux_dx + ty * aux.duy_dx)
                 - (tax * f.dux_dx + tay * f.duy_dx))
    return float(np.sum(integrand) * ds)


def sifs_from_provider(provider, tip, radius, material, n=DEFAULT_N, domain=None):
    scale = material.E_prime / 2
    k1 = scale * interaction_integral(provider, tip, radius, "I", material, n, domain)
    k2 = scale * interaction_integral(provider, tip, radius, "II", material, n, domain)
    return SifResult(k1, k2, tip.label, radius, n)


def model_provider(model, material):
    return lambda z: as_numpy(model.fields(z, material))


def _require_crack(case):
    if case.domain.crack is None:
        raise ModeMismatch("case has no crack")
    return case.domain.crack


def sif_from_interaction(model, case, tip=None, radius=None, n=DEFAULT_N):
    """SIFs at one tip (or every tip when ``tip`` is None) of a crack-mode model."""
    crack = _require_crack(case)
    radius = case.sif_radius if radius is None else radius
    tips = crack.tips if tip is None else [tip]
    provider = model_provider(model, case.material)
    out = [sifs_from_provider(provider, t, radius, case.material, n, case.domain) for t in tips]
    return out if tip is None else out[0]


def sif_near_field(provider, tip, radii):
    """Linear extrapolation to r = 0 of sqrt(2 pi r) sigma_yy and sigma_xy ahead of the tip."""
    radii = np.asarray(radii, dtype=float)
    z = tip.position + radii * np.exp(1j * tip.direction)
    f = _local_fields(provider, tip, z)
    amp = np.sqrt(2 * np.pi * radii)
    if radii.size == 1:
        k1, k2 = float(amp[0] * f.syy[0]), float(amp[0] * f.sxy[0])
    else:
        k1 = float(np.polyfit(radii, amp * f.syy, 1)[1])
        k2 = float(np.polyfit(radii, amp * f.sxy, 1)[1])
    return SifResult(k1, k2, tip.label, float(radii.max()), radii.size, "near_field")


def near_field_radii(crack, count=10):
    return np.linspace(0.01, 0.1, count) * crack.length


def radius_sweep(model, case, factors=(0.2, 0.4, 0.6, 0.8, 1.0), tip=None, n=DEFAULT_N):
    """SIFs at radii ``factor * crack length`` around one tip (default: the last tip)."""
    crack = _require_crack(case)
    tip = tip or crack.tips[-1]
    return [sif_from_interaction(model, case, tip, f * crack.length, n) for f in factors]


def crack_opening(model, material, s_local, eps_factor=1e-9):
    """Opening uy(upper) - uy(lower) in the crack frame at local abscissa ``s_local``."""
    crack = model.crack
    if crack is None:
        raise ModeMismatch("model has no crack")
    eps = eps_factor * crack.length
    w = np.array([s_local + 1j * eps, s_local - 1j * eps])
    f = as_numpy(model.fields(crack.to_global(w), material)).rotated(-crack.angle)
    return float(f.uy[0] - f.uy[1])


def mouth_opening(model, material):
    """Crack-mouth opening displacement of an edge crack."""
    if model.crack is None or model.crack.kind != "edge":
        raise ModeMismatch("mouth opening needs an edge crack")
    return crack_opening(model, material, -model.crack.length)


def williams_provider(K_I, K_II, material, tip):
    """Global-frame exact first-term field around ``tip`` (for oracle checks)."""
    def provider(z):
        w = (np.asarray(z, dtype=complex) - tip.position) * np.exp(-1j * tip.direction)
        r, th = np.abs(w), np.angle(w)
        a1 = williams_aux(r, th, "I", material)
        a2 = williams_aux(r, th, "II", material)
        mix = lambda name: K_I * getattr(a1, name) + K_II * getattr(a2, name)
        local = FieldSample(*(mix(name) for name in ("sxx", "syy", "sxy", "ux", "uy", "dux_dx",
                                                     "duy_dx", "dux_dy", "duy_dy")))
        return local.rotated(tip.direction)
    return provider
