"""Closed-form reference solutions and error metrics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elasticity import FieldSample, Material, km_fields, von_mises
from .errors import OutOfDomain, RangeError
from .jets import HoloJet2
from .network import PotentialModel, polynomial_potential

# Reference FEM stress intensity factors for the oblique-crack plate
OCCT_FEM = {
    "left": {"K_I": 12.49, "K_II": 13.50},
    "right": {"K_I": 20.26, "K_II": 14.64},
}


# -- thick-walled tube ------------------------------------------------------------

@dataclass(frozen=True)
class TubeSpec:
    r_in: float = 0.5
    r_out: float = 1.0
    p_in: float = 5.0
    p_out: float = 10.0

    @property
    def coefficients(self):
        """(A, B) in the Lamé form sigma_rr = A + B / r^2."""
        ri2, ro2 = self.r_in ** 2, self.r_out ** 2
        a = (ri2 * self.p_in - ro2 * self.p_out) / (ro2 - ri2)
        b = ri2 * ro2 * (self.p_out - self.p_in) / (ro2 - ri2)
        return a, b


def tube_potentials(tube):
    """Exact (phi, psi) as jet functions: phi = A z / 2, psi = B / z."""
    a, b = tube.coefficients

    def phi(z):
        return HoloJet2(0.5 * a * z, 0.5 * a * np.ones_like(z), np.zeros_like(z))

    def psi(z):
        return HoloJet2(b / z, -b / z ** 2, 2 * b / z ** 3)

    return phi, psi


def tube_exact(z, tube=TubeSpec(), material=Material.from_lame(1.0, 1.0), tol=1e-12):
    """Exact fields at points of the tube wall."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r = np.abs(z)
    if np.any(r < tube.r_in * (1 - tol)) or np.any(r > tube.r_out * (1 + tol)):
        raise OutOfDomain("point outside the tube wall")
    phi, psi = tube_potentials(tube)
    return km_fields(phi(z), psi(z), z, material)


# -- single-edge-notched tension ---------------------------------------------------

def _sent_check(a0, L):
    ratio = a0 / L
    if not 0.2 <= ratio <= 0.7:
        raise RangeError(f"a0/L = {ratio:.3g} is outside [0.2, 0.7]")
    return ratio, np.pi * a0 / (2 * L)


def sent_cod(a0, L, sigma0, material):
    """Crack-mouth opening displacement of an edge-cracked strip."""
    _, beta = _sent_check(a0, L)
    shape = (1.46 + 3.42 * (1 - np.cos(beta))) / np.cos(beta) ** 2
    return 4 * sigma0 * a0 / material.E_prime * shape


def sent_k1(a0, L, sigma0):
    """Mode-I stress intensity factor of an edge-cracked strip."""
    ratio, beta = _sent_check(a0, L)
    poly = 0.752 + 2.02 * ratio + 0.37 * (1 - np.sin(beta)) ** 3
    F = np.sqrt(np.tan(beta) / beta) * poly / np.cos(beta)
    return sigma0 * np.sqrt(np.pi * a0) * F


# -- cracks in remote fields -------------------------------------------------------

def remote_crack_model(crack, sxx, syy, sxy):
    """Exact model of a crack in an infinite plate under uniform remote stress.

    Stresses are given in the crack frame.
    """
    c1 = 0.5 * (syy - 1j * sxy)
    c2 = 0.25 * (sxx - syy)
    return PotentialModel(polynomial_potential([c1]), polynomial_potential([0.0, c2]), crack)


def williams_potentials(K_I, K_II):
    """Jets of the leading-order tip potentials (tip at the origin)."""
    c = (K_I - 1j * K_II) / np.sqrt(2 * np.pi)
    d = np.conj(c) - 0.5 * c

    def jets(coef):
        def fn(z):
            s = np.sqrt(z)
            return HoloJet2(coef * s, 0.5 * coef / s, -0.25 * coef / (s * z))
        return fn

    return jets(c), jets(d)


def williams_fields(r, theta, K_I, K_II, material):
    """Leading-order near-tip fields from the trigonometric forms."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    kappa, mu = material.kappa, material.mu
    h, h3 = theta / 2, 3 * theta / 2
    c, s = np.cos(h), np.sin(h)
    fs = 1 / np.sqrt(2 * np.pi * r)
    fu = np.sqrt(r / (2 * np.pi)) / (2 * mu)
    sxx = K_I * fs * c * (1 - s * np.sin(h3)) - K_II * fs * s * (2 + c * np.cos(h3))
    syy = K_I * fs * c * (1 + s * np.sin(h3)) + K_II * fs * s * c * np.cos(h3)
    sxy = K_I * fs * s * c * np.cos(h3) + K_II * fs * c * (1 - s * np.sin(h3))
    ux = K_I * fu * c * (kappa - 1 + 2 * s * s) + K_II * fu * s * (kappa + 1 + 2 * c * c)
    uy = K_I * fu * s * (kappa + 1 - 2 * c * c) - K_II * fu * c * (kappa - 1 - 2 * s * s)
    return sxx, syy, sxy, ux, uy


# -- metrics ---------------------------------------------------------------------

def rel_l2(pred, ref, weights=None):
    """Relative L2 error ||pred - ref|| / ||ref|| with optional quadrature weights."""
    pred, ref = np.asarray(pred), np.asarray(ref)
    w = np.ones(ref.shape) if weights is None else np.asarray(weights)
    den = np.sqrt(np.sum(w * np.abs(ref) ** 2))
    if den == 0:
        raise ValueError("reference field is identically zero")
    return float(np.sqrt(np.sum(w * np.abs(pred - ref) ** 2)) / den)


def mse(pred, ref):
    return float(np.mean(np.abs(np.asarray(pred) - np.asarray(ref)) ** 2))


def r2(pred, ref):
    ref = np.asarray(ref)
    ss_tot = np.sum((ref - ref.mean()) ** 2)
    if ss_tot == 0:
        raise ValueError("reference field is constant")
    return float(1 - np.sum((np.asarray(pred) - ref) ** 2) / ss_tot)


FIELD_NAMES = ("sxx", "syy", "sxy", "ux", "uy", "svm")
POOLED_NAMES = ("sxx", "syy", "sxy", "ux", "uy")


def mse_pooled(pred, ref):
    """Mean squared error over the in-plane stresses and displacements together."""
    p = np.concatenate([np.ravel(np.asarray(getattr(pred, k), float)) for k in POOLED_NAMES])
    q = np.concatenate([np.ravel(np.asarray(getattr(ref, k), float)) for k in POOLED_NAMES])
    return mse(p, q)


def field_metrics(pred, ref, weights=None):
    """Per-field {name: {"rel_l2", "mse", "r2"}} for two FieldSamples."""
    out = {}
    for name in FIELD_NAMES:
        p = von_mises(pred) if name == "svm" else getattr(pred, name)
        q = von_mises(ref) if name == "svm" else getattr(ref, name)
        p, q = np.asarray(p, float), np.asarray(q, float)
        out[name] = {"rel_l2": rel_l2(p, q, weights), "mse": mse(p, q), "r2": r2(p, q)}
    return out


def as_numpy(sample):
    """Copy of a FieldSample with every entry detached to a numpy array."""
    from dataclasses import fields
    from .autodiff import value_of
    return FieldSample(*(np.asarray(value_of(getattr(sample, f.name))) for f in fields(sample)))
