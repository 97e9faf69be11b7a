"""Isotropic material model and field reconstruction from potential jets."""
from __future__ import annotations

import enum
from dataclasses import dataclass, fields as dc_fields

import numpy as np


class PlaneMode(enum.Enum):
    STRESS = "plane_stress"
    STRAIN = "plane_strain"


@dataclass(frozen=True)
class Material:
    E: float
    nu: float
    mode: PlaneMode = PlaneMode.STRAIN

    def __post_init__(self):
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", PlaneMode(self.mode))
        if not self.E > 0:
            raise ValueError("E must be positive")
        if not 0 <= self.nu < 0.5:
            raise ValueError("nu must lie in [0, 0.5)")

    @classmethod
    def from_lame(cls, lam, mu, mode=PlaneMode.STRAIN):
        E = mu * (3 * lam + 2 * mu) / (lam + mu)
        nu = lam / (2 * (lam + mu))
        return cls(E, nu, mode)

    @property
    def mu(self):
        return self.E / (2 * (1 + self.nu))

    @property
    def lam(self):
        return self.E * self.nu / ((1 + self.nu) * (1 - 2 * self.nu))

    @property
    def kappa(self):
        return kolosov_kappa(self)

    @property
    def E_prime(self):
        if self.mode is PlaneMode.STRESS:
            return self.E
        return self.E / (1 - self.nu ** 2)

    @property
    def plane_strain(self):
        return self.mode is PlaneMode.STRAIN


def kolosov_kappa(mat):
    if mat.mode is PlaneMode.STRESS:
        return (3 - mat.nu) / (1 + mat.nu)
    return 3 - 4 * mat.nu


@dataclass
class FieldSample:
    """In-plane fields at one or many points.

    Entries are scalars, numpy arrays or differentiable ``Var`` nodes.
    """

    sxx: object
    syy: object
    sxy: object
    ux: object
    uy: object
    dux_dx: object = 0.0
    duy_dx: object = 0.0
    dux_dy: object = 0.0
    duy_dy: object = 0.0

    def rotated(self, angle):
        """Express fields given in a frame rotated by ``angle`` in the base frame."""
        c, s = np.cos(angle), np.sin(angle)
        cc, ss, cs = c * c, s * s, c * s
        sxx = cc * self.sxx + ss * self.syy - 2 * cs * self.sxy
        syy = ss * self.sxx + cc * self.syy + 2 * cs * self.sxy
        sxy = cs * (self.sxx - self.syy) + (cc - ss) * self.sxy
        ux = c * self.ux - s * self.uy
        uy = s * self.ux + c * self.uy
        # G' = R G R^T for the displacement gradient G_ij = du_i/dx_j
        a, b, d, e = self.dux_dx, self.dux_dy, self.duy_dx, self.duy_dy
        g_xx = cc * a - cs * (b + d) + ss * e
        g_xy = cs * (a - e) + cc * b - ss * d
        g_yx = cs * (a - e) - ss * b + cc * d
        g_yy = ss * a + cs * (b + d) + cc * e
        return FieldSample(sxx, syy, sxy, ux, uy, g_xx, g_yx, g_xy, g_yy)

    def arrays(self):
        return {f.name: np.asarray(getattr(self, f.name)) for f in dc_fields(self)}

    def take(self, idx):
        return FieldSample(*(getattr(self, f.name)[idx] for f in dc_fields(self)))


def km_fields(phi, psi, z, mat):
    """Fields from the jets of phi and psi evaluated at ``z``."""
    kappa = kolosov_kappa(mat)
    two_mu = 2 * mat.mu
    zb = np.conj(z)
    a = zb * phi.d2 + psi.d1
    dphi = phi.d1
    sxx = (2 * dphi - a).real
    syy = (2 * dphi + a).real
    sxy = a.imag
    disp = kappa * phi.f - z * np.conj(dphi) - np.conj(psi.f)
    cphi1 = np.conj(dphi)
    tail = z * np.conj(phi.d2) + np.conj(psi.d1)
    ddx = kappa * dphi - cphi1 - tail
    ddy = 1j * (kappa * dphi - cphi1 + tail)
    return FieldSample(
        sxx, syy, sxy,
        disp.real * (1 / two_mu), disp.imag * (1 / two_mu),
        ddx.real * (1 / two_mu), ddx.imag * (1 / two_mu),
        ddy.real * (1 / two_mu), ddy.imag * (1 / two_mu),
    )


def sigma_zz(s, mat):
    if mat.mode is PlaneMode.STRESS:
        return 0.0 * s.sxx
    return mat.nu * (s.sxx + s.syy)


def strain_energy_density(s, mat):
    szz = sigma_zz(s, mat)
    tr = s.sxx + s.syy + szz
    quad = s.sxx * s.sxx + s.syy * s.syy + szz * szz + 2 * (s.sxy * s.sxy)
    return quad * (1 / (4 * mat.mu)) - (tr * tr) * (mat.nu / (2 * mat.E))


def compliance_strain(sxx, syy, sxy, mat):
    """In-plane strains (exx, eyy, exy) from in-plane stresses."""
    nu_eff = mat.nu if mat.mode is PlaneMode.STRAIN else mat.nu / (1 + mat.nu)
    two_mu = 2 * mat.mu
    tr = sxx + syy
    return (sxx - nu_eff * tr) / two_mu, (syy - nu_eff * tr) / two_mu, sxy / two_mu


def von_mises(s):
    return np.sqrt(s.sxx ** 2 + s.syy ** 2 - s.sxx * s.syy + 3 * s.sxy ** 2)
