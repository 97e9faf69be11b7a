"""Order-2 holomorphic jets: a value carried with its first two z-derivatives.

Jet components may be Python complex numbers, numpy arrays (one entry per
evaluation point) or :class:`~holoelastic.autodiff.Var` nodes; every
operation here only uses arithmetic, ``np.exp`` and ``np.sqrt`` on values
that are not differentiated.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .autodiff import value_of
from .errors import BranchCutHit, OverflowGuard

#: largest real part accepted by :func:`jet_exp` (natural-log units)
EXP_GUARD = 60.0


@dataclass(frozen=True)
class HoloJet2:
    f: object
    d1: object
    d2: object

    def __add__(self, other):
        return jet_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return jet_sub(self, other)

    def __rsub__(self, other):
        return jet_sub(_as_jet(other), self)

    def __mul__(self, other):
        return jet_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return HoloJet2(-self.f, -self.d1, -self.d2)

    def values(self):
        """The three components as plain numpy values."""
        return value_of(self.f), value_of(self.d1), value_of(self.d2)


class BranchRule(enum.Enum):
    PRINCIPAL = "principal"          # cut on the negative real axis
    POSITIVE_CUT = "positive_cut"    # cut on the positive real axis, sqrt(-1) = i


def _as_jet(x):
    return x if isinstance(x, HoloJet2) else HoloJet2(x, 0.0, 0.0)


def jet_seed(z):
    """Identity jet (z, 1, 0)."""
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    one = np.ones_like(z) if np.ndim(z) else 1.0 + 0j
    return HoloJet2(z, one, 0 * one)


def jet_constant(c):
    return HoloJet2(c, 0 * c, 0 * c)


def jet_add(a, b):
    b = _as_jet(b)
    return HoloJet2(a.f + b.f, a.d1 + b.d1, a.d2 + b.d2)


def jet_sub(a, b):
    b = _as_jet(b)
    return HoloJet2(a.f - b.f, a.d1 - b.d1, a.d2 - b.d2)


def jet_scale(a, c):
    return HoloJet2(c * a.f, c * a.d1, c * a.d2)


def jet_mul(a, b):
    if not isinstance(b, HoloJet2):
        return jet_scale(a, b)
    return HoloJet2(
        a.f * b.f,
        a.d1 * b.f + a.f * b.d1,
        a.d2 * b.f + 2 * (a.d1 * b.d1) + a.f * b.d2,
    )


def jet_exp(a):
    re = np.real(value_of(a.f))
    if np.any(re > EXP_GUARD):
        raise OverflowGuard(f"exp argument real part {np.max(re):.3g} exceeds {EXP_GUARD}")
    e = np.exp(a.f)
    return HoloJet2(e, e * a.d1, e * (a.d2 + a.d1 * a.d1))


def _sqrt(x, branch):
    x = np.asarray(x, dtype=complex)
    if branch is BranchRule.PRINCIPAL:
        bad = (x.imag == 0) & (x.real <= 0)
        root = np.sqrt(x)
    else:
        bad = (x.imag == 0) & (x.real >= 0)
        root = 1j * np.sqrt(-x)
    if np.any(bad):
        raise BranchCutHit("square root evaluated on its branch cut")
    return root if root.ndim else complex(root)


def jet_sqrt(a, branch=BranchRule.PRINCIPAL):
    """Square-root jet; the argument must not depend on trainable parameters."""
    f = _sqrt(value_of(a.f), branch)
    d1 = a.d1 / (2 * f)
    d2 = a.d2 / (2 * f) - a.d1 * a.d1 / (4 * f ** 3)
    return HoloJet2(f, d1, d2)


def jet_conj(a):
    """Componentwise conjugate (used to assemble star jets)."""
    return HoloJet2(np.conj(a.f), np.conj(a.d1), np.conj(a.d2))


def reflect_star(net_eval, z):
    """Jet of F*(z) = conj(F(conj z)), given ``net_eval: z -> jet of F``."""
    return jet_conj(net_eval(np.conj(z)))
