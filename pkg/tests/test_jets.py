import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holoelastic.errors import BranchCutHit, OverflowGuard
from holoelastic.jets import (BranchRule, HoloJet2, jet_add, jet_exp, jet_mul, jet_seed,
                              jet_sqrt, reflect_star)


def close(jet, expected, tol=1e-14):
    for got, want in zip(jet.values(), expected):
        assert abs(complex(got) - complex(want)) <= tol * max(1.0, abs(want))


@pytest.mark.parametrize("z", [0, 1 + 2j, -3])
def test_seed_is_identity_jet(z):
    close(jet_seed(z), (z, 1, 0))


def test_mul_add_examples():
    close(jet_mul(jet_seed(2), jet_seed(2)), (4, 4, 2))
    close(jet_add(jet_seed(1), jet_seed(1)), (2, 2, 0))
    close(jet_mul(jet_seed(1j), jet_seed(1j)), (-1, 2j, 2))


def test_exp_examples():
    close(jet_exp(HoloJet2(0j, 1, 0)), (1, 1, 1))
    close(jet_exp(HoloJet2(1j * np.pi, 0, 0)), (-1, 0, 0))
    e = np.e
    close(jet_exp(HoloJet2(1 + 0j, 2, 0)), (e, 2 * e, 4 * e))


def test_exp_guard():
    with pytest.raises(OverflowGuard):
        jet_exp(HoloJet2(100 + 0j, 1, 0))


def test_sqrt_examples():
    close(jet_sqrt(HoloJet2(4 + 0j, 1, 0)), (2, 0.25, -1 / 32))
    close(jet_sqrt(HoloJet2(1 + 0j, 0, 0)), (1, 0, 0))
    close(jet_sqrt(HoloJet2(complex(-1, 1e-300), 0, 0)), (1j, 0, 0))


def test_sqrt_on_cut_raises():
    with pytest.raises(BranchCutHit):
        jet_sqrt(HoloJet2(-1 + 0j, 1, 0))
    with pytest.raises(BranchCutHit):
        jet_sqrt(HoloJet2(1 + 0j, 1, 0), BranchRule.POSITIVE_CUT)


def test_reflect_star_examples():
    close(reflect_star(jet_seed, 1 + 2j), (1 + 2j, 1, 0))
    f = reflect_star(lambda z: jet_mul(jet_seed(z), 1j), 1 + 0j)
    close(f, (-1j, -1j, 0))
    f = reflect_star(lambda z: jet_mul(jet_seed(z), jet_seed(z)), 1j)
    close(f, (-1, 2j, 2))


finite = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(finite)
def test_exp_of_polynomial_matches_finite_differences(z0):
    # g(z) = exp(z^2 + z); compare jet derivatives against a complex-step stencil
    def g(z):
        s = jet_seed(z)
        return jet_exp(jet_add(jet_mul(s, s), s))
    jet = g(z0)
    h = 1e-4
    fp, fm = g(z0 + h).f, g(z0 - h).f
    d1 = (fp - fm) / (2 * h)
    d2 = (fp - 2 * jet.f + fm) / h ** 2
    scale = abs(jet.f) * (1 + abs(2 * z0 + 1)) ** 2 + 1
    assert abs(jet.d1 - d1) < 1e-6 * scale
    assert abs(jet.d2 - d2) < 1e-4 * scale


@settings(max_examples=60, deadline=None)
@given(finite.filter(lambda z: abs(z) > 0.1 and not (z.imag == 0 and z.real < 0)))
def test_sqrt_jet_matches_cmath(z0):
    j = jet_sqrt(jet_seed(z0))
    r = cmath.sqrt(z0)
    assert abs(j.f - r) < 1e-12 * abs(r)
    assert abs(j.d1 - 0.5 / r) < 1e-12 / abs(r)
    assert abs(j.d2 + 0.25 / (r * z0)) < 1e-12 / abs(r * z0)


def test_array_jets_broadcast():
    z = np.array([1 + 1j, 2 - 1j, -0.5j])
    j = jet_mul(jet_seed(z), jet_seed(z))
    np.testing.assert_allclose(j.f, z ** 2)
    np.testing.assert_allclose(j.d1, 2 * z)
    np.testing.assert_allclose(j.d2, 2 * np.ones(3))
