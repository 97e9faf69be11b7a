import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holoelastic.benchmarks import init_moment_spread, wirtinger_residual
from holoelastic.errors import DegenerateProbe, HoloElasticError
from holoelastic.network import (ComplexMLP, NetworkSpec, PotentialModel, forward_jets,
                                 init_exp_aware, init_subnet, load_model, model_from_dict,
                                 model_to_dict, polynomial_potential, save_model,
                                 variance_factor)


def test_constant_network():
    spec = NetworkSpec(hidden=(3,))
    net = ComplexMLP.zeros(spec)
    net.biases[-1][:] = 2 - 1j
    j = net.jets(np.array([0.3 + 0.2j, -1.0]))
    np.testing.assert_allclose(j.f, [2 - 1j, 2 - 1j])
    np.testing.assert_allclose(j.d1, 0)
    np.testing.assert_allclose(j.d2, 0)


def test_single_exp_neuron_at_origin():
    net = ComplexMLP([np.ones((1, 1)), np.ones((1, 1))], [np.zeros(1), np.zeros(1)])
    j = net.jets(0j)
    np.testing.assert_allclose([j.f[0], j.d1[0], j.d2[0]], [1, 1, 1])


def test_forward_jets_returns_both_subnets():
    z = np.array([0.1 + 0.1j, 0.4 - 0.2j])
    model = init_exp_aware(NetworkSpec((5, 5), seed=1), z)
    a, b = forward_jets(model, z)
    assert a.f.shape == b.f.shape == (2,)
    assert not np.allclose(a.f, b.f)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_network_is_holomorphic(seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1, 1, 100) + 1j * rng.uniform(-1, 1, 100)
    model = init_exp_aware(NetworkSpec((20, 20, 20), seed=seed), z)
    assert wirtinger_residual(model.subnet_a, z) < 1e-6


def test_jets_match_finite_differences():
    rng = np.random.default_rng(3)
    z = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
    net = init_exp_aware(NetworkSpec((8, 8), seed=3), z).subnet_a
    h = 1e-4
    j = net.jets(z)
    fp, fm = net.jets(z + h).f, net.jets(z - h).f
    scale = np.max(np.abs(j.f))
    assert np.max(np.abs(j.d1 - (fp - fm) / (2 * h))) < 1e-6 * scale
    assert np.max(np.abs(j.d2 - (fp - 2 * j.f + fm) / h ** 2)) < 1e-4 * scale


def test_variance_rule_examples():
    spec = NetworkSpec((4, 4), m_e=1, beta=0.5)
    assert variance_factor(spec, 1, 2.0) == pytest.approx(0.25)
    assert variance_factor(spec, 2, 123.0) == pytest.approx(0.5 * np.exp(-0.5))
    assert variance_factor(spec, 2, 1.0) == pytest.approx(0.3033, abs=1e-4)


def test_first_layer_variance_statistics():
    # probe with E|z|^2 = 2 exactly, so rho_1 = 0.25 and Var(Re w) = 0.25 / 2
    probe = np.sqrt(2) * np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
    spec = NetworkSpec((4000,), beta=0.5, seed=0)
    net, moments = init_subnet(spec, probe)
    assert moments[0] == pytest.approx(2.0)
    w = net.weights[0].ravel()
    assert np.var(w.real) == pytest.approx(0.125, rel=0.1)
    assert np.var(w.imag) == pytest.approx(0.125, rel=0.1)


def test_degenerate_probe():
    with pytest.raises(DegenerateProbe):
        init_subnet(NetworkSpec((3,)), np.zeros(0))
    with pytest.raises(DegenerateProbe):
        init_subnet(NetworkSpec((3,)), np.zeros(4))


def test_depth5_moment_spread_below_four():
    spread, moments = init_moment_spread(0)
    assert len(moments) == 5
    assert spread < 4


def test_spec_validation():
    with pytest.raises(ValueError):
        NetworkSpec((0, 3))
    with pytest.raises(ValueError):
        NetworkSpec((3,), beta=0)
    with pytest.raises(ValueError):
        NetworkSpec((3,), m_e=5)


def test_save_load_round_trip_bitwise(tmp_path):
    z = np.array([0.2 + 0.3j, 0.7 - 0.1j, -0.4 + 0.9j])
    model = init_exp_aware(NetworkSpec((6, 6), seed=4), z)
    path = tmp_path / "m.json"
    save_model(model, path)
    other = load_model(path)
    a, b = model.raw_jets(z), other.raw_jets(z)
    np.testing.assert_array_equal(a[0].f, b[0].f)
    np.testing.assert_array_equal(a[1].d2, b[1].d2)
    np.testing.assert_array_equal(model.flat_params(), other.flat_params())


def test_bad_model_documents():
    z = np.array([0.5 + 0.5j])
    doc = model_to_dict(init_exp_aware(NetworkSpec((2,)), z))
    with pytest.raises(HoloElasticError):
        model_from_dict({**doc, "format": "other"})
    with pytest.raises(HoloElasticError):
        model_from_dict({**doc, "shapes": [[1, 1]]})
    analytic = PotentialModel(polynomial_potential([0, 1]), polynomial_potential([0]))
    with pytest.raises(HoloElasticError):
        model_to_dict(analytic)


def test_polynomial_potential_jets():
    p = polynomial_potential([1, 2, 3])
    j = p.jets(np.array([2.0 + 0j]))
    np.testing.assert_allclose([j.f[0], j.d1[0], j.d2[0]], [17, 14, 6])


def test_output_is_affine_in_last_hidden_layer():
    z = np.array([0.1 + 0.2j, -0.3 + 0.5j, 0.8 - 0.1j])
    net = init_exp_aware(NetworkSpec((5, 5), seed=2), z).subnet_a
    last = net.hidden_activations(z)[-1]
    expected = (net.weights[-1] @ last + net.biases[-1])[0]
    np.testing.assert_allclose(net.jets(z).f, expected, rtol=1e-14)


def test_same_seed_same_parameters():
    z = np.array([0.1 + 0.2j, -0.3 + 0.5j])
    a = init_exp_aware(NetworkSpec((5, 5), seed=9), z).flat_params()
    b = init_exp_aware(NetworkSpec((5, 5), seed=9), z).flat_params()
    np.testing.assert_array_equal(a, b)
