"""Complex-valued feed-forward networks for the two stress potentials."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .autodiff import ParamLayout, value_of
from .errors import DegenerateProbe, HoloElasticError
from .jets import HoloJet2, jet_exp


@dataclass(frozen=True)
class NetworkSpec:
    hidden: tuple = (20, 20, 20)
    m_e: int | None = None    # pre-stabilizing layers; None means every hidden layer
    beta: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if any(h < 1 for h in self.hidden):
            raise ValueError("layer widths must be >= 1")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.m_e is not None and not 0 <= self.m_e <= len(self.hidden) + 1:
            raise ValueError("m_e exceeds the number of layers")

    @property
    def n_pre(self):
        return len(self.hidden) if self.m_e is None else self.m_e

    def layer_shapes(self):
        widths = (1, *self.hidden, 1)
        return [(n_out, n_in) for n_in, n_out in zip(widths[:-1], widths[1:])]


class ComplexMLP:
    """Entire function z -> C built from complex affine maps and exp."""

    def __init__(self, weights, biases):
        self.weights = [np.asarray(w, dtype=complex) for w in weights]
        self.biases = [np.asarray(b, dtype=complex).reshape(-1, 1) for b in biases]

    @classmethod
    def zeros(cls, spec):
        shapes = spec.layer_shapes()
        return cls([np.zeros(s, complex) for s in shapes],
                   [np.zeros((s[0], 1), complex) for s in shapes])

    @property
    def params(self):
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    @params.setter
    def params(self, arrays):
        self.weights = [np.asarray(a, complex) for a in arrays[0::2]]
        self.biases = [np.asarray(a, complex) for a in arrays[1::2]]

    @property
    def n_params(self):
        return len(self.weights) * 2

    def jets(self, z, params=None):
        """Jets (f, f', f'') of the network output at the points ``z`` (1-D)."""
        ps = self.params if params is None else params
        ws, bs = ps[0::2], ps[1::2]
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        n_hidden = len(ws) - 1
        if n_hidden == 0:
            w, b = ws[0], bs[0]
            f = w * z[None, :] + b
            one = np.ones((1, z.size))
            return HoloJet2(f[0], (w * one)[0], 0 * one[0])
        w, b = ws[0], bs[0]
        act = jet_exp(HoloJet2(w * z[None, :] + b, w, 0.0))
        xf, x1, x2 = act.f, act.d1, act.d2
        for w, b in zip(ws[1:-1], bs[1:-1]):
            act = jet_exp(HoloJet2(w @ xf + b, w @ x1, w @ x2))
            xf, x1, x2 = act.f, act.d1, act.d2
        w, b = ws[-1], bs[-1]
        return HoloJet2((w @ xf + b)[0], (w @ x1)[0], (w @ x2)[0])

    def hidden_activations(self, z):
        """Values x^(l) of every hidden layer at ``z`` (plain numpy)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        x, out = z[None, :], []
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            x = np.exp(w @ x + b)
            out.append(x)
        return out


class AnalyticPotential:
    """Fixed holomorphic function exposed through the subnetwork interface.

    ``fn`` maps an array of points to a :class:`HoloJet2`.
    """

    n_params = 0
    params = []

    def __init__(self, fn):
        self.fn = fn

    def jets(self, z, params=None):
        return self.fn(np.atleast_1d(np.asarray(z, dtype=complex)))


def polynomial_potential(coeffs):
    """AnalyticPotential for sum_k coeffs[k] z^k."""
    coeffs = [complex(c) for c in coeffs]

    def fn(z):
        f = np.zeros_like(z)
        d1 = np.zeros_like(z)
        d2 = np.zeros_like(z)
        for k, c in enumerate(coeffs):
            f = f + c * z ** k
            if k >= 1:
                d1 = d1 + k * c * z ** (k - 1)
            if k >= 2:
                d2 = d2 + k * (k - 1) * c * z ** (k - 2)
        return HoloJet2(f, d1, d2)

    return AnalyticPotential(fn)


@dataclass
class PotentialModel:
    """Two subnetworks: (phi, psi) in plain mode, (F1, F2) in crack mode."""

    subnet_a: object
    subnet_b: object
    crack: object = None
    spec: NetworkSpec = field(default_factory=NetworkSpec)

    @property
    def mode(self):
        return "plain" if self.crack is None else "crack"

    @property
    def params(self):
        return list(self.subnet_a.params) + list(self.subnet_b.params)

    @params.setter
    def params(self, arrays):
        arrays = list(arrays)
        na = self.subnet_a.n_params
        if na:
            self.subnet_a.params = arrays[:na]
        if self.subnet_b.n_params:
            self.subnet_b.params = arrays[na:]

    @property
    def layout(self):
        return ParamLayout.of(self.params)

    def flat_params(self):
        return self.layout.flatten(self.params)

    def set_flat_params(self, vec):
        self.params = self.layout.unflatten(vec)

    def _split(self, params):
        if params is None:
            return None, None
        na = self.subnet_a.n_params
        return (params[:na] or None), (params[na:] or None)

    def raw_jets(self, z, params=None):
        """Jets of the two raw subnetwork outputs at ``z``."""
        pa, pb = self._split(params)
        return self.subnet_a.jets(z, pa), self.subnet_b.jets(z, pb)

    def to_local(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if self.crack is None:
            return z
        return self.crack.to_local(z)

    def potentials(self, z, params=None):
        """(phi, psi) jets in the model frame, at global points ``z``."""
        if self.crack is None:
            return self.raw_jets(z, params)
        from .crack import crack_potentials
        return crack_potentials(self, z, params)

    def fields(self, z, material, params=None):
        """Stress, displacement and displacement gradients in the global frame."""
        from .elasticity import km_fields
        w = self.to_local(z)
        phi, psi = self.potentials(z, params)
        s = km_fields(phi, psi, w, material)
        if self.crack is not None:
            s = s.rotated(self.crack.angle)
        return s

    def copy(self):
        other = PotentialModel(_copy_subnet(self.subnet_a), _copy_subnet(self.subnet_b),
                               self.crack, self.spec)
        return other


def _copy_subnet(net):
    if isinstance(net, ComplexMLP):
        return ComplexMLP([w.copy() for w in net.weights], [b.copy() for b in net.biases])
    return net


def forward_jets(model, z, params=None):
    return model.raw_jets(z, params)


def _gaussian_layer(rng, n_out, n_in, rho):
    std = np.sqrt(rho / (2 * n_in))
    return rng.normal(0.0, std, (n_out, n_in)) + 1j * rng.normal(0.0, std, (n_out, n_in))


def _layer_rng(seed, subnet, layer):
    ss = np.random.SeedSequence([int(seed), int(subnet), int(layer)])
    return np.random.Generator(np.random.Philox(ss))


def init_subnet(spec, probe, subnet_id=0):
    """Sequential exponential-aware initialization of one subnetwork.

    Returns the network and the per-layer empirical second moments
    ``E|x^(l)|^2`` for l = 0..L measured on ``probe``.
    """
    probe = np.atleast_1d(np.asarray(probe, dtype=complex))
    if probe.size == 0:
        raise DegenerateProbe("empty probe batch")
    shapes = spec.layer_shapes()
    x = probe[None, :]
    moments = [float(np.mean(np.abs(x) ** 2))]
    weights, biases = [], []
    for layer, (n_out, n_in) in enumerate(shapes, start=1):
        if layer <= spec.n_pre:
            if moments[-1] == 0.0:
                raise DegenerateProbe(f"zero second moment entering layer {layer}")
            rho = spec.beta / moments[-1]
        else:
            rho = spec.beta * np.exp(-spec.beta)
        w = _gaussian_layer(_layer_rng(spec.seed, subnet_id, layer), n_out, n_in, rho)
        b = np.zeros((n_out, 1), complex)
        weights.append(w)
        biases.append(b)
        if layer < len(shapes):
            x = np.exp(w @ x + b)
            moments.append(float(np.mean(np.abs(x) ** 2)))
    return ComplexMLP(weights, biases), moments


def variance_factor(spec, layer, prev_moment):
    """Layerwise factor rho_l of the exponential-aware rule."""
    if layer <= spec.n_pre:
        return spec.beta / prev_moment
    return spec.beta * np.exp(-spec.beta)


def init_exp_aware(spec, probe_batch, crack=None):
    """PotentialModel with both subnetworks initialized on ``probe_batch``.

    ``probe_batch`` holds global points; in crack mode they are mapped into
    the crack frame first since that is where the networks are evaluated.
    """
    probe = np.atleast_1d(np.asarray(probe_batch, dtype=complex))
    if crack is not None:
        probe = crack.to_local(probe)
    net_a, _ = init_subnet(spec, probe, 0)
    net_b, _ = init_subnet(spec, probe, 1)
    return PotentialModel(net_a, net_b, crack, spec)


# --------------------------------------------------------------------------
# persistence

MODEL_FORMAT = "holoelastic-model/1"


def model_to_dict(model):
    from .crack import crack_to_dict
    for net in (model.subnet_a, model.subnet_b):
        if not isinstance(net, ComplexMLP):
            raise HoloElasticError("only network-backed models can be saved")
    return {
        "format": MODEL_FORMAT,
        "network": asdict(model.spec),
        "crack": None if model.crack is None else crack_to_dict(model.crack),
        "shapes": [list(s) for s in model.layout.shapes],
        "params": [float(v).hex() for v in model.flat_params()],
    }


def model_from_dict(doc):
    from .crack import crack_from_dict
    if doc.get("format") != MODEL_FORMAT:
        raise HoloElasticError(f"unknown model format {doc.get('format')!r}")
    net = dict(doc["network"])
    spec = NetworkSpec(hidden=tuple(net["hidden"]), m_e=net["m_e"], beta=net["beta"],
                       seed=net["seed"])
    crack = None if doc.get("crack") is None else crack_from_dict(doc["crack"])
    model = PotentialModel(ComplexMLP.zeros(spec), ComplexMLP.zeros(spec), crack, spec)
    if [list(s) for s in model.layout.shapes] != doc["shapes"]:
        raise HoloElasticError("parameter shapes do not match the network spec")
    model.set_flat_params(np.array([float.fromhex(v) for v in doc["params"]]))
    return model


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=1)


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))


def hidden_moments(net, probe):
    """Empirical E|x^(l)|^2 for every hidden layer of ``net``."""
    return [float(np.mean(np.abs(x) ** 2)) for x in net.hidden_activations(probe)]


__all__ = [
    "NetworkSpec", "ComplexMLP", "AnalyticPotential", "PotentialModel",
    "forward_jets", "init_exp_aware", "init_subnet", "variance_factor",
    "polynomial_potential", "save_model", "load_model", "model_to_dict",
    "model_from_dict", "hidden_moments", "value_of",
]
