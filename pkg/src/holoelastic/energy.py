"""Total-potential-energy loss, the boundary-residual loss and the training loop."""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .autodiff import AdamState, adam_step, clip_gradient, loss_gradient, value_of
from .elasticity import strain_energy_density
from .errors import NonFiniteEnergy, NonFiniteLoss, UnsupportedBC
from .geometry import Dirichlet, Traction, sample_all_boundaries, sample_interior
from .network import init_exp_aware

LOSS_MODES = ("variational", "boundary_residual")


@dataclass
class TrainConfig:
    learning_rate: float = 1e-2
    iterations: int = 2000
    alpha_u: float = 1000.0
    clip_norm: float = 1.0
    seed: int = 0
    loss_mode: str = "variational"
    deterministic: bool = False   # zero the wall-clock column so histories compare bytewise

    def __post_init__(self):
        if self.loss_mode not in LOSS_MODES:
            raise ValueError(f"loss_mode must be one of {LOSS_MODES}")
        if self.learning_rate <= 0 or self.alpha_u <= 0 or self.clip_norm <= 0:
            raise ValueError("learning_rate, alpha_u and clip_norm must be positive")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")


@dataclass
class EnergyBreakdown:
    internal: object
    external: object
    dirichlet_penalty: object
    alpha_u: float

    @property
    def total(self):
        return self.internal - self.external + self.alpha_u * self.dirichlet_penalty

    def floats(self):
        return EnergyBreakdown(*(float(np.real(value_of(v))) for v in
                                 (self.internal, self.external, self.dirichlet_penalty)),
                               self.alpha_u)


@dataclass
class Samples:
    """Frozen quadrature set: interior points plus flattened boundary data."""

    interior: np.ndarray
    interior_weights: np.ndarray
    boundary: list
    points_b: np.ndarray = field(init=False)
    # weight * prescribed traction (0 where that component is Dirichlet)
    tw_x: np.ndarray = field(init=False)
    tw_y: np.ndarray = field(init=False)
    # weight where the component is Dirichlet, and the prescribed value
    dw_x: np.ndarray = field(init=False)
    dw_y: np.ndarray = field(init=False)
    ubar_x: np.ndarray = field(init=False)
    ubar_y: np.ndarray = field(init=False)

    def __post_init__(self):
        parts = {k: [] for k in ("z", "tx", "ty", "dx", "dy", "ux", "uy")}
        for bs in self.boundary:
            seg, z, w = bs.segment, bs.points, bs.weights
            parts["z"].append(z)
            for comp, bc in (("x", seg.bc_x), ("y", seg.bc_y)):
                if isinstance(bc, Traction):
                    parts["t" + comp].append(w * bc(z))
                    parts["d" + comp].append(np.zeros_like(w))
                    parts["u" + comp].append(np.zeros_like(w))
                else:
                    parts["t" + comp].append(np.zeros_like(w))
                    parts["d" + comp].append(w.copy())
                    parts["u" + comp].append(bc(z))
        cat = {k: (np.concatenate(v) if v else np.zeros(0)) for k, v in parts.items()}
        self.points_b = cat["z"].astype(complex)
        self.tw_x, self.tw_y = cat["tx"], cat["ty"]
        self.dw_x, self.dw_y = cat["dx"], cat["dy"]
        self.ubar_x, self.ubar_y = cat["ux"], cat["uy"]

    @property
    def n_interior(self):
        return self.interior.size

    @property
    def all_points(self):
        return np.concatenate([self.interior, self.points_b])


def build_samples(case):
    pts, wts = sample_interior(case.domain, case.plan)
    return Samples(pts, wts, sample_all_boundaries(case.domain, case.plan))


def _energy_terms(model, case, samples, params, alpha_u):
    mat = case.material
    f = model.fields(samples.all_points, mat, params)
    n = samples.n_interior
    inner = f.take(slice(0, n))
    outer = f.take(slice(n, None))
    w = strain_energy_density(inner, mat)
    internal = (w * samples.interior_weights).sum()
    external = (outer.ux * samples.tw_x + outer.uy * samples.tw_y).sum()
    ex, ey = outer.ux - samples.ubar_x, outer.uy - samples.ubar_y
    penalty = (ex * ex * samples.dw_x + ey * ey * samples.dw_y).sum()
    return EnergyBreakdown(internal, external, penalty, alpha_u)


def assemble_energy(model, case, samples, alpha_u=None):
    """Discrete internal energy, external work and Dirichlet penalty (floats)."""
    alpha = case.train.alpha_u if alpha_u is None else alpha_u
    e = _energy_terms(model, case, samples, None, alpha).floats()
    if not np.isfinite([e.internal, e.external, e.dirichlet_penalty]).all():
        raise NonFiniteEnergy("energy assembly produced a non-finite value")
    return e


def _check_residual_mode(case):
    for seg in case.domain.segments:
        for bc in (seg.bc_x, seg.bc_y):
            if isinstance(bc, Traction) and not bc.is_zero:
                raise UnsupportedBC(f"segment {seg.name!r} carries traction data")


def _residual_terms(model, case, samples, params):
    f = model.fields(samples.points_b, case.material, params)
    mx, my = samples.dw_x > 0, samples.dw_y > 0
    ex = (f.ux - samples.ubar_x) * mx
    ey = (f.uy - samples.ubar_y) * my
    return (ex * ex + ey * ey).sum() * (1.0 / samples.points_b.size)


def boundary_residual_loss(model, case, samples):
    """Mean squared displacement misfit over the boundary samples.

    Zero-traction components (symmetry lines) carry no displacement data and
    are skipped; any non-zero traction data raises UnsupportedBC.
    """
    _check_residual_mode(case)
    return float(np.real(value_of(_residual_terms(model, case, samples, None))))


# -- training ------------------------------------------------------------------

HISTORY_COLUMNS = ("iteration", "internal", "external", "penalty", "total", "grad_norm", "wall_ms")


@dataclass
class HistoryRow:
    iteration: int
    internal: float
    external: float
    penalty: float
    total: float
    grad_norm: float
    wall_ms: float


def train(case, net_spec=None, cfg=None, samples=None, model=None, callback=None):
    """Full-batch Adam on the frozen sample set; returns (model, history)."""
    cfg = cfg or case.train
    net_spec = replace(net_spec or case.network, seed=cfg.seed)
    samples = samples or build_samples(case)
    if model is None:
        model = init_exp_aware(net_spec, samples.interior, case.domain.crack)
    if cfg.loss_mode == "boundary_residual":
        _check_residual_mode(case)
    layout = model.layout
    theta = model.flat_params()
    state = AdamState.zeros(theta.size, lr=cfg.learning_rate)
    history = []
    t0 = time.perf_counter()
    for it in range(cfg.iterations):
        box = {}

        def loss_fn(leaves):
            if cfg.loss_mode == "variational":
                e = _energy_terms(model, case, samples, leaves, cfg.alpha_u)
                box["e"] = e
                return e.total
            r = _residual_terms(model, case, samples, leaves)
            box["r"] = r
            return r

        try:
            value, grad = loss_gradient(layout.unflatten(theta), loss_fn)
        except NonFiniteLoss as exc:
            raise NonFiniteLoss(f"non-finite loss at iteration {it}: {exc}", iteration=it) from exc
        except FloatingPointError as exc:
            raise NonFiniteLoss(f"numeric failure at iteration {it}: {exc}", iteration=it) from exc
        if not np.all(np.isfinite(grad)):
            raise NonFiniteLoss(f"non-finite gradient at iteration {it}", iteration=it)
        gnorm = float(np.linalg.norm(grad))
        if "e" in box:
            e = box["e"].floats()
            parts = (e.internal, e.external, e.dirichlet_penalty)
        else:
            parts = (0.0, 0.0, value)
        wall = 0.0 if cfg.deterministic else (time.perf_counter() - t0) * 1e3
        history.append(HistoryRow(it, *parts, value, gnorm, wall))
        state, theta = adam_step(state, theta, clip_gradient(grad, cfg.clip_norm))
        if callback is not None:
            callback(it, history[-1])
    model.set_flat_params(theta)
    return model, history


def write_history_csv(history, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(HISTORY_COLUMNS)
        for row in history:
            w.writerow([row.iteration] + [f"{getattr(row, c):.17g}" for c in HISTORY_COLUMNS[1:]])


def read_history_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [HistoryRow(int(r["iteration"]), *(float(r[c]) for c in HISTORY_COLUMNS[1:]))
            for r in rows]


__all__ = ["TrainConfig", "EnergyBreakdown", "Samples", "build_samples",
           "assemble_energy", "boundary_residual_loss", "train", "write_history_csv",
           "read_history_csv", "HistoryRow", "Dirichlet"]
