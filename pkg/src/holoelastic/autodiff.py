"""Reverse-mode differentiation over numpy arrays, plus Adam and clipping.

Complex leaves are differentiated as real pairs. The gradient stored for a
complex value ``p`` is ``dL/dRe(p) + 1j * dL/dIm(p)`` for a real scalar loss
``L``; with this convention a holomorphic op ``y = f(x)`` pulls back an
upstream gradient ``g`` as ``conj(f'(x)) * g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteLoss, ShapeMismatch


def _unbroadcast(g, shape):
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def value_of(x):
    """Underlying numpy value of a Var, or ``x`` itself."""
    return x.value if isinstance(x, Var) else x


class Var:
    """A node in the differentiation graph wrapping a numpy array."""

    __slots__ = ("value", "parents")
    __array_priority__ = 1000

    def __init__(self, value, parents=()):
        self.value = np.asarray(value)
        # tuple of (parent Var, pullback g -> parent-gradient)
        self.parents = parents

    shape = property(lambda self: self.value.shape)
    dtype = property(lambda self: self.value.dtype)
    ndim = property(lambda self: self.value.ndim)

    def __len__(self):
        return len(self.value)

    def __repr__(self):
        return f"Var(shape={self.value.shape}, dtype={self.value.dtype})"

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(other))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k):
        if k != 2:
            raise NotImplementedError("only squaring is supported")
        return mul(self, self)

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    def __getitem__(self, idx):
        return getitem(self, idx)

    @property
    def real(self):
        return real(self)

    @property
    def imag(self):
        return imag(self)

    def conj(self):
        return conj(self)

    conjugate = conj

    def sum(self, axis=None):
        return vsum(self, axis)

    def mean(self):
        return vsum(self) * (1.0 / self.value.size)

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs:
            return NotImplemented
        fn = _UFUNCS.get(ufunc)
        if fn is None:
            return NotImplemented
        return fn(*inputs)


def _lift(x):
    return x if isinstance(x, Var) else None


def add(a, b):
    av, bv = value_of(a), value_of(b)
    out = av + bv
    parents = []
    if isinstance(a, Var):
        parents.append((a, lambda g, s=np.shape(av): _unbroadcast(g, s)))
    if isinstance(b, Var):
        parents.append((b, lambda g, s=np.shape(bv): _unbroadcast(g, s)))
    return Var(out, tuple(parents))


def neg(a):
    if not isinstance(a, Var):
        return -a
    return Var(-a.value, ((a, lambda g: -g),))


def mul(a, b):
    av, bv = value_of(a), value_of(b)
    out = av * bv
    parents = []
    if isinstance(a, Var):
        parents.append((a, lambda g, s=np.shape(av): _unbroadcast(g * np.conj(bv), s)))
    if isinstance(b, Var):
        parents.append((b, lambda g, s=np.shape(bv): _unbroadcast(g * np.conj(av), s)))
    return Var(out, tuple(parents))


def div(a, b):
    av, bv = value_of(a), value_of(b)
    out = av / bv
    parents = []
    if isinstance(a, Var):
        parents.append((a, lambda g, s=np.shape(av): _unbroadcast(g / np.conj(bv), s)))
    if isinstance(b, Var):
        parents.append(
            (b, lambda g, s=np.shape(bv): _unbroadcast(-g * np.conj(out / bv), s)))
    return Var(out, tuple(parents))


def exp(a):
    if not isinstance(a, Var):
        return np.exp(a)
    out = np.exp(a.value)
    return Var(out, ((a, lambda g: g * np.conj(out)),))


def conj(a):
    if not isinstance(a, Var):
        return np.conj(a)
    return Var(np.conj(a.value), ((a, np.conj),))


def real(a):
    if not isinstance(a, Var):
        return np.real(a)
    return Var(np.real(a.value), ((a, lambda g: g),))


def imag(a):
    if not isinstance(a, Var):
        return np.imag(a)
    return Var(np.imag(a.value), ((a, lambda g: 1j * g),))


def matmul(a, b):
    av, bv = value_of(a), value_of(b)
    out = av @ bv
    parents = []
    if isinstance(a, Var):
        parents.append((a, lambda g: g @ np.conj(bv).T))
    if isinstance(b, Var):
        parents.append((b, lambda g: np.conj(av).T @ g))
    return Var(out, tuple(parents))


def vsum(a, axis=None):
    if not isinstance(a, Var):
        return np.sum(a, axis=axis)
    shape = a.value.shape
    out = a.value.sum(axis=axis)
    if axis is None:
        back = lambda g: np.broadcast_to(g, shape)
    else:
        back = lambda g: np.broadcast_to(np.expand_dims(g, axis), shape)
    return Var(out, ((a, back),))


def getitem(a, idx):
    shape, dtype = a.value.shape, a.value.dtype

    def back(g):
        full = np.zeros(shape, dtype=np.result_type(dtype, g.dtype))
        np.add.at(full, idx, g)
        return full

    return Var(a.value[idx], ((a, back),))


def concatenate(items, axis=0):
    values = [value_of(x) for x in items]
    out = np.concatenate(values, axis=axis)
    bounds = np.cumsum([0] + [v.shape[axis] for v in values])
    parents = []
    for x, lo, hi in zip(items, bounds[:-1], bounds[1:]):
        if isinstance(x, Var):
            sl = [slice(None)] * out.ndim
            sl[axis] = slice(lo, hi)
            parents.append((x, lambda g, sl=tuple(sl): g[sl]))
    if not parents:
        return out
    return Var(out, tuple(parents))


_UFUNCS = {
    np.add: add,
    np.subtract: lambda a, b: add(a, neg(b)),
    np.multiply: mul,
    np.true_divide: div,
    np.negative: neg,
    np.exp: exp,
    np.conjugate: conj,
    np.matmul: matmul,
}


def backward(root, leaves):
    """Gradients of a real scalar ``root`` with respect to ``leaves``."""
    order, seen = [], set()
    stack = [(root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent, _ in node.parents:
            if id(parent) not in seen:
                stack.append((parent, False))

    grads = {id(root): np.ones_like(root.value, dtype=float)}
    for node in reversed(order):
        g = grads.pop(id(node), None)
        if g is None or not node.parents:
            if g is not None:
                grads[id(node)] = g
            continue
        for parent, pull in node.parents:
            pg = pull(g)
            if not np.iscomplexobj(parent.value):
                pg = np.real(pg)
            key = id(parent)
            if key in grads:
                grads[key] = grads[key] + pg
            else:
                grads[key] = pg
    out = []
    for leaf in leaves:
        g = grads.get(id(leaf))
        out.append(np.zeros_like(leaf.value) if g is None else np.asarray(g).reshape(leaf.shape))
    return out


# --------------------------------------------------------------------------
# flat real parameter vectors


@dataclass(frozen=True)
class ParamLayout:
    """Maps a list of complex arrays onto one flat real vector.

    Each complex entry contributes (re, im) consecutively, array by array in
    C order.
    """

    shapes: tuple

    @classmethod
    def of(cls, arrays):
        return cls(tuple(np.shape(a) for a in arrays))

    @property
    def sizes(self):
        return [int(np.prod(s)) for s in self.shapes]

    @property
    def n_real(self):
        return 2 * sum(self.sizes)

    def offset(self, array_index, flat_index=0):
        """Flat position of the real part of one complex entry."""
        return 2 * (sum(self.sizes[:array_index]) + flat_index)

    def flatten(self, arrays):
        if tuple(np.shape(a) for a in arrays) != self.shapes:
            raise ShapeMismatch("arrays do not match the layout")
        c = np.concatenate([np.ravel(a).astype(complex) for a in arrays]) if arrays else np.zeros(0, complex)
        out = np.empty(2 * c.size)
        out[0::2] = c.real
        out[1::2] = c.imag
        return out

    def unflatten(self, vec):
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.n_real,):
            raise ShapeMismatch(f"expected {self.n_real} reals, got {vec.shape}")
        c = vec[0::2] + 1j * vec[1::2]
        out, pos = [], 0
        for shape, size in zip(self.shapes, self.sizes):
            out.append(c[pos:pos + size].reshape(shape))
            pos += size
        return out


def loss_gradient(params, loss_fn):
    """Value and flat real gradient of ``loss_fn`` at the complex arrays ``params``.

    ``loss_fn`` receives a list of Var leaves (same order as ``params``) and
    must return a real scalar Var (or float when it does not depend on them).
    """
    layout = ParamLayout.of(params)
    leaves = [Var(np.asarray(p, dtype=complex)) for p in params]
    loss = loss_fn(leaves)
    value = float(np.real(value_of(loss)))
    if not np.isfinite(value):
        raise NonFiniteLoss(f"loss evaluated to {value}")
    if not isinstance(loss, Var):
        return value, np.zeros(layout.n_real)
    grads = backward(loss, leaves)
    return value, layout.flatten(grads)


def numeric_gradient(vec, fn, indices=None, step=1e-6):
    """Central finite differences of ``fn`` (flat real vector -> float)."""
    vec = np.asarray(vec, dtype=float)
    indices = range(vec.size) if indices is None else indices
    out = {}
    for i in indices:
        up, down = vec.copy(), vec.copy()
        up[i] += step
        down[i] -= step
        out[i] = (fn(up) - fn(down)) / (2 * step)
    return out


def clip_gradient(grad, max_norm):
    if max_norm <= 0:
        raise ValueError("max_norm must be positive")
    norm = float(np.linalg.norm(grad))
    if norm > max_norm:
        return grad * (max_norm / norm)
    return grad


@dataclass
class AdamState:
    lr: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    m: np.ndarray = field(default=None)
    v: np.ndarray = field(default=None)
    step: int = 0

    @classmethod
    def zeros(cls, n, **kw):
        return cls(m=np.zeros(n), v=np.zeros(n), **kw)


def adam_step(state, params, grad):
    """One bias-corrected Adam update; returns (new state, new params)."""
    params = np.asarray(params, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if params.shape != grad.shape or state.m.shape != params.shape:
        raise ShapeMismatch(
            f"params {params.shape}, grad {grad.shape}, moments {state.m.shape}")
    t = state.step + 1
    m = state.beta1 * state.m + (1 - state.beta1) * grad
    v = state.beta2 * state.v + (1 - state.beta2) * grad * grad
    m_hat = m / (1 - state.beta1 ** t)
    v_hat = v / (1 - state.beta2 ** t)
    new = params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return AdamState(state.lr, state.beta1, state.beta2, state.eps, m, v, t), new
