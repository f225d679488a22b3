"""Dense float64 tensors with reverse-mode automatic differentiation.

Small tape-based kernel: every primitive builds a node holding a closure
that routes the output gradient to its parents.  `Tensor.backward()` on a
scalar loss topologically sorts the graph and runs the closures; the
graph is dropped with the Python references afterwards.

Everything is float64.  Gradients are checked against central finite
differences in the test suite; new primitives must come with a backward
rule and a check.
"""
from __future__ import annotations

import numpy as np

_grad_enabled = True


class no_grad:
    """Context manager disabling graph construction (inference paths)."""

    def __enter__(self):
        global _grad_enabled
        self._prev = _grad_enabled
        _grad_enabled = False
        return self

    def __exit__(self, *exc):
        global _grad_enabled
        _grad_enabled = self._prev
        return False


class DimensionError(ValueError):
    def __init__(self, op: str, detail: str):
        super().__init__(f"{op}: {detail}")


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self._parents: tuple[Tensor, ...] = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    def item(self) -> float:
        return float(self.data)

    def accumulate(self, grad: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += grad

    def backward(self) -> None:
        if self.data.ndim != 0 and self.data.size != 1:
            raise DimensionError("backward", f"loss must be scalar, got shape {self.shape}")
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen or not node.requires_grad:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                stack.append((parent, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(order):
            if node._backward is not None:
                node._backward()
                node._parents = ()
                node._backward = None


def _node(data: np.ndarray, parents: tuple[Tensor, ...], backward) -> Tensor:
    out = Tensor(data)
    if _grad_enabled and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(p for p in parents if p.requires_grad)
        out._backward = backward
    return out


def constant(data) -> Tensor:
    return Tensor(data)


# ---------------------------------------------------------------------------
# arithmetic


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape == b.shape:
        out = _node(a.data + b.data, (a, b), None)

        def backward():
            if a.requires_grad:
                a.accumulate(out.grad)
            if b.requires_grad:
                b.accumulate(out.grad)
    elif a.data.ndim == 2 and b.data.ndim == 1 and a.shape[1] == b.shape[0]:
        # row-broadcast bias add
        out = _node(a.data + b.data, (a, b), None)

        def backward():
            if a.requires_grad:
                a.accumulate(out.grad)
            if b.requires_grad:
                b.accumulate(out.grad.sum(axis=0))
    else:
        raise DimensionError("add", f"incompatible shapes {a.shape} and {b.shape}")
    out._backward = backward
    return out


def add_scalar(vec: Tensor, scalar: Tensor) -> Tensor:
    """Broadcast a 0-d tensor over a vector."""
    if scalar.data.ndim != 0:
        raise DimensionError("add_scalar", f"expected a scalar, got shape {scalar.shape}")
    out = _node(vec.data + scalar.data, (vec, scalar), None)

    def backward():
        if vec.requires_grad:
            vec.accumulate(out.grad)
        if scalar.requires_grad:
            scalar.accumulate(np.asarray(out.grad.sum()))

    out._backward = backward
    return out


def add_n(terms: list[Tensor]) -> Tensor:
    if not terms:
        raise DimensionError("add_n", "empty term list")
    shape = terms[0].shape
    for t in terms:
        if t.shape != shape:
            raise DimensionError("add_n", f"mixed shapes {shape} and {t.shape}")
    out = _node(sum(t.data for t in terms), tuple(terms), None)

    def backward():
        for t in terms:
            if t.requires_grad:
                t.accumulate(out.grad)

    out._backward = backward
    return out


def scale(a: Tensor, s: float) -> Tensor:
    out = _node(a.data * s, (a,), None)

    def backward():
        a.accumulate(out.grad * s)

    out._backward = backward
    return out


def mul(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise DimensionError("mul", f"incompatible shapes {a.shape} and {b.shape}")
    out = _node(a.data * b.data, (a, b), None)

    def backward():
        if a.requires_grad:
            a.accumulate(out.grad * b.data)
        if b.requires_grad:
            b.accumulate(out.grad * a.data)

    out._backward = backward
    return out


def mul_const(a: Tensor, factor: np.ndarray) -> Tensor:
    out = _node(a.data * factor, (a,), None)

    def backward():
        a.accumulate(out.grad * factor)

    out._backward = backward
    return out


def matmul(a: Tensor, b: Tensor) -> Tensor:
    ad, bd = a.data, b.data
    if ad.ndim == 0 or bd.ndim == 0 or ad.shape[-1] != bd.shape[0]:
        raise DimensionError("matmul", f"incompatible shapes {a.shape} and {b.shape}")
    out = _node(ad @ bd, (a, b), None)

    def backward():
        g = out.grad
        if ad.ndim == 2 and bd.ndim == 2:
            if a.requires_grad:
                a.accumulate(g @ bd.T)
            if b.requires_grad:
                b.accumulate(ad.T @ g)
        elif ad.ndim == 1 and bd.ndim == 2:
            if a.requires_grad:
                a.accumulate(bd @ g)
            if b.requires_grad:
                b.accumulate(np.outer(ad, g))
        elif ad.ndim == 2 and bd.ndim == 1:
            if a.requires_grad:
                a.accumulate(np.outer(g, bd))
            if b.requires_grad:
                b.accumulate(ad.T @ g)
        else:  # 1D @ 1D dot product
            if a.requires_grad:
                a.accumulate(g * bd)
            if b.requires_grad:
                b.accumulate(g * ad)

    out._backward = backward
    return out


def linear(x: Tensor, weight: Tensor, bias: Tensor | None = None) -> Tensor:
    """weight (out, in) applied to a vector (in,) or row matrix (r, in)."""
    if x.data.ndim == 1:
        y = matmul(weight, x)
    elif x.data.ndim == 2:
        y = matmul(x, transpose(weight))
    else:
        raise DimensionError("linear", f"input must be 1-D or 2-D, got {x.shape}")
    return add(y, bias) if bias is not None else y


def transpose(a: Tensor) -> Tensor:
    out = _node(a.data.T, (a,), None)

    def backward():
        a.accumulate(out.grad.T)

    out._backward = backward
    return out


def sum_all(a: Tensor) -> Tensor:
    out = _node(a.data.sum(), (a,), None)

    def backward():
        a.accumulate(np.full_like(a.data, out.grad))

    out._backward = backward
    return out


# ---------------------------------------------------------------------------
# shape plumbing


def concat_vec(parts: list[Tensor]) -> Tensor:
    for t in parts:
        if t.data.ndim != 1:
            raise DimensionError("concat", f"expected vectors, got shape {t.shape}")
    out = _node(np.concatenate([t.data for t in parts]), tuple(parts), None)
    offsets = np.cumsum([0] + [t.data.shape[0] for t in parts])

    def backward():
        for t, lo, hi in zip(parts, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                t.accumulate(out.grad[lo:hi])

    out._backward = backward
    return out


def stack_rows(rows: list[Tensor]) -> Tensor:
    for t in rows:
        if t.data.ndim != 1:
            raise DimensionError("stack", f"expected vectors, got shape {t.shape}")
    out = _node(np.stack([t.data for t in rows]), tuple(rows), None)

    def backward():
        for k, t in enumerate(rows):
            if t.requires_grad:
                t.accumulate(out.grad[k])

    out._backward = backward
    return out


def take_row(a: Tensor, index: int) -> Tensor:
    out = _node(a.data[index].copy(), (a,), None)

    def backward():
        if a.grad is None:
            a.grad = np.zeros_like(a.data)
        a.grad[index] += out.grad

    out._backward = backward
    return out


def take_rows(a: Tensor, indices) -> Tensor:
    idx = np.asarray(indices, dtype=np.intp)
    out = _node(a.data[idx], (a,), None)

    def backward():
        if a.grad is None:
            a.grad = np.zeros_like(a.data)
        np.add.at(a.grad, idx, out.grad)

    out._backward = backward
    return out


def embed(table: Tensor, index: int) -> Tensor:
    """Row lookup into an embedding table."""
    return take_row(table, index)


def slice_vec(a: Tensor, start: int, stop: int) -> Tensor:
    if a.data.ndim != 1:
        raise DimensionError("slice", f"expected a vector, got shape {a.shape}")
    out = _node(a.data[start:stop].copy(), (a,), None)

    def backward():
        if a.grad is None:
            a.grad = np.zeros_like(a.data)
        a.grad[start:stop] += out.grad

    out._backward = backward
    return out


# ---------------------------------------------------------------------------
# nonlinearities and probability


def tanh(a: Tensor) -> Tensor:
    y = np.tanh(a.data)
    out = _node(y, (a,), None)

    def backward():
        a.accumulate(out.grad * (1.0 - y * y))

    out._backward = backward
    return out


def sigmoid(a: Tensor) -> Tensor:
    y = 1.0 / (1.0 + np.exp(-a.data))
    out = _node(y, (a,), None)

    def backward():
        a.accumulate(out.grad * y * (1.0 - y))

    out._backward = backward
    return out


def elu(a: Tensor) -> Tensor:
    """Exponential linear unit with alpha = 1."""
    neg = a.data < 0
    y = np.where(neg, np.expm1(a.data), a.data)
    out = _node(y, (a,), None)

    def backward():
        a.accumulate(out.grad * np.where(neg, y + 1.0, 1.0))

    out._backward = backward
    return out


def softmax(v: Tensor) -> Tensor:
    if v.data.ndim != 1:
        raise DimensionError("softmax", f"expected a vector, got shape {v.shape}")
    shifted = v.data - v.data.max()
    e = np.exp(shifted)
    p = e / e.sum()
    out = _node(p, (v,), None)

    def backward():
        g = out.grad
        v.accumulate(p * (g - np.dot(g, p)))

    out._backward = backward
    return out


def cross_entropy(probabilities: Tensor, gold_index: int) -> Tensor:
    """Negative log probability of the gold index."""
    p = probabilities.data[gold_index]
    out = _node(np.asarray(-np.log(p)), (probabilities,), None)

    def backward():
        if probabilities.grad is None:
            probabilities.grad = np.zeros_like(probabilities.data)
        probabilities.grad[gold_index] -= float(out.grad) / p

    out._backward = backward
    return out


def dropout(x: Tensor, rate: float, train: bool, rng: np.random.Generator) -> Tensor:
    """Inverted dropout; identity when not training or rate is 0."""
    if not train or rate <= 0.0:
        return x
    return mul_const(x, dropout_mask(x.shape, rate, rng))


def dropout_mask(shape, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Sample a reusable mask (for variational dropout across time steps)."""
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


# ---------------------------------------------------------------------------
# model-scale primitives


def bilinear(a: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """a^T W b for w of shape (d1, d2), or the stacked (L, d1, d2) form."""
    ad, wd, bd = a.data, w.data, b.data
    if ad.ndim != 1 or bd.ndim != 1:
        raise DimensionError("bilinear", f"side shapes {a.shape} and {b.shape} must be vectors")
    if wd.ndim == 2:
        if wd.shape != (ad.shape[0], bd.shape[0]):
            raise DimensionError("bilinear", f"weight shape {w.shape} does not join "
                                             f"{a.shape} with {b.shape}")
        out = _node(np.asarray(ad @ wd @ bd), (a, w, b), None)

        def backward():
            g = float(out.grad)
            if a.requires_grad:
                a.accumulate(g * (wd @ bd))
            if w.requires_grad:
                w.accumulate(g * np.outer(ad, bd))
            if b.requires_grad:
                b.accumulate(g * (wd.T @ ad))
    elif wd.ndim == 3:
        if wd.shape[1:] != (ad.shape[0], bd.shape[0]):
            raise DimensionError("bilinear", f"weight shape {w.shape} does not join "
                                             f"{a.shape} with {b.shape}")
        out = _node(np.einsum("i,lij,j->l", ad, wd, bd), (a, w, b), None)

        def backward():
            g = out.grad
            if a.requires_grad:
                a.accumulate(np.einsum("l,lij,j->i", g, wd, bd))
            if w.requires_grad:
                w.accumulate(np.einsum("l,i,j->lij", g, ad, bd))
            if b.requires_grad:
                b.accumulate(np.einsum("l,lij,i->j", g, wd, ad))
    else:
        raise DimensionError("bilinear", f"weight must be 2-D or 3-D, got {w.shape}")
    out._backward = backward
    return out


def conv1d_maxpool(seq: Tensor, filters: Tensor, bias: Tensor, window: int) -> Tensor:
    """Affine 1-D convolution over a (T, d) sequence, max-pooled over time.

    `filters` has shape (F, window * d); sequences shorter than the window
    are zero-padded on the right.  Output is an (F,) vector.
    """
    data = seq.data
    if data.ndim != 2:
        raise DimensionError("conv1d_maxpool", f"expected (T, d) input, got {seq.shape}")
    t, d = data.shape
    if filters.data.shape[1] != window * d:
        raise DimensionError("conv1d_maxpool",
                             f"filters {filters.shape} do not match window {window} x depth {d}")
    if t < window:
        data = np.concatenate([data, np.zeros((window - t, d))])
        t = window
    view = np.lib.stride_tricks.sliding_window_view(data, (window, d))
    windows = view.reshape(t - window + 1, window * d)
    scores = windows @ filters.data.T + bias.data
    best = scores.argmax(axis=0)
    out = _node(scores[best, np.arange(scores.shape[1])], (seq, filters, bias), None)

    def backward():
        g = out.grad
        dscores = np.zeros_like(scores)
        dscores[best, np.arange(scores.shape[1])] = g
        if filters.requires_grad:
            filters.accumulate(dscores.T @ windows)
        if bias.requires_grad:
            bias.accumulate(g)
        if seq.requires_grad:
            dwin = dscores @ filters.data
            dseq = np.zeros((t, seq.data.shape[1]))
            for offset in range(window):
                cols = dwin[:, offset * d:(offset + 1) * d]
                dseq[offset:offset + dwin.shape[0]] += cols
            seq.accumulate(dseq[:seq.data.shape[0]])

    out._backward = backward
    return out


class LSTMWeights:
    """One cell: w_x (4H, in), w_h (4H, H), bias (4H,); gate order i, f, g, o."""

    __slots__ = ("w_x", "w_h", "bias", "hidden")

    def __init__(self, w_x: Tensor, w_h: Tensor, bias: Tensor):
        self.w_x = w_x
        self.w_h = w_h
        self.bias = bias
        self.hidden = w_h.data.shape[1]


def lstm_step(x: Tensor, h: Tensor, c: Tensor, weights: LSTMWeights) -> tuple[Tensor, Tensor]:
    """One LSTM cell update; returns (h', c').

    Fused into a single tape node: the packed (2, H) output holds h' and
    c' and the backward pass runs the full gate chain once.
    """
    hid = weights.hidden
    z = weights.w_x.data @ x.data + weights.w_h.data @ h.data + weights.bias.data
    gi = 1.0 / (1.0 + np.exp(-z[:hid]))
    gf = 1.0 / (1.0 + np.exp(-z[hid:2 * hid]))
    gg = np.tanh(z[2 * hid:3 * hid])
    go = 1.0 / (1.0 + np.exp(-z[3 * hid:]))
    c_new = gf * c.data + gi * gg
    t_new = np.tanh(c_new)
    h_new = go * t_new

    packed = _node(np.stack([h_new, c_new]),
                   (x, h, c, weights.w_x, weights.w_h, weights.bias), None)

    def backward():
        dh = packed.grad[0]
        dc = packed.grad[1] + dh * go * (1.0 - t_new * t_new)
        dz = np.concatenate([
            dc * gg * gi * (1.0 - gi),
            dc * c.data * gf * (1.0 - gf),
            dc * gi * (1.0 - gg * gg),
            dh * t_new * go * (1.0 - go),
        ])
        if weights.w_x.requires_grad:
            weights.w_x.accumulate(np.outer(dz, x.data))
        if weights.w_h.requires_grad:
            weights.w_h.accumulate(np.outer(dz, h.data))
        if weights.bias.requires_grad:
            weights.bias.accumulate(dz)
        if x.requires_grad:
            x.accumulate(weights.w_x.data.T @ dz)
        if h.requires_grad:
            h.accumulate(weights.w_h.data.T @ dz)
        if c.requires_grad:
            c.accumulate(dc * gf)

    packed._backward = backward
    return take_row(packed, 0), take_row(packed, 1)


# ---------------------------------------------------------------------------
# parameters


class Parameter:
    """Named learnable tensor with Adam moment buffers."""

    __slots__ = ("name", "tensor", "m", "v")

    def __init__(self, name: str, data: np.ndarray):
        self.name = name
        self.tensor = Tensor(np.asarray(data, dtype=np.float64), requires_grad=True)
        self.m = np.zeros_like(self.tensor.data)
        self.v = np.zeros_like(self.tensor.data)

    @property
    def data(self) -> np.ndarray:
        return self.tensor.data

    @property
    def grad(self) -> np.ndarray | None:
        return self.tensor.grad

    def zero_grad(self) -> None:
        self.tensor.grad = None


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    fan_in = shape[-1] if len(shape) > 1 else shape[0]
    fan_out = shape[0]
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)
