"""Dense feedforward networks with hand-coded backpropagation.

Everything is float64 numpy.  A network is a stack of fully connected layers
with ReLU hidden activations and one of three output heads:

- ``linear``: raw outputs, used for action-value regression;
- ``policy``: softmax over actions, used for stochastic policies;
- ``categorical``: an independent softmax over a fixed value support for
  every action, shape (batch, actions, atoms), used for return distributions.

``backward`` computes exact gradients of any scalar loss given the loss
gradient with respect to the network output (for softmax heads the Jacobian
of the softmax is applied internally, so callers differentiate with respect
to probabilities).  ``grad_check`` verifies the analytic gradients against
central finite differences, which is also how the trained stacks are gated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

HEAD_LINEAR = "linear"
HEAD_POLICY = "policy"
HEAD_CATEGORICAL = "categorical"
HEADS = (HEAD_LINEAR, HEAD_POLICY, HEAD_CATEGORICAL)


@dataclass
class DenseNet:
    """Parameters and head description of one network."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    head: str
    n_actions: int = 0  # categorical head only
    n_atoms: int = 0  # categorical head only

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def signature(self) -> dict:
        """Topology fingerprint used for checkpoint compatibility checks."""
        return {
            "layer_sizes": list(self.layer_sizes),
            "head": self.head,
            "n_actions": self.n_actions,
            "n_atoms": self.n_atoms,
        }

    def copy(self) -> "DenseNet":
        return DenseNet(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            head=self.head,
            n_actions=self.n_actions,
            n_atoms=self.n_atoms,
        )


def build_net(
    layer_sizes: list[int] | tuple[int, ...],
    head: str,
    rng: np.random.Generator,
    n_actions: int = 0,
    n_atoms: int = 0,
) -> DenseNet:
    """Construct a network with fan-in-scaled uniform initial weights.

    Weights are drawn from U(-sqrt(6/fan_in), sqrt(6/fan_in)) — the ReLU
    fan-in rule — and biases start at zero, so two calls with equally seeded
    generators build identical networks.
    """
    if head not in HEADS:
        raise ValueError(f"unknown head {head!r}, expected one of {HEADS}")
    sizes = [int(s) for s in layer_sizes]
    if len(sizes) < 2 or any(s <= 0 for s in sizes):
        raise ValueError("layer_sizes needs at least input and output, all positive")
    if head == HEAD_CATEGORICAL:
        if n_actions <= 0 or n_atoms <= 0:
            raise ValueError("categorical head needs n_actions and n_atoms")
        if sizes[-1] != n_actions * n_atoms:
            raise ValueError(
                f"categorical head output size {sizes[-1]} != actions*atoms "
                f"({n_actions}*{n_atoms})"
            )
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = math.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return DenseNet(weights=weights, biases=biases, head=head, n_actions=n_actions, n_atoms=n_atoms)


def _softmax(z: np.ndarray, axis: int) -> np.ndarray:
    shifted = z - z.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


@dataclass
class ForwardCache:
    inputs: np.ndarray
    activations: list[np.ndarray]  # hidden activations, one per hidden layer
    pre_activations: list[np.ndarray]  # one per layer
    output: np.ndarray


def forward(net: DenseNet, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    """Run the network; returns (output, cache for backward).

    Output shape: (batch, out) for linear, (batch, actions) row-stochastic
    for policy, (batch, actions, atoms) atom-stochastic for categorical.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    h = x
    activations = []
    pre_activations = []
    last = net.n_layers - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = h @ w + b
        pre_activations.append(z)
        if i < last:
            h = np.maximum(z, 0.0)
            activations.append(h)
    raw = pre_activations[-1]
    if net.head == HEAD_LINEAR:
        out = raw
    elif net.head == HEAD_POLICY:
        out = _softmax(raw, axis=1)
    else:
        out = _softmax(raw.reshape(raw.shape[0], net.n_actions, net.n_atoms), axis=2)
    return out, ForwardCache(inputs=x, activations=activations, pre_activations=pre_activations, output=out)


@dataclass
class Grads:
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def arrays(self):
        yield from self.weights
        yield from self.biases


def backward(net: DenseNet, cache: ForwardCache, grad_output: np.ndarray) -> Grads:
    """Exact parameter gradients of the scalar loss behind ``grad_output``.

    ``grad_output`` is dLoss/dOutput with the output shape of the head; for
    softmax heads the softmax Jacobian is applied here.
    """
    g = np.asarray(grad_output, dtype=np.float64)
    if g.shape != cache.output.shape:
        raise ValueError(f"grad_output shape {g.shape} != output shape {cache.output.shape}")
    if net.head == HEAD_LINEAR:
        dz = g
    elif net.head == HEAD_POLICY:
        p = cache.output
        dz = p * (g - (p * g).sum(axis=1, keepdims=True))
    else:
        p = cache.output
        dz3 = p * (g - (p * g).sum(axis=2, keepdims=True))
        dz = dz3.reshape(dz3.shape[0], net.n_actions * net.n_atoms)

    d_weights: list[np.ndarray | None] = [None] * net.n_layers
    d_biases: list[np.ndarray | None] = [None] * net.n_layers
    for layer in range(net.n_layers - 1, -1, -1):
        h_in = cache.inputs if layer == 0 else cache.activations[layer - 1]
        d_weights[layer] = h_in.T @ dz
        d_biases[layer] = dz.sum(axis=0)
        if layer > 0:
            dh = dz @ net.weights[layer].T
            dz = dh * (cache.pre_activations[layer - 1] > 0.0)
    return Grads(weights=d_weights, biases=d_biases)


def global_norm(grads: Grads) -> float:
    total = 0.0
    for arr in grads.arrays():
        total += float(np.sum(arr * arr))
    return math.sqrt(total)


def clip_global_norm(grads: Grads, max_norm: float) -> float:
    """Scale all gradients in place so their joint norm is at most max_norm.

    Returns the pre-clip norm so callers can log it.
    """
    norm = global_norm(grads)
    if max_norm > 0.0 and norm > max_norm:
        scale = max_norm / norm
        for arr in grads.arrays():
            arr *= scale
    return norm


@dataclass
class AdamState:
    """First/second-moment accumulators for one network."""

    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    m_weights: list[np.ndarray] = field(default_factory=list)
    v_weights: list[np.ndarray] = field(default_factory=list)
    m_biases: list[np.ndarray] = field(default_factory=list)
    v_biases: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def for_net(cls, net: DenseNet, lr: float, **kw) -> "AdamState":
        state = cls(lr=lr, **kw)
        state.m_weights = [np.zeros_like(w) for w in net.weights]
        state.v_weights = [np.zeros_like(w) for w in net.weights]
        state.m_biases = [np.zeros_like(b) for b in net.biases]
        state.v_biases = [np.zeros_like(b) for b in net.biases]
        return state


def _adam_update(param, grad, m, v, state, correction1, correction2):
    m *= state.beta1
    m += (1.0 - state.beta1) * grad
    v *= state.beta2
    v += (1.0 - state.beta2) * grad * grad
    m_hat = m / correction1
    v_hat = v / correction2
    param -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)


def adam_step(net: DenseNet, grads: Grads, state: AdamState) -> None:
    """One Adam update of ``net`` in place.

    Raises:
        ValueError: a gradient contains NaN or infinity; the message names
            the offending layer and no parameter is modified.
    """
    for layer, (gw, gb) in enumerate(zip(grads.weights, grads.biases)):
        if not np.all(np.isfinite(gw)):
            raise ValueError(f"non-finite gradient in layer {layer} weights")
        if not np.all(np.isfinite(gb)):
            raise ValueError(f"non-finite gradient in layer {layer} biases")
    state.step_count += 1
    c1 = 1.0 - state.beta1**state.step_count
    c2 = 1.0 - state.beta2**state.step_count
    for layer in range(net.n_layers):
        _adam_update(net.weights[layer], grads.weights[layer],
                     state.m_weights[layer], state.v_weights[layer], state, c1, c2)
        _adam_update(net.biases[layer], grads.biases[layer],
                     state.m_biases[layer], state.v_biases[layer], state, c1, c2)


def polyak_update(target: DenseNet, online: DenseNet, tau: float) -> None:
    """target <- tau * online + (1 - tau) * target, in place."""
    if not (0.0 <= tau <= 1.0):
        raise ValueError("tau must lie in [0, 1]")
    if target.layer_sizes != online.layer_sizes:
        raise ValueError("target and online network topologies differ")
    for t_arr, o_arr in zip(target.weights, online.weights):
        t_arr *= 1.0 - tau
        t_arr += tau * o_arr
    for t_arr, o_arr in zip(target.biases, online.biases):
        t_arr *= 1.0 - tau
        t_arr += tau * o_arr


# ---------------------------------------------------------------------------
# finite-difference gradient verification
# ---------------------------------------------------------------------------

@dataclass
class GradCheckReport:
    max_rel_err: float
    n_probes: int
    tol: float
    worst_param: str

    @property
    def passed(self) -> bool:
        return self.max_rel_err < self.tol


def grad_check(
    net: DenseNet,
    x: np.ndarray | None = None,
    n_probes: int = 64,
    fd_step: float = 1e-5,
    tol: float = 1e-4,
    rng: np.random.Generator | None = None,
) -> GradCheckReport:
    """Compare analytic gradients against central finite differences.

    The probe loss is a fixed random linear functional of the network output,
    which exercises the full Jacobian including the softmax heads.  For each
    of ``n_probes`` randomly chosen scalar parameters the central difference
    (f(p+h) - f(p-h)) / 2h is compared with the analytic gradient; the error
    is relative with an absolute floor of 1e-6 so that exactly-dead paths do
    not divide by zero.

    A probe whose two perturbed forward passes land on different ReLU
    activation patterns straddles a kink, where the loss is not
    differentiable and the central difference means nothing; such probes are
    redrawn, and the report's ``n_probes`` counts the comparisons actually
    made.
    """
    rng = rng or np.random.default_rng(0)
    if x is None:
        x = rng.normal(size=(4, net.layer_sizes[0]))
    out, cache = forward(net, x)
    loss_weights = rng.normal(size=out.shape)

    def loss_and_masks() -> tuple[float, list[np.ndarray]]:
        value, c = forward(net, x)
        masks = [z > 0.0 for z in c.pre_activations[:-1]]
        return float(np.sum(value * loss_weights)), masks

    grads = backward(net, cache, loss_weights)
    params = list(net.weights) + list(net.biases)
    grad_arrays = list(grads.weights) + list(grads.biases)
    names = [f"layer{i} weights" for i in range(net.n_layers)] + [
        f"layer{i} biases" for i in range(net.n_layers)
    ]

    max_err = 0.0
    worst = ""
    compared = 0
    for _ in range(10 * n_probes):
        if compared == n_probes:
            break
        which = int(rng.integers(len(params)))
        flat_idx = int(rng.integers(params[which].size))
        idx = np.unravel_index(flat_idx, params[which].shape)
        original = params[which][idx]
        params[which][idx] = original + fd_step
        up, up_masks = loss_and_masks()
        params[which][idx] = original - fd_step
        down, down_masks = loss_and_masks()
        params[which][idx] = original
        if any(not np.array_equal(a, b) for a, b in zip(up_masks, down_masks)):
            continue  # straddles a ReLU kink: not a valid derivative probe
        compared += 1
        fd = (up - down) / (2.0 * fd_step)
        analytic = grad_arrays[which][idx]
        err = abs(analytic - fd) / max(abs(analytic), abs(fd), 1e-6)
        if err > max_err:
            max_err = err
            worst = f"{names[which]}[{idx}]"
    return GradCheckReport(max_rel_err=max_err, n_probes=compared, tol=tol, worst_param=worst)
