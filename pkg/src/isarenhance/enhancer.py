"""Three-layer convolutional enhancer trained on the single image it enhances.

The network is conv(1->64) -> ReLU -> conv(64->64) -> ReLU -> conv(64->1), all
3x3 with same padding.  Training minimises

    mean((F(y) - y)**2) + lam * mean(|F(y)|)

with Adam, one full-image gradient step per epoch.
"""

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import NumericError
from .tensor_nn import (
    AdamState,
    ConvLayerParams,
    adam_step,
    as_tensor,
    conv2d_backward,
    conv2d_forward,
    l1_term,
    l2_term,
    relu_backward,
    relu_forward,
)

CHANNELS = (1, 64, 64, 1)
PARAM_NAMES = ("k1", "b1", "k2", "b2", "k3", "b3")


@dataclass
class NetworkParams:
    layer1: ConvLayerParams
    layer2: ConvLayerParams
    layer3: ConvLayerParams

    @property
    def layers(self):
        return (self.layer1, self.layer2, self.layer3)

    def arrays(self) -> list:
        """Parameter arrays in ``PARAM_NAMES`` order."""
        out = []
        for layer in self.layers:
            out += [layer.kernels, layer.biases]
        return out

    @classmethod
    def from_arrays(cls, arrays) -> "NetworkParams":
        k1, b1, k2, b2, k3, b3 = arrays
        return cls(ConvLayerParams(k1, b1), ConvLayerParams(k2, b2), ConvLayerParams(k3, b3))

    def flatten(self) -> np.ndarray:
        return np.concatenate([a.reshape(-1) for a in self.arrays()])

    def unflatten(self, flat) -> "NetworkParams":
        """New params with this network's shapes, filled from a flat vector."""
        arrays, pos = [], 0
        for a in self.arrays():
            arrays.append(np.asarray(flat[pos:pos + a.size], dtype=np.float64).reshape(a.shape))
            pos += a.size
        return NetworkParams.from_arrays(arrays)


@dataclass
class TrainConfig:
    lam: float = 0.0
    learning_rate: float = 1e-4
    epochs: int = 100
    seed: int = 0

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")


@dataclass
class TrainReport:
    loss_history: np.ndarray
    fidelity_history: np.ndarray
    sparsity_history: np.ndarray
    final_params: NetworkParams = field(repr=False)


def init_network(seed: int = 0) -> NetworkParams:
    """He-initialised kernels (std sqrt(2 / (9 * in_channels))) and zero biases.

    All kernels come from one splitmix64 normal stream, layer by layer.
    """
    layers, offset = [], 0
    for cin, cout in zip(CHANNELS[:-1], CHANNELS[1:]):
        n = 9 * cin * cout
        draws = rng.normal(seed, n, offset)
        offset += n + n % 2
        kernels = np.sqrt(2.0 / (9 * cin)) * draws.reshape(3, 3, cin, cout)
        layers.append(ConvLayerParams(kernels, np.zeros(cout)))
    return NetworkParams(*layers)


def _forward_cached(params: NetworkParams, y):
    x0 = as_tensor(y)
    z1 = conv2d_forward(x0, params.layer1)
    a1 = relu_forward(z1)
    z2 = conv2d_forward(a1, params.layer2)
    a2 = relu_forward(z2)
    out = conv2d_forward(a2, params.layer3)
    return out, (x0, z1, a1, z2, a2)


def forward(params: NetworkParams, y) -> np.ndarray:
    """Network output F(y), shape ``(H, W, 1)``, unclamped."""
    return _forward_cached(params, y)[0]


def backward(params: NetworkParams, cache, grad_out) -> list:
    """Parameter gradients in ``PARAM_NAMES`` order."""
    x0, z1, a1, z2, a2 = cache
    g, gk3, gb3 = conv2d_backward(a2, params.layer3, grad_out)
    g, gk2, gb2 = conv2d_backward(a1, params.layer2, relu_backward(z2, g))
    _, gk1, gb1 = conv2d_backward(x0, params.layer1, relu_backward(z1, g), need_input_grad=False)
    return [gk1, gb1, gk2, gb2, gk3, gb3]


def loss_terms(output, y, lam: float):
    """``(total, fidelity, sparsity, grad)`` of the self-supervised objective."""
    y = as_tensor(y)
    fid, g = l2_term(output, y)
    sp, g1 = l1_term(output)
    if lam != 0:
        g = g + lam * g1
    return fid + lam * sp, fid, sp, g


def loss(output, y, lam: float):
    """Total loss value and its gradient w.r.t. the network output."""
    total, _, _, g = loss_terms(output, y, lam)
    return total, g


def loss_and_gradients(params: NetworkParams, y, lam: float):
    """Loss at ``params`` and gradients for every parameter array."""
    out, cache = _forward_cached(params, y)
    total, _, _, g = loss_terms(out, cache[0], lam)
    return total, backward(params, cache, g)


def train(y, config: TrainConfig = TrainConfig()):
    """Fit a fresh network to ``y`` alone and return ``(F(y), report)``."""
    y = as_tensor(y)
    params = init_network(config.seed)
    arrays = params.arrays()
    states = [AdamState.zeros_like(a) for a in arrays]
    totals, fids, sps = [], [], []
    for epoch in range(config.epochs):
        out, cache = _forward_cached(params, y)
        total, fid, sp, g = loss_terms(out, y, config.lam)
        if not np.isfinite(total):
            raise NumericError(f"loss became non-finite at epoch {epoch}: {total}")
        totals.append(total)
        fids.append(fid)
        sps.append(sp)
        grads = backward(params, cache, g)
        for i, (p, gr) in enumerate(zip(arrays, grads)):
            arrays[i], states[i] = adam_step(p, gr, states[i], config.learning_rate)
        params = NetworkParams.from_arrays(arrays)
    enhanced = forward(params, y)
    if not np.all(np.isfinite(enhanced)):
        raise NumericError(f"enhanced image is non-finite after epoch {config.epochs - 1}")
    report = TrainReport(np.array(totals), np.array(fids), np.array(sps), params)
    return enhanced, report


class FlatObjective:
    """Training loss as a function of the flattened parameter vector.

    Plugs into :func:`tensor_nn.gradient_check`: ``value_and_grad`` is ``f``,
    ``value`` the cheap evaluation, and ``region`` the ReLU/sign pattern that
    identifies the smooth piece of the loss surface.
    """

    def __init__(self, template: NetworkParams, y, lam: float):
        self.template = template
        self.y = as_tensor(y)
        self.lam = lam
        self._key = None
        self._cached = None

    def _run(self, flat):
        flat = np.asarray(flat, dtype=np.float64)
        key = flat.tobytes()
        if key != self._key:
            out, cache = _forward_cached(self.template.unflatten(flat), self.y)
            pattern = np.concatenate([(cache[1] > 0).ravel(), (cache[3] > 0).ravel(),
                                      np.sign(out).ravel()])
            self._key, self._cached = key, (loss_terms(out, self.y, self.lam)[0], pattern)
        return self._cached

    def value(self, flat) -> float:
        return self._run(flat)[0]

    def region(self, flat) -> np.ndarray:
        return self._run(flat)[1]

    def value_and_grad(self, flat):
        total, grads = loss_and_gradients(self.template.unflatten(flat), self.y, self.lam)
        return total, np.concatenate([g.reshape(-1) for g in grads])


def fit_free_image(y, lam: float, learning_rate: float = 1e-2, steps: int = 5000, init=None):
    """Minimise the same objective over a free per-pixel image instead of a network.

    Starts from ``init`` (default ``y``) and takes ``steps`` Adam steps.  The
    exact minimiser is ``metrics.soft_threshold(y, lam)``, which makes this a
    check of the loss and optimiser plumbing independent of the network.
    """
    y = as_tensor(y)
    u = y.copy() if init is None else as_tensor(init).copy()
    state = AdamState.zeros_like(u)
    for _ in range(steps):
        _, _, _, g = loss_terms(u, y, lam)
        u, state = adam_step(u, g, state, learning_rate)
    return u
