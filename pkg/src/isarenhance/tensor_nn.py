"""Small deterministic neural-network kernels on ``(height, width, channels)`` arrays.

Images, activations and gradients are plain float64 numpy arrays laid out
row-major and channel-minor, i.e. ``x[r, c, k]``.  Convolution kernels are
``(3, 3, in_channels, out_channels)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ShapeError

BETA1 = 0.9
BETA2 = 0.999
EPS = 1e-8


def as_tensor(x) -> np.ndarray:
    """Coerce to a float64 ``(H, W, C)`` array; 2-D input gets one channel."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        x = x[:, :, None]
    if x.ndim != 3:
        raise ShapeError(f"expected a (height, width, channels) tensor, got shape {x.shape}")
    return x


def _same_shape(a, b, what="tensors"):
    if a.shape != b.shape:
        raise ShapeError(f"{what} differ in shape: {a.shape} vs {b.shape}")


@dataclass
class ConvLayerParams:
    kernels: np.ndarray
    biases: np.ndarray

    def __post_init__(self):
        self.kernels = np.asarray(self.kernels, dtype=np.float64)
        self.biases = np.asarray(self.biases, dtype=np.float64)
        if self.kernels.ndim != 4 or self.kernels.shape[:2] != (3, 3):
            raise ShapeError(f"kernels must be (3, 3, in, out), got {self.kernels.shape}")
        if self.biases.shape != (self.kernels.shape[3],):
            raise ShapeError(
                f"bias length {self.biases.shape} does not match out_channels {self.kernels.shape[3]}"
            )

    @property
    def in_channels(self) -> int:
        return self.kernels.shape[2]

    @property
    def out_channels(self) -> int:
        return self.kernels.shape[3]


def _patches(x: np.ndarray) -> np.ndarray:
    """im2col for a zero-padded 3x3 neighbourhood: ``(H*W, 9*C)``."""
    h, w, c = x.shape
    xp = np.pad(x, ((1, 1), (1, 1), (0, 0)))
    cols = np.empty((h, w, 3, 3, c))
    for i in range(3):
        for j in range(3):
            cols[:, :, i, j, :] = xp[i:i + h, j:j + w, :]
    return cols.reshape(h * w, 9 * c)


def conv2d_forward(x, layer: ConvLayerParams) -> np.ndarray:
    """Same-padded 3x3 cross-correlation plus per-channel bias."""
    x = as_tensor(x)
    if x.shape[2] != layer.in_channels:
        raise ShapeError(
            f"input shape {x.shape} has {x.shape[2]} channels but kernels "
            f"{layer.kernels.shape} expect {layer.in_channels}"
        )
    h, w, _ = x.shape
    out = _patches(x) @ layer.kernels.reshape(-1, layer.out_channels) + layer.biases
    return out.reshape(h, w, layer.out_channels)


def conv2d_backward(x, layer: ConvLayerParams, grad_output, need_input_grad=True):
    """Gradients of :func:`conv2d_forward` w.r.t. input, kernels and biases.

    With ``need_input_grad=False`` the first element of the result is ``None``;
    the first network layer never needs it.
    """
    x = as_tensor(x)
    g = as_tensor(grad_output)
    h, w, c = x.shape
    if x.shape[2] != layer.in_channels:
        raise ShapeError(f"input shape {x.shape} incompatible with kernels {layer.kernels.shape}")
    if g.shape != (h, w, layer.out_channels):
        raise ShapeError(
            f"grad_output shape {g.shape} does not match forward output {(h, w, layer.out_channels)}"
        )
    g2 = g.reshape(h * w, layer.out_channels)
    grad_k = (_patches(x).T @ g2).reshape(layer.kernels.shape)
    grad_b = g2.sum(axis=0)
    if not need_input_grad:
        return None, grad_k, grad_b
    gcols = (g2 @ layer.kernels.reshape(-1, layer.out_channels).T).reshape(h, w, 3, 3, c)
    gp = np.zeros((h + 2, w + 2, c))
    for i in range(3):
        for j in range(3):
            gp[i:i + h, j:j + w, :] += gcols[:, :, i, j, :]
    return gp[1:-1, 1:-1, :], grad_k, grad_b


def relu_forward(x) -> np.ndarray:
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def relu_backward(x, grad_output) -> np.ndarray:
    """Pass the gradient where the input is strictly positive (ReLU'(0) = 0)."""
    x = np.asarray(x, dtype=np.float64)
    g = np.asarray(grad_output, dtype=np.float64)
    _same_shape(x, g)
    return np.where(x > 0, g, 0.0)


def l2_term(a, b):
    """Mean squared difference and its gradient w.r.t. ``a``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _same_shape(a, b)
    d = a - b
    return float(np.mean(d * d)), 2.0 * d / d.size


def l1_term(a):
    """Mean absolute value and its gradient, with sign(0) = 0."""
    a = np.asarray(a, dtype=np.float64)
    return float(np.mean(np.abs(a))), np.sign(a) / a.size


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros_like(cls, param) -> "AdamState":
        param = np.asarray(param, dtype=np.float64)
        return cls(np.zeros_like(param), np.zeros_like(param), 0)


def adam_step(param, grad, state: AdamState, lr: float):
    """One bias-corrected Adam update; returns ``(new_param, new_state)``.

    Inputs are not modified.
    """
    param = np.asarray(param, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if not param.shape == grad.shape == state.m.shape == state.v.shape:
        raise ShapeError(
            f"adam shapes disagree: param {param.shape}, grad {grad.shape}, "
            f"m {state.m.shape}, v {state.v.shape}"
        )
    if not lr > 0:
        raise ValueError(f"learning rate must be positive, got {lr}")
    t = state.t + 1
    m = BETA1 * state.m + (1.0 - BETA1) * grad
    v = BETA2 * state.v + (1.0 - BETA2) * (grad * grad)
    m_hat = m / (1.0 - BETA1**t)
    v_hat = v / (1.0 - BETA2**t)
    new_param = param - lr * (m_hat / (np.sqrt(v_hat) + EPS))
    return new_param, AdamState(m, v, t)


def gradient_check(f, point, step=1e-5, indices=None, *, value=None, region=None, stats=None) -> float:
    """Largest relative error between an analytic gradient and central differences.

    ``f(x)`` returns ``(value, gradient)``.  The error at coordinate i is
    ``|a_i - n_i| / max(1e-12, |a_i| + |n_i|)``.

    indices: flat coordinates to check (all by default).
    value: cheaper value-only version of ``f`` for the perturbed evaluations.
    region: maps a point to a signature of the smooth piece it lies on (e.g. ReLU
        activation pattern).  A coordinate whose +/- step points leave the piece of
        ``point`` is skipped, since a central difference across a kink does not
        estimate the derivative.
    stats: optional dict, receives ``checked`` and ``skipped`` index lists.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    x0 = np.array(point, dtype=np.float64)
    flat = x0.reshape(-1)
    value_fn = value if value is not None else (lambda x: f(x)[0])

    def evaluate(x):
        v = float(value_fn(x))
        if not np.isfinite(v):
            raise NumericError(f"function value is not finite: {v}")
        return v

    analytic = np.asarray(f(x0.copy())[1], dtype=np.float64).reshape(-1)
    if analytic.shape != flat.shape:
        raise ShapeError(f"gradient shape {analytic.shape} does not match point {flat.shape}")
    centre = region(x0) if region is not None else None
    checked, skipped = [], []
    worst = 0.0
    for i in range(flat.size) if indices is None else indices:
        xp = flat.copy()
        xm = flat.copy()
        xp[i] += step
        xm[i] -= step
        xp = xp.reshape(x0.shape)
        xm = xm.reshape(x0.shape)
        if region is not None and not (
            np.array_equal(region(xp), centre) and np.array_equal(region(xm), centre)
        ):
            skipped.append(int(i))
            continue
        numeric = (evaluate(xp) - evaluate(xm)) / (2.0 * step)
        err = abs(analytic[i] - numeric) / max(1e-12, abs(analytic[i]) + abs(numeric))
        worst = max(worst, err)
        checked.append(int(i))
    if stats is not None:
        stats["checked"] = checked
        stats["skipped"] = skipped
    return worst
