"""Sanity checks on the hand-written numerics: FFT against a direct DFT, and the
network gradient against central differences."""
import numpy as np

from isarenhance import fft_1d, init_network, rng
from isarenhance.enhancer import FlatObjective
from isarenhance.tensor_nn import gradient_check

x = np.exp(2j * np.pi * 5 * np.arange(64) / 64)
X = fft_1d(x)
k = np.arange(64)
dft = np.exp(-2j * np.pi * np.outer(k, k) / 64) @ x
print("tone lands in bin", np.argmax(np.abs(X)), "| max |FFT - DFT| =", np.abs(X - dft).max())

params = init_network(0)
y = rng.uniform(1000, 256).reshape(16, 16)
obj = FlatObjective(params, y, lam=0.2)
idx = np.random.default_rng(0).choice(params.flatten().size, 200, replace=False)
stats = {}
err = gradient_check(obj.value_and_grad, params.flatten(), 1e-5, idx,
                     value=obj.value, region=obj.region, stats=stats)
print(f"gradient check: max rel err {err:.2e} on {len(stats['checked'])} coords "
      f"({len(stats['skipped'])} skipped: stencil straddles a ReLU or |.| kink)")
