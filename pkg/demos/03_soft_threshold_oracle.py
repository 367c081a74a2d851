"""Why the L1 term sparsifies: with the network replaced by a free image, the
minimiser of mean((u-y)^2) + lam*mean|u| is a soft threshold of y at lam/2.

Adam with a fixed step reaches it on pixels well away from the threshold, but keeps
oscillating by roughly the learning rate on pixels at or near zero.
"""
import numpy as np

from isarenhance import rng
from isarenhance.enhancer import fit_free_image
from isarenhance.metrics import soft_threshold

y = rng.uniform(5, 32 * 32).reshape(32, 32)
lam = 0.3
target = soft_threshold(y, lam)
dead = np.abs(y) <= lam / 2

for lr in (1e-2, 1e-3):
    u = fit_free_image(y, lam, learning_rate=lr, steps=5000)[:, :, 0]
    err = np.abs(u - target)
    print(f"lr={lr:g}: max err outside dead zone {err[~dead].max():.2e}, inside {err[dead].max():.2e}")
