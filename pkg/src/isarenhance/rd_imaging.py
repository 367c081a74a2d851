"""Range-Doppler image formation with an in-house radix-2 FFT."""

import numpy as np

from .errors import DomainError


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft_1d(signal, inverse: bool = False, axis: int = -1) -> np.ndarray:
    """Iterative radix-2 decimation-in-time DFT along ``axis``.

    The forward transform is unscaled; the inverse is scaled by 1/N.
    """
    x = np.moveaxis(np.asarray(signal, dtype=np.complex128), axis, -1)
    n = x.shape[-1]
    if not is_power_of_two(n):
        raise DomainError(f"FFT length must be a power of two, got {n}")
    lead = x.shape[:-1]
    x = x[..., _bit_reverse(n)]
    sign = 1.0 if inverse else -1.0
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        blocks = x.reshape(*lead, n // size, 2, half)
        even = blocks[..., 0, :]
        odd = blocks[..., 1, :] * tw
        x = np.concatenate([even + odd, even - odd], axis=-1).reshape(*lead, n)
        size *= 2
    if inverse:
        x = x / n
    return np.moveaxis(x, -1, axis)


def hamming(n: int) -> np.ndarray:
    return 0.54 - 0.46 * np.cos(2 * np.pi * np.arange(n) / (n - 1))


def rd_image(echo, window: bool = False) -> np.ndarray:
    """Complex RD image from a ``(frequency, pulse)`` phase history.

    Inverse FFT over frequency gives range rows, forward FFT over pulses gives
    Doppler columns; both axes are then shifted so the scene center sits at
    ``(rows // 2, cols // 2)``.  ``window`` applies a Hamming taper across
    frequency before range compression.
    """
    echo = np.asarray(echo, dtype=np.complex128)
    if echo.ndim != 2:
        raise DomainError(f"echo must be a 2-D matrix, got shape {echo.shape}")
    rows, cols = echo.shape
    if not (is_power_of_two(rows) and is_power_of_two(cols)):
        raise DomainError(f"RD imaging needs power-of-two dimensions, got {rows}x{cols}")
    if window:
        echo = echo * hamming(rows)[:, None]
    img = fft_1d(echo, inverse=True, axis=0)
    img = fft_1d(img, inverse=False, axis=1)
    return np.roll(img, (rows // 2, cols // 2), axis=(0, 1))


def predicted_pixel(row_offset: int, col_offset: int, shape) -> tuple:
    """Pixel at which an on-grid scatterer's peak appears after :func:`rd_image`."""
    rows, cols = shape
    return (rows // 2 + row_offset) % rows, (cols // 2 + col_offset) % cols


def magnitude_normalize(image) -> np.ndarray:
    """Modulus divided by its global maximum, so the result lies in [0, 1] with max 1."""
    mag = np.abs(np.asarray(image, dtype=np.complex128))
    peak = mag.max() if mag.size else 0.0
    if not peak > 0:
        raise DomainError("cannot normalize an all-zero image")
    return mag / peak
