"""Image-quality measures for radar images and the soft-threshold reference solution.

Entropy, contrast and TBR work on intensity ``img**2``.  Pass magnitudes; the
network output can be negative, so callers take ``abs`` first.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError

DB_CAP = 300.0
METRIC_NAMES = ("entropy", "contrast", "l1_mean", "tbr", "psnr")


@dataclass(frozen=True)
class MetricsRow:
    name: str
    value: float

    def __post_init__(self):
        if self.name not in METRIC_NAMES:
            raise ValueError(f"unknown metric {self.name!r}")


def _intensity(img):
    img = np.asarray(img, dtype=np.float64)
    return img * img


def image_entropy(img) -> float:
    """Shannon entropy (nats) of the normalised intensity distribution."""
    inten = _intensity(img)
    total = inten.sum()
    if not total > 0:
        raise DomainError("entropy is undefined for an all-zero image")
    p = inten[inten > 0] / total
    return float(-np.sum(p * np.log(p)))


def image_contrast(img) -> float:
    """Standard deviation of intensity over its mean."""
    inten = _intensity(img)
    mu = inten.mean()
    if not mu > 0:
        raise DomainError("contrast is undefined for an all-zero image")
    return float(np.sqrt(np.mean((inten - mu) ** 2)) / mu)


def l1_mean(img) -> float:
    return float(np.mean(np.abs(img)))


def _db(ratio_num, ratio_den) -> float:
    if ratio_den == 0:
        return DB_CAP
    if ratio_num == 0:
        return -DB_CAP
    return float(min(DB_CAP, max(-DB_CAP, 10.0 * np.log10(ratio_num / ratio_den))))


def tbr(img, target_mask) -> float:
    """Target-to-background ratio in dB; +300 when the background is exactly dark."""
    inten = np.squeeze(_intensity(img))
    mask = np.squeeze(np.asarray(target_mask, dtype=bool))
    if mask.shape != inten.shape:
        raise ShapeError(f"mask shape {mask.shape} does not match image {inten.shape}")
    if mask.all() or not mask.any():
        raise DomainError("mask needs at least one target and one background pixel")
    target = inten[mask].mean()
    background = inten[~mask].mean()
    if target == 0 and background == 0:
        raise DomainError("TBR is undefined for an all-zero image")
    return _db(target, background)


def psnr(img, reference) -> float:
    """Peak signal-to-noise ratio in dB against ``reference``; +300 when equal."""
    img = np.asarray(img, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    if img.shape != reference.shape:
        raise ShapeError(f"image {img.shape} and reference {reference.shape} differ in shape")
    peak = reference.max()
    if not peak > 0:
        raise DomainError("reference maximum must be positive")
    mse = float(np.mean((img - reference) ** 2))
    return _db(peak * peak, mse)


def soft_threshold(y, lam: float):
    """Elementwise minimiser of ``mean((u - y)**2) + lam * mean(|u|)``."""
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    y = np.asarray(y, dtype=np.float64)
    if lam == 0:
        return y.copy()
    return np.sign(y) * np.maximum(0.0, np.abs(y) - lam / 2.0)


def mainlobe_width_3db(img) -> tuple:
    """Widths (rows, cols) in pixels of the -3 dB mainlobe through the peak.

    Counts the contiguous run of pixels whose intensity is at least half the
    peak intensity along the peak's column and row.
    """
    inten = _intensity(np.squeeze(img))
    r, c = np.unravel_index(np.argmax(inten), inten.shape)
    half = inten[r, c] / 2.0

    def run(line, i):
        lo = i
        while lo > 0 and line[lo - 1] >= half:
            lo -= 1
        hi = i
        while hi < line.size - 1 and line[hi + 1] >= half:
            hi += 1
        return hi - lo + 1

    return run(inten[:, c], r), run(inten[r, :], c)


def image_metrics(img, mask=None, reference=None) -> list:
    """MetricsRow list for a magnitude image; tbr/psnr only when their inputs are given."""
    img = np.abs(np.squeeze(np.asarray(img, dtype=np.float64)))
    rows = [
        MetricsRow("entropy", image_entropy(img)),
        MetricsRow("contrast", image_contrast(img)),
        MetricsRow("l1_mean", l1_mean(img)),
    ]
    if mask is not None:
        rows.append(MetricsRow("tbr", tbr(img, mask)))
    if reference is not None:
        rows.append(MetricsRow("psnr", psnr(img, np.squeeze(reference))))
    return rows
