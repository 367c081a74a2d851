"""Point-scatterer ISAR phase-history simulator (small-angle turntable model).

The echo is sampled on a stepped-frequency grid after dechirp, so range maps
to a linear phase ramp across frequency and cross-range to a linear phase ramp
across pulses.  Range-Doppler imaging then reduces to a 2-D DFT.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import DomainError

C = 299792458.0

DEFAULT_CARRIER_HZ = 9e9
DEFAULT_BANDWIDTH_HZ = 150e6
DEFAULT_N_RANGE = 128
DEFAULT_N_PULSE = 128
DEFAULT_PULSE_INTERVAL_S = 1e-3
# total rotation n_range*B / (fc*(n_range-1)) ~= 0.0168 rad makes the
# cross-range cell equal to the range cell at the defaults above
DEFAULT_ROTATION_RATE_RAD_S = (
    DEFAULT_N_RANGE * DEFAULT_BANDWIDTH_HZ
    / (DEFAULT_CARRIER_HZ * (DEFAULT_N_RANGE - 1) * DEFAULT_N_PULSE * DEFAULT_PULSE_INTERVAL_S)
)

MAX_ROTATION_RAD = 0.2


@dataclass(frozen=True)
class Scatterer:
    range_m: float
    cross_range_m: float
    reflectivity: float = 1.0

    def __post_init__(self):
        if not self.reflectivity >= 0:
            raise DomainError(f"reflectivity must be >= 0: {self}")


@dataclass(frozen=True)
class RadarParams:
    carrier_hz: float = DEFAULT_CARRIER_HZ
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    n_range: int = DEFAULT_N_RANGE
    n_pulse: int = DEFAULT_N_PULSE
    rotation_rate_rad_s: float = DEFAULT_ROTATION_RATE_RAD_S
    pulse_interval_s: float = DEFAULT_PULSE_INTERVAL_S

    def __post_init__(self):
        if not self.carrier_hz > self.bandwidth_hz > 0:
            raise DomainError(
                f"need carrier_hz > bandwidth_hz > 0, got {self.carrier_hz}, {self.bandwidth_hz}"
            )
        if self.n_range < 2 or self.n_pulse < 2:
            raise DomainError(f"n_range and n_pulse must be >= 2, got {self.n_range}, {self.n_pulse}")
        if not self.pulse_interval_s > 0:
            raise DomainError(f"pulse_interval_s must be positive, got {self.pulse_interval_s}")
        if not 0 < abs(self.total_rotation_rad) < MAX_ROTATION_RAD:
            raise DomainError(
                f"total rotation {self.total_rotation_rad:g} rad must be nonzero and below "
                f"{MAX_ROTATION_RAD} rad for the small-angle model"
            )

    @property
    def total_rotation_rad(self) -> float:
        return self.rotation_rate_rad_s * self.pulse_interval_s * self.n_pulse

    @property
    def frequencies_hz(self) -> np.ndarray:
        step = self.bandwidth_hz / (self.n_range - 1)
        return self.carrier_hz - self.bandwidth_hz / 2 + step * np.arange(self.n_range)

    @property
    def range_cell_m(self) -> float:
        """Range shift that moves a scatterer by one image row."""
        return C * (self.n_range - 1) / (2.0 * self.n_range * self.bandwidth_hz)

    @property
    def cross_range_cell_m(self) -> float:
        """Cross-range shift that moves a scatterer by one Doppler bin at the carrier."""
        return C / (2.0 * self.carrier_hz * self.rotation_rate_rad_s
                    * self.pulse_interval_s * self.n_pulse)

    @property
    def range_extent_m(self) -> float:
        return self.n_range * self.range_cell_m

    @property
    def cross_range_extent_m(self) -> float:
        return self.n_pulse * abs(self.cross_range_cell_m)


def check_scene(scene, params: RadarParams) -> None:
    """Raise DomainError for the first scatterer outside the unambiguous extent."""
    half_r = params.range_extent_m / 2
    half_x = params.cross_range_extent_m / 2
    for k, s in enumerate(scene):
        if not (abs(s.range_m) < half_r and abs(s.cross_range_m) < half_x):
            raise DomainError(
                f"scatterer {k} {s} lies outside the unambiguous scene "
                f"(|range| < {half_r:.6g} m, |cross range| < {half_x:.6g} m)"
            )


def simulate_echo(scene, params: RadarParams = RadarParams()) -> np.ndarray:
    """Phase history of shape ``(n_range, n_pulse)``: frequency rows, pulse columns.

    ``sample[i, m] = sum_k a_k exp(-j 4 pi f_i r_k(m) / c)`` with
    ``r_k(m) = range_k + cross_range_k * rotation_rate * pulse_interval * m``.
    """
    check_scene(scene, params)
    f = params.frequencies_hz[:, None]
    theta = params.rotation_rate_rad_s * params.pulse_interval_s * np.arange(params.n_pulse)
    echo = np.zeros((params.n_range, params.n_pulse), dtype=np.complex128)
    for s in scene:
        r = s.range_m + s.cross_range_m * theta[None, :]
        echo += s.reflectivity * np.exp(-4j * np.pi * f * r / C)
    return echo


def add_noise(echo, snr_db: float, seed: int) -> np.ndarray:
    """Add circular complex Gaussian noise at ``snr_db`` relative to the mean sample power.

    ``snr_db = inf`` returns the input unchanged.
    """
    echo = np.asarray(echo, dtype=np.complex128)
    if np.isposinf(snr_db):
        return echo.copy()
    if not np.isfinite(snr_db):
        raise DomainError(f"snr_db must be finite or +inf, got {snr_db}")
    p_signal = float(np.mean(np.abs(echo) ** 2))
    if p_signal == 0.0:
        raise DomainError("SNR is undefined for an all-zero echo")
    sigma2 = p_signal / 10.0 ** (snr_db / 10.0)
    z = rng.normal(seed, 2 * echo.size).reshape(*echo.shape, 2)
    noise = np.sqrt(sigma2 / 2.0) * (z[..., 0] + 1j * z[..., 1])
    return echo + noise


def on_grid_scatterer(row_offset: int, col_offset: int, params: RadarParams,
                      reflectivity: float = 1.0) -> Scatterer:
    """Scatterer whose RD peak lands ``row_offset`` rows and ``col_offset`` columns
    from the image center (see :func:`rd_imaging.predicted_pixel`)."""
    # forward FFT over pulses maps positive cross range to negative Doppler bins
    return Scatterer(row_offset * params.range_cell_m,
                     -col_offset * params.cross_range_cell_m, reflectivity)
