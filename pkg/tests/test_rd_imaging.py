import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isarenhance.errors import DomainError
from isarenhance.radar_sim import RadarParams, on_grid_scatterer, simulate_echo
from isarenhance.rd_imaging import fft_1d, magnitude_normalize, predicted_pixel, rd_image


def dft(x, inverse=False):
    """Direct O(N^2) DFT."""
    n = len(x)
    k = np.arange(n)
    sign = 1 if inverse else -1
    out = np.array([np.sum(x * np.exp(sign * 2j * np.pi * k * j / n)) for j in range(n)])
    return out / n if inverse else out


def test_impulse_and_constant():
    np.testing.assert_allclose(fft_1d([1, 0, 0, 0]), [1, 1, 1, 1], atol=1e-15)
    np.testing.assert_allclose(fft_1d([1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16, 32, 64])
def test_matches_direct_dft(rs, n):
    x = rs.normal(size=n) + 1j * rs.normal(size=n)
    assert np.max(np.abs(fft_1d(x) - dft(x))) <= 1e-10
    assert np.max(np.abs(fft_1d(x, inverse=True) - dft(x, inverse=True))) <= 1e-10


def test_round_trip_128(rs):
    x = rs.normal(size=128) + 1j * rs.normal(size=128)
    assert np.max(np.abs(fft_1d(fft_1d(x), inverse=True) - x)) <= 1e-12


@pytest.mark.parametrize("n", [2**k for k in range(1, 11)])
def test_round_trip_and_parseval(rs, n):
    x = rs.normal(size=n) + 1j * rs.normal(size=n)
    X = fft_1d(x)
    assert np.max(np.abs(fft_1d(X, inverse=True) - x)) <= 1e-12
    assert abs(np.sum(np.abs(x) ** 2) - np.sum(np.abs(X) ** 2) / n) <= 1e-10 * np.sum(np.abs(x) ** 2)


def test_agrees_with_numpy(rs):
    x = rs.normal(size=(3, 256)) + 1j * rs.normal(size=(3, 256))
    np.testing.assert_allclose(fft_1d(x), np.fft.fft(x), atol=1e-10)
    np.testing.assert_allclose(fft_1d(x.T, axis=0), np.fft.fft(x.T, axis=0), atol=1e-10)


@pytest.mark.parametrize("n", [3, 6, 100, 0])
def test_non_power_of_two(n):
    with pytest.raises(DomainError):
        fft_1d(np.ones(n))


def test_center_scatterer_peaks_at_center():
    p = RadarParams()
    img = np.abs(rd_image(simulate_echo([on_grid_scatterer(0, 0, p)], p)))
    peak = np.unravel_index(np.argmax(img), img.shape)
    assert peak == (64, 64)
    assert np.sum(img == img.max()) == 1


@pytest.mark.parametrize("q", [-20, -1, 1, 5, 33])
def test_range_offset_moves_row(q):
    p = RadarParams()
    img = np.abs(rd_image(simulate_echo([on_grid_scatterer(q, 0, p)], p)))
    assert np.unravel_index(np.argmax(img), img.shape) == (64 + q, 64)


def test_range_bin_brute_force():
    # brute-force DFT of one pulse's frequency samples gives the same range bin
    p = RadarParams()
    echo = simulate_echo([on_grid_scatterer(11, 0, p)], p)
    profile = np.abs(dft(echo[:, 0], inverse=True))
    assert np.argmax(profile) == 11


def test_zero_echo_gives_zero_image():
    assert not rd_image(np.zeros((16, 32), complex)).any()


def test_rd_image_dimension_errors():
    with pytest.raises(DomainError):
        rd_image(np.ones((12, 16), complex))
    with pytest.raises(DomainError):
        rd_image(np.ones(16, complex))


def test_window_keeps_peak():
    p = RadarParams()
    img = np.abs(rd_image(simulate_echo([on_grid_scatterer(7, -9, p)], p), window=True))
    assert np.unravel_index(np.argmax(img), img.shape) == predicted_pixel(7, -9, img.shape)


def test_magnitude_normalize_examples():
    np.testing.assert_array_equal(magnitude_normalize(np.array([[3 + 4j]])), [[1.0]])
    np.testing.assert_array_equal(magnitude_normalize(np.array([[1, 2j], [0, 0]])),
                                  [[0.5, 1.0], [0.0, 0.0]])
    with pytest.raises(DomainError):
        magnitude_normalize(np.zeros((2, 2), complex))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3), st.floats(0, 2 * np.pi))
def test_magnitude_normalize_scale_invariant(seed, mag, phase):
    rs = np.random.default_rng(seed)
    z = rs.normal(size=(6, 6)) + 1j * rs.normal(size=(6, 6))
    a = magnitude_normalize(z)
    b = magnitude_normalize(mag * np.exp(1j * phase) * z)
    np.testing.assert_allclose(b, a, rtol=1e-15, atol=0)
    assert a.max() == 1.0 and a.min() >= 0
