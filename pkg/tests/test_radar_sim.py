import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isarenhance.errors import DomainError
from isarenhance.radar_sim import (
    C,
    RadarParams,
    Scatterer,
    add_noise,
    check_scene,
    on_grid_scatterer,
    simulate_echo,
)

P = RadarParams()


def test_defaults():
    assert P.carrier_hz == 9e9 and P.bandwidth_hz == 150e6
    assert (P.n_range, P.n_pulse) == (128, 128)
    assert 0 < P.total_rotation_rad < 0.2
    # default geometry gives square cells
    assert P.cross_range_cell_m == pytest.approx(P.range_cell_m, rel=1e-12)
    f = P.frequencies_hz
    assert f[0] == pytest.approx(9e9 - 75e6) and f[-1] == pytest.approx(9e9 + 75e6)


@pytest.mark.parametrize("kwargs", [
    dict(bandwidth_hz=10e9),
    dict(bandwidth_hz=0.0),
    dict(n_range=1),
    dict(rotation_rate_rad_s=2.0),
])
def test_param_validation(kwargs):
    with pytest.raises(DomainError):
        RadarParams(**kwargs)


def test_negative_reflectivity():
    with pytest.raises(DomainError):
        Scatterer(0.0, 0.0, -1.0)


def test_empty_scene_is_zero():
    echo = simulate_echo([], P)
    assert echo.shape == (128, 128) and not echo.any()


def test_center_scatterer_is_all_ones():
    echo = simulate_echo([Scatterer(0.0, 0.0, 1.0)], P)
    assert np.all(echo == 1 + 0j)


def test_phase_model_single_sample():
    s = Scatterer(3.0, -2.0, 0.7)
    echo = simulate_echo([s], P)
    i, m = 17, 93
    f = P.carrier_hz - P.bandwidth_hz / 2 + i * P.bandwidth_hz / (P.n_range - 1)
    r = s.range_m + s.cross_range_m * P.rotation_rate_rad_s * P.pulse_interval_s * m
    assert echo[i, m] == pytest.approx(0.7 * np.exp(-4j * np.pi * f * r / C), abs=1e-12)


def test_out_of_extent_names_scatterer():
    far = Scatterer(P.range_extent_m, 0.0, 1.0)
    with pytest.raises(DomainError, match="scatterer 1"):
        simulate_echo([Scatterer(0, 0, 1), far], P)
    with pytest.raises(DomainError):
        check_scene([Scatterer(0.0, P.cross_range_extent_m, 1.0)], P)


scatterers = st.builds(
    Scatterer,
    st.floats(-40, 40), st.floats(-40, 40), st.just(0.0) | st.floats(1e-3, 3),
)


@settings(max_examples=20, deadline=None)
@given(st.lists(scatterers, max_size=4), st.lists(scatterers, max_size=4))
def test_superposition(a, b):
    np.testing.assert_allclose(simulate_echo(a + b, P), simulate_echo(a, P) + simulate_echo(b, P),
                               rtol=0, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.lists(scatterers, min_size=1, max_size=4), st.floats(0.1, 10))
def test_reflectivity_scaling(scene, alpha):
    base = simulate_echo(scene, P)
    scaled = simulate_echo([Scatterer(s.range_m, s.cross_range_m, alpha * s.reflectivity)
                            for s in scene], P)
    np.testing.assert_allclose(scaled, alpha * base, rtol=0, atol=1e-15 * alpha * np.abs(base).max())


def test_two_scatterer_linearity():
    s1, s2 = on_grid_scatterer(3, -5, P), on_grid_scatterer(-10, 7, P)
    a, b = 0.4, 1.7
    two = simulate_echo([Scatterer(s1.range_m, s1.cross_range_m, a),
                         Scatterer(s2.range_m, s2.cross_range_m, b)], P)
    np.testing.assert_allclose(two, a * simulate_echo([s1], P) + b * simulate_echo([s2], P),
                               rtol=0, atol=1e-12)


def test_noise_infinite_snr_is_identity():
    echo = simulate_echo([on_grid_scatterer(2, 2, P)], P)
    out = add_noise(echo, np.inf, 1)
    assert out.tobytes() == echo.tobytes()


def test_noise_deterministic():
    echo = simulate_echo([on_grid_scatterer(2, 2, P)], P)
    assert add_noise(echo, 0.0, 9).tobytes() == add_noise(echo, 0.0, 9).tobytes()
    assert add_noise(echo, 0.0, 9).tobytes() != add_noise(echo, 0.0, 10).tobytes()


@pytest.mark.parametrize("snr_db", [-10.0, 0.0, 6.0, 20.0])
def test_noise_power(snr_db):
    echo = np.ones((128, 128), dtype=complex)
    noise = add_noise(echo, snr_db, 2024) - echo
    target = 10 ** (-snr_db / 10)
    assert abs(np.mean(np.abs(noise) ** 2) / target - 1) < 0.10
    # circular: real and imaginary parts carry equal power
    assert abs(np.var(noise.real) / np.var(noise.imag) - 1) < 0.10


def test_noise_on_zero_echo():
    with pytest.raises(DomainError):
        add_noise(np.zeros((4, 4), complex), 0.0, 1)
    assert not add_noise(np.zeros((4, 4), complex), np.inf, 1).any()
