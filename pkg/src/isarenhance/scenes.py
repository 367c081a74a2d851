"""Ready-made synthetic scenes and their ground-truth masks."""

import numpy as np

from .radar_sim import RadarParams, on_grid_scatterer
from .rd_imaging import predicted_pixel

# (row offset, column offset, reflectivity) in image cells from the scene center:
# fuselage along range, swept wings and tailplane along cross range
AIRPLANE_CELLS = (
    (-30, 0, 1.0),   # nose
    (-18, 0, 0.8),
    (-6, 0, 0.9),
    (6, 0, 0.8),
    (18, 0, 0.7),
    (28, 0, 0.9),    # tail
    (-2, -12, 0.8),  # inner wing
    (-2, 12, 0.8),
    (4, -24, 0.6),   # wing tips
    (4, 24, 0.6),
    (30, -8, 0.7),   # tailplane
    (30, 8, 0.7),
)


def airplane_scene(params: RadarParams = RadarParams()) -> list:
    """Twelve on-grid point scatterers in an airplane silhouette."""
    return [on_grid_scatterer(r, c, params, a) for r, c, a in AIRPLANE_CELLS]


def airplane_mask(params: RadarParams = RadarParams(), dilate: int = 1) -> np.ndarray:
    """Boolean image of the scatterer pixels, grown by ``dilate`` pixels (square)."""
    return cell_mask([(r, c) for r, c, _ in AIRPLANE_CELLS],
                     (params.n_range, params.n_pulse), dilate)


def cell_mask(cells, shape, dilate: int = 1) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    for r, c in cells:
        pr, pc = predicted_pixel(r, c, shape)
        mask[max(pr - dilate, 0):pr + dilate + 1, max(pc - dilate, 0):pc + dilate + 1] = True
    return mask
