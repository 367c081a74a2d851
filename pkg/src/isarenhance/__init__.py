"""Self-supervised enhancement of ISAR range-Doppler images.

Point-scatterer echo simulation, range-Doppler imaging, a three-layer CNN
trained on the single image it enhances, and image-quality metrics.
"""

__version__ = "0.1.0"

from .enhancer import NetworkParams, TrainConfig, TrainReport, forward, init_network, train
from .errors import DomainError, FormatError, NumericError, ShapeError
from .metrics import image_contrast, image_entropy, psnr, soft_threshold, tbr
from .radar_sim import RadarParams, Scatterer, add_noise, simulate_echo
from .rd_imaging import fft_1d, magnitude_normalize, rd_image
