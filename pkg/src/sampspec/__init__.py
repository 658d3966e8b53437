"""Spectral analysis of sampling patterns and the generalization-error bounds they imply."""
from .bounds import LossSpectrumModel, bound_bluenoise, bound_pds, bound_random, gen_error_radial
from .pointset import PointSet, generate_poisson_disk, generate_random
from .profiles import SpectralProfile, max_rmin, max_zero_region
from .spectral_estimation import PairCorrelation, RadialSpectrum, estimate_pcf, estimate_psd
from .transforms import check_realizability, pcf_to_psd, psd_to_pcf

__version__ = "0.1.0"
