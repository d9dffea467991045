"""Wiener-Hopf parametrization of compact wavelet matrices."""

from .laurent import LaurentMatrix, LaurentPoly
from .wavelet_matrix import WaveletMatrix, wm_validate

__version__ = "0.1.0"
