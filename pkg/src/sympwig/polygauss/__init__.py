"""Polynomial-times-Gaussian phase-space functions.

Fock-state Wigner functions, exact translation, convolution, overlap and
Fourier transforms, sampled KLM positivity checks and the non-Gaussian
region generators.
"""

from .core import (
    FourierPG,
    PolyGauss,
    Term,
    change_frame_pg,
    convolve,
    dilate,
    fourier,
    gaussian_pg,
    overlap,
    pullback,
    symplectic_fourier,
    tensor,
    translate,
)
from .fock import fock_polynomial, fock_product, fock_wigner, vacuum_pg
from .grid import GridAxes, default_box, grid_min, grid_values
from .klm import KLMReport, klm_check, klm_matrix, sample_points
from .landscape import (
    RegionCertificate,
    choose_alpha0,
    generate_nongaussian_region,
    validate_certificate,
)
from .poly import Poly

__all__ = [
    "FourierPG",
    "GridAxes",
    "KLMReport",
    "Poly",
    "PolyGauss",
    "RegionCertificate",
    "Term",
    "change_frame_pg",
    "choose_alpha0",
    "convolve",
    "default_box",
    "dilate",
    "fock_polynomial",
    "fock_product",
    "fock_wigner",
    "fourier",
    "gaussian_pg",
    "generate_nongaussian_region",
    "grid_min",
    "grid_values",
    "klm_check",
    "klm_matrix",
    "overlap",
    "pullback",
    "sample_points",
    "symplectic_fourier",
    "tensor",
    "translate",
    "vacuum_pg",
    "validate_certificate",
]
