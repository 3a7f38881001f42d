"""Phase-space tools for quantum states on arbitrary constant symplectic forms.

Submodules:
    matcore: validated dense linear algebra (Hermitian PSD test, Pfaffian)
    sympl: forms, Darboux matrices, symplectic spectra and Williamson factors
    gauss_states: Gaussian Wigner membership, NW intervals, PPT, landscape
    polygauss: polynomial-times-Gaussian functions such as Fock states, with KLM checks
    cli: the ``sympwig`` command
"""

from . import gauss_states, matcore, polygauss, sympl
from .gauss_states import GaussianState, Region, classify, is_wigner, nw_interval
from .sympl import Form, darboux_factor, make_form, symplectic_spectrum, williamson

__version__ = "0.1.0"

__all__ = [
    "Form",
    "GaussianState",
    "Region",
    "classify",
    "darboux_factor",
    "gauss_states",
    "is_wigner",
    "make_form",
    "matcore",
    "nw_interval",
    "polygauss",
    "sympl",
    "symplectic_spectrum",
    "williamson",
]
