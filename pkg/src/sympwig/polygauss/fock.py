r"""Wigner functions of Fock states as exact polynomial-times-Gaussian terms.

The polynomial is generated from the Hermite-function integral
:math:`W(x,p) = \frac{1}{2\pi}\int e^{-iyp}\,\psi_m(x+y/2)\,\psi_m(x-y/2)\,dy`
rather than transcribed: the Hermite polynomial comes from its recurrence
and the ``y``-integral is a Gaussian expectation with a complex shift.
"""

from math import factorial, pi, sqrt

import numpy as np

from ..errors import DegreeBudgetExceeded
from ..gauss_states import vacuum
from ..sympl import Form
from .core import PolyGauss, Term, dilate, gaussian_pg, tensor
from .poly import Poly, hermite

MAX_FOCK = 12


def fock_polynomial(m):
    r"""Polynomial ``R`` with :math:`W_m(x,p) = R(x,p)\, G_{I/2}(x,p)` at :math:`\hbar = 1`.

    With :math:`\psi_m(x) = N_m H_m(x) e^{-x^2/2}` and
    :math:`e^{-y^2/4} = \sqrt{4\pi}\, G_2(y)`, the Fourier integral over ``y``
    equals :math:`e^{-p^2}\,\mathbb{E}[H_m(x + (Y-2ip)/2) H_m(x - (Y-2ip)/2)]`
    for :math:`Y \sim N(0, 2)`.
    """
    if m < 0:
        raise ValueError("Fock index must be non-negative")
    if m > MAX_FOCK:
        raise DegreeBudgetExceeded(f"Fock index {m} exceeds {MAX_FOCK}")
    h = hermite(m)
    # variables (x, p, Y)
    plus = h.substitute(np.array([[1.0, -1j, 0.5]]))
    minus = h.substitute(np.array([[1.0, 1j, -0.5]]))
    r = (plus * minus).gaussian_expectation(np.array([[2.0]]), [2])
    norm_sq = 1.0 / (2.0**m * factorial(m) * sqrt(pi))
    # W = norm_sq * sqrt(4 pi) * e^{-x^2 - p^2} R / (2 pi) and G_{I/2} = e^{-x^2-p^2} / pi
    r = r * (norm_sq * sqrt(4 * pi) / 2.0)
    if r.imag.max_abs_coeff() > 1e-9 * max(1.0, r.real.max_abs_coeff()):
        raise ArithmeticError("Fock polynomial did not come out real")
    return r.real.pruned(1e-14 * max(1.0, r.real.max_abs_coeff()))


def fock_wigner(m, planck_alpha=1.0, n_modes=1):
    r"""Wigner function of the one-mode Fock state ``|m>`` at Planck constant ``planck_alpha``.

    At :math:`\hbar = \alpha` the function is :math:`\alpha^{-1} W_m(z/\sqrt\alpha)`.

    Args:
        m (int): Fock index, at most 12
        planck_alpha (float): positive Planck constant
        n_modes (int): must be 1

    Returns:
        PolyGauss: single-term function tagged with the standard form
    """
    if n_modes != 1:
        raise ValueError("fock_wigner builds one-mode functions; use tensor for more")
    if planck_alpha <= 0:
        raise ValueError("Planck constant must be positive")
    base = PolyGauss(1, (Term(1.0, np.zeros(2), 0.5 * np.identity(2), fock_polynomial(m)),))
    if planck_alpha != 1.0:
        base = dilate(base, 1.0 / np.sqrt(planck_alpha))
    return base.with_form(Form.standard(1))


def fock_product(indices, planck_alpha=1.0):
    """Tensor product of one-mode Fock Wigner functions, e.g. ``(1, 0)``."""
    out = None
    for m in indices:
        w = fock_wigner(m, planck_alpha)
        out = w if out is None else tensor(out, w)
    return out.with_form(Form.standard(out.n))


def vacuum_pg(n, planck_alpha=1.0):
    """Minimal centered Gaussian with covariance ``planck_alpha * I / 2``."""
    state = vacuum(n)
    pg = gaussian_pg(state)
    if planck_alpha != 1.0:
        pg = dilate(pg, 1.0 / np.sqrt(planck_alpha))
    return pg.with_form(Form.standard(n))
