r"""Gaussian states on arbitrary symplectic forms.

A Gaussian state is a mean, an SPD covariance ``A`` and the form it is
interpreted on.  It is a Wigner function for that form exactly when
:math:`A + \tfrac{i}{2}\Omega \ge 0`, i.e. when its smallest symplectic
eigenvalue is at least one half.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import matcore, sympl
from .errors import (
    BadSplit,
    DegenerateCombination,
    DimensionMismatch,
    FormMismatch,
    FormsCoincide,
    Singular,
)
from .sympl import Form


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Gaussian density ``G_A(z - mean)`` tagged with the form it lives on."""

    mean: np.ndarray
    cov: np.ndarray
    form: Form

    def __post_init__(self):
        cov = matcore.check_spd(self.cov, "covariance")
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        if mean.size != cov.shape[0] or cov.shape != self.form.omega.shape:
            raise DimensionMismatch("mean, covariance and form sizes disagree")
        if not np.all(np.isfinite(mean)):
            raise matcore.NonFinite("mean has non-finite entries")
        for arr in (cov, mean):
            arr.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @classmethod
    def centered(cls, cov, form):
        return cls(np.zeros(np.shape(cov)[0]), cov, form)

    @property
    def n(self):
        return self.form.n

    def density(self, z):
        """Evaluate the Gaussian density at points ``z`` of shape ``(..., 2n)``."""
        z = np.asarray(z, dtype=float) - self.mean
        prec = np.linalg.inv(self.cov)
        quad = np.einsum("...i,ij,...j->...", z, prec, z)
        norm = (2 * np.pi) ** self.n * np.sqrt(np.linalg.det(self.cov))
        return np.exp(-0.5 * quad) / norm


def vacuum(n, form=None):
    """Minimal Gaussian ``cov = I/2`` on the standard form."""
    return GaussianState.centered(0.5 * np.identity(2 * n), form or Form.standard(n))


def two_mode_squeezed_cov(r):
    r"""Covariance of the two-mode squeezed vacuum, ordering ``(x1, x2, p1, p2)``.

    In the interleaved ordering ``(x1, p1, x2, p2)`` this is the familiar
    :math:`\tfrac12\begin{pmatrix} c & 0 & s & 0 \\ 0 & c & 0 & -s \\
    s & 0 & c & 0 \\ 0 & -s & 0 & c\end{pmatrix}` with
    :math:`c = \cosh 2r`, :math:`s = \sinh 2r`.
    """
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    return 0.5 * np.array(
        [[c, s, 0, 0], [s, c, 0, 0], [0, 0, c, -s], [0, 0, -s, c]]
    )


def is_wigner(state, tol=matcore.DEFAULT_TOL):
    """Whether ``state`` is a Wigner function on its form.

    Returns:
        tuple[bool, float]: verdict ``lambda1 >= 1/2 - tol`` and ``lambda1``
    """
    lam1 = sympl.symplectic_spectrum(state.cov, state.form).lambda1
    return bool(lam1 >= 0.5 - tol), lam1


def uncertainty_matrix(cov, omega, alpha=1.0):
    r"""The Hermitian matrix :math:`A + \tfrac{i\alpha}{2}\Omega`."""
    return matcore.HermitianMatrix(np.asarray(cov, float), 0.5 * alpha * np.asarray(omega, float))


@dataclass(frozen=True)
class NWInterval:
    """Closed interval ``[lo, hi]`` of admissible Planck constants on ``form``."""

    form: Form
    lo: float
    hi: float

    def __contains__(self, alpha):
        return self.lo <= alpha <= self.hi


def nw_interval(state):
    r"""Narcowich-Wigner interval of a Gaussian: :math:`[-2\lambda_1, 2\lambda_1]`.

    :math:`\alpha` lies in it iff :math:`A + \tfrac{i\alpha}{2}\Omega \ge 0`.
    """
    lam1 = sympl.symplectic_spectrum(state.cov, state.form).lambda1
    return NWInterval(state.form, -2.0 * lam1, 2.0 * lam1)


def purity(state):
    r"""Purity :math:`(2\pi)^n \int G_A^2 = 1 / (2^n \sqrt{\det A})`."""
    return float(1.0 / (2 ** state.n * np.sqrt(np.linalg.det(state.cov))))


def change_frame(state, s, direction="to_sigma"):
    r"""Move a Gaussian between the standard frame and the frame of ``s.target``.

    ``"to_sigma"`` expects ``state.form == s.target`` and returns the state
    :math:`z \mapsto G(Sz)` on ``J``; ``"to_omega"`` expects the standard form
    and returns :math:`z \mapsto G(S^{-1}z)` on ``s.target``.
    """
    n = s.n
    if direction == "to_sigma":
        if not state.form.close_to(s.target):
            raise FormMismatch("state is not on the Darboux matrix's target form")
        cov = np.linalg.solve(s.s, np.linalg.solve(s.s, state.cov).T)
        mean = np.linalg.solve(s.s, state.mean)
        form = Form.standard(n)
    elif direction == "to_omega":
        if not state.form.is_standard():
            raise FormMismatch("state must be on the standard form")
        cov = s.s @ state.cov @ s.s.T
        mean = s.s @ state.mean
        form = s.target
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return GaussianState(mean, 0.5 * (cov + cov.T), form)


@dataclass(frozen=True, eq=False)
class TransformReport:
    r"""Representability record for :math:`W \mapsto |\det M|\, W(Mz)`.

    Attributes:
        induced_form (Form): :math:`\Omega_2 = M\Omega_1M^T/\alpha`
        alpha (float): :math:`|\det M|^{1/n}`
        m_symplectic, m_antisymplectic (bool): w.r.t. the state's form
        still_wigner_on_form1 (bool): the image is a Wigner function on the
            original form
        wigner_on_form2 (bool): the pre-image criterion
            :math:`\lambda_{\omega_1,1}(A) \ge 1/2` and
            :math:`\lambda_{\omega_2,1}(A) \ge \alpha/2`
        lambda1_form1, lambda1_form2 (float): the two pre-image eigenvalues
        lambda1_image (float): smallest eigenvalue of the image on form 1
    """

    induced_form: Form
    alpha: float
    m_symplectic: bool
    m_antisymplectic: bool
    still_wigner_on_form1: bool
    wigner_on_form2: bool
    lambda1_form1: float
    lambda1_form2: float
    lambda1_image: float


def transform(state, m, tol=matcore.DEFAULT_TOL):
    r"""Apply :math:`U_M W(z) = |\det M|\, W(Mz)` to a Gaussian.

    Returns:
        tuple[GaussianState, TransformReport]: the image (covariance
        :math:`M^{-1}AM^{-T}`, mean :math:`M^{-1}\mu`) and the report
    """
    m = matcore.as_square(m, "map")
    if m.shape != state.cov.shape:
        raise DimensionMismatch("map and state differ in size")
    det = np.linalg.det(m)
    if abs(det) <= 1e-12:
        raise Singular("map is singular")
    n = state.n
    alpha = abs(det) ** (1.0 / n)
    omega2 = m @ state.form.omega @ m.T / alpha
    form2 = Form(0.5 * (omega2 - omega2.T))
    cov = np.linalg.solve(m, np.linalg.solve(m, state.cov).T)
    image = GaussianState(np.linalg.solve(m, state.mean), 0.5 * (cov + cov.T), state.form)
    lam_pre1 = sympl.symplectic_spectrum(state.cov, state.form).lambda1
    lam_pre2 = sympl.symplectic_spectrum(state.cov, form2).lambda1
    lam_img = sympl.symplectic_spectrum(image.cov, state.form).lambda1
    report = TransformReport(
        induced_form=form2,
        alpha=alpha,
        m_symplectic=sympl.is_symplectic(m, state.form, tol),
        m_antisymplectic=sympl.is_antisymplectic(m, state.form, tol),
        still_wigner_on_form1=bool(lam_img >= 0.5 - tol),
        wigner_on_form2=bool(lam_pre1 >= 0.5 - tol and lam_pre2 >= 0.5 * alpha - tol),
        lambda1_form1=lam_pre1,
        lambda1_form2=lam_pre2,
        lambda1_image=lam_img,
    )
    return image, report


def partial_transpose_map(n, n_a):
    """Diagonal map flipping the momenta of the last ``n - n_a`` modes."""
    if not 1 <= n_a < n:
        raise BadSplit(f"need 1 <= n_a < n, got n_a={n_a}, n={n}")
    signs = np.concatenate([np.ones(n), np.ones(n_a), -np.ones(n - n_a)])
    return np.diag(signs)


def ppt_check(state, n_a, tol=matcore.DEFAULT_TOL):
    r"""Partial-transpose test for a Gaussian on the standard form.

    With ``P`` flipping Bob's momenta, a separable state satisfies
    :math:`A + \tfrac{i}{2} P J P^T \ge 0`.  A false verdict certifies
    entanglement; a true one is only necessary for separability.

    Returns:
        tuple[bool, float]: verdict and the smallest eigenvalue of ``cov``
        on the form ``P J P^T``
    """
    if not state.form.is_standard():
        raise FormMismatch("ppt_check needs a state on the standard form")
    p = partial_transpose_map(state.n, n_a)
    omega_ppt = p @ sympl.sympmat(state.n) @ p.T
    lam1 = sympl.symplectic_spectrum(state.cov, omega_ppt).lambda1
    return bool(lam1 >= 0.5 - tol), lam1


class Region(str, enum.Enum):
    """Cells of the landscape spanned by two Wigner classes and the densities.

    ``A1``: Wigner on form 1 only, not a density; ``A2``: same for form 2;
    ``A3``: density only; ``A4``: Wigner on both, not a density; ``A5``:
    Wigner on form 1 only and a density; ``A6``: same for form 2; ``A7``:
    Wigner on both and a density.
    """

    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A5 = "A5"
    A6 = "A6"
    A7 = "A7"


_GAUSSIAN_REGIONS = {
    (True, True): Region.A7,
    (True, False): Region.A5,
    (False, True): Region.A6,
    (False, False): Region.A3,
}


@dataclass(frozen=True)
class Classification:
    """Region label together with the data it was read from."""

    region: Region
    lambda1_form1: float
    lambda1_form2: float
    interval_form1: tuple
    interval_form2: tuple


def classify_report(cov, f1, f2, tol=matcore.DEFAULT_TOL):
    """Like :func:`classify`, also returning the eigenvalues and NW intervals."""
    lam1 = sympl.symplectic_spectrum(cov, f1).lambda1
    lam2 = sympl.symplectic_spectrum(cov, f2).lambda1
    region = _GAUSSIAN_REGIONS[(lam1 >= 0.5 - tol, lam2 >= 0.5 - tol)]
    return Classification(region, lam1, lam2, (-2 * lam1, 2 * lam1), (-2 * lam2, 2 * lam2))


def classify(cov, f1, f2, tol=matcore.DEFAULT_TOL):
    """Region of a centered Gaussian with covariance ``cov``.

    Gaussians are densities, so only ``A3``, ``A5``, ``A6`` and ``A7`` occur.
    """
    return classify_report(cov, f1, f2, tol).region


def _seed_covariance(dim, rng):
    x = rng.standard_normal((dim, dim))
    return x @ x.T / dim + 0.5 * np.identity(dim)


def generate_gaussian_region(label, f1, f2, seed=0):
    """A centered Gaussian state on ``f1`` lying in region ``label``.

    ``A3`` and ``A7`` rescale a seed covariance below or above both
    thresholds.  ``A5`` and ``A6`` start from a covariance whose first
    symplectic eigenvalues on the two forms differ (found with
    :func:`sympl.find_ratio_matrix`) and rescale it so that the threshold
    1/2 falls strictly between them.
    """
    label = Region(label)
    rng = np.random.default_rng(seed)
    dim = f1.omega.shape[0]
    if label in (Region.A3, Region.A7):
        a = _seed_covariance(dim, rng)
        lam1 = sympl.symplectic_spectrum(a, f1).lambda1
        lam2 = sympl.symplectic_spectrum(a, f2).lambda1
        if label is Region.A3:
            mu = 0.25 / max(lam1, lam2)
        else:
            mu = 1.0 / min(lam1, lam2)
    elif label in (Region.A5, Region.A6):
        first, second = (f1, f2) if label is Region.A5 else (f2, f1)
        a = sympl.find_ratio_matrix(first, second, 2.0, seed=seed)
        lam_big = sympl.symplectic_spectrum(a, first).lambda1
        lam_small = sympl.symplectic_spectrum(a, second).lambda1
        # 2*lam_big > 1/mu > 2*lam_small, split geometrically
        mu = 1.0 / (2.0 * np.sqrt(lam_big * lam_small))
    else:
        raise ValueError(f"{label.value} is not reachable by a Gaussian")
    return GaussianState.centered(mu * a, f1)


@dataclass(frozen=True, eq=False)
class NWPoint:
    r"""A pair :math:`(\alpha, \Sigma)` with :math:`\Sigma` skew."""

    alpha: float
    sigma_matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma_matrix", matcore.check_skew(self.sigma_matrix))
        object.__setattr__(self, "alpha", float(self.alpha))


def nw_combine(p1, p2):
    r"""The combination rule for positive-type parameters under convolution.

    :math:`(\alpha,\Sigma) \oplus (\beta,\Upsilon) = (\gamma, (\alpha\Sigma + \beta\Upsilon)/\gamma)`
    with :math:`\gamma = |\det(\alpha\Sigma+\beta\Upsilon)|^{1/2n} > 0`.
    """
    total = p1.alpha * p1.sigma_matrix + p2.alpha * p2.sigma_matrix
    dim = total.shape[0]
    det = matcore.pfaffian(total) ** 2
    if det < 1e-12:
        raise DegenerateCombination(f"det(alpha Sigma + beta Upsilon) = {det:.3e}")
    gamma = det ** (1.0 / dim)
    return NWPoint(gamma, total / gamma)


def require_distinct(f1, f2):
    if f1.omega.shape != f2.omega.shape:
        raise DimensionMismatch("forms differ in size")
    if sympl.forms_coincide(f1.omega, f2.omega):
        raise FormsCoincide("the two forms agree up to sign")
