r"""Sampled twisted-positivity (KLM) checks.

A function ``f`` whose Fourier transform is of :math:`(\alpha, \Sigma)`
positive type makes every matrix
:math:`M_{jk} = \hat f(a_j - a_k)\, e^{\frac{i\alpha}{2} a_k\cdot\Sigma a_j}`
positive semidefinite.  A negative eigenvalue at finitely many points
therefore disproves membership; a PSD matrix is evidence only.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .. import matcore, sympl
from ..errors import DimensionMismatch, NontrivialFormAtN1, TooManyPoints
from .core import fourier

MAX_POINTS = 512


@dataclass(frozen=True, eq=False)
class KLMReport:
    """Outcome of :func:`klm_check`.

    ``verdict`` is ``min_eig >= -tol * N * max|M|``.
    """

    alpha: float
    sigma_matrix: np.ndarray
    points: np.ndarray
    min_eig: float
    verdict: bool
    threshold: float


def klm_matrix(f_hat, alpha, sigma_matrix, points):
    """The Hermitian matrix tested by :func:`klm_check`."""
    diff = points[:, None, :] - points[None, :, :]
    values = f_hat(diff)
    # phase[j, k] = a_k . Sigma a_j
    phase = np.einsum("ki,ij,lj->lk", points, sigma_matrix, points)
    m = values * np.exp(0.5j * alpha * phase)
    return 0.5 * (m + m.conj().T)


def _frequency_frame(f, sigma_matrix):
    """Covariance of ``f`` and a Williamson frame for it on ``Sigma``, if any."""
    try:
        _, _, cov = f.moments()
        cov = matcore.check_spd(cov)
    except (matcore.NotPositiveDefinite, matcore.NotSymmetric, ZeroDivisionError):
        cov = np.mean([t.shape for t in f.terms], axis=0)
    frame = None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NontrivialFormAtN1)
            form = sympl.make_form(sigma_matrix)
        frame = sympl.williamson(cov, form)
    except (ValueError, ArithmeticError):
        pass
    return cov, frame


def sample_points(f, alpha, sigma_matrix, count, seed=0):
    r"""Deterministic KLM sample points.

    A square lattice in the lowest Williamson mode of the covariance of
    ``f`` on ``Sigma`` (in frequency coordinates :math:`a = S^{-T}b`), where
    a too-large :math:`|\alpha|` first shows up, completed by points drawn
    from :math:`N(0, C^{-1})`, the spread of :math:`\hat f`.
    """
    rng = np.random.default_rng(seed)
    cov, frame = _frequency_frame(f, sigma_matrix)
    dim = f.dim
    pts = []
    side = int(np.sqrt(count / 2))
    if frame is not None and alpha != 0 and side >= 3:
        side = min(side, 10)
        n = f.n
        width = 1.5 / np.sqrt(frame.d[0])
        grid = np.linspace(-width, width, side)
        inv_t = np.linalg.inv(frame.s.s).T
        for x in grid:
            for p in grid:
                b = np.zeros(dim)
                b[0], b[n] = x, p
                pts.append(inv_t @ b)
    rest = count - len(pts)
    if rest > 0:
        prec = np.linalg.inv(cov)
        pts.extend(rng.multivariate_normal(np.zeros(dim), 0.5 * (prec + prec.T), size=rest))
    return np.array(pts).reshape(count, dim)


def klm_check(f, alpha, sigma_matrix, points=64, seed=0, tol=matcore.DEFAULT_TOL):
    """Sampled twisted positivity test of the Fourier transform of ``f``.

    Args:
        f (PolyGauss): function to test
        alpha (float): Planck-like parameter
        sigma_matrix (array): skew matrix
        points (int or array): number of points for the built-in sampler,
            or explicit points of shape ``(N, 2n)``
        seed (int): sampler seed
        tol (float): relative tolerance of the PSD verdict

    Returns:
        KLMReport
    """
    sigma_matrix = matcore.check_skew(sigma_matrix, name="Sigma")
    if sigma_matrix.shape != (f.dim, f.dim):
        raise DimensionMismatch("Sigma has the wrong size")
    if np.isscalar(points) or np.ndim(points) == 0:
        count = int(points)
        if count > MAX_POINTS:
            raise TooManyPoints(f"{count} points exceed {MAX_POINTS}")
        if count < 2:
            raise ValueError("need at least two points")
        pts = sample_points(f, alpha, sigma_matrix, count, seed)
    else:
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != f.dim:
            raise DimensionMismatch("points must have shape (N, 2n)")
        if len(pts) > MAX_POINTS:
            raise TooManyPoints(f"{len(pts)} points exceed {MAX_POINTS}")
        if len(pts) < 2:
            raise ValueError("need at least two points")
    m = klm_matrix(fourier(f), alpha, sigma_matrix, pts)
    min_eig = float(np.linalg.eigvalsh(m)[0])
    threshold = tol * len(pts) * float(np.max(np.abs(m)))
    return KLMReport(float(alpha), sigma_matrix, pts, min_eig, bool(min_eig >= -threshold), threshold)
