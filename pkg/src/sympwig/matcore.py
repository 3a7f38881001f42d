r"""Dense matrix kernel shared by the rest of the package.

Symmetric eigendecomposition, SPD square roots, a Hermitian PSD test,
the orthogonal canonical form of a real skew-symmetric matrix and the
Pfaffian.  All routines take and return plain numpy arrays.
"""

from typing import NamedTuple

import numpy as np

from .errors import (
    MalformedHermitian,
    NonFinite,
    NotPositiveDefinite,
    NotSkew,
    NotSymmetric,
    Singular,
)

#: relative Frobenius tolerance for structural checks (symmetry, skewness)
STRUCT_TOL = 1e-10
#: default tolerance for verdicts (PSD tests, symplecticity, ...)
DEFAULT_TOL = 1e-9


def as_square(m, name="matrix"):
    """Return ``m`` as a finite float square array or raise."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite(f"{name} has non-finite entries")
    return m


def asymmetry(m):
    """Relative Frobenius size of the antisymmetric part of ``m``."""
    scale = np.linalg.norm(m)
    if scale == 0:
        return 0.0
    return np.linalg.norm(m - m.T) / scale


def check_symmetric(m, tol=STRUCT_TOL, name="matrix"):
    m = as_square(m, name)
    if asymmetry(m) > tol:
        raise NotSymmetric(f"{name} is not symmetric (relative asymmetry {asymmetry(m):.3e})")
    return 0.5 * (m + m.T)


def check_skew(m, tol=STRUCT_TOL, name="matrix"):
    m = as_square(m, name)
    scale = np.linalg.norm(m)
    if scale > 0 and np.linalg.norm(m + m.T) > tol * scale:
        raise NotSkew(f"{name} is not skew-symmetric")
    return 0.5 * (m - m.T)


def sym_eig(m, tol_sym=STRUCT_TOL):
    """Eigendecomposition of a real symmetric matrix.

    Args:
        m (array): symmetric matrix
        tol_sym (float): allowed relative asymmetry

    Returns:
        tuple[array, array]: ascending eigenvalues and orthogonal eigenvectors
        (as columns), so that ``m = V @ diag(w) @ V.T``
    """
    m = check_symmetric(m, tol_sym)
    w, v = np.linalg.eigh(m)
    return w, v


def sqrt_spd(m, pd_floor=None):
    r"""Principal square root of a symmetric positive-definite matrix.

    Args:
        m (array): SPD matrix
        pd_floor (float): smallest admissible eigenvalue, defaults to
            :math:`10^{-12}\|m\|_F`

    Returns:
        array: the SPD matrix :math:`R` with :math:`R^2 = m`
    """
    w, v = sym_eig(m)
    if pd_floor is None:
        pd_floor = 1e-12 * np.linalg.norm(m)
    if w[0] <= pd_floor:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3e} is not positive")
    r = (v * np.sqrt(w)) @ v.T
    return 0.5 * (r + r.T)


def check_spd(m, name="matrix"):
    """Symmetrize ``m`` and make sure it is positive definite."""
    m = check_symmetric(m, name=name)
    w = np.linalg.eigvalsh(m)
    if w[0] <= 1e-12 * np.linalg.norm(m):
        raise NotPositiveDefinite(f"{name} is not positive definite (min eigenvalue {w[0]:.3e})")
    return m


class HermitianMatrix(NamedTuple):
    """A complex Hermitian matrix stored as its real and imaginary parts."""

    real_part: np.ndarray
    imag_part: np.ndarray

    @classmethod
    def from_complex(cls, h):
        h = np.asarray(h, dtype=complex)
        return cls(h.real.copy(), h.imag.copy())

    @property
    def dim(self):
        return np.shape(self.real_part)[0]

    def to_complex(self):
        return np.asarray(self.real_part) + 1j * np.asarray(self.imag_part)


def is_psd_hermitian(h, tol=DEFAULT_TOL):
    r"""Test whether a Hermitian matrix is positive semidefinite.

    The test runs on the real symmetric embedding
    :math:`\begin{pmatrix} \Re h & -\Im h \\ \Im h & \Re h \end{pmatrix}`,
    whose spectrum is that of ``h`` with every multiplicity doubled.

    Args:
        h (HermitianMatrix): matrix to test
        tol (float): the verdict is ``min_eig >= -tol * ||h||_F``

    Returns:
        tuple[bool, float]: verdict and smallest eigenvalue
    """
    re = as_square(h.real_part, "real part")
    im = as_square(h.imag_part, "imaginary part")
    if re.shape != im.shape:
        raise MalformedHermitian("real and imaginary parts differ in shape")
    scale = np.linalg.norm(re) + np.linalg.norm(im)
    if scale > 0:
        if np.linalg.norm(re - re.T) > STRUCT_TOL * scale:
            raise MalformedHermitian("real part is not symmetric")
        if np.linalg.norm(im + im.T) > STRUCT_TOL * scale:
            raise MalformedHermitian("imaginary part is not skew-symmetric")
    re = 0.5 * (re + re.T)
    im = 0.5 * (im - im.T)
    embedding = np.block([[re, -im], [im, re]])
    min_eig = np.linalg.eigvalsh(embedding)[0]
    norm = np.sqrt(np.linalg.norm(re) ** 2 + np.linalg.norm(im) ** 2)
    return bool(min_eig >= -tol * norm), float(min_eig)


class SkewCanonicalResult(NamedTuple):
    """Orthogonal ``q`` and magnitudes ``mus`` with ``m = q @ B @ q.T``.

    ``B`` is block diagonal with 2x2 blocks ``[[0, mu], [-mu, 0]]`` in the
    order of ``mus`` (descending).
    """

    q: np.ndarray
    mus: np.ndarray

    def blocks(self):
        return skew_blocks(self.mus)


def skew_blocks(mus):
    """Block-diagonal skew matrix with blocks ``[[0, mu], [-mu, 0]]``."""
    mus = np.asarray(mus, dtype=float)
    b = np.zeros((2 * len(mus), 2 * len(mus)))
    for k, mu in enumerate(mus):
        b[2 * k, 2 * k + 1] = mu
        b[2 * k + 1, 2 * k] = -mu
    return b


def skew_canonical(m):
    r"""Real orthogonal canonical form of an invertible skew-symmetric matrix.

    The Hermitian matrix :math:`i m` has eigenpairs :math:`(\pm\mu_k, u_k)`.
    For :math:`u_k = x_k + i y_k` with positive eigenvalue,
    :math:`m x_k = \mu_k y_k` and :math:`m y_k = -\mu_k x_k`, and the vectors
    :math:`\sqrt2 y_k, \sqrt2 x_k` are orthonormal, giving one 2x2 block each.

    Args:
        m (array): invertible skew-symmetric matrix of even dimension

    Returns:
        SkewCanonicalResult: orthogonal ``q`` and descending magnitudes
    """
    m = check_skew(m)
    dim = m.shape[0]
    if dim % 2:
        raise Singular("odd-dimensional skew matrices are singular")
    if abs(np.linalg.det(m)) <= 1e-12:
        raise Singular("skew matrix is singular")
    w, u = np.linalg.eigh(1j * m)
    # eigh sorts ascending; the positive half is the upper n eigenpairs
    pos = np.arange(dim // 2, dim)
    order = pos[np.argsort(-w[pos], kind="stable")]
    q = np.empty((dim, dim))
    for k, idx in enumerate(order):
        q[:, 2 * k] = np.sqrt(2) * u[:, idx].imag
        q[:, 2 * k + 1] = np.sqrt(2) * u[:, idx].real
    return SkewCanonicalResult(q, w[order].copy())


def _householder(x):
    """Reflector ``v`` (unit) and ``alpha`` with ``(I - 2vv^T) x = alpha e_1``."""
    sigma = x[1:] @ x[1:]
    if sigma == 0:
        return None, x[0]
    norm_x = np.sqrt(x[0] ** 2 + sigma)
    v = x.copy()
    if x[0] <= 0:
        v[0] -= norm_x
        alpha = norm_x
    else:
        v[0] += norm_x
        alpha = -norm_x
    return v / np.linalg.norm(v), alpha


def pfaffian(m):
    """Pfaffian of a real skew-symmetric matrix.

    Householder reflections reduce ``m`` to skew tridiagonal form; the
    Pfaffian is then the product of every other superdiagonal entry,
    corrected by the determinant (-1) of each reflection used.

    Args:
        m (array): skew-symmetric matrix

    Returns:
        float: the Pfaffian (0 for odd dimension)
    """
    a = check_skew(m).copy()
    dim = a.shape[0]
    if dim % 2:
        return 0.0
    pf = 1.0
    for i in range(dim - 2):
        v, alpha = _householder(a[i + 1:, i])
        a[i + 1, i] = alpha
        a[i, i + 1] = -alpha
        a[i + 2:, i] = 0.0
        a[i, i + 2:] = 0.0
        if v is not None:
            w = 2.0 * (a[i + 1:, i + 1:] @ v)
            a[i + 1:, i + 1:] += np.outer(v, w) - np.outer(w, v)
            pf = -pf
        if i % 2 == 0:
            pf *= -alpha
        if pf == 0.0:
            return 0.0
    return float(pf * a[dim - 2, dim - 1])
