r"""Symplectic structures on phase space.

A form is stored as the skew matrix :math:`\Omega` with
:math:`\omega(z, z') = z \cdot \Omega^{-1} z'`, normalized so that
:math:`\det\Omega = 1`.  Phase-space vectors are always ordered
``(x_1..x_n, p_1..p_n)``, so the standard form is
:math:`J = \begin{pmatrix} 0 & I \\ -I & 0 \end{pmatrix}`.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import (
    BadLambdas,
    DegeneratePair,
    DimensionMismatch,
    FormsCoincide,
    NontrivialFormAtN1,
    NotDarboux,
    PairingFailure,
    SearchExhausted,
    Singular,
)

PAIR_TOL = 1e-7
SEARCH_BUDGET = 10_000


def sympmat(n):
    """The standard symplectic matrix ``J`` for ``n`` modes."""
    idm = np.identity(n)
    zm = np.zeros((n, n))
    return np.block([[zm, idm], [-idm, zm]])


def block_form_matrix(thetas):
    r"""Skew matrix :math:`\begin{pmatrix} 0 & \Theta \\ -\Theta & 0 \end{pmatrix}`
    with :math:`\Theta = \mathrm{diag}(\theta_1, \dots, \theta_n)`.

    With all ``thetas`` equal to one this is ``J``.  Its determinant is
    :math:`\prod_j \theta_j^2`.
    """
    theta = np.diag(np.asarray(thetas, dtype=float))
    zm = np.zeros_like(theta)
    return np.block([[zm, theta], [-theta, zm]])


def xp_to_block_permutation(n):
    """Permutation matrix ``P`` with ``P @ J @ P.T`` block diagonal.

    Row ``2k`` picks ``x_k`` and row ``2k+1`` picks ``p_k``.
    """
    perm = np.zeros((2 * n, 2 * n))
    for k in range(n):
        perm[2 * k, k] = 1.0
        perm[2 * k + 1, n + k] = 1.0
    return perm


@dataclass(frozen=True, eq=False)
class Form:
    """A normalized constant symplectic form.

    Attributes:
        omega (array): skew matrix with unit determinant
        scale (float): factor that was applied to the raw matrix by
            :func:`make_form` (1 if it was already normalized)
    """

    omega: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        omega = matcore.check_skew(self.omega, name="form")
        if omega.shape[0] % 2:
            raise Singular("a form needs even dimension")
        det = np.linalg.det(omega)
        if abs(det - 1.0) > 1e-9:
            raise ValueError(f"form is not normalized: det = {det!r}; use make_form")
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)

    @property
    def n(self):
        return self.omega.shape[0] // 2

    @property
    def omega_inv(self):
        return np.linalg.inv(self.omega)

    @classmethod
    def standard(cls, n):
        return cls(sympmat(n))

    def is_standard(self, tol=matcore.STRUCT_TOL):
        return np.linalg.norm(self.omega - sympmat(self.n)) <= tol * np.sqrt(2 * self.n)

    def close_to(self, other, tol=1e-9):
        other = _omega_of(other)
        return other.shape == self.omega.shape and (
            np.linalg.norm(self.omega - other) <= tol * np.linalg.norm(self.omega)
        )

    def __neg__(self):
        return Form(-self.omega, self.scale)

    def __repr__(self):
        return f"Form(n={self.n}, scale={self.scale!r})"


def make_form(omega_raw):
    r"""Normalize a skew matrix into a :class:`Form`.

    The matrix is divided by :math:`\det(\Omega)^{1/2n}`; the applied factor
    is stored as ``Form.scale``.  Rescaling a form amounts to rescaling the
    Planck constant, and downstream quantities are *not* adjusted for it.

    Args:
        omega_raw (array): invertible skew-symmetric matrix

    Returns:
        Form: the normalized form
    """
    omega = matcore.check_skew(omega_raw, name="form")
    dim = omega.shape[0]
    if dim % 2:
        raise Singular("a form needs even dimension")
    det = np.linalg.det(omega)
    if abs(det) <= 1e-12:
        raise Singular("form matrix is singular")
    n = dim // 2
    scale = det ** (-1.0 / dim)
    if abs(scale - 1.0) <= 1e-12:
        scale = 1.0
    if n == 1 and scale != 1.0:
        warnings.warn(
            "rescaled a one-mode form; every normalized form at n=1 is +-J",
            NontrivialFormAtN1,
            stacklevel=2,
        )
    return Form(omega * scale, scale)


def _omega_of(form):
    if isinstance(form, Form):
        return form.omega
    return matcore.check_skew(form, name="form")


@dataclass(frozen=True, eq=False)
class DarbouxMatrix:
    r"""A matrix ``s`` with :math:`s J s^T = \Omega` for the ``target`` form.

    The defining relation is checked on construction at a tolerance of
    ``1e-9`` relative to :math:`\max(\|\Omega\|_F, \|s\|_F^2)`, the size of
    the rounding error in forming :math:`s J s^T` itself.
    """

    s: np.ndarray
    target: Form

    def __post_init__(self):
        s = matcore.as_square(self.s, "Darboux matrix")
        if s.shape != self.target.omega.shape:
            raise DimensionMismatch("Darboux matrix and form differ in size")
        res = self.residual_of(s, self.target.omega)
        scale = max(np.linalg.norm(self.target.omega), np.linalg.norm(s) ** 2)
        if res > 1e-9 * scale:
            raise NotDarboux(f"s J s^T misses the form by {res:.3e}")
        if abs(abs(np.linalg.det(s)) - 1.0) > 1e-9 * max(1.0, np.linalg.norm(s) ** 2):
            raise NotDarboux("|det s| != 1")
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def n(self):
        return self.target.n

    @property
    def inv(self):
        return np.linalg.inv(self.s)

    def residual(self):
        """Frobenius norm of ``s J s^T - omega``."""
        return self.residual_of(self.s, self.target.omega)

    @staticmethod
    def residual_of(s, omega):
        return float(np.linalg.norm(s @ sympmat(s.shape[0] // 2) @ s.T - omega))


def darboux_factor(form):
    r"""A Darboux matrix for ``form``, built from its skew canonical form.

    With :math:`\Omega = q B q^T` and ``B`` made of blocks
    :math:`\mu_k \begin{pmatrix} 0 & 1 \\ -1 & 0\end{pmatrix}`, the matrix
    :math:`s = q \,\mathrm{diag}(\sqrt{\mu})\, \Pi` works, where
    :math:`\Pi` is the permutation carrying ``J`` to block order.
    """
    res = matcore.skew_canonical(form.omega)
    root = np.repeat(np.sqrt(res.mus), 2)
    s = (res.q * root) @ xp_to_block_permutation(form.n)
    return DarbouxMatrix(s, form)


def _check_map(m, omega):
    m = matcore.as_square(m, "map")
    if m.shape != omega.shape:
        raise DimensionMismatch(f"map has shape {m.shape}, form has {omega.shape}")
    return m


def is_symplectic(m, form, tol=matcore.DEFAULT_TOL):
    """Whether ``m @ omega @ m.T == omega`` to relative tolerance ``tol``."""
    omega = _omega_of(form)
    m = _check_map(m, omega)
    return bool(np.linalg.norm(m @ omega @ m.T - omega) <= tol * np.linalg.norm(omega))


def is_antisymplectic(m, form, tol=matcore.DEFAULT_TOL):
    """Whether ``m @ omega @ m.T == -omega`` to relative tolerance ``tol``."""
    omega = _omega_of(form)
    m = _check_map(m, omega)
    return bool(np.linalg.norm(m @ omega @ m.T + omega) <= tol * np.linalg.norm(omega))


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Ascending symplectic eigenvalues of a covariance matrix on a form."""

    form: object
    values: np.ndarray

    @property
    def lambda1(self):
        return float(self.values[0])

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def symplectic_spectrum(a, form, pair_tol=PAIR_TOL):
    r"""Symplectic eigenvalues of ``a`` with respect to ``form``.

    These are the moduli of the eigenvalues of :math:`A\Omega^{-1}`, obtained
    as the singular values of the skew matrix
    :math:`K = A^{1/2}\Omega^{-1}A^{1/2}`, which come in equal pairs.

    Args:
        a (array): SPD covariance matrix
        form (Form or array): the form; a raw skew array is used as given,
            without normalization
        pair_tol (float): relative tolerance for the pairing

    Returns:
        SpectrumResult: ascending values, one per pair
    """
    omega = _omega_of(form)
    root = matcore.sqrt_spd(a)
    if root.shape != omega.shape:
        raise DimensionMismatch("covariance and form differ in size")
    k = root @ np.linalg.solve(omega, root)
    k = 0.5 * (k - k.T)
    sv = np.linalg.svd(k, compute_uv=False)[::-1]
    first, second = sv[0::2], sv[1::2]
    if np.any(np.abs(first - second) > pair_tol * sv[-1]):
        raise PairingFailure(f"singular values do not pair: {sv}")
    return SpectrumResult(form, 0.5 * (first + second))


@dataclass(frozen=True, eq=False)
class WilliamsonFactorization:
    r"""Darboux matrix ``s`` with :math:`s^{-1} A s^{-T} = \mathrm{diag}(d, d)`."""

    s: DarbouxMatrix
    d: np.ndarray

    @property
    def diagonal(self):
        return np.diag(np.concatenate([self.d, self.d]))


def _standard_williamson(b):
    r"""Symplectic ``t`` and ascending ``d`` with :math:`b = t\,\mathrm{diag}(d,d)\,t^T`.

    Uses the skew canonical form of :math:`b^{-1/2} J b^{-1/2}`, whose block
    magnitudes are the reciprocals of the symplectic eigenvalues of ``b``.
    """
    n = b.shape[0] // 2
    root = matcore.sqrt_spd(b)
    root_inv = np.linalg.inv(root)
    k = root_inv @ sympmat(n) @ root_inv
    res = matcore.skew_canonical(0.5 * (k - k.T))
    # descending magnitudes give ascending symplectic eigenvalues
    scale = np.repeat(np.sqrt(res.mus), 2)
    t = (root @ res.q * scale) @ xp_to_block_permutation(n)
    return t, 1.0 / res.mus


def williamson(a, form):
    r"""Williamson normal form of ``a`` on an arbitrary form.

    A Darboux matrix :math:`S'` moves the problem to the standard frame,
    :math:`B = S'^{-1} A S'^{-T}`; the standard Williamson factorization
    :math:`B = T D T^T` then gives :math:`S = S' T`.

    Args:
        a (array): SPD covariance matrix
        form (Form): target form

    Returns:
        WilliamsonFactorization: with ``d`` ascending
    """
    a = matcore.check_spd(a, "covariance")
    if a.shape != form.omega.shape:
        raise DimensionMismatch("covariance and form differ in size")
    frame = darboux_factor(form)
    b = np.linalg.solve(frame.s, np.linalg.solve(frame.s, a).T)
    t, d = _standard_williamson(0.5 * (b + b.T))
    return WilliamsonFactorization(DarbouxMatrix(frame.s @ t, form), d)


@dataclass(frozen=True, eq=False)
class PrescribedSpectrum:
    r"""Output of :func:`prescribe_spectrum`.

    Attributes:
        p (array): matrix with :math:`p^{-1} A p^{-T} = \mathrm{diag}(\lambda, \lambda)`
        delta_raw (array): :math:`p J p^T`, on which ``a`` has spectrum ``lambdas``
        delta (Form): the normalized version of ``delta_raw``
        lambdas (array): requested spectrum (w.r.t. ``delta_raw``)
        lambdas_normalized (array): spectrum of ``a`` w.r.t. ``delta``
    """

    p: np.ndarray
    delta_raw: np.ndarray
    delta: Form
    lambdas: np.ndarray
    lambdas_normalized: np.ndarray


def _check_lambdas(lambdas, n):
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.size != n:
        raise BadLambdas(f"expected {n} values, got {lam.size}")
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0):
        raise BadLambdas("values must be positive and finite")
    if np.any(np.diff(lam) < 0):
        raise BadLambdas("values must be ascending")
    return lam


def prescribe_spectrum(a, lambdas):
    r"""Find a form on which ``a`` has a prescribed symplectic spectrum.

    Writes :math:`A = T\,\mathrm{diag}(\lambda^\sigma,\lambda^\sigma)\,T^T` with
    ``T`` symplectic, rescales each mode by
    :math:`r_j = \sqrt{\lambda_j/\lambda^\sigma_j}` and returns
    :math:`P = T R^{-1}` and :math:`\Delta = P J P^T`.
    """
    a = matcore.check_spd(a, "covariance")
    n = a.shape[0] // 2
    lam = _check_lambdas(lambdas, n)
    t, d = _standard_williamson(a)
    r = np.concatenate([np.sqrt(lam / d)] * 2)
    p = t / r
    delta_raw = p @ sympmat(n) @ p.T
    delta_raw = 0.5 * (delta_raw - delta_raw.T)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NontrivialFormAtN1)
        delta = make_form(delta_raw)
    # Omega -> c*Omega multiplies the spectrum by 1/c
    return PrescribedSpectrum(p, delta_raw, delta, lam, lam / delta.scale)


def symplectic_gram_schmidt(first_e, first_f, tol=1e-10):
    r"""Complete ``(e, f)`` with :math:`e^T J f = 1` to a symplectic basis.

    Returns a symplectic matrix whose column 0 is ``first_e`` and column ``n``
    is ``first_f``.  The remaining pairs are taken greedily from the
    canonical basis, projected onto the symplectic complement of the pairs
    found so far.
    """
    e0 = np.asarray(first_e, dtype=float)
    f0 = np.asarray(first_f, dtype=float)
    n = e0.size // 2
    jm = sympmat(n)

    def pairing(u, v):
        return u @ jm @ v

    if abs(pairing(e0, f0) - 1.0) > 1e-9 * max(1.0, np.linalg.norm(e0) * np.linalg.norm(f0)):
        raise ValueError("first pair must satisfy e^T J f = 1")
    es, fs = [e0], [f0]

    def project(w):
        for e, f in zip(es, fs):
            w = w + pairing(f, w) * e - pairing(e, w) * f
        return w

    pool = list(np.identity(2 * n))
    while len(es) < n:
        projected = [project(w) for w in pool]
        norms = [np.linalg.norm(w) for w in projected]
        i = int(np.argmax(norms))
        e = projected[i] / norms[i]
        pool.pop(i)
        candidates = [project(w) for w in pool]
        scores = [abs(pairing(e, w)) for w in candidates]
        j = int(np.argmax(scores))
        if scores[j] < tol:
            raise ArithmeticError("symplectic completion failed")
        f = candidates[j] / pairing(e, candidates[j])
        # a second pass removes the rounding left by the first
        e, f = project(e), project(f)
        f = f / pairing(e, f)
        pool.pop(j)
        es.append(e)
        fs.append(f)
    return np.column_stack(es + fs)


def standard_pairing(f, e):
    r""":math:`\sigma(f, e) = f \cdot J^{-1} e`."""
    f = np.asarray(f, dtype=float)
    e = np.asarray(e, dtype=float)
    return float(f @ np.linalg.solve(sympmat(f.size // 2), e))


def build_with_eigenvector(e, f, extra_lambdas):
    r"""Covariance matrix with :math:`u = e + i f` as an eigenvector of :math:`AJ^{-1}`.

    The smallest symplectic eigenvalue of the result is
    :math:`\lambda_1 = |\sigma(f, e)|` and the others are ``extra_lambdas``.
    For :math:`\sigma(f,e) > 0`, :math:`AJ^{-1}u = -i\lambda_1 u`; for a
    negative pairing the sign flips.

    Args:
        e, f (array): real 2n-vectors
        extra_lambdas (sequence): ascending values, all at least ``lambda_1``

    Returns:
        array: SPD covariance matrix
    """
    e = np.asarray(e, dtype=float).reshape(-1)
    f = np.asarray(f, dtype=float).reshape(-1)
    if e.size != f.size or e.size % 2:
        raise DimensionMismatch("e and f must be 2n-vectors of equal size")
    n = e.size // 2
    pair = standard_pairing(f, e)
    if abs(pair) < 1e-12:
        raise DegeneratePair("sigma(f, e) vanishes")
    lam1 = abs(pair)
    extra = np.asarray(extra_lambdas, dtype=float).reshape(-1)
    if extra.size != n - 1:
        raise BadLambdas(f"expected {n - 1} extra values, got {extra.size}")
    if n > 1:
        _check_lambdas(extra, n - 1)
        if extra[0] < lam1:
            raise BadLambdas("extra values must not be below |sigma(f, e)|")
    scale = np.sqrt(lam1)
    if pair > 0:
        first_e, first_f = e / scale, f / scale
    else:
        first_e, first_f = f / scale, e / scale
    basis = symplectic_gram_schmidt(first_e, first_f)
    lam = np.concatenate([[lam1], extra])
    a = (basis * np.concatenate([lam, lam])) @ basis.T
    return 0.5 * (a + a.T)


def forms_coincide(omega1, omega2, tol=1e-9):
    scale = np.linalg.norm(omega1)
    return (
        np.linalg.norm(omega1 - omega2) <= tol * scale
        or np.linalg.norm(omega1 + omega2) <= tol * scale
    )


def _first_eigenvalues(a, form1, form2):
    return (
        symplectic_spectrum(a, form1).values,
        symplectic_spectrum(a, form2).values,
    )


def _eigenvector_candidates(omega, k, rng, budget):
    r"""Covariances ``B`` (standard frame) with large
    :math:`\lambda_{\sigma,1}(B)/\lambda_{\omega,1}(B)`.

    Picks ``e`` so that :math:`J^T e` and :math:`G e`, with
    :math:`G = J\Omega J^T`, are far from parallel, then ``f`` with
    :math:`\sigma(f, e) = \varepsilon` small while :math:`f \cdot G e` stays
    of order one.  The eigenvector construction then forces the ratio above
    :math:`(f \cdot G e)/\sigma(f,e)`.
    """
    n = omega.shape[0] // 2
    jm = sympmat(n)
    g = jm @ omega @ jm.T
    trials = list(np.identity(2 * n)) + list(rng.standard_normal((4 * n + 8, 2 * n)))

    def spread(e):
        je, ge = jm.T @ e, g @ e
        r = ge - (ge @ je) / (je @ je) * je
        return np.linalg.norm(r) / max(np.linalg.norm(ge), 1e-300)

    trials.sort(key=spread, reverse=True)
    for e in trials:
        e = e / np.linalg.norm(e)
        je, ge = jm.T @ e, g @ e
        r = ge - (ge @ je) / (je @ je) * je
        if np.linalg.norm(r) < 1e-8:
            continue
        u = r / (r @ r)
        v = je / (je @ je)
        # walk eps down geometrically so the first hit overshoots k only mildly
        eps = 1.0 / (1.0 + abs(v @ ge))
        while eps > 1e-3 / (k * (1.0 + abs(v @ ge))):
            f = u + eps * v
            lam1 = abs(standard_pairing(f, e))
            for extra in (1.0, lam1):
                if budget[0] <= 0:
                    return
                budget[0] -= 1
                extras = np.full(n - 1, max(extra, lam1))
                yield build_with_eigenvector(e, f, extras)
            eps *= 0.8


def _diagonal_candidates(frame, rng, budget):
    """Random anisotropic diagonal covariances in the frame of ``frame``."""
    n = frame.shape[0] // 2
    while budget[0] > 0:
        budget[0] -= 1
        diag = np.exp(rng.uniform(-3, 3, 2 * n))
        yield (frame * diag) @ frame.T


def find_ratio_matrix(f1, f2, k, seed=0):
    r"""Covariance ``A`` with :math:`\lambda_{\omega_1,1}(A) / \lambda_{\omega_2,1}(A) \ge k`.

    The search runs in the standard frame of ``f1``: candidates come from
    the eigenvector construction (see :func:`build_with_eigenvector`) and
    then from random diagonal matrices in the canonical frame of ``f2``.
    Each candidate is verified with :func:`symplectic_spectrum`.

    Args:
        f1, f2 (Form): distinct forms (not equal up to sign)
        k (float): required ratio, at least 1
        seed (int): seed for the deterministic search

    Returns:
        array: SPD covariance matrix
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if f1.omega.shape != f2.omega.shape:
        raise DimensionMismatch("forms differ in size")
    if forms_coincide(f1.omega, f2.omega):
        raise FormsCoincide("the two forms agree up to sign")
    rng = np.random.default_rng(seed)
    s1 = darboux_factor(f1).s
    s1_inv = np.linalg.inv(s1)
    # f2 seen from the standard frame of f1
    omega = s1_inv @ f2.omega @ s1_inv.T
    omega = 0.5 * (omega - omega.T)
    frame2 = darboux_factor(make_form(omega)).s
    budget = [SEARCH_BUDGET]
    best = 0.0
    for gen in (
        _eigenvector_candidates(omega, k, rng, budget),
        _diagonal_candidates(frame2, rng, budget),
    ):
        for b in gen:
            a = s1 @ b @ s1.T
            a = 0.5 * (a + a.T)
            try:
                lam1, lam2 = _first_eigenvalues(a, f1, f2)
            except (PairingFailure, matcore.NotPositiveDefinite):
                continue
            ratio = lam1[0] / lam2[0]
            best = max(best, ratio)
            if ratio >= k:
                return a
    raise SearchExhausted(
        f"no covariance with ratio >= {k} within {SEARCH_BUDGET} candidates",
        {"best_ratio": best, "candidates": SEARCH_BUDGET},
    )


def find_separating_matrix(f1, f2, seed=0):
    r"""Covariance whose spectra on ``f1`` and ``f2`` differ by more than ``1e-6``.

    Tries the identity first, then anisotropic diagonal matrices in the
    canonical frame of ``f2``, and finally falls back on
    :func:`find_ratio_matrix` with ratio 2.
    """
    if f1.omega.shape != f2.omega.shape:
        raise DimensionMismatch("forms differ in size")
    if forms_coincide(f1.omega, f2.omega):
        raise FormsCoincide("the two forms agree up to sign")
    rng = np.random.default_rng(seed)
    dim = f1.omega.shape[0]
    frame2 = darboux_factor(f2).s
    budget = [SEARCH_BUDGET // 2]
    candidates = [np.identity(dim)]
    for a in candidates + list(_take(_diagonal_candidates(frame2, rng, budget), 64)):
        spec1, spec2 = _first_eigenvalues(a, f1, f2)
        if np.max(np.abs(spec1 - spec2)) > 1e-6:
            return a
    return find_ratio_matrix(f1, f2, 2.0, seed=seed)


def _take(gen, count):
    for _, item in zip(range(count), gen):
        yield item
