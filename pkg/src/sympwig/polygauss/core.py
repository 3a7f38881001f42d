r"""Finite sums of polynomial-times-Gaussian phase-space functions.

A term is :math:`c\, P(z - m)\, G_B(z - m)` where :math:`G_B` is the
normalized centered Gaussian density with covariance ``B``.  Keeping the
Gaussian normalized turns integrals into Gaussian expectations of the
polynomial part, which Isserlis' theorem evaluates exactly.
"""

from dataclasses import dataclass, field

import numpy as np

from .. import matcore
from ..errors import BudgetExceeded, DegreeBudgetExceeded, DimensionMismatch, FormMismatch
from ..sympl import DarbouxMatrix, Form
from .poly import Poly

MAX_DEGREE = 24
MAX_TERMS = 512
MERGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Term:
    """One summand ``coeff * poly(z - center) * G_shape(z - center)``."""

    coeff: float
    center: np.ndarray
    shape: np.ndarray
    poly: Poly

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(-1)
        shape = matcore.check_spd(self.shape, "term shape")
        if shape.shape != (center.size, center.size) or self.poly.nvars != center.size:
            raise DimensionMismatch("term center, shape and polynomial sizes disagree")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "coeff", float(self.coeff))

    @property
    def dim(self):
        return self.center.size

    def gaussian(self, z):
        """``G_shape(z - center)`` for points of shape ``(..., dim)``."""
        y = np.asarray(z, dtype=float) - self.center
        prec = np.linalg.inv(self.shape)
        quad = np.einsum("...i,ij,...j->...", y, prec, y)
        norm = (2 * np.pi) ** (self.dim / 2) * np.sqrt(np.linalg.det(self.shape))
        return np.exp(-0.5 * quad) / norm

    def __call__(self, z):
        y = np.asarray(z, dtype=float) - self.center
        return self.coeff * np.real(self.poly(y)) * self.gaussian(z)

    def integral(self):
        return self.coeff * float(np.real(self.poly.expectation(self.shape)))


def _same(a, b):
    return np.max(np.abs(a - b), initial=0.0) <= MERGE_TOL * max(1.0, np.max(np.abs(a), initial=0.0))


def canonical_terms(terms):
    """Merge terms sharing (center, shape) and drop vanishing ones."""
    merged = []
    for t in terms:
        for i, u in enumerate(merged):
            if _same(t.center, u.center) and _same(t.shape, u.shape):
                poly = u.poly * u.coeff + t.poly * t.coeff
                merged[i] = Term(1.0, u.center, u.shape, poly)
                break
        else:
            merged.append(t)
    out = []
    for t in merged:
        poly = t.poly.pruned(0.0)
        if t.coeff != 0 and poly.terms:
            out.append(t)
    if len(out) > MAX_TERMS:
        raise BudgetExceeded(f"{len(out)} terms exceed the cap of {MAX_TERMS}")
    for t in out:
        if t.poly.degree > MAX_DEGREE:
            raise DegreeBudgetExceeded(f"degree {t.poly.degree} exceeds {MAX_DEGREE}")
    return tuple(out)


@dataclass(frozen=True, eq=False)
class PolyGauss:
    """A finite sum of :class:`Term` objects on ``2n``-dimensional phase space.

    ``form`` optionally records the symplectic form the function is meant
    to be a Wigner function for; it is bookkeeping only and is checked by
    the frame changes.
    """

    n: int
    terms: tuple
    form: Form = field(default=None)

    def __post_init__(self):
        for t in self.terms:
            if t.dim != 2 * self.n:
                raise DimensionMismatch("term dimension does not match 2n")
        object.__setattr__(self, "terms", canonical_terms(self.terms))

    @property
    def dim(self):
        return 2 * self.n

    @property
    def degree(self):
        return max((t.poly.degree for t in self.terms), default=0)

    def __call__(self, z):
        """Evaluate at points of shape ``(..., 2n)``."""
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.dim:
            raise DimensionMismatch(f"points must have last axis {self.dim}")
        out = np.zeros(z.shape[:-1])
        for t in self.terms:
            out = out + t(z)
        return out

    def integral(self):
        return sum(t.integral() for t in self.terms)

    def _combine(self, other):
        if not isinstance(other, PolyGauss):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch("mode counts differ")
        form = self.form if self.form is not None else other.form
        return PolyGauss(self.n, self.terms + other.terms, form)

    def __add__(self, other):
        return self._combine(other)

    def __mul__(self, c):
        c = float(c)
        terms = tuple(Term(t.coeff * c, t.center, t.shape, t.poly) for t in self.terms)
        return PolyGauss(self.n, terms, self.form)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1.0) * other

    def with_form(self, form):
        return PolyGauss(self.n, self.terms, form)

    def shape_scale(self):
        """Largest standard deviation among the term Gaussians."""
        return max(np.sqrt(np.linalg.eigvalsh(t.shape)[-1]) for t in self.terms)

    def centroid(self):
        """Plain average of the term centers."""
        return np.mean([t.center for t in self.terms], axis=0)

    def moments(self):
        """Total mass, mean vector and covariance matrix of the signed density."""
        dim = self.dim
        mass = self.integral()
        first = np.zeros(dim)
        second = np.zeros((dim, dim))
        for t in self.terms:
            # shift the polynomial so that z = center + y
            for i in range(dim):
                zi = Poly.var(dim, i) + t.center[i]
                first[i] += t.coeff * float(np.real((zi * t.poly).expectation(t.shape)))
                for j in range(i, dim):
                    zj = Poly.var(dim, j) + t.center[j]
                    val = t.coeff * float(np.real((zi * zj * t.poly).expectation(t.shape)))
                    second[i, j] += val
                    second[j, i] = second[i, j]
        mean = first / mass
        cov = second / mass - np.outer(mean, mean)
        return mass, mean, cov


def gaussian_pg(state):
    """A Gaussian state as a single-term :class:`PolyGauss`."""
    term = Term(1.0, state.mean, state.cov, Poly.const(2 * state.n))
    return PolyGauss(state.n, (term,), state.form)


def translate(f, zeta):
    r"""The translate :math:`z \mapsto f(z - \zeta)`."""
    zeta = np.asarray(zeta, dtype=float).reshape(-1)
    if zeta.size != f.dim:
        raise DimensionMismatch("translation vector has the wrong size")
    terms = tuple(Term(t.coeff, t.center + zeta, t.shape, t.poly) for t in f.terms)
    return PolyGauss(f.n, terms, f.form)


def pullback(f, lin):
    r"""The function :math:`z \mapsto f(Lz)` for an invertible matrix ``L``.

    Each Gaussian factor picks up :math:`1/|\det L|`, its covariance becomes
    :math:`L^{-1}BL^{-T}`, its center :math:`L^{-1}m` and the polynomial is
    composed with ``L``.
    """
    lin = matcore.as_square(lin, "linear map")
    if lin.shape[0] != f.dim:
        raise DimensionMismatch("map has the wrong size")
    inv = np.linalg.inv(lin)
    det = abs(np.linalg.det(lin))
    terms = []
    for t in f.terms:
        shape = inv @ t.shape @ inv.T
        terms.append(
            Term(t.coeff / det, inv @ t.center, 0.5 * (shape + shape.T), t.poly.substitute(lin))
        )
    return PolyGauss(f.n, tuple(terms), f.form)


def dilate(f, lam):
    r""":math:`f_\lambda(z) = |\lambda|^{2n} f(\lambda z)`, which keeps the integral."""
    g = pullback(f, lam * np.identity(f.dim))
    return abs(lam) ** f.dim * g


def change_frame_pg(f, s, direction="to_omega"):
    r"""Move a phase-space function between the standard frame and ``s.target``.

    ``"to_omega"`` returns :math:`z \mapsto f(S^{-1}z)` tagged with
    ``s.target``; ``"to_sigma"`` returns :math:`z \mapsto f(Sz)` tagged with
    the standard form.
    """
    if not isinstance(s, DarbouxMatrix):
        raise TypeError("s must be a DarbouxMatrix")
    if s.n != f.n:
        raise DimensionMismatch("Darboux matrix and function differ in size")
    if direction == "to_omega":
        if f.form is not None and not f.form.is_standard():
            raise FormMismatch("function is not tagged with the standard form")
        return pullback(f, s.inv).with_form(s.target)
    if direction == "to_sigma":
        if f.form is not None and not f.form.close_to(s.target):
            raise FormMismatch("function is not on the Darboux matrix's target form")
        return pullback(f, s.s).with_form(Form.standard(f.n))
    raise ValueError(f"unknown direction {direction!r}")


def _split_index(n_first, n_second):
    """Positions of the two factors' coordinates in the joint ``(x, p)`` order."""
    n = n_first + n_second
    first = list(range(n_first)) + list(range(n, n + n_first))
    second = list(range(n_first, n)) + list(range(n + n_first, 2 * n))
    return first, second


def tensor(f, g):
    """Product ``f(z_A) g(z_B)`` on the joint space ordered ``(x_A, x_B, p_A, p_B)``."""
    n = f.n + g.n
    idx_f, idx_g = _split_index(f.n, g.n)
    terms = []
    for tf in f.terms:
        for tg in g.terms:
            center = np.empty(2 * n)
            center[idx_f], center[idx_g] = tf.center, tg.center
            shape = np.zeros((2 * n, 2 * n))
            shape[np.ix_(idx_f, idx_f)] = tf.shape
            shape[np.ix_(idx_g, idx_g)] = tg.shape
            poly = {}
            for ef, cf in tf.poly.terms.items():
                for eg, cg in tg.poly.terms.items():
                    e = [0] * (2 * n)
                    for i, k in zip(idx_f, ef):
                        e[i] = k
                    for i, k in zip(idx_g, eg):
                        e[i] = k
                    poly[tuple(e)] = cf * cg
            terms.append(Term(tf.coeff * tg.coeff, center, shape, Poly(2 * n, poly)))
    return PolyGauss(n, tuple(terms))


def _pair_convolve(t1, t2):
    """Convolution of two terms as one term (exact)."""
    dim = t1.dim
    b_sum = t1.shape + t2.shape
    gain = t2.shape @ np.linalg.inv(b_sum)
    cond = t2.shape - gain @ t2.shape
    cond = 0.5 * (cond + cond.T)
    eye = np.identity(dim)
    # variables (t, v): f-part at t - K t - v, g-part at K t + v
    p1 = t1.poly.substitute(np.hstack([eye - gain, -eye]))
    p2 = t2.poly.substitute(np.hstack([gain, eye]))
    poly = (p1 * p2).gaussian_expectation(cond, range(dim, 2 * dim))
    return Term(t1.coeff * t2.coeff, t1.center + t2.center, b_sum, poly)


def convolve(f, g):
    r"""Exact convolution :math:`(f \star g)(z) = \int f(z - w) g(w)\, dw`."""
    if f.n != g.n:
        raise DimensionMismatch("mode counts differ")
    if f.degree + g.degree > MAX_DEGREE:
        raise DegreeBudgetExceeded(f"combined degree {f.degree + g.degree} exceeds {MAX_DEGREE}")
    terms = tuple(_pair_convolve(a, b) for a in f.terms for b in g.terms)
    return PolyGauss(f.n, terms)


def _pair_overlap(t1, t2):
    b_sum = t1.shape + t2.shape
    diff = t1.center - t2.center
    prefactor = Term(1.0, np.zeros(t1.dim), b_sum, Poly.const(t1.dim)).gaussian(diff)
    inv1, inv2 = np.linalg.inv(t1.shape), np.linalg.inv(t2.shape)
    cov = np.linalg.inv(inv1 + inv2)
    cov = 0.5 * (cov + cov.T)
    mean = cov @ (inv1 @ t1.center + inv2 @ t2.center)
    eye = np.identity(t1.dim)
    p1 = t1.poly.substitute(eye, mean - t1.center)
    p2 = t2.poly.substitute(eye, mean - t2.center)
    value = (p1 * p2).expectation(cov)
    return t1.coeff * t2.coeff * prefactor * float(np.real(value))


def overlap(f, g):
    r"""Exact :math:`\int f(z) g(z)\, dz`."""
    if f.n != g.n:
        raise DimensionMismatch("mode counts differ")
    return float(sum(_pair_overlap(a, b) for a in f.terms for b in g.terms))


@dataclass(frozen=True, eq=False)
class FourierTerm:
    r""":math:`e^{-i c\cdot\omega} e^{-\omega\cdot B\omega/2} Q(\omega)` with complex ``Q``."""

    center: np.ndarray
    shape: np.ndarray
    poly: Poly

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        phase = np.exp(-1j * (w @ self.center) - 0.5 * np.einsum("...i,ij,...j->...", w, self.shape, w))
        return phase * self.poly(w)


@dataclass(frozen=True, eq=False)
class FourierPG:
    r"""Plain Fourier transform :math:`\int f(x) e^{-ix\cdot\omega}\,dx` of a PolyGauss."""

    n: int
    terms: tuple

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        out = np.zeros(w.shape[:-1], dtype=complex)
        for t in self.terms:
            out = out + t(w)
        return out


def fourier(f):
    r"""Closed-form Fourier transform.

    For a centered term, :math:`\int P(y) G_B(y) e^{-iy\cdot\omega}dy =
    e^{-\omega\cdot B\omega/2}\,\mathbb{E}[P(Y - iB\omega)]` with
    :math:`Y \sim N(0, B)`; a center ``c`` contributes the phase
    :math:`e^{-ic\cdot\omega}`.
    """
    dim = f.dim
    terms = []
    for t in f.terms:
        lin = np.hstack([-1j * t.shape, np.identity(dim)])
        q = t.poly.substitute(lin).gaussian_expectation(t.shape, range(dim, 2 * dim))
        terms.append(FourierTerm(t.center, t.shape, q * t.coeff))
    return FourierPG(f.n, tuple(terms))


def symplectic_fourier(f, form):
    r"""Symplectic Fourier transform on ``form`` as a callable.

    :math:`F_\omega f(\xi) = (2\pi)^{-n} \int e^{-i\omega(\xi, \xi')} f(\xi')\,d\xi'
    = (2\pi)^{-n} F f(-\Omega^{-1}\xi)`.
    """
    plain = fourier(f)
    omega_inv = np.linalg.inv(form.omega)

    def evaluate(xi):
        xi = np.asarray(xi, dtype=float)
        return plain(-xi @ omega_inv.T) / (2 * np.pi) ** f.n

    return evaluate
