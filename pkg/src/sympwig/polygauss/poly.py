"""Sparse multivariate polynomials with real or complex coefficients.

Only what the polynomial-times-Gaussian algebra needs: arithmetic, affine
substitution, vectorized evaluation and expectations against centered
Gaussians (via Isserlis' recursion on the moments).
"""

from functools import lru_cache

import numpy as np

_ZERO = 0.0


class Poly:
    """Polynomial in ``nvars`` variables stored as ``{exponents: coeff}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        self.terms = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError("exponent tuple has the wrong length")
            if c != 0:
                self.terms[exps] = self.terms.get(exps, _ZERO) + c

    @classmethod
    def const(cls, nvars, c=1.0):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i, c=1.0):
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): c})

    @classmethod
    def linear(cls, coeffs, const=0.0):
        """``sum_i coeffs[i] * y_i + const``."""
        nvars = len(coeffs)
        p = cls.const(nvars, const)
        for i, c in enumerate(coeffs):
            if c != 0:
                exps = [0] * nvars
                exps[i] = 1
                p.terms[tuple(exps)] = c
        return p

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    @property
    def is_complex(self):
        return any(isinstance(c, complex) or np.iscomplexobj(c) for c in self.terms.values())

    def copy(self):
        new = Poly(self.nvars)
        new.terms = dict(self.terms)
        return new

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, _ZERO) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return Poly(self.nvars)
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, _ZERO) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = Poly.const(self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError("polynomials in different numbers of variables")

    def __repr__(self):
        return f"Poly(nvars={self.nvars}, terms={self.terms!r})"

    def map_coeffs(self, fn):
        return Poly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    @property
    def real(self):
        return self.map_coeffs(lambda c: float(np.real(c)))

    @property
    def imag(self):
        return self.map_coeffs(lambda c: float(np.imag(c)))

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def pruned(self, tol=0.0):
        """Drop coefficients with modulus at most ``tol``."""
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if abs(c) > tol})

    def exponent_array(self):
        exps = np.array(list(self.terms), dtype=int).reshape(-1, self.nvars)
        coeffs = np.array(list(self.terms.values()))
        return exps, coeffs

    def __call__(self, y):
        """Evaluate at points ``y`` of shape ``(..., nvars)``."""
        y = np.asarray(y)
        if not self.terms:
            return np.zeros(y.shape[:-1])
        exps, coeffs = self.exponent_array()
        flat = y.reshape(-1, self.nvars)
        deg = exps.max()
        # powers[k][:, i] = y_i ** k
        powers = np.ones((deg + 1,) + flat.shape, dtype=np.result_type(flat, float))
        for k in range(1, deg + 1):
            powers[k] = powers[k - 1] * flat
        monos = np.ones((flat.shape[0], len(coeffs)), dtype=powers.dtype)
        for i in range(self.nvars):
            monos = monos * powers[exps[:, i], :, i].T
        return (monos @ coeffs).reshape(y.shape[:-1])

    def substitute(self, lin, shift=None):
        """Return ``q(y) = p(lin @ y + shift)``.

        Args:
            lin (array): shape ``(self.nvars, m)``
            shift (array): shape ``(self.nvars,)``
        """
        lin = np.asarray(lin)
        m = lin.shape[1]
        if shift is None:
            shift = np.zeros(self.nvars)
        forms = [Poly.linear(list(lin[i]), shift[i]) for i in range(self.nvars)]
        cache = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = Poly.const(m) if k == 0 else power(i, k - 1) * forms[i]
            return cache[(i, k)]

        out = Poly(m)
        for exps, c in self.terms.items():
            term = Poly.const(m, c)
            for i, k in enumerate(exps):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def gaussian_expectation(self, cov, over):
        """Integrate out the variables ``over`` against ``N(0, cov)``.

        Args:
            cov (array): covariance of the integrated variables, in the
                order given by ``over``
            over (sequence[int]): indices of the integrated variables

        Returns:
            Poly: polynomial in the remaining variables (original order)
        """
        over = list(over)
        keep = [i for i in range(self.nvars) if i not in over]
        moments = GaussianMoments(np.asarray(cov))
        out = {}
        for exps, c in self.terms.items():
            m = moments(tuple(exps[i] for i in over))
            if m == 0:
                continue
            e = tuple(exps[i] for i in keep)
            out[e] = out.get(e, _ZERO) + c * m
        return Poly(len(keep), out)

    def expectation(self, cov):
        """Full expectation ``E[p(Y)]`` for ``Y ~ N(0, cov)``."""
        p = self.gaussian_expectation(cov, range(self.nvars))
        return p.terms.get((), _ZERO)


class GaussianMoments:
    """Moments ``E[Y^k]`` of a centered Gaussian, by Isserlis' recursion.

    ``E[Y_i Y^b] = sum_j cov[i, j] * b_j * E[Y^(b - e_j)]``.
    """

    def __init__(self, cov):
        cov = np.asarray(cov, dtype=float)
        self.cov = cov

        @lru_cache(maxsize=None)
        def moment(exps):
            total = sum(exps)
            if total == 0:
                return 1.0
            if total % 2:
                return 0.0
            i = next(k for k, e in enumerate(exps) if e)
            rest = list(exps)
            rest[i] -= 1
            value = 0.0
            for j, bj in enumerate(rest):
                if bj and cov[i, j] != 0:
                    lower = list(rest)
                    lower[j] -= 1
                    value += cov[i, j] * bj * moment(tuple(lower))
            return value

        self._moment = moment

    def __call__(self, exps):
        return self._moment(tuple(exps))


def hermite(m, nvars=1, var=0):
    """Physicists' Hermite polynomial ``H_m`` by the three-term recurrence."""
    x = Poly.var(nvars, var)
    prev, cur = Poly(nvars), Poly.const(nvars)
    for k in range(m):
        prev, cur = cur, x * cur * 2.0 - prev * (2.0 * k)
    return cur
