import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympwig import sympl
from sympwig.errors import (
    BadLambdas,
    DegeneratePair,
    FormsCoincide,
    NontrivialFormAtN1,
    NotDarboux,
    NotSkew,
    SearchExhausted,
    Singular,
)
from sympwig.sympl import Form, block_form_matrix, make_form, sympmat

from conftest import random_form, random_spd, random_symplectic, skewed_block_form

seeds = st.integers(0, 2**32 - 1)
modes = st.integers(1, 3)


def spectrum_by_eigenvalues(a, omega):
    """Moduli of the eigenvalues of ``A Omega^{-1}``, one per +-i pair."""
    w = np.linalg.eigvals(a @ np.linalg.inv(omega))
    return np.sort(np.abs(w))[::2]


def partial_transpose(n_a, n_b):
    return np.diag([1.0] * (2 * n_a + n_b) + [-1.0] * n_b)


class TestMakeForm:
    def test_standard_is_untouched(self):
        for n in (1, 2, 3):
            form = make_form(sympmat(n))
            assert form.scale == 1.0
            assert form.is_standard()

    def test_one_mode_rescale_warns(self):
        with pytest.warns(NontrivialFormAtN1):
            form = make_form(2 * sympmat(1))
        assert form.scale == pytest.approx(0.5)
        np.testing.assert_allclose(form.omega, sympmat(1))

    def test_block_form_already_normalized(self):
        assert make_form(block_form_matrix([2.0, 0.5])).scale == 1.0

    def test_normalizes_determinant(self):
        form = make_form(3.0 * block_form_matrix([2.0, 0.5]))
        assert np.linalg.det(form.omega) == pytest.approx(1.0)
        assert form.scale == pytest.approx(1 / 3)

    def test_rejects_non_skew(self):
        with pytest.raises(NotSkew):
            make_form(np.identity(4))

    def test_rejects_singular(self):
        with pytest.raises(Singular):
            make_form(np.zeros((4, 4)))

    def test_constructor_requires_normalized(self):
        with pytest.raises(ValueError):
            Form(2 * sympmat(2))

    @given(seeds)
    def test_one_mode_forms_collapse_to_standard(self, seed):
        form = random_form(np.random.default_rng(seed), 1)
        assert form.close_to(sympmat(1)) or form.close_to(-sympmat(1))


class TestDarboux:
    def test_standard_form(self):
        s = sympl.darboux_factor(Form.standard(2))
        assert s.residual() <= 1e-12

    def test_block_form_diagonal_witness(self):
        witness = np.diag([np.sqrt(2), 1 / np.sqrt(2), np.sqrt(2), 1 / np.sqrt(2)])
        sympl.DarbouxMatrix(witness, skewed_block_form(2.0))

    def test_partial_transpose_is_darboux_for_its_form(self):
        p = partial_transpose(1, 1)
        form = make_form(p @ sympmat(2) @ p.T)
        sympl.DarbouxMatrix(p, form)
        assert sympl.darboux_factor(form).residual() <= 1e-12

    def test_rejects_wrong_matrix(self):
        with pytest.raises(NotDarboux):
            sympl.DarbouxMatrix(2 * np.identity(4), Form.standard(2))

    def test_deterministic(self):
        form = random_form(np.random.default_rng(5), 2)
        np.testing.assert_array_equal(sympl.darboux_factor(form).s, sympl.darboux_factor(form).s)

    @given(seeds, modes)
    def test_residual(self, seed, n):
        form = random_form(np.random.default_rng(seed), n)
        s = sympl.darboux_factor(form)
        assert s.residual() <= 1e-9 * np.linalg.norm(form.omega)
        assert abs(abs(np.linalg.det(s.s)) - 1.0) <= 1e-9

    @given(seeds, modes)
    def test_two_darboux_matrices_differ_by_symplectic(self, seed, n):
        rng = np.random.default_rng(seed)
        form = random_form(rng, n)
        s = sympl.darboux_factor(form).s
        other = s @ random_symplectic(rng, n)
        sympl.DarbouxMatrix(other, form)
        assert sympl.is_symplectic(np.linalg.solve(other, s), Form.standard(n), 1e-8)


class TestSymplecticity:
    def test_identity(self):
        form = random_form(np.random.default_rng(0), 2)
        assert sympl.is_symplectic(np.identity(4), form)

    def test_reflection_is_antisymplectic(self):
        r = np.diag([1.0, 1.0, -1.0, -1.0])
        assert sympl.is_antisymplectic(r, Form.standard(2))
        assert not sympl.is_symplectic(r, Form.standard(2))

    def test_partial_transpose_is_neither(self):
        p = partial_transpose(1, 1)
        assert not sympl.is_symplectic(p, Form.standard(2))
        assert not sympl.is_antisymplectic(p, Form.standard(2))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            sympl.is_symplectic(np.identity(2), Form.standard(2))


class TestSpectrum:
    @pytest.mark.parametrize("alpha,beta", [(2.0, 3.0), (0.6, 0.6), (1.0, 1.0)])
    @pytest.mark.parametrize("theta", [1.0, 2.0, 3.0])
    def test_block_example(self, alpha, beta, theta):
        a = np.diag([alpha, alpha, beta, beta])
        root = np.sqrt(alpha * beta)
        std = sympl.symplectic_spectrum(a, Form.standard(2)).values
        other = sympl.symplectic_spectrum(a, skewed_block_form(theta)).values
        np.testing.assert_allclose(std, [root, root], atol=1e-10)
        np.testing.assert_allclose(other, sorted([root / theta, root * theta]), atol=1e-10)

    def test_identity(self):
        np.testing.assert_allclose(sympl.symplectic_spectrum(np.identity(6), Form.standard(3)).values, 1.0)

    @given(seeds, modes)
    def test_matches_general_eigensolver(self, seed, n):
        rng = np.random.default_rng(seed)
        a, form = random_spd(rng, 2 * n), random_form(rng, n)
        got = sympl.symplectic_spectrum(a, form).values
        np.testing.assert_allclose(got, spectrum_by_eigenvalues(a, form.omega), rtol=1e-8)

    @given(seeds, modes, st.sampled_from([0.1, 1.0, 7.3]))
    def test_rescaling(self, seed, n, mu):
        rng = np.random.default_rng(seed)
        a, form = random_spd(rng, 2 * n), random_form(rng, n)
        base = sympl.symplectic_spectrum(a, form).values
        np.testing.assert_allclose(sympl.symplectic_spectrum(mu * a, form).values, mu * base, rtol=1e-9)

    @given(seeds, modes)
    def test_congruence_by_form_symplectic_map(self, seed, n):
        rng = np.random.default_rng(seed)
        a, form = random_spd(rng, 2 * n), random_form(rng, n)
        s = sympl.darboux_factor(form).s
        # conjugating a J-symplectic map by a Darboux matrix gives an Omega-symplectic one
        p = s @ random_symplectic(rng, n) @ np.linalg.inv(s)
        assert sympl.is_symplectic(p, form, 1e-8)
        moved = sympl.symplectic_spectrum(p @ a @ p.T, form).values
        base = sympl.symplectic_spectrum(a, form).values
        # small values of a widely spread spectrum are only resolved relative to the largest
        np.testing.assert_allclose(moved, base, rtol=1e-8, atol=1e-8 * base[-1])

    @given(seeds, modes)
    def test_darboux_pullback(self, seed, n):
        rng = np.random.default_rng(seed)
        a, form = random_spd(rng, 2 * n), random_form(rng, n)
        s = sympl.darboux_factor(form).s
        np.testing.assert_allclose(
            sympl.symplectic_spectrum(s @ a @ s.T, form).values,
            sympl.symplectic_spectrum(a, Form.standard(n)).values,
            rtol=1e-8,
        )


class TestWilliamson:
    def test_multiple_of_identity(self):
        w = sympl.williamson(3.0 * np.identity(4), Form.standard(2))
        np.testing.assert_allclose(w.d, [3.0, 3.0])
        np.testing.assert_allclose(w.s.s @ w.s.s.T, np.identity(4), atol=1e-12)

    def test_block_example(self):
        w = sympl.williamson(np.diag([2.0, 2.0, 3.0, 3.0]), skewed_block_form(2.0))
        np.testing.assert_allclose(w.d, [np.sqrt(6) / 2, 2 * np.sqrt(6)])

    @given(seeds, st.integers(1, 4))
    def test_residuals_and_spectrum(self, seed, n):
        rng = np.random.default_rng(seed)
        a, form = random_spd(rng, 2 * n), random_form(rng, n)
        w = sympl.williamson(a, form)
        s_inv = np.linalg.inv(w.s.s)
        assert np.linalg.norm(s_inv @ a @ s_inv.T - w.diagonal) <= 1e-8 * np.linalg.norm(a)
        assert w.s.residual() <= 1e-9 * np.linalg.norm(form.omega)
        np.testing.assert_allclose(w.d, sympl.symplectic_spectrum(a, form).values, rtol=1e-8)

    @given(seeds, modes)
    def test_standard_form_is_classical(self, seed, n):
        a = random_spd(np.random.default_rng(seed), 2 * n)
        w = sympl.williamson(a, Form.standard(n))
        assert sympl.is_symplectic(w.s.s, Form.standard(n), 1e-9)
        np.testing.assert_allclose(w.s.s @ w.diagonal @ w.s.s.T, a, atol=1e-9 * np.linalg.norm(a))


class TestPrescribeSpectrum:
    def test_identity_keeps_standard_form(self):
        out = sympl.prescribe_spectrum(np.identity(4), [1.0, 1.0])
        assert out.delta.close_to(sympmat(2), 1e-9)

    def test_own_spectrum_gives_standard_form(self):
        a = random_spd(np.random.default_rng(2), 4)
        lam = sympl.symplectic_spectrum(a, Form.standard(2)).values
        out = sympl.prescribe_spectrum(a, lam)
        assert out.delta.close_to(sympmat(2), 1e-8)

    def test_block_example_relations(self):
        a = np.diag([2.0, 2.0, 3.0, 3.0])
        out = sympl.prescribe_spectrum(a, [1.0, 2.0])
        p_inv = np.linalg.inv(out.p)
        np.testing.assert_allclose(p_inv @ a @ p_inv.T, np.diag([1.0, 2.0, 1.0, 2.0]), atol=1e-8)
        np.testing.assert_allclose(out.p @ sympmat(2) @ out.p.T, out.delta_raw, atol=1e-8)
        np.testing.assert_allclose(sympl.symplectic_spectrum(a, out.delta_raw).values, [1.0, 2.0])
        np.testing.assert_allclose(
            sympl.symplectic_spectrum(a, out.delta).values, out.lambdas_normalized, rtol=1e-9
        )

    @given(seeds, st.integers(2, 3))
    def test_random(self, seed, n):
        rng = np.random.default_rng(seed)
        a = random_spd(rng, 2 * n)
        lam = np.sort(rng.uniform(0.2, 5.0, n))
        out = sympl.prescribe_spectrum(a, lam)
        np.testing.assert_allclose(sympl.symplectic_spectrum(a, out.delta_raw).values, lam, rtol=1e-8)

    def test_rejects_descending(self):
        with pytest.raises(BadLambdas):
            sympl.prescribe_spectrum(np.identity(4), [2.0, 1.0])


class TestBuildWithEigenvector:
    def test_trivial(self):
        e, f = np.eye(4)[0], np.eye(4)[2]
        a = sympl.build_with_eigenvector(e, f, [1.0])
        np.testing.assert_allclose(a, np.identity(4), atol=1e-12)
        u = e + 1j * f
        np.testing.assert_allclose(a @ np.linalg.inv(sympmat(2)) @ u, -1j * u, atol=1e-12)

    def test_scaled(self):
        e, f = 2 * np.eye(4)[0], np.eye(4)[2]
        a = sympl.build_with_eigenvector(e, f, [2.0])
        u = e + 1j * f
        np.testing.assert_allclose(a @ np.linalg.inv(sympmat(2)) @ u, -2j * u, atol=1e-12)
        assert sympl.symplectic_spectrum(a, Form.standard(2)).lambda1 == pytest.approx(2.0)

    @given(seeds, st.integers(1, 3))
    def test_random(self, seed, n):
        rng = np.random.default_rng(seed)
        e, f = rng.standard_normal((2, 2 * n))
        pair = sympl.standard_pairing(f, e)
        # nearly isotropic pairs give covariances too ill-conditioned to be numerically SPD
        if abs(pair) < 1e-2 * np.linalg.norm(e) * np.linalg.norm(f):
            return
        extra = np.sort(abs(pair) * (1 + rng.uniform(0, 3, n - 1)))
        a = sympl.build_with_eigenvector(e, f, extra)
        u = e + 1j * f
        sign = -1j if pair > 0 else 1j
        np.testing.assert_allclose(
            a @ np.linalg.inv(sympmat(n)) @ u, sign * abs(pair) * u, atol=1e-8 * np.linalg.norm(a)
        )
        assert sympl.symplectic_spectrum(a, Form.standard(n)).lambda1 == pytest.approx(abs(pair), rel=1e-8)

    def test_degenerate_pair(self):
        with pytest.raises(DegeneratePair):
            sympl.build_with_eigenvector(np.eye(4)[0], np.eye(4)[1], [1.0])

    def test_extra_below_first(self):
        with pytest.raises(BadLambdas):
            sympl.build_with_eigenvector(2 * np.eye(4)[0], np.eye(4)[2], [1.0])


class TestSearches:
    def test_separating_block_example(self, form_pair):
        fj, fo = form_pair
        a = sympl.find_separating_matrix(fj, fo)
        s1 = sympl.symplectic_spectrum(a, fj).values
        s2 = sympl.symplectic_spectrum(a, fo).values
        assert np.max(np.abs(s1 - s2)) > 1e-6

    @pytest.mark.parametrize("sign", [1, -1])
    def test_coinciding_forms(self, sign):
        with pytest.raises(FormsCoincide):
            sympl.find_separating_matrix(Form.standard(2), Form(sign * sympmat(2)))
        with pytest.raises(FormsCoincide):
            sympl.find_ratio_matrix(Form.standard(2), Form(sign * sympmat(2)), 2.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_separating_random_forms(self, seed):
        rng = np.random.default_rng(seed)
        f1, f2 = random_form(rng, 2), random_form(rng, 2)
        a = sympl.find_separating_matrix(f1, f2, seed=seed)
        s1 = sympl.symplectic_spectrum(a, f1).values
        s2 = sympl.symplectic_spectrum(a, f2).values
        assert np.max(np.abs(s1 - s2)) > 1e-6

    @pytest.mark.parametrize("k", [2.0, 10.0])
    def test_ratio_block_example(self, form_pair, k):
        fj, fo = form_pair
        a = sympl.find_ratio_matrix(fj, fo, k)
        ratio = sympl.symplectic_spectrum(a, fj).lambda1 / sympl.symplectic_spectrum(a, fo).lambda1
        assert ratio >= k

    def test_ratio_is_deterministic(self, form_pair):
        a = sympl.find_ratio_matrix(*form_pair, 5.0, seed=3)
        b = sympl.find_ratio_matrix(*form_pair, 5.0, seed=3)
        np.testing.assert_array_equal(a, b)

    def test_ratio_exhausted_carries_diagnostics(self, form_pair, monkeypatch):
        monkeypatch.setattr(sympl, "SEARCH_BUDGET", 2)
        with pytest.raises(SearchExhausted) as info:
            sympl.find_ratio_matrix(*form_pair, 1e6)
        assert info.value.diagnostics["candidates"] == 2
        assert info.value.diagnostics["best_ratio"] < 1e6

    def test_ratio_rejects_small_k(self, form_pair):
        with pytest.raises(ValueError):
            sympl.find_ratio_matrix(*form_pair, 0.5)


def test_form_helpers():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        form = make_form(block_form_matrix([2.0, 0.5]))
    assert (-form).close_to(-form.omega)
    np.testing.assert_allclose(form.omega_inv @ form.omega, np.identity(4), atol=1e-15)
