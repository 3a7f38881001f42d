import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympwig import gauss_states as gs
from sympwig import matcore, sympl
from sympwig.errors import (
    BadSplit,
    DegenerateCombination,
    FormMismatch,
    FormsCoincide,
    Singular,
)
from sympwig.gauss_states import GaussianState, NWPoint, Region
from sympwig.sympl import Form, sympmat

from conftest import random_form, random_spd, random_symplectic, skewed_block_form
from oracles import gaussian_square_integral

seeds = st.integers(0, 2**32 - 1)
modes = st.integers(1, 3)


def squeezed_cov(r):
    return gs.two_mode_squeezed_cov(r)


class TestState:
    def test_rejects_bad_covariance(self):
        with pytest.raises(matcore.NotPositiveDefinite):
            GaussianState.centered(-np.identity(2), Form.standard(1))

    def test_density_integrates_like_a_gaussian(self):
        state = GaussianState([1.0, -0.5], np.diag([2.0, 0.5]), Form.standard(1))
        assert state.density(np.array([1.0, -0.5])) == pytest.approx(1 / (2 * np.pi))

    def test_immutable(self):
        state = gs.vacuum(1)
        with pytest.raises(ValueError):
            state.cov[0, 0] = 3.0


class TestIsWigner:
    def test_vacuum(self):
        verdict, lam = gs.is_wigner(gs.vacuum(2))
        assert verdict and lam == pytest.approx(0.5)

    def test_block_example(self):
        cov = 0.6 * np.identity(4)
        verdict, lam = gs.is_wigner(GaussianState.centered(cov, skewed_block_form(2.0)))
        assert not verdict and lam == pytest.approx(0.3)
        verdict, lam = gs.is_wigner(GaussianState.centered(cov, Form.standard(2)))
        assert verdict and lam == pytest.approx(0.6)

    @given(seeds, modes, st.floats(0.05, 2.0))
    def test_agrees_with_hermitian_test(self, seed, n, mu):
        rng = np.random.default_rng(seed)
        cov, form = mu * random_spd(rng, 2 * n), random_form(rng, n)
        verdict, lam = gs.is_wigner(GaussianState.centered(cov, form))
        herm, min_eig = matcore.is_psd_hermitian(gs.uncertainty_matrix(cov, form.omega))
        if abs(lam - 0.5) > 1e-6:
            assert verdict == herm


class TestNWInterval:
    def test_minimal_gaussian(self):
        form = random_form(np.random.default_rng(0), 2)
        s = sympl.darboux_factor(form).s
        interval = gs.nw_interval(GaussianState.centered(0.5 * s @ s.T, form))
        assert interval.lo == pytest.approx(-1.0)
        assert interval.hi == pytest.approx(1.0)

    def test_identity(self):
        interval = gs.nw_interval(GaussianState.centered(np.identity(4), Form.standard(2)))
        assert (interval.lo, interval.hi) == pytest.approx((-2.0, 2.0))
        assert 1.5 in interval and 2.5 not in interval

    def test_block_example(self):
        state = GaussianState.centered(np.diag([2.0, 2.0, 3.0, 3.0]), skewed_block_form(2.0))
        assert gs.nw_interval(state).hi == pytest.approx(np.sqrt(6))

    @given(seeds, modes, st.floats(0.3, 3.0))
    def test_symmetric_and_scales_with_dilation(self, seed, n, lam):
        rng = np.random.default_rng(seed)
        cov, form = random_spd(rng, 2 * n), random_form(rng, n)
        base = gs.nw_interval(GaussianState.centered(cov, form))
        assert base.lo == -base.hi
        dilated = gs.nw_interval(GaussianState.centered(cov / lam**2, form))
        assert dilated.hi == pytest.approx(base.hi / lam**2, rel=1e-9)

    @given(seeds, modes, st.floats(-3.0, 3.0))
    def test_endpoint_matches_hermitian_test(self, seed, n, alpha):
        rng = np.random.default_rng(seed)
        cov, form = random_spd(rng, 2 * n), random_form(rng, n)
        interval = gs.nw_interval(GaussianState.centered(cov, form))
        if abs(abs(alpha) - interval.hi) > 1e-6:
            herm, _ = matcore.is_psd_hermitian(gs.uncertainty_matrix(cov, form.omega, alpha))
            assert herm == (alpha in interval)

    @given(seeds, modes)
    def test_invariant_under_form_symplectic_maps(self, seed, n):
        rng = np.random.default_rng(seed)
        cov, form = random_spd(rng, 2 * n), random_form(rng, n)
        s = sympl.darboux_factor(form).s
        g = random_symplectic(rng, n)
        flip = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
        state = GaussianState.centered(cov, form)
        for m in (s @ g @ np.linalg.inv(s), s @ flip @ g @ np.linalg.inv(s)):
            image, report = gs.transform(state, m)
            assert report.m_symplectic or report.m_antisymplectic
            # forward-error floor of the congruence M^{-1} A M^{-T}
            rel = max(1e-9, 4 * np.linalg.cond(m) ** 2 * np.finfo(float).eps)
            assert gs.nw_interval(image).hi == pytest.approx(gs.nw_interval(state).hi, rel=rel)
            assert gs.purity(image) == pytest.approx(gs.purity(state), rel=rel)


class TestPurity:
    def test_minimal(self):
        assert gs.purity(gs.vacuum(3)) == pytest.approx(1.0)

    def test_identity_by_quadrature(self):
        cov = np.identity(4)
        assert gs.purity(GaussianState.centered(cov, Form.standard(2))) == pytest.approx(0.25)
        assert gaussian_square_integral(cov, 40) == pytest.approx(0.25, abs=1e-9)

    @pytest.mark.parametrize("mu", [1.5, 3.0])
    def test_mixed_by_quadrature(self, mu):
        cov = 0.5 * mu * np.identity(4)
        assert gs.purity(GaussianState.centered(cov, Form.standard(2))) == pytest.approx(mu**-2)
        assert gaussian_square_integral(cov, 40) == pytest.approx(mu**-2, abs=1e-9)

    @given(seeds, modes)
    def test_invariant_under_frame_change(self, seed, n):
        rng = np.random.default_rng(seed)
        form = random_form(rng, n)
        state = GaussianState.centered(random_spd(rng, 2 * n), form)
        moved = gs.change_frame(state, sympl.darboux_factor(form), "to_sigma")
        assert gs.purity(moved) == pytest.approx(gs.purity(state), rel=1e-9)


class TestChangeFrame:
    def test_minimal_goes_to_vacuum(self):
        form = random_form(np.random.default_rng(4), 2)
        s = sympl.darboux_factor(form)
        moved = gs.change_frame(GaussianState.centered(0.5 * s.s @ s.s.T, form), s)
        np.testing.assert_allclose(moved.cov, 0.5 * np.identity(4), atol=1e-12)
        assert moved.form.is_standard()

    def test_block_example_with_diagonal_witness(self):
        form = skewed_block_form(2.0)
        witness = sympl.DarbouxMatrix(np.diag([np.sqrt(2), 1 / np.sqrt(2)] * 2), form)
        state = GaussianState.centered(np.diag([2.0, 2.0, 3.0, 3.0]), form)
        moved = gs.change_frame(state, witness)
        np.testing.assert_allclose(
            sympl.symplectic_spectrum(moved.cov, moved.form).values, [np.sqrt(6) / 2, 2 * np.sqrt(6)]
        )

    @given(seeds, modes)
    def test_round_trip_and_spectrum(self, seed, n):
        rng = np.random.default_rng(seed)
        form = random_form(rng, n)
        s = sympl.darboux_factor(form)
        state = GaussianState(rng.standard_normal(2 * n), random_spd(rng, 2 * n), form)
        moved = gs.change_frame(state, s, "to_sigma")
        np.testing.assert_allclose(
            sympl.symplectic_spectrum(moved.cov, moved.form).values,
            sympl.symplectic_spectrum(state.cov, form).values,
            rtol=1e-8,
        )
        back = gs.change_frame(moved, s, "to_omega")
        np.testing.assert_allclose(back.cov, state.cov, atol=1e-9 * np.linalg.norm(state.cov))
        np.testing.assert_allclose(back.mean, state.mean, atol=1e-10)

    def test_form_mismatch(self):
        s = sympl.darboux_factor(skewed_block_form(2.0))
        with pytest.raises(FormMismatch):
            gs.change_frame(gs.vacuum(2), s, "to_sigma")


class TestTransform:
    def test_identity(self):
        image, report = gs.transform(gs.vacuum(2), np.identity(4))
        np.testing.assert_allclose(image.cov, 0.5 * np.identity(4))
        assert report.m_symplectic and report.still_wigner_on_form1 and report.wigner_on_form2
        assert report.induced_form.is_standard()

    def test_symplectic_keeps_wigner(self):
        rng = np.random.default_rng(8)
        m = random_symplectic(rng, 2)
        image, report = gs.transform(GaussianState.centered(np.identity(4), Form.standard(2)), m)
        assert report.m_symplectic and report.still_wigner_on_form1

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
    def test_partial_transpose_of_squeezed_state(self, r):
        p = np.diag([1.0, 1.0, 1.0, -1.0])
        state = GaussianState.centered(squeezed_cov(r), Form.standard(2))
        image, report = gs.transform(state, p)
        assert not report.m_symplectic and not report.m_antisymplectic
        assert not report.still_wigner_on_form1
        # oracle: smallest eigenvalue of cov' + (i/2) J by the Hermitian test
        herm, _ = matcore.is_psd_hermitian(gs.uncertainty_matrix(image.cov, sympmat(2)))
        assert not herm
        assert report.lambda1_image == pytest.approx(np.exp(-2 * r) / 2)

    def test_singular(self):
        with pytest.raises(Singular):
            gs.transform(gs.vacuum(1), np.zeros((2, 2)))

    @given(seeds, modes)
    def test_inverse_restores(self, seed, n):
        rng = np.random.default_rng(seed)
        form = random_form(rng, n)
        state = GaussianState(rng.standard_normal(2 * n), random_spd(rng, 2 * n), form)
        m = np.identity(2 * n) + 0.3 * rng.standard_normal((2 * n, 2 * n))
        image, _ = gs.transform(state, m)
        back, _ = gs.transform(image, np.linalg.inv(m))
        np.testing.assert_allclose(back.cov, state.cov, atol=1e-10 * max(1.0, np.linalg.norm(state.cov)))
        np.testing.assert_allclose(back.mean, state.mean, atol=1e-10)

    def test_involution_meeting_both_conditions(self):
        state = GaussianState.centered(np.diag([1.0, 0.8, 0.7, 1.2]), Form.standard(2))
        image, report = gs.transform(state, np.diag([1.0, 1.0, 1.0, -1.0]))
        assert report.wigner_on_form2
        assert gs.is_wigner(image)[0]
        assert gs.is_wigner(GaussianState.centered(image.cov, report.induced_form))[0]

    @given(seeds)
    def test_involution_conditions_imply_both_classes(self, seed):
        # for an involution with |det| = 1 the two conditions put the image in both classes
        rng = np.random.default_rng(seed)
        p = np.diag([1.0, 1.0, 1.0, -1.0])
        state = GaussianState.centered(random_spd(rng, 4) + 0.5 * np.identity(4), Form.standard(2))
        image, report = gs.transform(state, p)
        if report.wigner_on_form2:
            assert gs.is_wigner(image)[0]
            assert gs.is_wigner(GaussianState.centered(image.cov, report.induced_form))[0]


class TestPPT:
    def test_product_vacuum(self):
        verdict, lam = gs.ppt_check(gs.vacuum(2), 1)
        assert verdict and lam == pytest.approx(0.5)

    @pytest.mark.parametrize("r", [0.0, 0.25, 0.5, 1.0])
    def test_squeezed_against_hermitian(self, r):
        state = GaussianState.centered(squeezed_cov(r), Form.standard(2))
        verdict, lam = gs.ppt_check(state, 1)
        p = gs.partial_transpose_map(2, 1)
        herm, _ = matcore.is_psd_hermitian(gs.uncertainty_matrix(state.cov, p @ sympmat(2) @ p.T))
        assert verdict == herm == (r == 0.0)
        assert lam == pytest.approx(np.exp(-2 * r) / 2)

    def test_bad_split(self):
        with pytest.raises(BadSplit):
            gs.ppt_check(gs.vacuum(2), 2)

    def test_needs_standard_form(self):
        with pytest.raises(FormMismatch):
            gs.ppt_check(GaussianState.centered(np.identity(4), skewed_block_form(2.0)), 1)


class TestClassify:
    def test_identity_on_block_forms(self):
        fj = Form.standard(2)
        assert gs.classify(np.identity(4), fj, skewed_block_form(2.0)) is Region.A7
        assert gs.classify(np.identity(4), fj, skewed_block_form(3.0)) is Region.A5
        assert gs.classify(np.identity(4), skewed_block_form(3.0), fj) is Region.A6

    def test_small(self, form_pair):
        assert gs.classify(0.1 * np.identity(4), *form_pair) is Region.A3

    def test_report_fields(self, form_pair):
        c = gs.classify_report(np.identity(4), *form_pair)
        assert c.interval_form2 == pytest.approx((-1.0, 1.0))

    @given(seeds, st.floats(0.05, 1.0), st.floats(1.0, 20.0))
    def test_monotone_in_scale(self, seed, mu, factor):
        rng = np.random.default_rng(seed)
        f1, f2 = random_form(rng, 2), random_form(rng, 2)
        cov = random_spd(rng, 4)
        small = gs.classify_report(mu * cov, f1, f2)
        big = gs.classify_report(mu * factor * cov, f1, f2)
        for lo, hi in (
            (small.lambda1_form1, big.lambda1_form1),
            (small.lambda1_form2, big.lambda1_form2),
        ):
            assert hi >= 0.5 - 1e-9 or lo < 0.5 - 1e-9

    @pytest.mark.parametrize("label", ["A3", "A5", "A6", "A7"])
    @pytest.mark.parametrize("seed", [0, 7])
    def test_generators_classify_back(self, form_pair, label, seed):
        state = gs.generate_gaussian_region(label, *form_pair, seed=seed)
        assert gs.classify(state.cov, *form_pair).value == label

    @pytest.mark.parametrize("label", ["A3", "A5", "A6", "A7"])
    def test_generators_on_random_forms(self, label):
        rng = np.random.default_rng(11)
        f1, f2 = random_form(rng, 2), random_form(rng, 2)
        assert gs.classify(gs.generate_gaussian_region(label, f1, f2).cov, f1, f2).value == label

    def test_wedge_needs_distinct_forms(self):
        with pytest.raises(FormsCoincide):
            gs.generate_gaussian_region("A5", Form.standard(2), Form.standard(2))

    def test_non_gaussian_label(self, form_pair):
        with pytest.raises(ValueError):
            gs.generate_gaussian_region("A1", *form_pair)


class TestNWCombine:
    @pytest.mark.parametrize("alpha0", [1.1, 1.5])
    def test_same_form_split(self, alpha0):
        jm = sympmat(2)
        out = gs.nw_combine(NWPoint(1 - alpha0, jm), NWPoint(alpha0, jm))
        assert out.alpha == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(out.sigma_matrix, jm, atol=1e-12)

    def test_mixed_form_split(self):
        jm, omega = sympmat(2), skewed_block_form(2.0).omega
        alpha0 = 1.2
        gamma0 = matcore.pfaffian(jm - alpha0 * omega) ** 2
        root = gamma0 ** (1 / 4)
        out = gs.nw_combine(NWPoint(root, (jm - alpha0 * omega) / root), NWPoint(alpha0, omega))
        assert out.alpha == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(out.sigma_matrix, jm, atol=1e-12)

    def test_zero_weight(self):
        out = gs.nw_combine(NWPoint(1.0, sympmat(2)), NWPoint(0.0, skewed_block_form(2.0).omega))
        assert out.alpha == pytest.approx(1.0)

    def test_degenerate(self):
        jm = sympmat(1)
        with pytest.raises(DegenerateCombination):
            gs.nw_combine(NWPoint(1.0, jm), NWPoint(1.0, -jm))

    @given(seeds, st.floats(0.1, 3.0), st.floats(0.1, 3.0))
    def test_gamma_is_positive_root(self, seed, a, b):
        rng = np.random.default_rng(seed)
        s1, s2 = random_form(rng, 2).omega, random_form(rng, 2).omega
        total = a * s1 + b * s2
        if abs(np.linalg.det(total)) < 1e-6:
            return
        out = gs.nw_combine(NWPoint(a, s1), NWPoint(b, s2))
        assert out.alpha > 0
        assert out.alpha == pytest.approx(abs(np.linalg.det(total)) ** 0.25, rel=1e-9)
        np.testing.assert_allclose(out.alpha * out.sigma_matrix, total, atol=1e-10 * np.linalg.norm(total))
