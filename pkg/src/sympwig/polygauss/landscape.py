r"""Non-Gaussian members of the regions A1, A2 and A4.

Gaussians only reach the density regions (A3, A5, A6, A7).  The other
three need functions that go negative somewhere:

* ``A1`` (Wigner on form 1 only, not a density): a mixture
  :math:`p\,h_1 + (1-p)\,h_5` of a Fock-1 Wigner function on form 1 and a
  Gaussian that is Wigner on form 1 but not on form 2.  A witness ``g2``,
  Wigner on form 2, has negative overlap with the mixture, which rules out
  membership of form 2's class.
* ``A2``: the same with the forms swapped.
* ``A4`` (Wigner on both, not a density): a Gaussian convolved with a Fock
  state at a Planck constant :math:`\alpha_0 > 1`, arranged so that both
  convolutions are Wigner-class by the combination rule of
  :func:`sympwig.gauss_states.nw_combine`.
"""

from dataclasses import dataclass, field

import numpy as np

from .. import sympl
from ..errors import SearchExhausted
from ..gauss_states import (
    GaussianState,
    NWPoint,
    Region,
    generate_gaussian_region,
    nw_combine,
    require_distinct,
)
from ..matcore import pfaffian
from ..sympl import Form, darboux_factor, sympmat
from .core import (
    PolyGauss,
    change_frame_pg,
    convolve,
    gaussian_pg,
    overlap,
    translate,
)
from .fock import fock_product
from .grid import grid_min
from .klm import klm_check

NEGATIVITY_MARGIN = 1e-10


@dataclass(frozen=True, eq=False)
class RegionCertificate:
    """Evidence that a generated function lies in a given region.

    Attributes:
        region (Region): the requested label
        negative_point (array): a point where the function is negative
        negative_value (float): the function value there
        witness (PolyGauss): for A1/A2, a Wigner function of the excluded
            form whose overlap with the result is negative
        witness_overlap (float): that overlap
        weights (tuple): mixing weights of ``components``
        components (tuple): the Wigner-class pieces of the decomposition
        details (dict): construction data (spectral values, decompositions)
    """

    region: Region
    negative_point: np.ndarray
    negative_value: float
    witness: PolyGauss = None
    witness_overlap: float = None
    weights: tuple = ()
    components: tuple = ()
    details: dict = field(default_factory=dict)


def _first_mode_fock(n, m=1, planck_alpha=1.0):
    return fock_product((m,) + (0,) * (n - 1), planck_alpha)


def _mixture_region(label, first, second, seed):
    """A1 when ``first`` is form 1; A2 when the forms are passed swapped."""
    n = first.n
    fock = _first_mode_fock(n)
    h1 = change_frame_pg(fock, darboux_factor(first), "to_omega")
    h5_state = generate_gaussian_region(Region.A5, first, second, seed)
    h5 = gaussian_pg(h5_state)
    # a Gaussian witness can never work: two Gaussians overlap positively.
    # Fock-1 placed in the Williamson frame of h5 on the second form does,
    # because h5 violates the uncertainty bound there.
    frame = sympl.williamson(h5_state.cov, second)
    g2 = change_frame_pg(fock, frame.s, "to_omega")
    b = overlap(h5, g2)
    if not b < -NEGATIVITY_MARGIN:
        raise SearchExhausted("witness overlap is not negative", {"overlap": b})
    origin = np.zeros(2 * n)
    h1_min = float(h1(origin))
    a = overlap(h1, g2)
    if a <= 0:
        point, shifted = origin, h1
        odds = 2.0 * float(h5(point)) / abs(h1_min)
    else:
        # move h1's negative dip into the far tail of h5, where h5 is tiny
        bound = 0.5 * (2 * np.pi) ** n * abs(b * h1_min)
        direction = np.zeros(2 * n)
        direction[0] = 1.0
        t = 0.0
        while float(h5(t * direction)) >= bound:
            t += 0.5
            if t > 1e3:
                raise SearchExhausted("no tail point found for the translation", {"t": t})
        point = t * direction
        shifted = translate(h1, point)
        a = overlap(shifted, g2)
        low = float(h5(point)) / abs(float(shifted(point)))
        odds = np.sqrt(low * abs(b) / a) if a > 0 else 2.0 * low
    p = odds / (1.0 + odds)
    f = p * shifted + (1.0 - p) * h5
    f = f.with_form(first)
    value = float(f(point))
    witness_overlap = overlap(f, g2)
    details = {
        "gaussian_cov": h5_state.cov,
        "lambda1_first": sympl.symplectic_spectrum(h5_state.cov, first).lambda1,
        "lambda1_second": sympl.symplectic_spectrum(h5_state.cov, second).lambda1,
        "witness_darboux": frame.s.s,
        "translation": point,
        "fock_overlap": a,
        "gaussian_overlap": b,
    }
    return f, RegionCertificate(
        region=Region(label),
        negative_point=point,
        negative_value=value,
        witness=g2,
        witness_overlap=witness_overlap,
        weights=(p, 1.0 - p),
        components=(shifted, h5),
        details=details,
    )


def _gamma(omega, alpha):
    """``det(J - alpha * Omega)`` through the Pfaffian, hence never negative."""
    n = omega.shape[0] // 2
    return pfaffian(sympmat(n) - alpha * omega) ** 2


def choose_alpha0(omega, lo=1.0 + 1e-3, hi=1.5, steps=500):
    r"""Planck constant :math:`\alpha_0 \in (1, 1.5]` for the A4 construction.

    Needs :math:`\gamma_0 = \det(J - \alpha_0\Omega) > 0`.  Among admissible
    values the one with the smallest required ratio
    :math:`\gamma_0^{1/2n}/(\alpha_0 - 1)` is taken; staying below 2 keeps
    the Gaussian narrow enough in the Fock mode for the convolution to dip
    below zero.
    """
    n = omega.shape[0] // 2
    best = None
    for alpha in np.linspace(lo, hi, steps):
        gamma = _gamma(omega, alpha)
        if gamma <= 1e-9:
            continue
        ratio = gamma ** (1.0 / (2 * n)) / (alpha - 1.0)
        if best is None or ratio < best[2]:
            best = (alpha, gamma, ratio)
    if best is None:
        raise SearchExhausted("det(J - alpha Omega) vanishes on the whole scan", {"lo": lo, "hi": hi})
    return best


def _both_forms_region(f1, f2, seed):
    n = f1.n
    s1 = darboux_factor(f1)
    s1_inv = s1.inv
    omega = s1_inv @ f2.omega @ s1_inv.T
    eta1 = Form(0.5 * (omega - omega.T))
    alpha0, gamma0, ratio = choose_alpha0(eta1.omega)
    root = gamma0 ** (1.0 / (2 * n))
    sigma2 = (sympmat(n) - alpha0 * eta1.omega) / root
    eta2 = Form(0.5 * (sigma2 - sigma2.T))
    cov = sympl.find_ratio_matrix(eta2, eta1, max(1.0, ratio * (1 + 1e-6)), seed=seed)
    cov = cov * (alpha0 - 1.0) / sympl.symplectic_spectrum(cov, eta1).lambda1
    lam_eta1 = sympl.symplectic_spectrum(cov, eta1).lambda1
    lam_eta2 = sympl.symplectic_spectrum(cov, eta2).lambda1
    frame = sympl.williamson(cov, eta1)
    gaussian = gaussian_pg_cov(cov)
    attempts = []
    for m in (1, 2, 3):
        fock = change_frame_pg(_first_mode_fock(n, m, alpha0), frame.s, "to_omega")
        g4 = convolve(gaussian, fock).with_form(Form.standard(n))
        f = change_frame_pg(g4, s1, "to_omega")
        origin = np.zeros(2 * n)
        value, point = float(f(origin)), origin
        if not value < -NEGATIVITY_MARGIN:
            value, point = grid_min(f, 4.0, 12 if n > 1 else 48)
        attempts.append((m, value))
        if value < -NEGATIVITY_MARGIN:
            break
    else:
        raise SearchExhausted("no Fock index gave a negative convolution", {"attempts": attempts})
    jm = sympmat(n)
    first = (NWPoint(1.0 - alpha0, jm), NWPoint(alpha0, jm))
    second = (NWPoint(root, sigma2), NWPoint(alpha0, eta1.omega))
    details = {
        "alpha0": alpha0,
        "gamma0": gamma0,
        "sigma2": sigma2,
        "eta1": eta1.omega,
        "cov_standard_frame": cov,
        "lambda1_eta1": lam_eta1,
        "lambda1_eta2": lam_eta2,
        "fock_index": m,
        "decomposition_same_form": first + (nw_combine(*first),),
        "decomposition_mixed_forms": second + (nw_combine(*second),),
        "darboux_form1": s1.s,
    }
    return f.with_form(f1), RegionCertificate(
        region=Region.A4,
        negative_point=np.asarray(point),
        negative_value=float(f(point)),
        components=(gaussian, fock),
        details=details,
    )


def gaussian_pg_cov(cov):
    """Centered Gaussian with covariance ``cov`` on the standard form."""
    n = cov.shape[0] // 2
    return gaussian_pg(GaussianState.centered(cov, Form.standard(n)))


def generate_nongaussian_region(label, f1, f2, seed=0):
    """A non-Gaussian function in region ``label`` with a certificate.

    Args:
        label: ``"A1"``, ``"A2"`` or ``"A4"``
        f1, f2 (Form): distinct forms
        seed (int): seed for the underlying searches

    Returns:
        tuple[PolyGauss, RegionCertificate]
    """
    label = Region(label)
    require_distinct(f1, f2)
    if label is Region.A1:
        return _mixture_region(label, f1, f2, seed)
    if label is Region.A2:
        return _mixture_region(label, f2, f1, seed)
    if label is Region.A4:
        return _both_forms_region(f1, f2, seed)
    raise ValueError(f"{label.value} is a Gaussian region; use generate_gaussian_region")


def _pure(g, tol=1e-8):
    return abs((2 * np.pi) ** g.n * overlap(g, g) - 1.0) <= tol


def _agree(f, g, points):
    scale = max(1.0, float(np.max(np.abs(f(points)))))
    return float(np.max(np.abs(f(points) - g(points)))) <= 1e-10 * scale


def validate_certificate(f, cert, f1, f2, tol=1e-9, seed=0):
    """Recheck every claim of a certificate from scratch.

    Returns:
        dict[str, bool]: one entry per check
    """
    n = f.n
    rng = np.random.default_rng(seed)
    probe = rng.standard_normal((64, 2 * n)) * 2.0
    checks = {}
    value = float(f(cert.negative_point))
    checks["negative_somewhere"] = value < -NEGATIVITY_MARGIN
    checks["integrates_to_one"] = abs(f.integral() - 1.0) <= 1e-8
    if cert.region in (Region.A1, Region.A2):
        first, second = (f1, f2) if cert.region is Region.A1 else (f2, f1)
        fock, gauss = cert.components
        p, q = cert.weights
        checks["weights_in_open_unit_interval"] = 0 < p < 1 and 0 < q < 1 and abs(p + q - 1) <= 1e-12
        checks["decomposition_reproduces_function"] = _agree(f, p * fock + q * gauss, probe)
        checks["fock_component_is_pure"] = _pure(fock)
        checks["fock_component_on_first_form"] = fock.form is not None and fock.form.close_to(first)
        lam_first = sympl.symplectic_spectrum(gauss.terms[0].shape, first).lambda1
        lam_second = sympl.symplectic_spectrum(gauss.terms[0].shape, second).lambda1
        checks["gaussian_component_wigner_on_first"] = lam_first >= 0.5 - tol
        checks["gaussian_component_not_wigner_on_second"] = lam_second < 0.5 - tol
        s = cert.details["witness_darboux"]
        checks["witness_frame_is_darboux_for_second"] = (
            sympl.DarbouxMatrix.residual_of(s, second.omega) <= tol * max(1.0, np.linalg.norm(s) ** 2)
        )
        checks["witness_is_pure"] = _pure(cert.witness)
        checks["witness_overlap_negative"] = overlap(f, cert.witness) < -NEGATIVITY_MARGIN
    elif cert.region is Region.A4:
        d = cert.details
        alpha0 = d["alpha0"]
        jm = sympmat(n)
        for key in ("decomposition_same_form", "decomposition_mixed_forms"):
            a, b, _ = d[key]
            combined = nw_combine(a, b)
            checks[key] = (
                abs(combined.alpha - 1.0) <= 1e-12
                and np.max(np.abs(combined.sigma_matrix - jm)) <= 1e-12
            )
        eta1 = Form(d["eta1"])
        eta2 = sympl.make_form(d["sigma2"])
        lam1 = sympl.symplectic_spectrum(d["cov_standard_frame"], eta1).lambda1
        lam2 = sympl.symplectic_spectrum(d["cov_standard_frame"], eta2).lambda1
        root = d["gamma0"] ** (1.0 / (2 * n))
        checks["alpha0_above_one"] = alpha0 > 1.0
        checks["gamma0_positive"] = d["gamma0"] > 0 and abs(_gamma(eta1.omega, alpha0) - d["gamma0"]) <= 1e-9
        checks["gaussian_eta1_eigenvalue"] = abs(lam1 - (alpha0 - 1.0)) <= tol * max(1.0, alpha0)
        checks["gaussian_eta2_eigenvalue"] = lam2 >= root - tol
        s1 = d["darboux_form1"]
        recon = change_frame_pg(
            convolve(*cert.components).with_form(Form.standard(n)),
            sympl.DarbouxMatrix(s1, f1),
            "to_omega",
        )
        checks["convolution_reproduces_function"] = _agree(f, recon, probe)
        for name, form in (("klm_form1", f1), ("klm_form2", f2)):
            checks[name] = klm_check(f, 1.0, form.omega, points=64, seed=seed).verdict
    return checks
