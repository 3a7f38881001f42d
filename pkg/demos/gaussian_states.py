"""Gaussian states: Wigner membership, NW intervals, purity and entanglement.

A Gaussian is the Wigner function of a quantum state on a form exactly when
its smallest symplectic eigenvalue on that form is at least 1/2.  The same
number fixes the Narcowich-Wigner interval, and the partial-transpose map
turns it into an entanglement test.
"""

import numpy as np

from sympwig import gauss_states as gs
from sympwig import matcore, sympl
from sympwig.gauss_states import GaussianState
from sympwig.sympl import Form

skewed = sympl.make_form(sympl.block_form_matrix([2.0, 0.5]))

for scale in (0.3, 0.6, 1.2):
    state = GaussianState.centered(scale * np.identity(4), skewed)
    verdict, lam1 = gs.is_wigner(state)
    interval = gs.nw_interval(state)
    print(
        f"cov = {scale} I: lambda1 = {lam1:.4f}, Wigner on skewed form = {verdict}, "
        f"NW interval = [{interval.lo:.4f}, {interval.hi:.4f}], purity = {gs.purity(state):.4f}"
    )

# the spectral verdict agrees with the Hermitian matrix test A + (i/2) Omega >= 0
cov = 0.6 * np.identity(4)
herm, min_eig = matcore.is_psd_hermitian(gs.uncertainty_matrix(cov, skewed.omega))
print("Hermitian test on 0.6 I:", herm, f"(smallest eigenvalue {min_eig:.4f})")

# two-mode squeezing: pure on J, but entangled once r > 0
for r in (0.0, 0.5, 1.0):
    state = GaussianState.centered(gs.two_mode_squeezed_cov(r), Form.standard(2))
    separable, lam_ppt = gs.ppt_check(state, 1)
    print(f"r = {r}: passes PPT = {separable}, lambda1 after transpose = {lam_ppt:.4f}")

# the partial transpose is neither symplectic nor antisymplectic
p = gs.partial_transpose_map(2, 1)
image, report = gs.transform(GaussianState.centered(np.diag([1.0, 0.8, 0.7, 1.2]), Form.standard(2)), p)
print("P symplectic:", report.m_symplectic, " antisymplectic:", report.m_antisymplectic)
print("image still a Wigner function on J:", report.still_wigner_on_form1)
