"""Symplectic spectra of one covariance measured against two different forms.

A covariance matrix has one set of symplectic eigenvalues per symplectic
form.  Here we compare the standard form J with a block form that stretches
the first mode by theta and squeezes the second by 1/theta, then push the
ratio of the smallest eigenvalues as far as we like.
"""

import numpy as np

from sympwig import sympl
from sympwig.sympl import Form

np.set_printoptions(precision=6, suppress=True)

standard = Form.standard(2)
theta = 2.0
skewed = sympl.make_form(sympl.block_form_matrix([theta, 1 / theta]))
print("skewed form matrix:\n", skewed.omega)

# a diagonal covariance: both eigenvalues on J equal sqrt(ab)
a, b = 2.0, 3.0
cov = np.diag([a, a, b, b])
print("spectrum on J:      ", sympl.symplectic_spectrum(cov, standard).values)
print("spectrum on skewed: ", sympl.symplectic_spectrum(cov, skewed).values)
print("expected:           ", np.sqrt(a * b) / theta, np.sqrt(a * b) * theta)

# Williamson factorization on the skewed form: S^{-1} A S^{-T} is diagonal
w = sympl.williamson(cov, skewed)
s_inv = np.linalg.inv(w.s.s)
print("Williamson invariants:", w.d)
print("diagonal residual:    ", np.linalg.norm(s_inv @ cov @ s_inv.T - w.diagonal))
print("Darboux residual:     ", w.s.residual())

# the quotient of the smallest eigenvalues is unbounded
for k in (2.0, 10.0, 100.0):
    found = sympl.find_ratio_matrix(standard, skewed, k)
    lam_j = sympl.symplectic_spectrum(found, standard).lambda1
    lam_s = sympl.symplectic_spectrum(found, skewed).lambda1
    print(f"target ratio {k:6.1f}: achieved {lam_j / lam_s:10.3f}")
