"""Fock-state Wigner functions as exact polynomial-times-Gaussian objects.

The first excited state has a negative dip of -1/pi at the origin.
Smoothing it with the vacuum Gaussian gives the nonnegative Husimi function,
and the sampled KLM matrix tells which Planck constants are compatible with it.
"""

import numpy as np

from sympwig.polygauss import convolve, fock_wigner, grid_min, klm_check, overlap, vacuum_pg
from sympwig.sympl import sympmat

w1 = fock_wigner(1)
print("W_1 polynomial factor:", w1.terms[0].poly)
print("W_1(0) =", w1(np.zeros(2)), " -1/pi =", -1 / np.pi)
print("integral:", w1.integral())
print("2 pi <W_1, W_1> =", 2 * np.pi * overlap(w1, w1))
print("<W_0, W_1> =", overlap(fock_wigner(0), w1))

# a larger Planck constant stretches the state and halves the dip
print("W_1(0) at alpha = 2:", fock_wigner(1, 2.0)(np.zeros(2)))

husimi = convolve(vacuum_pg(1), w1)
value, point = grid_min(husimi, 4.0, 32)
print(f"minimum of the smoothed function: {value:.3e} at {point}")

# KLM positivity: holds at the physical Planck constant, fails well above it
for alpha in (1.0, 1.5, 3.0):
    report = klm_check(w1, alpha, sympmat(1), points=128)
    print(f"alpha = {alpha}: KLM verdict {report.verdict}, min eigenvalue {report.min_eig:.3e}")
