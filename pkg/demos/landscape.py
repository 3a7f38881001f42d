"""Members of every landscape region for the forms J and a skewed block form.

A region records on which of the two forms a phase-space function is a
Wigner function, together with whether it is a probability density.  Gaussians cover A3 and A5 to A7.  The remaining
regions need non-Gaussian functions built from Fock states.
"""

import numpy as np

from sympwig import gauss_states as gs
from sympwig import sympl
from sympwig.polygauss import generate_nongaussian_region, grid_min, validate_certificate
from sympwig.sympl import Form

first = Form.standard(2)
second = sympl.make_form(sympl.block_form_matrix([2.0, 0.5]))

for label in ("A3", "A5", "A6", "A7"):
    state = gs.generate_gaussian_region(label, first, second)
    report = gs.classify_report(state.cov, first, second)
    print(
        f"{label}: lambda1 on J = {report.lambda1_form1:.4f}, "
        f"on the skewed form = {report.lambda1_form2:.4f} -> {report.region.value}"
    )

for label in ("A1", "A2", "A4"):
    f, cert = generate_nongaussian_region(label, first, second)
    checks = validate_certificate(f, cert, first, second)
    value, _ = grid_min(f, 4.0, 10)
    line = f"{label}: f = {cert.negative_value:.3e} at {np.round(cert.negative_point, 3)}"
    if cert.witness_overlap is not None:
        line += f", witness overlap = {cert.witness_overlap:.3e}"
    print(line)
    print(f"    grid minimum {value:.3e}, all certificate checks pass: {all(checks.values())}")
