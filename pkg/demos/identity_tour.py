"""Evaluate each exact identity on one field and print both sides.

The fields come from the built-in catalog; any mean-zero, rapidly decaying
field works.
"""

import numpy as np

from g3vortex.biot_savart import weighted_velocity_identity_check
from g3vortex.diagnostics import lemma41_identities, lemma51_identities
from g3vortex.grid import GridSpec
from g3vortex.initial import identity_catalog
from g3vortex.norms import interpolation_inequality, weight_interpolation_check
from g3vortex.oseen import eval_oseen_G, operator_L

grid = GridSpec(256, 40.0)
catalog = dict(identity_catalog(grid))
f = catalog["noise0"]

print("weight interpolation (p = 1, 2, 4):",
      [weight_interpolation_check(f, p) for p in (1.0, 2.0, 4.0)])
for theta in (0.1, 0.5, 0.9):
    lhs, rhs = interpolation_inequality(f, theta)
    print(f"interpolation inequality theta={theta}: {lhs:.6e} <= {rhs:.6e}")

lhs, rhs = weighted_velocity_identity_check(f)
print(f"|| |x| grad u ||^2 = {lhs:.15e}\n|| |x| w ||^2 + 2||u||^2 = {rhs:.15e}")

for s in (0.5, 0.75):
    for i, pair in enumerate(lemma41_identities(f, s), 1):
        print(f"fractional identity {i}, s={s}: lhs {pair.lhs:+.12e} rhs {pair.rhs:+.12e} "
              f"rel {pair.rel_error:.1e}")

for i, pair in enumerate(lemma51_identities(f, tau=0.5, alpha1=0.1, epsilon=1e-2), 1):
    print(f"|X|^4 identity {i}: lhs {pair.lhs:+.12e} rhs {pair.rhs:+.12e} rel {pair.rel_error:.1e}")

print("max |L G| =", float(np.abs(operator_L(eval_oseen_G(grid)).values).max()))
