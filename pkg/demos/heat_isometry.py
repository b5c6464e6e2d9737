"""Heat transform on one lambda slice: apply the semigroup, extend holomorphically and
compare the weighted Bergman norm with the L^2 norm of the input.

    python3 demos/heat_isometry.py
"""

import numpy as np

from hmh.harness import random_slice
from hmh.twisted_transforms import bergman_norm, heat_multiplier_apply

rng = np.random.default_rng(3)
for lam in (0.7, -1.3, 2.0):
    f = random_slice(lam, 1, 3, rng)
    print(f"lambda = {lam:+.1f}   ||f||^2 = {f.norm_sq:.6f}")
    for t in (0.2, 0.5, 1.0):
        g = heat_multiplier_apply(f, t)
        # the semigroup shrinks the L^2 norm; the Bergman weight restores it
        print(f"    t = {t:.1f}   ||e^-tL f||^2 = {g.norm_sq:.6f}   Bergman norm^2 = {bergman_norm(g, t):.6f}")
