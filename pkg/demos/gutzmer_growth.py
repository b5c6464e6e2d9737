"""How the orbit norm of a holomorphic extension grows with the imaginary part,
checked against the coefficient series at each radius.

    python3 demos/gutzmer_growth.py
"""

import numpy as np

from hmh.harness import random_slice
from hmh.spectral_identities import gutzmer_lhs, gutzmer_rhs

rng = np.random.default_rng(11)
f = random_slice(1.0, 1, 3, rng)
print(" radius      orbit quadrature        series        rel. diff")
for rad in np.linspace(0.0, 0.6, 7):
    y, v = [rad * np.cos(0.4)], [rad * np.sin(0.4)]
    a, b = gutzmer_lhs(f, y, v), gutzmer_rhs(f, y, v)
    print(f"  {rad:.2f}   {a:18.12f}   {b:18.12f}   {abs(a - b) / b:.1e}")
