"""Plancherel and the complexified-representation norm for one random band-limited
function on the motion group with n = d = 1.

    python3 demos/plancherel_paley_wiener.py
"""

from hmh.harness import RunConfig, make_test_function
from hmh.spectral_identities import (ComplexGroupPoint, complexified_rep_norm, paley_wiener_lhs,
                                     plancherel_check)

cfg = RunConfig(M_trunc=2, lambda_nodes=3).validate()
f = make_test_function(cfg, "random_band", 0)

rep = plancherel_check(f)
print(f"||f||^2 = {rep.lhs.real:.12f}   Fourier side = {rep.rhs.real:.12f}")

print("\n   H      s     orbit integral      rep. norm")
for H in (0.0, 0.1, 0.25):
    for s in (0.0, 0.1):
        p = ComplexGroupPoint([0.2j], [0.0], 0.3 + 1j * s, [0.7], [H])
        print(f"  {H:.2f}  {s:.2f}   {paley_wiener_lhs(f, p):14.10f}   {complexified_rep_norm(f, p):14.10f}")
