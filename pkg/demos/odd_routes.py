"""Odd dimensions: series near the origin, optimally truncated asymptotics far
out. The switch point moves with the requested precision."""

import warnings

from oscsym import c, c_asymptotic
from oscsym.errors import DivergenceFloor
from oscsym.symbol_api import switch_point

for bits in (53, 128, 256):
    print(f"{bits:>4} bits: d=3 switches to asymptotics at t = {switch_point(3, bits)}")

print()
for t in (1, 10, 40, 100, 400):
    ev = c(3, t, 128)
    print(f"c_3({t:>3}) = {ev.value}  err <= {float(ev.err_bound):.1e}  via {ev.route.route}")

# a fixed number of terms stops improving once the terms start growing
print()
with warnings.catch_warnings():
    warnings.simplefilter("ignore", DivergenceFloor)
    exact = c(3, 12, 256).value
    for N in (1, 2, 4, 6, 8, 12, 16):
        approx, _ = c_asymptotic(3, N, 12, 256)
        print(f"N={N:>2}: |c_3(12) - asym_N| = {float(abs(exact - approx)):.3e}")
