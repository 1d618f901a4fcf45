"""Even dimensions: the symbol is elementary. Compare the general closed form
with the hand-derived c_2 and c_4 and show how fast they decay."""

import mpmath as mp

from oscsym import c, c_even

mp.mp.prec = 128
print(f"{'t':>6} {'c_2':>22} {'(1-e^-t)/t':>22} {'c_4':>22}")
for t in (0, 0.5, 1, 2, 5, 10, 25):
    tt = mp.mpf(t)
    ref = mp.mpf(1) if t == 0 else -mp.expm1(-tt) / tt
    print(f"{t:>6} {mp.nstr(c_even(1, t, 128), 18):>22} {mp.nstr(ref, 18):>22} "
          f"{mp.nstr(c_even(2, t, 128), 18):>22}")

# t c_d(t) -> 1 for every dimension
for d in (2, 4, 6, 8):
    print(f"d={d}: 100*c_d(100) = {mp.nstr(100 * c(d, 100, 128).value, 15)}")
