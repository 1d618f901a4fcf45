"""Run the identity checks and print the same summary as ``oscsym report``.

The last two lines show two statements that fail as literally written: the
Laplace transform only approaches pi/2 at rate 1/s, and the Bessel remainder
needs a 2^-n on the Bessel term to stay bounded."""

from oscsym import verify_oracles as vo
from oscsym.odd_special import laplace_F

jobs = (vo.plan("ode", 53, dim=3) + vo.plan("pde", 53, dim=2) + vo.plan("recursion", 128)
        + vo.plan("shooting", dim=5) + vo.plan("spectral") + vo.plan("gevrey", 128, dim=3, s=0.5, kmax=12))
for r in vo.run_checks(jobs):
    print(f"{r.check:<10} {'pass' if r.passed else 'FAIL'}  max_residual={r.max_residual:.2e}")

for s in (50, 500, 5000):
    print(f"s={s:>5}: s F(s) - pi/2 = {float(s * laplace_F(s, 128)) - 1.5707963267948966:+.3e}")
for n in (1, 2):
    lit = vo.bessel_bound(n, prec=512)
    norm = vo.bessel_bound(n, prec=512, normalized=True)
    print(f"n={n}: block growth literal {lit.max_residual:.3g}, with 2^-n {norm.max_residual:.3g}")
