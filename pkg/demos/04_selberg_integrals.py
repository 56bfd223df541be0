"""Plain and Cesaro-weighted Selberg integrals of the balanced d_3.

d_3 minus its quadratic-in-log n mean is the balanced part; its short-interval
sums fluctuate, and the weighted integral stays below the plain one plus the
h^3 sup^2 correction.
"""

from gallagher.arith import balance, sieve_dk
from gallagher.meansquare import SelbergWindow, selberg_integral, selberg_modified
from gallagher.verify import check_cl_selberg

N = 10_000
d3 = sieve_dk(3, 3 * N)
bal = balance(d3, 2)
print("d_3 at 1..10:", [int(v) for v in d3.values[:10]])

print("\n   h        plain J       weighted J    ratio")
for h in (5, 10, 50, 100):
    win = SelbergWindow(N, h)
    rep = check_cl_selberg(bal, win)
    print(f"{h:4d}  {selberg_integral(bal, win):13.6e}  {selberg_modified(bal, win):13.6e}  "
          f"{rep.ratio:.4f}")
