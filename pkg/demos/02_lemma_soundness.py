"""Random exponential sums against the windowed mean-square bounds.

A single frequency gives the ratio 3 theta (triangle weights) or 2 theta
(sharp window); random sums land well below the explicit constant. The
table shows how much room each constant leaves.
"""

from gallagher.kernels import WindowParams, explicit_constant
from gallagher.sums import ExponentialSum
from gallagher.verify import check_gallagher_original, check_lemma, lemma_suite

one = ExponentialSum.from_terms([0.3], [1.0])
for theta in (0.25, 0.5):
    w = WindowParams(10.0, theta)
    print(f"theta={theta}: single-term ratios {check_lemma(one, w).ratio:.6f} (3 theta), "
          f"{check_gallagher_original(one, w).ratio:.6f} (2 theta)")

print("\nineq        theta  max ratio  constant   violations")
for ineq, shape in (("star-tilde", "cesaro"), ("star", "rectangular")):
    for theta in (0.1, 0.5, 0.9):
        reps = lemma_suite(ineq, [theta], 300, seed=1)
        worst = max(r.ratio for r in reps)
        bad = sum(not r.passed for r in reps)
        print(f"{ineq:10s}  {theta:5.2f}  {worst:9.4f}  {explicit_constant(theta, shape):9.4f}  {bad}")
