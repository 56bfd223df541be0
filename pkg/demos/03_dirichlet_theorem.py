"""Dirichlet polynomials: mean square against the Cesaro y-integral.

For a single coefficient at n0 the mean square over [-T, T] is 2T, while the
main term is close to 2T/3, so the ratio sits near 3. Random polynomials on
[1, 1000] keep a bounded ratio as T grows.
"""

from gallagher.sums import DirichletPolynomial
from gallagher.verify import check_theorem, theorem_suite

rep = check_theorem(DirichletPolynomial(50, [1.0]), 100.0)
print("single coefficient, T=100:", {k: round(v, 4) for k, v in rep.rhs_terms},
      "lhs", rep.lhs, "ratio", round(rep.ratio, 4))

Ts = (10.0, 100.0, 1000.0)
reps = theorem_suite(Ts, n_max=1000, instances=4, seed=0)
for T in Ts:
    ratios = [r.ratio for r in reps if r.params["T"] == T]
    print(f"T={T:6g}: ratios {', '.join(f'{x:.3f}' for x in ratios)}")
