# How tight are the bounds on random graphs?
#
# Sample connected G(n, p) graphs and compare every lower bound with
# lambda_2.  The ratio bound / lambda_2 is at most 1 by construction.

import numpy as np

from cgsbound import check_report, compute_report, generate

rng = np.random.default_rng(7)
rows = []
for trial in range(30):
    n = int(rng.integers(8, 25))
    p = float(rng.uniform(0.15, 0.6))
    g = generate("erdos_renyi", n=n, p=p, seed=trial)
    r = compute_report(g)
    assert not check_report(r)
    rows.append([r.mohar_bound, r.lu_bound, r.cgs_single_path_bound, r.cgs_uniform_bound,
                 r.cgs_optimized_bound] / np.float64(r.lambda2))

ratio = np.array(rows)
names = ["mohar", "lu", "cgs single", "cgs uniform", "cgs optimized"]
print(f"{'bound':<15}{'median':>9}{'min':>9}{'max':>9}   (bound / lambda2 over {len(rows)} graphs)")
for name, col in zip(names, ratio.T):
    print(f"{name:<15}{np.median(col):>9.3f}{col.min():>9.3f}{col.max():>9.3f}")

# the optimized strategy never does worse than the two fixed ones
print("\noptimized >= uniform everywhere:", bool(np.all(ratio[:, 4] >= ratio[:, 3] * (1 - 1e-6))))
