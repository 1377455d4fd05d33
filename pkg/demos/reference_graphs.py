# Lower bounds on lambda_2 for a few textbook graphs.
#
# For each graph we print the exact algebraic connectivity next to the
# diameter-based bounds and the path-load bound n / C_max.

import numpy as np

from cgsbound import apsp, compute_report, generate, laplacian, eigen_lambda2, scores_single_path

graphs = [
    generate("complete", n=10),
    generate("path", n=10),
    generate("cycle", n=9),
    generate("star", n=10),
    generate("petersen"),
]

print(f"{'graph':<11}{'lambda2':>10}{'mohar':>10}{'lu':>10}{'n/C_max':>10}")
for g in graphs:
    r = compute_report(g, strategies=["single_path"])
    print(f"{g.name:<11}{r.lambda2:>10.4f}{r.mohar_bound:>10.4f}{r.lu_bound:>10.4f}{r.cgs_single_path_bound:>10.4f}")

# On the complete graph every pair is its own edge, so every score is 1
# and the bound n is exact.  The path is the other extreme: the middle
# edge carries every pair that straddles it.
path = generate("path", n=10)
s = scores_single_path(path, apsp(path))
print("\npath scores by edge:", s.scores.astype(int))
print("busiest edge:", path.edges[s.argmax_edge], "C_max =", s.c_max)

# The score sum is the sum of squared distances over all pairs,
# one line of numpy away from the distance matrix.
D = apsp(path).dist_matrix
print("sum of scores", s.scores.sum(), "== sum of d^2 over pairs", (np.triu(D) ** 2).sum())

# lambda_2 itself comes from a cyclic Jacobi eigensolver on the Laplacian
sp = eigen_lambda2(laplacian(generate("petersen")))
print("\npetersen spectrum:", np.round(sp.eigenvalues, 10) + 0.0)
