# Splitting a pair's length across its shortest paths.
#
# When a pair has several shortest paths, its contribution to the edge
# scores can be shared between them.  Better sharing lowers C_max and
# so raises the bound n / C_max.

import numpy as np

from cgsbound import Graph, apsp, algebraic_connectivity, lp_oracle_small, optimize_strategy
from cgsbound.scores import scores_single_path, scores_uniform
from cgsbound.strategy import strategy_from_pair_flows, strategy_scores, uniform_strategy

# Four-cycle: the two antipodal pairs each have two routes.
c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)], name="C4")
ap = apsp(c4)
print("single path:", scores_single_path(c4, ap).scores)
print("uniform    :", scores_uniform(c4, ap).scores)

# Route both antipodal pairs through edge (1, 2) instead.  A strategy is
# a unit flow per pair on that pair's shortest-path DAG.
flows = uniform_strategy(c4, ap).pair_flows()
flows[(0, 2)] = {(0, 1): 1.0, (1, 2): 1.0}
flows[(1, 3)] = {(1, 2): 1.0, (2, 3): 1.0}
lopsided = strategy_from_pair_flows(c4, ap, flows)
print("lopsided   :", strategy_scores(c4, ap, lopsided).scores)

# A 4x4 grid has many tied shortest paths, so the choice matters more.
k = 4
edges = [(r * k + c, r * k + c + 1) for r in range(k) for c in range(k - 1)]
edges += [(r * k + c, (r + 1) * k + c) for r in range(k - 1) for c in range(k)]
grid = Graph.from_edges(k * k, edges, name="grid4")
ap = apsp(grid)

single = scores_single_path(grid, ap).c_max
uniform = scores_uniform(grid, ap).c_max
res = optimize_strategy(grid, ap)
exact = lp_oracle_small(grid, ap)
print(f"\ngrid4 C_max: single {single:g}, uniform {uniform:.4f}, optimized {res.c_max:.4f}, LP optimum {exact:.4f}")
print(f"optimizer certificate: optimum >= {res.dual_bound:.4f} (gap {res.relative_gap:.2%}), {res.iterations} passes")
print(f"bounds: {grid.n / single:.4f} <= {grid.n / uniform:.4f} <= {res.bound:.4f} <= lambda2 = {algebraic_connectivity(grid):.4f}")

# edges tied at C_max under the optimized flow
top = np.argsort(res.scores.scores)[::-1][:4]
print("most loaded edges:", [grid.edges[i] for i in top])
