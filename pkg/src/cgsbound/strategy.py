"""Path weighting strategies as unit flows on shortest-path DAGs, and their optimisation.

A strategy assigns each unordered pair ``{u, v}`` a unit flow from ``u`` to
``v`` over the arcs of its shortest-path DAG.  Any such flow decomposes into
a convex combination of shortest paths, so it describes a path weighting
without listing the (possibly exponentially many) paths themselves.

All pairs are stored in flat arrays: arc ``i`` belongs to pair
``arc_pair[i]``, runs ``tails[i] -> heads[i]`` and lies on edge
``edge_ids[i]``; the arcs of pair ``k`` occupy ``offsets[k]:offsets[k+1]``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from .errors import CapExceededError, InvalidFlowError
from .graph import Graph
from .paths import ApspResult, enumerate_shortest_paths, pair_dag_arcs
from .scores import EdgeScores, _check_connected, single_path

__all__ = [
    "PairDags",
    "PathStrategy",
    "OptimizeResult",
    "build_pair_dags",
    "uniform_strategy",
    "single_path_strategy",
    "strategy_from_pair_flows",
    "strategy_scores",
    "optimize_strategy",
    "lp_oracle_small",
]

FLOW_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PairDags:
    """Shortest-path DAG of every unordered pair, in flat-array form."""

    n: int
    m: int
    pairs: tuple[tuple[int, int], ...]
    pair_dist: np.ndarray
    offsets: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    edge_ids: np.ndarray
    arc_layer: np.ndarray = field(repr=False)
    arc_pair: np.ndarray = field(repr=False)

    @property
    def num_arcs(self) -> int:
        return len(self.tails)

    def arcs_of(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k + 1])


def build_pair_dags(g: Graph, ap: ApspResult) -> PairDags:
    _check_connected(g, ap)
    pairs, dists, offsets = [], [], [0]
    tails, heads, eids, layers = [], [], [], []
    for u in range(g.n):
        du = ap[u].dist
        for v in range(u + 1, g.n):
            arcs = pair_dag_arcs(ap, u, v)
            pairs.append((u, v))
            dists.append(du[v])
            for a, b in arcs:
                tails.append(a)
                heads.append(b)
                eids.append(g.edge_id(a, b))
                layers.append(du[a])
            offsets.append(len(tails))
    offsets = np.asarray(offsets, dtype=np.int64)
    arc_pair = np.repeat(np.arange(len(pairs)), np.diff(offsets))
    return PairDags(
        g.n,
        g.m,
        tuple(pairs),
        np.asarray(dists, dtype=float),
        offsets,
        np.asarray(tails, dtype=np.int64),
        np.asarray(heads, dtype=np.int64),
        np.asarray(eids, dtype=np.int64),
        np.asarray(layers, dtype=np.int64),
        arc_pair,
    )


@dataclass(frozen=True, eq=False)
class PathStrategy:
    """Arc flows over a :class:`PairDags` skeleton."""

    dags: PairDags
    flow: np.ndarray
    tag: str = "custom"

    def with_flow(self, flow, tag=None) -> "PathStrategy":
        return replace(self, flow=np.asarray(flow, dtype=float), tag=tag or self.tag)

    def conservation_error(self) -> float:
        """Largest violation of unit-flow conservation over all pairs and vertices."""
        d = self.dags
        n = d.n
        k = d.arc_pair
        net = np.zeros(len(d.pairs) * n)
        np.add.at(net, k * n + d.tails, self.flow)
        np.subtract.at(net, k * n + d.heads, self.flow)
        src = np.array([u for u, _ in d.pairs], dtype=np.int64)
        dst = np.array([v for _, v in d.pairs], dtype=np.int64)
        rows = np.arange(len(d.pairs)) * n
        net[rows + src] -= 1.0
        net[rows + dst] += 1.0
        return float(np.abs(net).max(initial=0.0))

    def validate(self, tol: float = FLOW_TOL) -> None:
        if self.flow.shape != (self.dags.num_arcs,):
            raise InvalidFlowError("flow vector does not match the DAG arcs")
        if not np.all(np.isfinite(self.flow)):
            raise InvalidFlowError("flow contains non-finite values")
        lo, hi = self.flow.min(initial=0.0), self.flow.max(initial=0.0)
        if lo < -tol or hi > 1 + tol:
            raise InvalidFlowError(f"flow values must lie in [0, 1], found range [{lo:.3g}, {hi:.3g}]")
        err = self.conservation_error()
        if err > tol:
            raise InvalidFlowError(f"flow conservation violated by {err:.3g} (tolerance {tol:g})")

    def pair_flows(self) -> dict[tuple[int, int], dict[tuple[int, int], float]]:
        d = self.dags
        out = {}
        for k, pair in enumerate(d.pairs):
            sl = d.arcs_of(k)
            out[pair] = {
                (int(a), int(b)): float(f)
                for a, b, f in zip(d.tails[sl], d.heads[sl], self.flow[sl])
            }
        return out

    def to_csv(self, g: Graph | None = None) -> str:
        lab = g.label if g is not None else str
        d = self.dags
        buf = io.StringIO()
        buf.write("u,v,dag_edge_u,dag_edge_v,flow\n")
        for i in range(d.num_arcs):
            u, v = d.pairs[d.arc_pair[i]]
            buf.write(f"{lab(u)},{lab(v)},{lab(int(d.tails[i]))},{lab(int(d.heads[i]))},{self.flow[i]:.12g}\n")
        return buf.getvalue()


def _edge_loads(dags: PairDags, flow: np.ndarray) -> np.ndarray:
    return np.bincount(dags.edge_ids, weights=dags.pair_dist[dags.arc_pair] * flow, minlength=dags.m)


def uniform_strategy(g: Graph, ap: ApspResult, dags: PairDags | None = None) -> PathStrategy:
    """Every shortest path of a pair gets equal weight.

    The arc ``a -> b`` of pair ``(u, v)`` then carries
    ``sigma_u(a) * sigma_v(b) / sigma_u(v)``.
    """
    dags = dags or build_pair_dags(g, ap)
    flow = np.empty(dags.num_arcs)
    for k, (u, v) in enumerate(dags.pairs):
        su, sv, total = ap[u].sigma, ap[v].sigma, ap[u].sigma[v]
        for i in range(dags.offsets[k], dags.offsets[k + 1]):
            flow[i] = su[dags.tails[i]] * sv[dags.heads[i]] / total
    return PathStrategy(dags, flow, "uniform")


def single_path_strategy(g: Graph, ap: ApspResult, dags: PairDags | None = None) -> PathStrategy:
    """All of a pair's weight on the path chosen by :func:`~cgsbound.scores.single_path`."""
    dags = dags or build_pair_dags(g, ap)
    flow = np.zeros(dags.num_arcs)
    for k, (u, v) in enumerate(dags.pairs):
        p = single_path(ap, u, v)
        on_path = set(zip(p, p[1:]))
        for i in range(dags.offsets[k], dags.offsets[k + 1]):
            if (dags.tails[i], dags.heads[i]) in on_path:
                flow[i] = 1.0
    return PathStrategy(dags, flow, "single_path")


def strategy_from_pair_flows(g: Graph, ap: ApspResult, flows, dags: PairDags | None = None,
                             tag: str = "custom") -> PathStrategy:
    """Build a strategy from ``{(u, v): {(a, b): flow}}`` with ``u < v``.

    Arcs not mentioned carry zero flow; arcs outside the pair's DAG raise
    :class:`InvalidFlowError`.
    """
    dags = dags or build_pair_dags(g, ap)
    flow = np.zeros(dags.num_arcs)
    for k, pair in enumerate(dags.pairs):
        given = dict(flows.get(pair, {}))
        for i in range(dags.offsets[k], dags.offsets[k + 1]):
            key = (int(dags.tails[i]), int(dags.heads[i]))
            flow[i] = given.pop(key, 0.0)
        if given:
            raise InvalidFlowError(f"arcs {sorted(given)} are not on a shortest {pair[0]}-{pair[1]} path")
    strat = PathStrategy(dags, flow, tag)
    strat.validate()
    return strat


def strategy_scores(g: Graph, ap: ApspResult, strat: PathStrategy) -> EdgeScores:
    """Extended scores: each pair adds ``dist(u, v) * flow`` to the edges its flow uses."""
    if strat.dags.n != g.n or strat.dags.m != g.m:
        raise ValueError("strategy was built for a different graph")
    strat.validate()
    tag = strat.tag if strat.tag in ("single_path", "uniform", "optimized") else "custom"
    return EdgeScores(_edge_loads(strat.dags, strat.flow), tag)


# ---------------------------------------------------------------------------
# optimisation
# ---------------------------------------------------------------------------

class _DagBatch:
    """Layered index over all pair DAGs for vectorised cheapest/dearest path DP."""

    def __init__(self, dags: PairDags):
        n, num_pairs, A = dags.n, len(dags.pairs), dags.num_arcs
        src = np.array([u for u, _ in dags.pairs], dtype=np.int64)
        dst = np.array([v for _, v in dags.pairs], dtype=np.int64)
        base = np.arange(num_pairs, dtype=np.int64) * n
        keys, inv = np.unique(
            np.concatenate([dags.arc_pair * n + dags.tails, dags.arc_pair * n + dags.heads, base + src, base + dst]),
            return_inverse=True,
        )
        self.num_keys = len(keys)
        self.tail_key = inv[:A]
        self.head_key = inv[A:2 * A]
        self.src_key = inv[2 * A:2 * A + num_pairs]
        self.dst_key = inv[2 * A + num_pairs:]
        depth = int(dags.arc_layer.max(initial=-1)) + 1
        self.layers = [np.flatnonzero(dags.arc_layer == k) for k in range(depth)]

    def extreme_paths(self, arc_cost, usable=None, maximize=False, capacity=None):
        """Cheapest (or dearest) source-sink path of every pair.

        Returns ``(indicator, cost, bottleneck, found)``: a 0/1 arc vector of
        the chosen paths, the per-pair path cost, the smallest ``capacity``
        along each path and whether the pair had a path over ``usable`` arcs.
        Ties go to the smallest arc index.
        """
        pot = np.full(self.num_keys, -np.inf if maximize else np.inf)
        pot[self.src_key] = 0.0
        relax = np.maximum.at if maximize else np.minimum.at
        layers = self.layers if usable is None else [idx[usable[idx]] for idx in self.layers]
        for idx in layers:
            relax(pot, self.head_key[idx], pot[self.tail_key[idx]] + arc_cost[idx])
        via = np.full(self.num_keys, np.iinfo(np.int64).max)
        for idx in layers:
            cand = pot[self.tail_key[idx]] + arc_cost[idx]
            tight = idx[(cand == pot[self.head_key[idx]]) & np.isfinite(cand)]
            np.minimum.at(via, self.head_key[tight], tight)
        indicator = np.zeros(len(arc_cost))
        found = np.isfinite(pot[self.dst_key])
        bottleneck = np.full(len(found), np.inf)
        cur = self.dst_key.copy()
        alive = found & (cur != self.src_key)
        while alive.any():
            arcs = via[cur[alive]]
            indicator[arcs] = 1.0
            if capacity is not None:
                bottleneck[alive] = np.minimum(bottleneck[alive], capacity[arcs])
            cur[alive] = self.tail_key[arcs]
            alive = found & (cur != self.src_key)
        return indicator, pot[self.dst_key], bottleneck, found


def _softmax_potential(loads, sharp):
    z = sharp * loads
    top = z.max()
    return (top + np.log(np.exp(z - top).sum())) / sharp


def _line_search(f, upper=1.0):
    res = minimize_scalar(f, bounds=(0.0, upper), method="bounded", options={"xatol": 1e-10})
    best = min((f(0.0), 0.0), (f(upper), upper), (f(res.x), float(res.x)))
    return best[1]


@dataclass
class OptimizeResult:
    """Outcome of :func:`optimize_strategy`.

    ``dual_bound`` is a certified lower bound on the optimal ``C_max`` over
    all strategies, so ``c_max / dual_bound - 1`` bounds the remaining
    suboptimality.  ``history`` lists ``C_max`` after each accepted pass.
    """

    strategy: PathStrategy
    scores: EdgeScores
    c_max: float
    dual_bound: float
    converged: bool
    iterations: int
    history: list[float]

    @property
    def bound(self) -> float:
        return self.strategy.dags.n / self.c_max

    @property
    def relative_gap(self) -> float:
        return (self.c_max - self.dual_bound) / self.c_max


def optimize_strategy(g: Graph, ap: ApspResult, tol: float = 1e-6, max_iters: int = 300,
                      start: PathStrategy | None = None, sharpness: float = 10.0,
                      max_sharpness: float = 1000.0, growth: float = 1.02,
                      on_pass=None) -> OptimizeResult:
    """Search for a path weighting strategy with small ``C_max``.

    Edge loads are kept as ``loads = sum over pairs of dist * flow``.  Each
    pass works on the smooth surrogate
    ``logsumexp(s * loads / C_max) * C_max / s`` whose sharpness ``s`` grows
    geometrically from ``sharpness`` to ``max_sharpness``; its gradient is a
    probability vector over edges concentrated on the most loaded ones.
    With those gradient weights as edge costs, every pair

    * finds its cheapest DAG path and its dearest path among arcs that
      currently carry flow (both by dynamic programming over the DAG layers);
    * plans to move flow from the dearest to the cheapest path, a Newton
      step on the surrogate capped by the smallest flow on the dearest path.

    All planned moves are scaled by one factor found by line search on the
    surrogate, which keeps every iterate a feasible unit flow.  The best
    ``C_max`` seen, counting the single path strategy, is the incumbent; a pass that does not improve on it is
    not accepted, so the reported ``C_max`` never increases.

    The gradient weights also give a lower bound on the optimum: for any
    probability vector ``y`` over edges, no strategy beats
    ``sum over pairs of dist * (cheapest path cost under y)``.  The run
    stops as converged once the incumbent is within ``tol`` (relative) of
    the best such bound, or once the sharpness is at its cap and a pass
    improves the incumbent by less than ``tol``.  Otherwise it stops after
    ``max_iters`` passes with ``converged=False``.

    ``on_pass(iteration, strategy)``, if given, is called with every
    accepted incumbent.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dags = start.dags if start is not None else build_pair_dags(g, ap)
    strat = start if start is not None else uniform_strategy(g, ap, dags)
    strat.validate()
    flow = strat.flow.copy()
    loads = _edge_loads(dags, flow)
    best_flow, best_loads = flow.copy(), loads.copy()
    best_c = float(loads.max())
    if start is None:
        # the search runs from the uniform flow, but never reports worse than single paths
        single = single_path_strategy(g, ap, dags)
        single_loads = _edge_loads(dags, single.flow)
        if single_loads.max() < best_c:
            best_flow, best_loads, best_c = single.flow.copy(), single_loads, float(single_loads.max())
    history = [best_c]
    dual = 0.0
    converged = False
    it = 0
    if dags.num_arcs == 0 or np.all(np.diff(dags.offsets) == dags.pair_dist):
        # every pair has exactly one shortest path: nothing to choose
        return OptimizeResult(PathStrategy(dags, best_flow, "optimized"), EdgeScores(best_loads, "optimized"),
                              best_c, best_c, True, 0, history)
    batch = _DagBatch(dags)
    arc_weight = dags.pair_dist[dags.arc_pair]
    sharp = sharpness
    for it in range(1, max_iters + 1):
        scale = float(loads.max())
        k = sharp / scale
        e = np.exp(k * (loads - scale))
        grad = e / e.sum()
        arc_cost = grad[dags.edge_ids]
        cheap, cheap_cost, _, _ = batch.extreme_paths(arc_cost)
        dual = max(dual, float(np.dot(dags.pair_dist, cheap_cost)))
        dear, dear_cost, room, found = batch.extreme_paths(
            arc_cost, usable=flow > 1e-14, maximize=True, capacity=flow)
        gain = np.where(found, dear_cost - cheap_cost, 0.0)
        curv = grad * (1.0 - grad)
        changed = (cheap + dear - 2.0 * cheap * dear) * curv[dags.edge_ids]
        hess = k * dags.pair_dist * np.bincount(dags.arc_pair, weights=changed, minlength=len(dags.pairs))
        with np.errstate(divide="ignore", invalid="ignore"):
            move = np.where((gain > 1e-15) & (hess > 0), gain / hess, 0.0)
        move = np.minimum(move, np.where(found, room, 0.0))
        direction = (cheap - dear) * move[dags.arc_pair]
        delta = np.bincount(dags.edge_ids, weights=arc_weight * direction, minlength=dags.m)
        step = _line_search(lambda t: _softmax_potential(loads + t * delta, k))
        improvement = 0.0
        if step > 0.0:
            flow = np.clip(flow + step * direction, 0.0, 1.0)
            loads = _edge_loads(dags, flow)
            c = float(loads.max())
            if c < best_c:
                improvement = (best_c - c) / best_c
                best_c, best_flow, best_loads = c, flow.copy(), loads.copy()
                history.append(best_c)
                if on_pass is not None:
                    on_pass(it, PathStrategy(dags, best_flow, "optimized"))
        if best_c - dual <= tol * best_c or (sharp >= max_sharpness and improvement < tol):
            converged = True
            break
        sharp = min(sharp * growth, max_sharpness)
    final = PathStrategy(dags, best_flow, "optimized")
    return OptimizeResult(final, EdgeScores(best_loads, "optimized"), best_c, min(dual, best_c),
                          converged, it, history)


def lp_oracle_small(g: Graph, ap: ApspResult, cap: int = 10_000) -> float:
    """Exact ``min over strategies of C_max`` by enumerating paths and solving an LP.

    Variables are one weight per shortest path plus the bound ``t``;
    minimise ``t`` subject to each pair's weights summing to one and every
    edge's extended score being at most ``t``.
    """
    _check_connected(g, ap)
    paths = []
    k = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            paths.extend((k, p) for p in enumerate_shortest_paths(g, ap, u, v, cap=cap))
            if len(paths) > cap:
                raise CapExceededError(f"more than {cap} shortest paths in total")
            k += 1
    nvar = len(paths) + 1
    a_eq = np.zeros((k, nvar))
    a_ub = np.zeros((g.m, nvar))
    for j, (k, p) in enumerate(paths):
        a_eq[k, j] = 1.0
        length = len(p) - 1
        for a, b in zip(p, p[1:]):
            a_ub[g.edge_id(a, b), j] += length
    a_ub[:, -1] = -1.0
    c = np.zeros(nvar)
    c[-1] = 1.0
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(g.m), A_eq=a_eq, b_eq=np.ones(a_eq.shape[0]),
                  bounds=[(0, None)] * nvar, method="highs")
    if not res.success:
        raise RuntimeError(f"LP solver failed: {res.message}")
    return float(res.fun)

