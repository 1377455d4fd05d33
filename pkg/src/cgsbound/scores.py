"""Connection-graph-stability edge scores and the bound ``n / C_max``.

The score of an edge is the total length of the connection paths routed
through it, summed over unordered vertex pairs.  When a pair has several
shortest paths, a path weighting strategy splits the pair's length across
them; ``scores_uniform`` splits it evenly, ``scores_single_path`` picks one
path per pair.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import CapExceededError, NotConnectedError
from .graph import Graph
from .paths import ApspResult, enumerate_shortest_paths

__all__ = [
    "EdgeScores",
    "STRATEGY_TAGS",
    "scores_single_path",
    "scores_uniform",
    "scores_brute_force",
    "scores_from_paths",
    "pair_contributions",
    "single_path",
    "cgs_bound",
]

STRATEGY_TAGS = ("single_path", "uniform", "optimized", "brute_force", "custom")

# relative slack used when picking the arg-max edge among float ties
_TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class EdgeScores:
    scores: np.ndarray
    strategy_tag: str

    def __post_init__(self):
        if self.strategy_tag not in STRATEGY_TAGS:
            raise ValueError(f"unknown strategy tag {self.strategy_tag!r}")

    def __len__(self):
        return len(self.scores)

    def __getitem__(self, edge_id):
        return self.scores[edge_id]

    @property
    def c_max(self) -> float:
        return float(self.scores.max())

    @property
    def argmax_edge(self) -> int:
        """Smallest edge id whose score is (numerically) maximal."""
        top = self.scores.max()
        return int(np.flatnonzero(self.scores >= top - _TIE_RTOL * abs(top))[0])

    def to_csv(self, g: Graph) -> str:
        buf = io.StringIO()
        buf.write("edge_id,u,v,score\n")
        for i, (u, v) in enumerate(g.edges):
            buf.write(f"{i},{g.label(u)},{g.label(v)},{self.scores[i]:.12g}\n")
        return buf.getvalue()


def _check_connected(g: Graph, ap: ApspResult):
    if len(ap) != g.n:
        raise ValueError("ApspResult does not belong to this graph")
    row = ap[0].dist
    if -1 in row:
        v = row.index(-1)
        raise NotConnectedError(f"graph is not connected: vertex {g.label(v)} is unreachable", vertex=v)


def single_path(ap: ApspResult, u: int, v: int) -> tuple[int, ...]:
    """The deterministic shortest ``u``-``v`` path used by the single-path strategy.

    Walks back from ``v`` taking the smallest-id predecessor each step.
    """
    preds = ap[u].preds
    rev = [v]
    while rev[-1] != u:
        rev.append(preds[rev[-1]][0])
    return tuple(reversed(rev))


def scores_single_path(g: Graph, ap: ApspResult) -> EdgeScores:
    """One shortest path per unordered pair; each edge on it gains the path length."""
    _check_connected(g, ap)
    scores = np.zeros(g.m)
    index = g.edge_index
    for u in range(g.n):
        preds = ap[u].preds
        dist = ap[u].dist
        for v in range(u + 1, g.n):
            length = dist[v]
            b = v
            while b != u:
                a = preds[b][0]
                scores[index[(a, b) if a < b else (b, a)]] += length
                b = a
    return EdgeScores(scores, "single_path")


def scores_uniform(g: Graph, ap: ApspResult) -> EdgeScores:
    """Scores under the uniform strategy, every shortest path of a pair weighted equally.

    Brandes-style dependency accumulation in which a target contributes its
    distance from the source instead of 1.  For a fixed source ``s``::

        delta(v) = sum over DAG successors w of sigma(v) / sigma(w) * (dist(w) + delta(w))

    and the arc ``v -> w`` picks up its summand.  Every unordered pair is
    seen from both ends, so the totals are halved.  Runs in O(n |E|).
    """
    _check_connected(g, ap)
    scores = [0.0] * g.m
    adjacency = g.adjacency
    n = g.n
    for r in ap.sources:
        dist, sigma = r.dist, r.sigma
        delta = [0.0] * n
        for w in reversed(r.order):
            dw = dist[w]
            if dw == 0:
                continue
            carry = (dw + delta[w]) / sigma[w]
            for p, eid in adjacency[w]:
                if dist[p] == dw - 1:
                    c = sigma[p] * carry
                    scores[eid] += c
                    delta[p] += c
    return EdgeScores(np.asarray(scores) * 0.5, "uniform")


def pair_contributions(g: Graph, paths: Sequence[Sequence[int]], weights: Sequence[float]) -> dict[int, float]:
    """Per-edge contribution of one vertex pair routed over weighted paths.

    Each path adds ``weight * len(path)`` to every edge it uses, exactly as
    in the literal definition of the extended score.
    """
    out: dict[int, float] = {}
    for path, w in zip(paths, weights):
        length = len(path) - 1
        for a, b in zip(path, path[1:]):
            eid = g.edge_id(a, b)
            out[eid] = out.get(eid, 0.0) + w * length
    return out


def scores_from_paths(g: Graph, selections: Mapping[tuple[int, int], Sequence[tuple[Sequence[int], float]]],
                      tag: str = "custom") -> EdgeScores:
    """Scores from explicitly supplied ``{(u, v): [(path, weight), ...]}``.

    Paths need not be shortest; they only have to be simple paths joining
    ``u`` and ``v`` in ``g``.  Weights of each pair should sum to one.  Keys
    are unordered pairs, each listed once.
    """
    scores = np.zeros(g.m)
    for (u, v), routed in selections.items():
        for path, _ in routed:
            if path[0] != u or path[-1] != v:
                raise ValueError(f"path {path} does not join {u} and {v}")
            if len(set(path)) != len(path):
                raise ValueError(f"path {path} is not simple")
        contrib = pair_contributions(g, [p for p, _ in routed], [w for _, w in routed])
        for eid, c in contrib.items():
            scores[eid] += c
    return EdgeScores(scores, tag)


def _markov_weights(paths, flow: Mapping[tuple[int, int], float]) -> list[float]:
    # canonical path decomposition of an acyclic unit flow: each path is
    # weighted by the product of its arcs' share of their tail's outflow
    out_total: dict[int, float] = {}
    for (a, _), f in flow.items():
        out_total[a] = out_total.get(a, 0.0) + f
    weights = []
    for path in paths:
        w = 1.0
        for a, b in zip(path, path[1:]):
            f = flow.get((a, b), 0.0)
            if f <= 0.0:
                w = 0.0
                break
            w *= f / out_total[a]
        weights.append(w)
    return weights


def scores_brute_force(g: Graph, ap: ApspResult, strategy="uniform", cap: int = 10_000) -> EdgeScores:
    """Extended scores by enumerating every shortest path of every pair.

    ``strategy`` is ``"uniform"``, ``"single_path"`` or a
    :class:`~cgsbound.strategy.PathStrategy`, whose arc flows are turned into
    path weights by the canonical flow decomposition.  Intended as a test
    oracle: raises :class:`CapExceededError` when the total number of
    shortest paths exceeds ``cap``.
    """
    _check_connected(g, ap)
    total = 0
    scores = np.zeros(g.m)
    flows = None
    if not isinstance(strategy, str):
        flows = strategy.pair_flows()
    elif strategy not in ("uniform", "single_path"):
        raise ValueError(f"unsupported strategy {strategy!r}")
    for u in range(g.n):
        for v in range(u + 1, g.n):
            paths = enumerate_shortest_paths(g, ap, u, v, cap=cap)
            total += len(paths)
            if total > cap:
                raise CapExceededError(f"more than {cap} shortest paths in total")
            if flows is not None:
                weights = _markov_weights(paths, flows[(u, v)])
            elif strategy == "uniform":
                weights = [1.0 / len(paths)] * len(paths)
            else:
                chosen = single_path(ap, u, v)
                weights = [1.0 if p == chosen else 0.0 for p in paths]
            for eid, c in pair_contributions(g, paths, weights).items():
                scores[eid] += c
    return EdgeScores(scores, "brute_force")


def cgs_bound(g: Graph, s: EdgeScores) -> float:
    """Lower bound ``n / C_max`` on the algebraic connectivity.

    The edge attaining ``C_max`` is ``s.argmax_edge``.
    """
    if len(s) == 0:
        raise ValueError("empty score vector")
    if np.any(s.scores <= 0):
        raise ValueError("scores must be positive")
    return g.n / s.c_max
