"""Unweighted shortest paths: BFS distances, path counts and predecessor DAGs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapExceededError, NotConnectedError
from .graph import Graph

__all__ = [
    "SsspResult",
    "ApspResult",
    "bfs_sssp",
    "apsp",
    "enumerate_shortest_paths",
    "pair_dag_arcs",
]


@dataclass(frozen=True)
class SsspResult:
    """Single-source BFS output.

    ``sigma[v]`` counts shortest ``source``-``v`` paths (floats, or Python
    ints in exact mode).  ``preds[v]`` lists the predecessors of ``v`` in the
    shortest-path DAG in ascending order, and ``order`` is the BFS visiting
    order, which is non-decreasing in distance.  Unreached vertices have
    distance ``-1``.
    """

    source: int
    dist: tuple[int, ...]
    sigma: tuple
    preds: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]

    @property
    def reached_all(self) -> bool:
        return len(self.order) == len(self.dist)


def bfs_sssp(g: Graph, source: int, exact: bool = False) -> SsspResult:
    """Breadth-first search from ``source`` counting shortest paths.

    Neighbours are scanned in ascending id order so predecessor lists come
    out sorted.  With ``exact=True`` the path counts are arbitrary-precision
    integers instead of doubles.
    """
    n = g.n
    dist = [-1] * n
    sigma = [0] * n if exact else [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    dist[source] = 0
    sigma[source] = 1 if exact else 1.0
    order = []
    queue = deque([source])
    adjacency = g.adjacency
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        sv = sigma[v]
        for w, _ in adjacency[v]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sv
                preds[w].append(v)
    # vertices are dequeued in ascending distance, and each v's preds are
    # appended in dequeue order, not id order
    return SsspResult(
        source,
        tuple(dist),
        tuple(sigma),
        tuple(tuple(sorted(p)) for p in preds),
        tuple(order),
    )


@dataclass(frozen=True)
class ApspResult:
    """All-pairs BFS results, one :class:`SsspResult` per source."""

    sources: tuple[SsspResult, ...]
    diameter: int

    def __getitem__(self, s: int) -> SsspResult:
        return self.sources[s]

    def __len__(self):
        return len(self.sources)

    def dist(self, u: int, v: int) -> int:
        return self.sources[u].dist[v]

    def sigma(self, u: int, v: int):
        return self.sources[u].sigma[v]

    @cached_property
    def dist_matrix(self) -> np.ndarray:
        return np.array([s.dist for s in self.sources], dtype=np.int64)

    def total_path_count(self):
        """Number of shortest paths summed over unordered pairs."""
        return sum(s.sigma[v] for s in self.sources for v in range(s.source + 1, len(s.dist)))


def apsp(g: Graph, exact: bool = False) -> ApspResult:
    """Run :func:`bfs_sssp` from every vertex.

    Raises :class:`NotConnectedError` naming the first unreached vertex.
    """
    results = []
    diameter = 0
    for s in range(g.n):
        r = bfs_sssp(g, s, exact=exact)
        if not r.reached_all:
            missing = r.dist.index(-1)
            raise NotConnectedError(
                f"graph is not connected: vertex {g.label(missing)} is unreachable from {g.label(s)}",
                vertex=missing,
            )
        diameter = max(diameter, max(r.dist))
        results.append(r)
    return ApspResult(tuple(results), diameter)


def enumerate_shortest_paths(g: Graph, ap: ApspResult, u: int, v: int, cap: int = 10_000) -> list[tuple[int, ...]]:
    """All shortest ``u``-``v`` paths as vertex tuples starting at ``u``.

    Paths are produced by walking the predecessor DAG of source ``u``
    backwards from ``v``, always trying the smallest predecessor first.
    Raises :class:`CapExceededError` as soon as more than ``cap`` paths
    exist; the result is never truncated.
    """
    if u == v:
        raise ValueError("u and v must differ")
    preds = ap[u].preds
    if ap[u].dist[v] < 0:
        raise NotConnectedError(f"no path between {u} and {v}", vertex=v)
    out: list[tuple[int, ...]] = []
    # stack of partial reversed paths; push in reverse so smallest pops first
    stack = [(v,)]
    while stack:
        rev = stack.pop()
        head = rev[-1]
        if head == u:
            out.append(rev[::-1])
            if len(out) > cap:
                raise CapExceededError(f"more than {cap} shortest paths between {u} and {v}")
            continue
        for p in reversed(preds[head]):
            stack.append(rev + (p,))
    return out


def pair_dag_arcs(ap: ApspResult, u: int, v: int) -> list[tuple[int, int]]:
    """Arcs ``(a, b)`` of the shortest ``u``-``v`` DAG, oriented away from ``u``.

    An arc belongs to the DAG when ``a`` precedes ``b`` on some shortest
    ``u``-``v`` path.  Arcs are sorted by the distance of ``a`` from ``u``,
    then by ``(a, b)``.
    """
    du = ap[u].dist
    dv = ap[v].dist
    preds = ap[u].preds
    total = du[v]
    arcs = []
    seen = {v}
    frontier = [v]
    while frontier:
        nxt = []
        for b in frontier:
            for a in preds[b]:
                if du[a] + dv[a] == total:
                    arcs.append((a, b))
                    if a not in seen:
                        seen.add(a)
                        nxt.append(a)
        frontier = nxt
    arcs.sort(key=lambda ab: (du[ab[0]], ab))
    return arcs
