"""Simple undirected graphs: construction, edge-list I/O and named families.

Vertices are the integers ``0 .. n-1``.  Edges are stored as ``(u, v)`` with
``u < v``, sorted lexicographically, so an edge id is simply its position in
:attr:`Graph.edges`.
"""
from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DisconnectedSampleError, ParseError, SelfLoopError, TooSmallError

__all__ = [
    "Graph",
    "GraphFamily",
    "FAMILIES",
    "parse_edge_list",
    "read_edge_list",
    "serialize_edge_list",
    "generate",
    "is_connected",
    "first_unreachable",
]


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph.

    Use :meth:`from_edges` rather than calling the constructor directly; it
    validates the edges and builds the adjacency and edge index.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)
    edge_index: dict[tuple[int, int], int] = field(repr=False)
    labels: tuple[str, ...] | None = field(default=None, repr=False)
    duplicates: int = field(default=0, repr=False)
    name: str = ""

    @classmethod
    def from_edges(cls, n, edges, *, labels=None, name="", allow_duplicates=False):
        """Validate ``edges`` over vertices ``0..n-1`` and build a graph.

        Self-loops always raise :class:`SelfLoopError`.  Duplicate edges raise
        ``ValueError`` unless ``allow_duplicates`` is set, in which case they
        collapse and are counted in :attr:`duplicates`.
        """
        n = int(n)
        if n < 1:
            raise TooSmallError(f"graph needs at least one vertex, got n={n}")
        canon = set()
        dupes = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                if not allow_duplicates:
                    raise ValueError(f"duplicate edge {key}")
                dupes += 1
            canon.add(key)
        ordered = tuple(sorted(canon))
        edge_index = {e: i for i, e in enumerate(ordered)}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(ordered):
            adj[u].append((v, i))
            adj[v].append((u, i))
        adjacency = tuple(tuple(sorted(a)) for a in adj)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per vertex")
        return cls(n, ordered, adjacency, edge_index, labels, dupes, name)

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def neighbors(self, u: int) -> list[int]:
        return [w for w, _ in self.adjacency[u]]

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=int)

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def label(self, u: int) -> str:
        return self.labels[u] if self.labels is not None else str(u)

    def __len__(self):
        return self.n

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Graph{tag} n={self.n} m={self.m}>"


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------

def parse_edge_list(text) -> Graph:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    ``text`` may be a string or any iterable of lines (an open file works).
    Blank lines and lines starting with ``#`` are skipped.  Labels are
    arbitrary tokens, interned to ids in order of first appearance.
    Repeated edges collapse to one; the number dropped is kept in
    ``graph.duplicates``.

    >>> g = parse_edge_list("a b\\nb c\\n")
    >>> g.n, g.edges, g.labels
    (3, ((0, 1), (1, 2)), ('a', 'b', 'c'))
    """
    if isinstance(text, str):
        lines: Iterable[str] = io.StringIO(text)
    else:
        lines = text
    ids: dict[str, int] = {}
    edges = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two vertex labels, got {len(tokens)}: {stripped!r}", lineno)
        a, b = tokens
        if a == b:
            raise SelfLoopError(f"self-loop on vertex {a!r}", lineno)
        for tok in tokens:
            if tok not in ids:
                ids[tok] = len(ids)
        edges.append((ids[a], ids[b]))
    if len(ids) < 2:
        raise TooSmallError(f"edge list names {len(ids)} distinct vertices; at least 2 required")
    return Graph.from_edges(len(ids), edges, labels=list(ids), allow_duplicates=True)


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        g = parse_edge_list(fh)
    return g


def serialize_edge_list(g: Graph, use_labels=False) -> str:
    """Inverse of :func:`parse_edge_list`: one ``u v`` line per edge, by edge id."""
    if use_labels:
        return "".join(f"{g.label(u)} {g.label(v)}\n" for u, v in g.edges)
    return "".join(f"{u} {v}\n" for u, v in g.edges)


# ---------------------------------------------------------------------------
# connectivity
# ---------------------------------------------------------------------------

def _reached(g: Graph) -> list[bool]:
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w, _ in g.adjacency[u]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    return seen


def is_connected(g: Graph) -> bool:
    return all(_reached(g))


def first_unreachable(g: Graph) -> int | None:
    """Smallest vertex a BFS from vertex 0 does not reach, or ``None``."""
    for v, ok in enumerate(_reached(g)):
        if not ok:
            return v
    return None


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

FAMILIES = ("complete", "path", "cycle", "star", "petersen", "erdos_renyi")


@dataclass(frozen=True)
class GraphFamily:
    """Parameters for :func:`generate`.

    ``n`` is ignored by ``petersen``; ``p`` and ``seed`` only matter for
    ``erdos_renyi``.
    """

    name: str
    n: int = 10
    p: float = 0.5
    seed: int = 0
    max_retries: int = 1000

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}; choose from {', '.join(FAMILIES)}")
        if self.name != "petersen" and self.n < 2:
            raise ValueError(f"family {self.name!r} needs n >= 2, got {self.n}")
        if self.name == "cycle" and self.n < 3:
            raise ValueError("cycle needs n >= 3")
        if not (0.0 < self.p <= 1.0):
            raise ValueError(f"p must lie in (0, 1], got {self.p}")


def _petersen_edges() -> list[tuple[int, int]]:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return outer + inner + spokes


def _gnp_edges(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return list(zip(iu[keep].tolist(), iv[keep].tolist()))


def _derived_seed(seed: int, attempt: int) -> int:
    if attempt == 0:
        return seed
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])


def generate(family: GraphFamily | str, n: int | None = None, **params) -> Graph:
    """Build a graph from a named family.

    Either pass a :class:`GraphFamily` or the family name plus keyword
    parameters, e.g. ``generate("star", n=10)``.

    ``erdos_renyi`` samples G(n, p) with ``seed`` and, while the sample is
    disconnected, resamples with a seed derived from ``(seed, attempt)``.
    """
    if not isinstance(family, GraphFamily):
        if n is not None:
            params["n"] = n
        family = GraphFamily(family, **params)
    name, k = family.name, family.n
    if name == "complete":
        edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    elif name == "path":
        edges = [(i, i + 1) for i in range(k - 1)]
    elif name == "cycle":
        edges = [(i, i + 1) for i in range(k - 1)] + [(k - 1, 0)]
    elif name == "star":
        edges = [(0, i) for i in range(1, k)]
    elif name == "petersen":
        return Graph.from_edges(10, _petersen_edges(), name="petersen")
    else:
        for attempt in range(family.max_retries):
            seed = _derived_seed(family.seed, attempt)
            rng = np.random.default_rng(seed)
            g = Graph.from_edges(k, _gnp_edges(k, family.p, rng), name=f"gnp(n={k},p={family.p},seed={seed})")
            if is_connected(g):
                return g
        raise DisconnectedSampleError(
            f"no connected G({k}, {family.p}) sample in {family.max_retries} attempts from seed {family.seed}"
        )
    return Graph.from_edges(k, edges, name=f"{name}{k}")

