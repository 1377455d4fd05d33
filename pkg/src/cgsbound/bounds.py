"""Classical diameter-based lower bounds on lambda_2 and a per-graph report.

Both closed forms take only ``(n, |E|, D)`` so that they can be compared
against the stability bound using the very same diameter.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NonPositiveDenominatorError
from .graph import Graph
from .paths import ApspResult, apsp
from .scores import EdgeScores, cgs_bound, scores_single_path, scores_uniform
from .spectral import algebraic_connectivity
from .strategy import optimize_strategy

__all__ = ["mohar_bound", "lu_bound", "BoundsReport", "compute_report", "check_report", "STRATEGIES"]

STRATEGIES = ("single_path", "uniform", "optimized")

# slack for orderings that hold exactly in exact arithmetic
DOMINANCE_TOL = 1e-12
SPECTRAL_TOL = 1e-9


def mohar_bound(n: int, diameter: int) -> float:
    """``4 / (n * D)``."""
    if n < 2 or diameter < 1:
        raise ValueError("need n >= 2 and diameter >= 1")
    return 4.0 / (n * diameter)


def lu_bound(n: int, edge_count: int, diameter: int) -> float:
    """``2n / (2 + (n - 1) n D - 2 |E| D)``."""
    if n < 2 or diameter < 1:
        raise ValueError("need n >= 2 and diameter >= 1")
    if edge_count < n - 1:
        raise ValueError(f"a connected graph on {n} vertices has at least {n - 1} edges")
    den = 2 + (n - 1) * n * diameter - 2 * edge_count * diameter
    if den <= 0:
        raise NonPositiveDenominatorError(
            f"denominator {den} is not positive for n={n}, |E|={edge_count}, D={diameter}")
    return 2.0 * n / den


@dataclass
class BoundsReport:
    """All lower bounds for one graph next to the exact ``lambda2``.

    Strategies that were not requested leave their bound as ``None``.
    ``argmax_edge`` is the most loaded edge under the strongest computed
    stability bound, and ``argmax_strategy`` names that strategy.
    """

    n: int
    edge_count: int
    diameter: int
    lambda2: float
    mohar_bound: float
    lu_bound: float
    cgs_single_path_bound: float | None = None
    cgs_uniform_bound: float | None = None
    cgs_optimized_bound: float | None = None
    argmax_edge: int | None = None
    argmax_strategy: str | None = None
    optimizer_converged: bool | None = None
    name: str = ""
    scores: dict[str, list[float]] = field(default_factory=dict)

    def cgs(self, strategy: str) -> float | None:
        return getattr(self, f"cgs_{strategy}_bound")

    def to_dict(self, with_scores: bool = False) -> dict:
        d = asdict(self)
        if not with_scores:
            d.pop("scores")
        return d


def compute_report(g: Graph, strategies=STRATEGIES, tol: float = 1e-6, max_iters: int = 300,
                   ap: ApspResult | None = None, keep_scores: bool = False) -> BoundsReport:
    unknown = set(strategies) - set(STRATEGIES)
    if unknown:
        raise ValueError(f"unknown strategies: {sorted(unknown)}")
    ap = ap if ap is not None else apsp(g)
    lam = algebraic_connectivity(g)
    rep = BoundsReport(
        n=g.n, edge_count=g.m, diameter=ap.diameter, lambda2=lam,
        mohar_bound=mohar_bound(g.n, ap.diameter),
        lu_bound=lu_bound(g.n, g.m, ap.diameter),
        name=g.name,
    )
    found: dict[str, EdgeScores] = {}
    if "single_path" in strategies:
        found["single_path"] = scores_single_path(g, ap)
    if "uniform" in strategies:
        found["uniform"] = scores_uniform(g, ap)
    if "optimized" in strategies:
        res = optimize_strategy(g, ap, tol=tol, max_iters=max_iters)
        found["optimized"] = res.scores
        rep.optimizer_converged = res.converged
    best = None
    for name in STRATEGIES:
        if name not in found:
            continue
        b = cgs_bound(g, found[name])
        setattr(rep, f"cgs_{name}_bound", b)
        if best is None or b > best[0]:
            best = (b, name)
        if keep_scores:
            rep.scores[name] = [float(x) for x in found[name].scores]
    if best is not None:
        rep.argmax_strategy = best[1]
        rep.argmax_edge = found[best[1]].argmax_edge
    return rep


def check_report(rep: BoundsReport, tol: float = 1e-6) -> list[str]:
    """Orderings every connected graph must satisfy; returns a description of each one broken."""
    bad = []
    for name in STRATEGIES:
        b = rep.cgs(name)
        if b is None:
            continue
        if b > rep.lambda2 + SPECTRAL_TOL:
            bad.append(f"cgs_{name}={b!r} exceeds lambda2={rep.lambda2!r}")
        if b < rep.mohar_bound - DOMINANCE_TOL:
            bad.append(f"cgs_{name}={b!r} below mohar={rep.mohar_bound!r}")
        if b < rep.lu_bound - DOMINANCE_TOL:
            bad.append(f"cgs_{name}={b!r} below lu={rep.lu_bound!r}")
    for c in (rep.mohar_bound, rep.lu_bound):
        if c > rep.lambda2 + SPECTRAL_TOL:
            bad.append(f"classical bound {c!r} exceeds lambda2={rep.lambda2!r}")
    opt = rep.cgs_optimized_bound
    if opt is not None:
        for other in ("single_path", "uniform"):
            b = rep.cgs(other)
            if b is not None and opt < b * (1 - tol):
                bad.append(f"optimized bound {opt!r} weaker than {other} bound {b!r}")
    if not np.isfinite(rep.lambda2) or rep.lambda2 <= 1e-8:
        bad.append(f"lambda2={rep.lambda2!r} is not positive on a connected graph")
    return bad
