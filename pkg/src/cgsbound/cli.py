"""Command line front end: ``cgsbound bounds | table1 | bench``.

Exit status: 0 success, 2 bad input or parse error, 3 disconnected graph,
4 eigensolver did not converge, 5 invalid strategy flow, 6 a bench row broke
one of the guaranteed bound orderings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import STRATEGIES, check_report, compute_report, lu_bound, mohar_bound
from .errors import (
    ConvergenceError,
    DisconnectedSampleError,
    InvalidFlowError,
    NotConnectedError,
    ParseError,
    TooSmallError,
)
from .graph import FAMILIES, GraphFamily, generate, read_edge_list
from .paths import apsp
from .scores import scores_brute_force
from .spectral import algebraic_connectivity

EXIT_PARSE = 2
EXIT_DISCONNECTED = 3
EXIT_CONVERGENCE = 4
EXIT_FLOW = 5
EXIT_INVARIANT = 6

BENCH_FIELDS = ("n", "p", "seed", "lambda2", "mohar", "lu", "cgs_single", "cgs_uniform", "cgs_opt")
REPORT_FIELDS = ("graph", "n", "edge_count", "diameter", "lambda2", "mohar_bound", "lu_bound",
                 "cgs_single_path_bound", "cgs_uniform_bound", "cgs_optimized_bound",
                 "argmax_edge", "argmax_edge_ends", "argmax_strategy", "optimizer_converged")
TABLE1_FIELDS = ("graph", "n", "quantity", "computed", "expected", "status", "note")
MATCH_TOL = 1e-8


class BenchViolation(Exception):
    def __init__(self, seed, problems):
        self.seed = seed
        super().__init__(f"seed {seed}: " + "; ".join(problems))


def fmt(x) -> str:
    """12 significant digits for reals, plain text for everything else."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _json_value(x):
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, np.integer):
        return int(x)
    return x


def render_table(header, rows) -> str:
    cells = [[fmt(v) for v in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def render_csv(header, rows, with_header=True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if with_header:
        w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_line(obj) -> str:
    return json.dumps(_json_value(obj)) + "\n"


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def parse_range(text: str, kind):
    """``"12"`` or ``"4:40"`` (inclusive) into a ``(lo, hi)`` pair."""
    parts = text.split(":")
    if len(parts) == 1:
        v = kind(parts[0])
        return v, v
    if len(parts) == 2:
        lo, hi = kind(parts[0]), kind(parts[1])
        if lo > hi:
            raise ValueError(f"empty range {text!r}")
        return lo, hi
    raise ValueError(f"bad range {text!r}")


def parse_strategies(text: str) -> tuple[str, ...]:
    chosen = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in chosen if s not in STRATEGIES]
    if bad or not chosen:
        raise ValueError(f"strategies must be a comma list drawn from {', '.join(STRATEGIES)}")
    # report order does not depend on how the user listed them
    return tuple(s for s in STRATEGIES if s in chosen)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    family: str | None = None
    n: str | None = None
    p: str | None = None
    seed: int = 0
    strategies: tuple[str, ...] = STRATEGIES
    format: str = "table"
    trials: int = 1
    tol: float = 1e-6
    scores: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.command == "bounds" and (self.input is None) == (self.family is None):
            raise ValueError("bounds needs exactly one of --input or --family")
        if self.command == "bench" and self.trials < 1:
            raise ValueError("--trials must be at least 1")
        if self.tol <= 0:
            raise ValueError("--tol must be positive")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cgsbound",
                                 description="Lower bounds on the algebraic connectivity of a graph.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, formats=("table", "csv", "json")):
        p.add_argument("--format", choices=formats, default="table")
        p.add_argument("--tol", type=float, default=1e-6, help="relative tolerance for the strategy optimizer")

    b = sub.add_parser("bounds", help="all bounds for one graph")
    b.add_argument("--input", metavar="PATH", help="edge list file, one 'u v' pair per line")
    b.add_argument("--family", choices=FAMILIES)
    b.add_argument("--n", default="10")
    b.add_argument("--p", default="0.5")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--strategies", default=",".join(STRATEGIES))
    b.add_argument("--scores", action="store_true", help="embed per-edge scores in JSON output")
    common(b)

    t = sub.add_parser("table1", help="named families beside their closed-form values")
    common(t)

    r = sub.add_parser("bench", help="random G(n, p) ensemble with invariant checks")
    r.add_argument("--n", default="12", help="vertex count or inclusive range lo:hi")
    r.add_argument("--p", default="0.3", help="edge probability or range lo:hi")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--trials", type=int, default=10)
    r.add_argument("--jobs", type=int, default=1, help="worker processes; rows stay in trial order")
    common(r, formats=("csv", "json", "table"))
    r.set_defaults(format="csv")
    return ap


def config_from_args(ns) -> RunConfig:
    kw = dict(command=ns.command, format=ns.format, tol=ns.tol)
    if ns.command in ("bounds", "bench"):
        kw.update(n=ns.n, p=ns.p, seed=ns.seed)
    if ns.command == "bounds":
        kw.update(input=ns.input, family=ns.family, strategies=parse_strategies(ns.strategies), scores=ns.scores)
    if ns.command == "bench":
        kw.update(trials=ns.trials, jobs=ns.jobs)
    return RunConfig(**kw)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def load_graph(cfg: RunConfig):
    if cfg.input is not None:
        try:
            return read_edge_list(cfg.input)
        except OSError as exc:
            raise ParseError(f"cannot read {cfg.input}: {exc.strerror}") from None
    return generate(GraphFamily(cfg.family, n=int(cfg.n), p=float(cfg.p), seed=cfg.seed))


def cmd_bounds(cfg: RunConfig) -> str:
    g = load_graph(cfg)
    rep = compute_report(g, strategies=cfg.strategies, tol=cfg.tol, keep_scores=cfg.scores)
    row = rep.to_dict()
    row["graph"] = g.name or os.path.basename(cfg.input)
    if rep.argmax_edge is not None:
        u, v = g.edges[rep.argmax_edge]
        row["argmax_edge_ends"] = f"{g.label(u)}-{g.label(v)}"
    else:
        row["argmax_edge_ends"] = None
    if cfg.format == "json":
        doc = {k: row[k] for k in REPORT_FIELDS}
        if cfg.scores:
            doc["scores"] = rep.scores
        return json_line(doc)
    values = [row[k] for k in REPORT_FIELDS]
    if cfg.format == "csv":
        return render_csv(REPORT_FIELDS, [values])
    return render_table(("field", "value"), list(zip(REPORT_FIELDS, values)))


def _table1_rows():
    """(graph, closed-form expectations, note) for the reference families."""
    cycle = generate("cycle", n=9)
    ap = apsp(cycle)
    c_max = scores_brute_force(cycle, ap, "single_path").c_max
    n = 9
    printed = 24 * n / (n * n - 1)
    cyc_note = (f"cgs expectation from path enumeration (C_max={c_max:g}); "
                f"closed form 24n/(n^2-1)={printed:.12g} would exceed lambda2")
    rows = []
    n = 10
    rows.append((generate("complete", n=n), dict(lambda2=n, mohar=4 / n, lu=n, cgs=n), ""))
    rows.append((generate("path", n=n),
                 dict(lambda2=2 * (1 - math.cos(math.pi / n)), mohar=4 / (n * (n - 1)),
                      lu=2 * n / (2 + (n - 1) ** 2 * (n - 2)), cgs=8 / n**2), ""))
    m = 9
    rows.append((cycle,
                 dict(lambda2=2 * (1 - math.cos(2 * math.pi / m)), mohar=8 / (m * (m - 1)),
                      lu=4 * m / (4 + m * (m - 1) * (m - 3)), cgs=m / c_max), cyc_note))
    rows.append((generate("star", n=n),
                 dict(lambda2=1.0, mohar=2 / n, lu=n / (1 + (n - 2) * (n - 1)), cgs=n / (2 * n - 3)), ""))
    rows.append((generate("petersen"), dict(lambda2=2.0, mohar=0.2, lu=20 / 122, cgs=10 / 9), ""))
    return rows


def table1_records(tol: float = 1e-6):
    """One record per (graph, quantity) with computed and expected values."""
    out = []
    for g, expect, note in _table1_rows():
        ap = apsp(g)
        rep = compute_report(g, ap=ap, tol=tol)
        got = dict(lambda2=algebraic_connectivity(g), mohar=mohar_bound(g.n, ap.diameter),
                   lu=lu_bound(g.n, g.m, ap.diameter), cgs=rep.cgs_single_path_bound,
                   cgs_uniform=rep.cgs_uniform_bound, cgs_optimized=rep.cgs_optimized_bound)
        for q in ("lambda2", "mohar", "lu", "cgs"):
            ok = abs(got[q] - expect[q]) <= MATCH_TOL * max(1.0, abs(expect[q]))
            out.append(dict(graph=g.name, n=g.n, quantity=q, computed=float(got[q]),
                            expected=float(expect[q]), status="ok" if ok else "MISMATCH",
                            note=note if q == "cgs" else ""))
        for q in ("cgs_uniform", "cgs_optimized"):
            out.append(dict(graph=g.name, n=g.n, quantity=q, computed=float(got[q]), expected=None,
                            status="", note="for comparison"))
    return out


def cmd_table1(cfg: RunConfig) -> str:
    recs = table1_records(cfg.tol)
    if cfg.format == "json":
        return json_line({"rows": recs, "mismatches": sum(r["status"] == "MISMATCH" for r in recs)})
    rows = [[r[k] for k in TABLE1_FIELDS] for r in recs]
    if cfg.format == "csv":
        return render_csv(TABLE1_FIELDS, rows)
    return render_table(TABLE1_FIELDS, rows)


def bench_trials(cfg: RunConfig):
    """Deterministic ``(n, p, seed)`` for every trial."""
    n_lo, n_hi = parse_range(cfg.n, int)
    p_lo, p_hi = parse_range(cfg.p, float)
    if n_lo < 2 or not (0 < p_lo <= p_hi <= 1):
        raise ValueError("bench needs n >= 2 and 0 < p <= 1")
    rng = np.random.default_rng(cfg.seed)
    out = []
    for i in range(cfg.trials):
        n = int(rng.integers(n_lo, n_hi + 1))
        p = float(rng.uniform(p_lo, p_hi)) if p_hi > p_lo else p_lo
        out.append((n, p, cfg.seed + i))
    return out


def bench_row(args):
    n, p, seed, tol = args
    g = generate("erdos_renyi", n=n, p=p, seed=seed)
    rep = compute_report(g, tol=tol)
    problems = check_report(rep, tol=tol)
    row = dict(n=n, p=p, seed=seed, lambda2=rep.lambda2, mohar=rep.mohar_bound, lu=rep.lu_bound,
               cgs_single=rep.cgs_single_path_bound, cgs_uniform=rep.cgs_uniform_bound,
               cgs_opt=rep.cgs_optimized_bound)
    return row, problems


def cmd_bench(cfg: RunConfig, out) -> None:
    """Stream one row per trial to ``out``; raises :class:`BenchViolation` on a broken ordering."""
    work = [(n, p, seed, cfg.tol) for n, p, seed in bench_trials(cfg)]
    if cfg.format == "csv":
        out.write(",".join(BENCH_FIELDS) + "\n")
    rows = []
    pool = ProcessPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    try:
        results = pool.map(bench_row, work) if pool else map(bench_row, work)
        for row, problems in results:
            if problems:
                raise BenchViolation(row["seed"], problems)
            values = [row[k] for k in BENCH_FIELDS]
            if cfg.format == "csv":
                out.write(render_csv(BENCH_FIELDS, [values], with_header=False))
            elif cfg.format == "json":
                out.write(json_line(row))
            else:
                rows.append(values)
            out.flush()
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    if cfg.format == "table":
        out.write(render_table(BENCH_FIELDS, rows))


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        if cfg.command == "bounds":
            sys.stdout.write(cmd_bounds(cfg))
        elif cfg.command == "table1":
            sys.stdout.write(cmd_table1(cfg))
        else:
            cmd_bench(cfg, sys.stdout)
    except (ParseError, TooSmallError, ValueError) as exc:
        print(f"cgsbound: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotConnectedError, DisconnectedSampleError) as exc:
        print(f"cgsbound: error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except ConvergenceError as exc:
        print(f"cgsbound: error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except InvalidFlowError as exc:
        print(f"cgsbound: error: {exc}", file=sys.stderr)
        return EXIT_FLOW
    except BenchViolation as exc:
        print(f"cgsbound: invariant violated at {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return 0


if __name__ == "__main__":
    sys.exit(main())
