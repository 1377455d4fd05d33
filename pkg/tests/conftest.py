import numpy as np
import pytest

from cgsbound.graph import Graph, generate
from cgsbound.paths import apsp


def table_graphs():
    return [
        generate("complete", n=10),
        generate("path", n=10),
        generate("cycle", n=9),
        generate("star", n=10),
        generate("petersen"),
    ]


def small_named_graphs():
    return [
        generate("complete", n=2),
        generate("complete", n=5),
        generate("path", n=4),
        generate("path", n=7),
        generate("cycle", n=4),
        generate("cycle", n=5),
        generate("cycle", n=8),
        generate("star", n=6),
        generate("petersen"),
        # 3x3 grid: plenty of tied shortest paths
        Graph.from_edges(9, [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8),
                             (0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8)], name="grid3"),
    ]


def random_connected(count, n_lo, n_hi, p_lo=0.1, p_hi=0.9, seed=0):
    """Deterministic ensemble of connected G(n, p) samples."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        p = float(rng.uniform(p_lo, p_hi))
        out.append(generate("erdos_renyi", n=n, p=p, seed=seed * 100_000 + i))
    return out


@pytest.fixture
def petersen():
    return generate("petersen")


@pytest.fixture
def c4():
    g = generate("cycle", n=4)
    return g, apsp(g)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
