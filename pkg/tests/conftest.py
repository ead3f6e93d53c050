"""Shared corpora for the test modules."""

import functools
import random
from pathlib import Path

import networkx as nx
import pytest

from symcanon.graph import Graph, figure1_graph, matching_graph

DATA = Path(__file__).parent / "data"


def from_nx(g) -> Graph:
    index = {v: i for i, v in enumerate(sorted(g.nodes))}
    return Graph(len(index), [(index[u], index[v]) for u, v in g.edges])


@functools.lru_cache(maxsize=None)
def atlas_connected(max_n=6):
    """All connected graphs on 1..max_n vertices, one per isomorphism class."""
    return tuple(from_nx(g) for g in nx.graph_atlas_g()[1:]
                 if g.number_of_nodes() <= max_n and nx.is_connected(g))


def fixtures():
    return [figure1_graph(), matching_graph(1), matching_graph(2), matching_graph(3)]


def colored_samples():
    """Small colored graphs, including disconnected ones."""
    out = []
    rng = random.Random(7)
    for n in range(1, 8):
        for _ in range(6):
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
            out.append(Graph(n, edges, [rng.randrange(2) for _ in range(n)]))
    return out


def random_sparse(n, seed, p=None):
    g = nx.gnp_random_graph(n, 4 / n if p is None else p, seed=seed)
    return from_nx(g)


@pytest.fixture
def fig1():
    return figure1_graph()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
