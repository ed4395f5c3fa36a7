from __future__ import annotations

import numpy as np
import pytest

from netimmune.graph import Graph, NodeIndexMap, build_graph
from netimmune.parsers import RawEdge


def graph_from_pairs(pairs, weights=None):
    """Build a graph from (src, dst) index pairs; external id = str(index)."""
    if weights is None:
        weights = [1.0] * len(pairs)
    edges = [RawEdge(str(a), str(b), w) for (a, b), w in zip(pairs, weights)]
    # register every index as a node even when isolated
    return build_graph(edges)


def er_graph(n: int, p: float, seed: int):
    """Random graph fixture: a spanning path plus Erdos-Renyi extras.

    The path backbone keeps the node count exactly n (isolated endpoints
    would otherwise never register) and the graph connected.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = [(i, i + 1) for i in range(n - 1)]
    pairs += [(i, j) for i in range(n) for j in range(i + 2, n) if rng.random() < p]
    return graph_from_pairs(pairs)


@pytest.fixture
def k4():
    return graph_from_pairs([(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def star4():
    # center is index 0
    return graph_from_pairs([(0, i) for i in range(1, 5)])


@pytest.fixture
def path3():
    return graph_from_pairs([(0, 1), (1, 2)])


@pytest.fixture
def cycle6():
    return graph_from_pairs([(i, (i + 1) % 6) for i in range(6)])


@pytest.fixture
def triangle_pendant():
    # a,b,c triangle; d hangs off a
    return graph_from_pairs([(0, 1), (0, 2), (1, 2), (0, 3)])
