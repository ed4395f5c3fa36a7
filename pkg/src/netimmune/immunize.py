"""Budgeted node blocking by spectral greedy selection.

Every node starts with the shield value (2*lambda - A_ii) * u_i^2 (A_ii = 0
here, so 2*lambda*u_i^2), u being the unit eigenvector of the largest
adjacency eigenvalue lambda. Nodes flagged harmful by the upstream detector
have their score halved once, before any selection, so clean nodes of equal
influence are preferred. Selection then repeatedly pops the best-scored node
and decrements each unselected neighbor j of the pick i by 2*A_ij*u_i*u_j,
the marginal-gain update of the shield objective.

The dense and sparse variants run the identical greedy and return identical
plans; they differ only in how adjacency rows are read, which bounds the
sparse variant's memory by O(n + m + k).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .graph import Graph, NodeIndexMap, _partial_fisher_yates
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, EigenPair, largest_eigenpair

#: netshield refuses to materialize adjacency matrices beyond this many nodes.
DENSE_LIMIT = 20_000

RowReader = Callable[[int], Iterator[tuple[int, float]]]


@dataclass(frozen=True)
class ImmunizationPlan:
    """Ordered blocking decision: which nodes, in what order, at what score."""

    algorithm: str
    k: int
    blocked: list[int]
    selection_scores: list[float]
    seed: int | None = None


class ScoreQueue:
    """Max-heap over (score, node) with lazy invalidation.

    Updates push a fresh versioned entry instead of decrease-key; pops skip
    entries whose version is stale. Ties break toward the smaller node index
    (heap entries are (-score, node, version)).
    """

    def __init__(self, scores: np.ndarray):
        self._version = np.zeros(scores.size, dtype=np.int64)
        self._heap = [(-float(s), i, 0) for i, s in enumerate(scores)]
        heapq.heapify(self._heap)

    def update(self, node: int, score: float) -> None:
        self._version[node] += 1
        heapq.heappush(self._heap, (-score, node, int(self._version[node])))

    def pop_best(self, selected: np.ndarray) -> tuple[int, float]:
        while self._heap:
            neg, node, version = heapq.heappop(self._heap)
            if version == self._version[node] and not selected[node]:
                return node, -neg
        raise IndexError("queue exhausted")


def init_scores(graph: Graph, eig: EigenPair, harmful: Iterable[int]) -> np.ndarray:
    """Shield values 2*lambda*u_i^2 with the harmful halving applied once."""
    idx = np.unique(np.fromiter((int(h) for h in (harmful if harmful is not None else ())),
                                dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= graph.n):
        raise ValueError("harmful index out of range")
    u = eig.vector
    scores = 2.0 * eig.value * u * u
    scores[idx] *= 0.5
    return scores


def _sparse_reader(graph: Graph) -> RowReader:
    def read(i: int) -> Iterator[tuple[int, float]]:
        nbrs = graph.neighbors_of(i)
        wts = graph.weights_of(i)
        for pos in range(nbrs.size):
            yield int(nbrs[pos]), float(wts[pos])
    return read


def _dense_reader(matrix: np.ndarray) -> RowReader:
    def read(i: int) -> Iterator[tuple[int, float]]:
        row = matrix[i]
        for j in np.flatnonzero(row):
            yield int(j), float(row[j])
    return read


def _greedy(scores: np.ndarray, u: np.ndarray, k: int, read_row: RowReader,
            algorithm: str) -> ImmunizationPlan:
    n = scores.size
    budget = min(k, n)
    selected = np.zeros(n, dtype=bool)
    current = scores.copy()
    queue = ScoreQueue(current)
    blocked: list[int] = []
    picks: list[float] = []
    for _ in range(budget):
        node, score = queue.pop_best(selected)
        selected[node] = True
        blocked.append(node)
        picks.append(score)
        for j, w in read_row(node):
            if not selected[j]:
                current[j] -= 2.0 * w * float(u[node]) * float(u[j])
                queue.update(j, float(current[j]))
    return ImmunizationPlan(algorithm=algorithm, k=k, blocked=blocked,
                            selection_scores=picks)


def greedy_select(graph: Graph, eig: EigenPair, k: int,
                  harmful: Iterable[int] = ()) -> ImmunizationPlan:
    """Greedy shield-value selection reading adjacency through neighbor lists."""
    if k < 0:
        raise ValueError("k must be >= 0")
    scores = init_scores(graph, eig, harmful)
    return _greedy(scores, eig.vector, k, _sparse_reader(graph), "sparseshield")


def netshield(graph: Graph, k: int, harmful: Iterable[int] = (),
              tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
              dense_limit: int = DENSE_LIMIT,
              eig: EigenPair | None = None) -> ImmunizationPlan:
    """Greedy selection over a materialized dense adjacency matrix."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if graph.n > dense_limit:
        raise ValueError(
            f"graph has {graph.n} nodes, beyond the dense limit {dense_limit}; "
            "use sparseshield")
    if eig is None:
        eig = largest_eigenpair(graph, tol=tol, max_iter=max_iter)
    scores = init_scores(graph, eig, harmful)
    return _greedy(scores, eig.vector, k, _dense_reader(graph.dense()), "netshield")


def sparseshield(graph: Graph, k: int, harmful: Iterable[int] = (),
                 tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                 eig: EigenPair | None = None) -> ImmunizationPlan:
    """Greedy selection reading adjacency rows from the sparse structure only."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if eig is None:
        eig = largest_eigenpair(graph, tol=tol, max_iter=max_iter)
    return greedy_select(graph, eig, k, harmful)


def random_solver(graph: Graph, k: int, seed: int) -> ImmunizationPlan:
    """Blocks k distinct nodes drawn uniformly, ignoring influence entirely."""
    if k < 0:
        raise ValueError("k must be >= 0")
    count = min(k, graph.n)
    picks = _partial_fisher_yates(graph.n, count, seed)
    return ImmunizationPlan(algorithm="random", k=k, blocked=[int(i) for i in picks],
                            selection_scores=[0.0] * count, seed=seed)


def plan_to_json(plan: ImmunizationPlan, node_map: NodeIndexMap) -> dict:
    doc = {
        "algorithm": plan.algorithm,
        "k": plan.k,
        "blocked": [node_map.external(i) for i in plan.blocked],
        "scores": [float(s) for s in plan.selection_scores],
    }
    if plan.seed is not None:
        doc["seed"] = plan.seed
    return doc


def plan_from_json(doc: dict, node_map: NodeIndexMap) -> ImmunizationPlan:
    blocked = [node_map.index(ext) for ext in doc["blocked"]]
    return ImmunizationPlan(algorithm=doc["algorithm"], k=int(doc["k"]), blocked=blocked,
                            selection_scores=[float(s) for s in doc.get("scores", [])],
                            seed=doc.get("seed"))
