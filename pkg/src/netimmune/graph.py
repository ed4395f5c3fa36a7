"""Immutable undirected sparse graph with dense indices and external-id mapping."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .parsers import RawEdge, format_edge_list, parse_edge_list


@dataclass(frozen=True)
class NodeIndexMap:
    """Bijection between external string ids and dense indices 0..n-1."""

    id_of: tuple
    index_of: dict = field(repr=False)

    @classmethod
    def from_ids(cls, ids: Iterable[str]) -> "NodeIndexMap":
        id_of = tuple(ids)
        index_of = {ext: i for i, ext in enumerate(id_of)}
        if len(index_of) != len(id_of):
            raise ValueError("duplicate external ids")
        return cls(id_of=id_of, index_of=index_of)

    def __len__(self) -> int:
        return len(self.id_of)

    def index(self, external_id: str) -> int:
        return self.index_of[external_id]

    def external(self, idx: int) -> str:
        return self.id_of[idx]

    def __contains__(self, external_id: str) -> bool:
        return external_id in self.index_of


@dataclass(frozen=True)
class Graph:
    """Symmetric simple graph in compressed neighbor-list form.

    Neighbor lists are sorted ascending with no duplicates and no self-loops;
    all weights are positive. `unweighted` marks graphs built from
    propagation trees, whose weights are all 1.
    """

    n: int
    offsets: np.ndarray
    neighbors: np.ndarray
    weights: np.ndarray
    m: int
    unweighted: bool = False

    def degree(self, i: int) -> int:
        return int(self.offsets[i + 1] - self.offsets[i])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors_of(self, i: int) -> np.ndarray:
        return self.neighbors[self.offsets[i]:self.offsets[i + 1]]

    def weights_of(self, i: int) -> np.ndarray:
        return self.weights[self.offsets[i]:self.offsets[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        nbrs = self.neighbors_of(i)
        pos = np.searchsorted(nbrs, j)
        return bool(pos < nbrs.size and nbrs[pos] == j)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as (i, j, w) with i < j, in index order."""
        for i in range(self.n):
            for pos in range(self.offsets[i], self.offsets[i + 1]):
                j = int(self.neighbors[pos])
                if i < j:
                    yield i, j, float(self.weights[pos])

    def dense(self) -> np.ndarray:
        """Materialize the full adjacency matrix (caller guards the size)."""
        a = np.zeros((self.n, self.n))
        for i in range(self.n):
            a[i, self.neighbors_of(i)] = self.weights_of(i)
        return a


def build_graph(edges: list[RawEdge]) -> tuple[Graph, NodeIndexMap]:
    """Build a symmetrized simple graph from raw edges.

    Dense indices are assigned in first-appearance order (src before dst).
    Parallel edges keep the max weight; self-loops are dropped but still
    register their endpoint; an empty edge list gives the empty graph.
    """
    index_of: dict[str, int] = {}
    ids: list[str] = []

    def intern(ext: str) -> int:
        idx = index_of.get(ext)
        if idx is None:
            idx = len(ids)
            index_of[ext] = idx
            ids.append(ext)
        return idx

    us, vs, ws = [], [], []
    for e in edges:
        si, di = intern(e.src), intern(e.dst)
        if si == di:
            continue
        us.append(si)
        vs.append(di)
        ws.append(e.weight)
    node_map = NodeIndexMap.from_ids(ids)
    n = len(ids)
    graph = _assemble(n, np.array(us + vs, dtype=np.int64),
                      np.array(vs + us, dtype=np.int64),
                      np.array(ws + ws, dtype=np.float64),
                      unweighted=all(w == 1.0 for w in ws))
    return graph, node_map


def _assemble(n: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray,
              unweighted: bool) -> Graph:
    if n > 2**31 - 1:
        raise ValueError("graphs beyond 2^31 nodes are out of scope")
    if src.size == 0:
        return Graph(n=n, offsets=np.zeros(n + 1, dtype=np.int64),
                     neighbors=np.zeros(0, dtype=np.int32),
                     weights=np.zeros(0), m=0, unweighted=unweighted)
    order = np.lexsort((dst, src))
    src, dst, w = src[order], dst[order], w[order]
    new_group = np.empty(src.size, dtype=bool)
    new_group[0] = True
    new_group[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
    starts = np.flatnonzero(new_group)
    # parallel edges keep the max weight
    w = np.maximum.reduceat(w, starts)
    src, dst = src[starts], dst[starts]
    if np.any(w <= 0):
        raise ValueError("edge weights must be positive after deduplication")
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.add.at(offsets, src + 1, 1)
    offsets = np.cumsum(offsets)
    return Graph(n=n, offsets=offsets, neighbors=dst.astype(np.int32),
                 weights=w.astype(np.float64), m=src.size // 2,
                 unweighted=unweighted)


def _partial_fisher_yates(n: int, count: int, seed: int) -> np.ndarray:
    """First `count` entries of a seeded Fisher-Yates shuffle of 0..n-1."""
    rng = np.random.Generator(np.random.PCG64(seed))
    pool = np.arange(n, dtype=np.int64)
    for i in range(count):
        j = int(rng.integers(i, n))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:count]


def sample_subgraph(graph: Graph, node_map: NodeIndexMap, fraction: float,
                    seed: int) -> tuple[Graph, NodeIndexMap]:
    """Induced subgraph on ceil(fraction*n) uniformly drawn nodes.

    Deterministic for a fixed seed; retained nodes keep their relative index
    order. fraction must lie in (0, 1].
    """
    if not (0.0 < fraction <= 1.0):
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    count = math.ceil(fraction * graph.n)
    retained = np.sort(_partial_fisher_yates(graph.n, count, seed))
    return induce_subgraph(graph, node_map, retained)


def induce_subgraph(graph: Graph, node_map: NodeIndexMap,
                    retained: np.ndarray) -> tuple[Graph, NodeIndexMap]:
    """Subgraph induced on the given sorted dense indices, relabeled 0..k-1."""
    new_index = np.full(graph.n, -1, dtype=np.int64)
    new_index[retained] = np.arange(retained.size)
    src, dst, w = [], [], []
    for old_i in retained:
        nbrs = graph.neighbors_of(old_i)
        keep = new_index[nbrs] >= 0
        src.append(np.full(int(keep.sum()), new_index[old_i]))
        dst.append(new_index[nbrs[keep]])
        w.append(graph.weights_of(old_i)[keep])
    sub = _assemble(retained.size,
                    np.concatenate(src) if src else np.zeros(0, dtype=np.int64),
                    np.concatenate(dst) if dst else np.zeros(0, dtype=np.int64),
                    np.concatenate(w) if w else np.zeros(0),
                    unweighted=graph.unweighted)
    sub_map = NodeIndexMap.from_ids(node_map.external(int(i)) for i in retained)
    return sub, sub_map


def restrict_set(ids: Iterable[str], node_map: NodeIndexMap) -> tuple[set[int], int]:
    """Map external ids into dense indices, dropping (and counting) unknown ids."""
    present: set[int] = set()
    dropped = 0
    for ext in ids:
        if ext in node_map:
            present.add(node_map.index(ext))
        else:
            dropped += 1
    return present, dropped


def dump_graph(graph: Graph, node_map: NodeIndexMap, prefix: str | Path) -> Path:
    """Write the canonical dump: edge list, id map TSV, and a JSON header."""
    prefix = Path(prefix)
    edges_path = prefix.with_suffix(".edges")
    ids_path = prefix.with_suffix(".ids")
    header_path = prefix.with_suffix(".json")
    edges = [RawEdge(node_map.external(i), node_map.external(j), w)
             for i, j, w in graph.edges()]
    edges_path.write_text(format_edge_list(edges), encoding="utf-8")
    ids_path.write_text(
        "".join(f"{ext}\t{i}\n" for i, ext in enumerate(node_map.id_of)), encoding="utf-8")
    header = {"n": graph.n, "m": graph.m, "unweighted": graph.unweighted,
              "id_map_file": ids_path.name, "edges_file": edges_path.name}
    header_path.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return header_path


def load_graph(header_path: str | Path) -> tuple[Graph, NodeIndexMap]:
    """Load a graph dump written by dump_graph, preserving the exact indexing."""
    header_path = Path(header_path)
    header = json.loads(header_path.read_text(encoding="utf-8"))
    ids_path = header_path.parent / header["id_map_file"]
    pairs = [line.split("\t") for line in ids_path.read_text(encoding="utf-8").splitlines()
             if line.strip()]
    pairs.sort(key=lambda kv: int(kv[1]))
    node_map = NodeIndexMap.from_ids(ext for ext, _ in pairs)
    edges = parse_edge_list(
        (header_path.parent / header["edges_file"]).read_text(encoding="utf-8"))
    n = len(node_map)
    us = np.array([node_map.index(e.src) for e in edges] +
                  [node_map.index(e.dst) for e in edges], dtype=np.int64)
    vs = np.array([node_map.index(e.dst) for e in edges] +
                  [node_map.index(e.src) for e in edges], dtype=np.int64)
    ws = np.array([e.weight for e in edges] * 2, dtype=np.float64)
    graph = _assemble(n, us, vs, ws, unweighted=bool(header["unweighted"]))
    return graph, node_map
