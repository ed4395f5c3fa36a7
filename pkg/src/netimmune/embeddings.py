"""Node embeddings: biased second-order random walks, a small skip-gram
trainer with negative sampling, and text+node embedding fusion."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .seeding import derive_seed

log = logging.getLogger(__name__)

#: A walk corpus is a list of walks; each walk is a list of dense node indices.
WalkCorpus = list

@dataclass
class EmbeddingMatrix:
    """Fixed-dimension real vectors keyed by node or document id."""

    ids: list
    vectors: np.ndarray
    row_of: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be a 2-d array")
        if len(self.ids) != self.vectors.shape[0]:
            raise ValueError("one id per row required")
        if self.vectors.size and not np.all(np.isfinite(self.vectors)):
            raise ValueError("embedding entries must be finite")
        self.row_of = {rid: i for i, rid in enumerate(self.ids)}
        if len(self.row_of) != len(self.ids):
            raise ValueError("duplicate row ids")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def row(self, row_id) -> np.ndarray:
        return self.vectors[self.row_of[row_id]]


@dataclass
class FusedEmbeddings:
    """Per-document rows laid out as text vector then the author's node vector."""

    ids: list
    vectors: np.ndarray
    text_dim: int
    node_dim: int
    author_of: dict


def generate_walks(graph, p: float, q: float, walk_len: int = 40,
                   walks_per_node: int = 10, seed: int = 0) -> WalkCorpus:
    """Second-order biased walks from every node.

    From previous node t and current node v, the next node x is drawn with
    unnormalized weight w(v,x)*alpha where alpha = 1/p if x == t, 1 if x is
    adjacent to t, and 1/q otherwise. The first step is uniform over v's
    neighbors. Isolated start nodes produce length-1 walks. Deterministic
    per (graph, p, q, lengths, seed); each start node has its own derived
    stream so generation can be parallelized by node.
    """
    if p <= 0 or q <= 0:
        raise ValueError("p and q must be positive")
    if walk_len < 1:
        raise ValueError("walk_len must be >= 1")
    # plain-list adjacency: per-step cost stays O(degree) without array overhead
    nbrs = [graph.neighbors_of(i).tolist() for i in range(graph.n)]
    wts = [graph.weights_of(i).tolist() for i in range(graph.n)]
    nbr_sets = [set(row) for row in nbrs]
    walks: WalkCorpus = []
    for start in range(graph.n):
        rng = np.random.Generator(np.random.PCG64(derive_seed(seed, start)))
        for _ in range(walks_per_node):
            walks.append(_one_walk(start, nbrs, wts, nbr_sets, p, q, walk_len, rng))
    return walks


def _one_walk(start, nbrs, wts, nbr_sets, p, q, walk_len, rng):
    walk = [start]
    if walk_len == 1 or not nbrs[start]:
        return walk
    walk.append(nbrs[start][rng.integers(0, len(nbrs[start]))])
    inv_p, inv_q = 1.0 / p, 1.0 / q
    while len(walk) < walk_len:
        prev, cur = walk[-2], walk[-1]
        xs = nbrs[cur]
        if not xs:
            break
        prev_set = nbr_sets[prev]
        cum = 0.0
        cumulative = []
        for x, w in zip(xs, wts[cur]):
            alpha = inv_p if x == prev else (1.0 if x in prev_set else inv_q)
            cum += w * alpha
            cumulative.append(cum)
        r = rng.random() * cum
        for idx, threshold in enumerate(cumulative):
            if r < threshold:
                break
        walk.append(xs[idx])
    return walk


def train_skipgram(corpus: WalkCorpus, dim: int, window: int = 5, negatives: int = 5,
                   epochs: int = 5, learning_rate: float = 0.025, seed: int = 0,
                   ids: list | None = None,
                   return_losses: bool = False):
    """Skip-gram with uniform negative sampling over a walk corpus.

    Plain SGD with sigmoid loss; center vectors are returned. epochs=0
    returns the seeded initialization unchanged. Per-epoch total loss is
    logged (and returned when return_losses is set).
    """
    if not corpus:
        raise ValueError("corpus is empty")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    n = max(max(w) for w in corpus) + 1
    rng = np.random.Generator(np.random.PCG64(derive_seed(seed, n, dim)))
    center = (rng.random((n, dim)) - 0.5) / dim
    context = np.zeros((n, dim))
    losses: list[float] = []
    for epoch in range(epochs):
        total = 0.0
        for walk in corpus:
            L = len(walk)
            for i, c in enumerate(walk):
                lo, hi = max(0, i - window), min(L, i + window + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    total += _sgd_pair(center, context, c, walk[j],
                                       rng.integers(0, n, size=negatives),
                                       learning_rate)
        losses.append(total)
        log.info("skipgram epoch %d/%d loss %.4f", epoch + 1, epochs, total)
    if ids is None:
        ids = [str(i) for i in range(n)]
    matrix = EmbeddingMatrix(ids=list(ids), vectors=center)
    return (matrix, losses) if return_losses else matrix


def _sgd_pair(center, context, c, o, negs, lr):
    # one positive update plus `negatives` uniform negative updates
    vc = center[c]
    loss = 0.0
    grad_c = np.zeros_like(vc)
    for target, label in [(o, 1.0)] + [(int(g), 0.0) for g in negs]:
        vo = context[target]
        z = 1.0 / (1.0 + np.exp(-np.dot(vc, vo)))
        loss -= np.log((z if label else 1.0 - z) + 1e-12)
        g = (z - label) * lr
        grad_c += g * vo
        context[target] = vo - g * vc
    center[c] = vc - grad_c
    return loss


def fuse_embeddings(text: EmbeddingMatrix, node: EmbeddingMatrix,
                    author_of: dict) -> FusedEmbeddings:
    """Concatenate each document's text vector with its author's node vector.

    Document order follows the text matrix; width is text.dim + node.dim.
    """
    t, s = text.dim, node.dim
    fused = np.empty((len(text.ids), t + s))
    for i, doc_id in enumerate(text.ids):
        if doc_id not in author_of:
            raise ValueError(f"no author for document {doc_id!r}")
        author = author_of[doc_id]
        if author not in node.row_of:
            raise ValueError(f"author {author!r} of document {doc_id!r} has no node row")
        fused[i, :t] = text.vectors[i]
        fused[i, t:] = node.row(author)
    return FusedEmbeddings(ids=list(text.ids), vectors=fused,
                           text_dim=t, node_dim=s, author_of=dict(author_of))
