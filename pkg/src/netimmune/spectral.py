"""Largest adjacency eigenpair by shifted power iteration.

Iterates v <- (A + I) v / ||(A + I) v|| from the all-ones start vector. The
+I shift leaves eigenvectors unchanged while opening a spectral gap at the
top, so bipartite +-lambda oscillation cannot stall the iteration; the
reported eigenvalue is the (A + I) Rayleigh quotient minus one. On a
disconnected graph the result is the dominant component's eigenpair; entries
outside it underflow toward zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


class PowerIterationError(RuntimeError):
    """Iteration budget exhausted before convergence."""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})")


@dataclass(frozen=True)
class EigenPair:
    """Largest eigenvalue and unit eigenvector, sign-normalized so sum(u) >= 0."""

    value: float
    vector: np.ndarray


def _matvec(graph: Graph, v: np.ndarray, row_index: np.ndarray) -> np.ndarray:
    if graph.neighbors.size == 0:
        return np.zeros(graph.n)
    return np.bincount(row_index, weights=graph.weights * v[graph.neighbors],
                       minlength=graph.n)


def largest_eigenpair(graph: Graph, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> EigenPair:
    """Compute the largest adjacency eigenvalue and its eigenvector.

    Stops once successive Rayleigh quotients agree within tol and the
    residual ||A u - lambda u|| is below tol*max(1, lambda); raises
    PowerIterationError (carrying the last residual) past max_iter.
    """
    if graph.n == 0:
        raise ValueError("graph has no nodes")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    row_index = np.repeat(np.arange(graph.n), graph.degrees)
    v = np.full(graph.n, 1.0 / np.sqrt(graph.n))
    rq_prev = np.inf
    residual = np.inf
    for _ in range(max_iter):
        av = _matvec(graph, v, row_index)
        rq = float(v @ av) + 1.0  # Rayleigh quotient of (A + I) for unit v
        lam = rq - 1.0
        residual = float(np.linalg.norm(av - lam * v))
        if abs(rq - rq_prev) < tol and residual <= tol * max(1.0, lam):
            u = v if v.sum() >= 0 else -v
            return EigenPair(value=max(lam, 0.0), vector=u)
        rq_prev = rq
        w = av + v
        v = w / np.linalg.norm(w)
    raise PowerIterationError(iterations=max_iter, residual=residual)
