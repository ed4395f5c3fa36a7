"""Stateless-protocol HTTP/JSON service over an in-memory graph session store.

Graphs are uploaded once and never mutated; immunize/simulate/compare are
pure computations whose randomness is fixed by explicit request seeds, so
identical requests against the same graph id return identical responses.
Heavy simulations are detached to a job with a polling endpoint.
"""
from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .graph import Graph, NodeIndexMap, build_graph, restrict_set
from .immunize import netshield, plan_from_json, plan_to_json, random_solver, sparseshield
from .parsers import ParseError, derive_user_edges, parse_edge_list, parse_tree_text
from .simulate import (SpreadConfig, compare_with_plan, outcome_to_json,
                       report_to_json, simulate_spread)
from .spectral import EigenPair, largest_eigenpair

#: estimated trials*(n+m) above which a simulation runs as a polled job
ASYNC_COST_THRESHOLD = 5_000_000
VIEW_NODE_LIMIT = 3_000


class ServiceError(Exception):
    def __init__(self, status: int, stage: str, detail: str):
        self.status = status
        self.stage = stage
        self.detail = detail
        super().__init__(detail)


@dataclass
class GraphEntry:
    graph: Graph
    node_map: NodeIndexMap
    harmful: set[int] = field(default_factory=set)
    eigen: EigenPair | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Process-lifetime map of graph id -> immutable graph state."""

    def __init__(self):
        self._entries: dict[str, GraphEntry] = {}
        self._lock = threading.Lock()

    def add(self, entry: GraphEntry) -> str:
        graph_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._entries[graph_id] = entry
        return graph_id

    def get(self, graph_id: str) -> GraphEntry:
        with self._lock:
            entry = self._entries.get(graph_id)
        if entry is None:
            raise ServiceError(404, "session", f"unknown graph id {graph_id!r}")
        return entry


class JobStore:
    def __init__(self, workers: int = 2):
        self._jobs: dict[str, dict] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=workers)

    def submit(self, fn) -> str:
        job_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._jobs[job_id] = {"status": "pending"}

        def run():
            try:
                result = fn()
                with self._lock:
                    self._jobs[job_id] = {"status": "done", "result": result}
            except Exception as exc:  # surfaced through GET /jobs/{id}
                with self._lock:
                    self._jobs[job_id] = {"status": "error", "error": str(exc)}

        self._pool.submit(run)
        return job_id

    def get(self, job_id: str) -> dict:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise ServiceError(404, "jobs", f"unknown job id {job_id!r}")
        return dict(job)


class GraphUpload(BaseModel):
    format: Literal["edge-list", "trees"]
    text: str | None = None
    files: dict[str, str] | None = None
    delimiter: str | None = None
    harmful: list[str] | None = None


class HarmfulUpdate(BaseModel):
    ids: list[str]


class ImmunizeRequest(BaseModel):
    algorithm: Literal["netshield", "sparseshield", "random"]
    k: int = Field(ge=0)
    seed: int | None = None


class SimulateRequest(BaseModel):
    seeds: list[str] | None = None
    blocked: list[str] | None = None
    p: float = Field(ge=0.0, le=1.0)
    trials: int = Field(ge=1)
    master_seed: int
    max_steps: int = Field(default=64, ge=1)


class CompareRequest(BaseModel):
    plan: dict
    p: float = Field(ge=0.0, le=1.0)
    trials: int = Field(ge=1)
    master_seed: int
    max_steps: int = Field(default=64, ge=1)


def create_app(store: SessionStore | None = None, jobs: JobStore | None = None) -> FastAPI:
    app = FastAPI(title="netimmune", version="0.1.0")
    store = store if store is not None else SessionStore()
    jobs = jobs if jobs is not None else JobStore()

    @app.exception_handler(ServiceError)
    async def _service_error(_: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status,
                            content={"error": exc.__class__.__name__,
                                     "stage": exc.stage, "detail": exc.detail})

    @app.exception_handler(ParseError)
    async def _parse_error(_: Request, exc: ParseError):
        return JSONResponse(status_code=400,
                            content={"error": "ParseError", "stage": "ingest",
                                     "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(_: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content={"error": "ValueError", "stage": "request",
                                     "detail": str(exc)})

    def _resolve(entry: GraphEntry, ids: list[str] | None, fallback: set[int]) -> set[int]:
        if ids is None:
            return set(fallback)
        indices, _ = restrict_set(ids, entry.node_map)
        return indices

    @app.post("/graphs", status_code=201)
    def upload_graph(body: GraphUpload):
        if body.format == "edge-list":
            if body.text is None:
                raise ServiceError(400, "ingest", "edge-list upload requires 'text'")
            edges = parse_edge_list(body.text, delimiter=body.delimiter)
        else:
            if not body.files:
                raise ServiceError(400, "ingest", "tree upload requires 'files'")
            records = []
            for name in sorted(body.files):
                records.extend(parse_tree_text(body.files[name], source=name))
            edges = derive_user_edges(records)
        graph, node_map = build_graph(edges)
        entry = GraphEntry(graph=graph, node_map=node_map)
        if body.harmful:
            entry.harmful, _ = restrict_set(body.harmful, node_map)
        graph_id = store.add(entry)
        return {"graph_id": graph_id, "n": graph.n, "m": graph.m}

    @app.get("/graphs/{graph_id}")
    def graph_stats(graph_id: str):
        entry = store.get(graph_id)
        return {"graph_id": graph_id, "n": entry.graph.n, "m": entry.graph.m,
                "unweighted": entry.graph.unweighted,
                "harmful_count": len(entry.harmful)}

    @app.put("/graphs/{graph_id}/harmful")
    def put_harmful(graph_id: str, body: HarmfulUpdate):
        entry = store.get(graph_id)
        indices, dropped = restrict_set(body.ids, entry.node_map)
        entry.harmful = indices
        return {"count": len(indices), "dropped": dropped}

    @app.post("/graphs/{graph_id}/immunize")
    def immunize(graph_id: str, body: ImmunizeRequest):
        entry = store.get(graph_id)
        if entry.graph.n == 0:
            raise ServiceError(400, "immunize", "graph is empty")
        if body.algorithm == "random":
            plan = random_solver(entry.graph, body.k,
                                 seed=body.seed if body.seed is not None else 0)
        else:
            with entry.lock:  # graphs are immutable, so the cache never invalidates
                if entry.eigen is None:
                    entry.eigen = largest_eigenpair(entry.graph)
            if body.algorithm == "netshield":
                plan = netshield(entry.graph, body.k, entry.harmful, eig=entry.eigen)
            else:
                plan = sparseshield(entry.graph, body.k, entry.harmful, eig=entry.eigen)
        return plan_to_json(plan, entry.node_map)

    def _spread_config(body) -> SpreadConfig:
        return SpreadConfig(p=body.p, trials=body.trials,
                            master_seed=body.master_seed, max_steps=body.max_steps)

    @app.post("/graphs/{graph_id}/simulate")
    def simulate(graph_id: str, body: SimulateRequest):
        entry = store.get(graph_id)
        seeds = _resolve(entry, body.seeds, entry.harmful)
        blocked = _resolve(entry, body.blocked, set())
        cfg = _spread_config(body)

        def work():
            return outcome_to_json(simulate_spread(entry.graph, seeds, blocked, cfg))

        cost = cfg.trials * (entry.graph.n + entry.graph.m)
        if cost > ASYNC_COST_THRESHOLD:
            job_id = jobs.submit(work)
            return JSONResponse(status_code=202,
                                content={"job_id": job_id, "status": "pending"})
        return work()

    @app.post("/graphs/{graph_id}/compare")
    def compare(graph_id: str, body: CompareRequest):
        entry = store.get(graph_id)
        try:
            plan = plan_from_json(body.plan, entry.node_map)
        except KeyError as exc:
            raise ServiceError(400, "compare", f"plan references unknown node {exc}") from exc
        seeds = set(entry.harmful)
        cfg = _spread_config(body)

        def work():
            report = compare_with_plan(entry.graph, seeds, plan, cfg)
            return report_to_json(report)

        cost = 2 * cfg.trials * (entry.graph.n + entry.graph.m)
        if cost > ASYNC_COST_THRESHOLD:
            job_id = jobs.submit(work)
            return JSONResponse(status_code=202,
                                content={"job_id": job_id, "status": "pending"})
        return work()

    @app.get("/graphs/{graph_id}/view")
    def view(graph_id: str, limit: int = VIEW_NODE_LIMIT):
        entry = store.get(graph_id)
        graph = entry.graph
        degrees = graph.degrees
        order = sorted(range(graph.n), key=lambda i: (-int(degrees[i]), i))
        kept = order[:max(0, limit)]
        position = {node: pos for pos, node in enumerate(kept)}
        nodes = [{"id": entry.node_map.external(i), "degree": int(degrees[i]),
                  "harmful": i in entry.harmful} for i in kept]
        edge_list = []
        for i in kept:
            pi = position[i]
            for j in graph.neighbors_of(i):
                pj = position.get(int(j))
                if pj is not None and pi < pj:
                    edge_list.append([pi, pj])
        return {"nodes": nodes, "edges": edge_list,
                "truncated": graph.n > len(kept), "total_nodes": graph.n}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        job = jobs.get(job_id)
        job["job_id"] = job_id
        return job

    return app
