"""End-to-end mitigation run: ingest, sample, immunize, simulate, persist.

A run is described by a JSON config and leaves three artifacts in the output
directory: the immunization plan, the mitigation report, and a manifest
recording the fully resolved config, input hashes, and versions, so the same
manifest replays to byte-identical outputs.
"""
from __future__ import annotations

import hashlib
import json
import platform
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .graph import build_graph, restrict_set, sample_subgraph
from .immunize import netshield, plan_to_json, random_solver, sparseshield
from .parsers import parse_edge_list, parse_node_set, parse_propagation_trees
from .seeding import derive_seed
from .simulate import SpreadConfig, compare_with_plan, report_to_json

_SAMPLE_ROLE = 0x5A
_SOLVER_ROLE = 0x50


class PipelineError(RuntimeError):
    """Stage failure; message is prefixed with the stage name."""

    def __init__(self, stage: str, detail: str):
        self.stage = stage
        self.detail = detail
        super().__init__(f"{stage}: {detail}")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run parameters (all seeds explicit)."""

    edges: str | None
    trees: str | None
    harmful: str | None
    fraction: float
    sample_seed: int
    algorithm: str
    k: int
    solver_seed: int
    p: float
    trials: int
    master_seed: int
    max_steps: int
    output_dir: str


def resolve_config(raw: dict, base_dir: Path | None = None) -> RunConfig:
    """Fill defaults and derive unset seeds from the master seed."""
    if "config" in raw:  # a manifest replays through its embedded config
        raw = raw["config"]
    master_seed = int(raw.get("master_seed", 0))

    def _path(key):
        value = raw.get(key)
        if value is None:
            return None
        p = Path(value)
        if not p.is_absolute():
            p = (base_dir or Path.cwd()) / p
        # manifests must replay from anywhere, so record absolute paths
        return str(p.resolve())

    return RunConfig(
        edges=_path("edges"),
        trees=_path("trees"),
        harmful=_path("harmful"),
        fraction=float(raw.get("fraction", 1.0)),
        sample_seed=int(raw.get("sample_seed", derive_seed(master_seed, _SAMPLE_ROLE))),
        algorithm=str(raw.get("algorithm", "sparseshield")),
        k=int(raw.get("k", 0)),
        solver_seed=int(raw.get("solver_seed", derive_seed(master_seed, _SOLVER_ROLE))),
        p=float(raw.get("p", 0.1)),
        trials=int(raw.get("trials", 100)),
        master_seed=master_seed,
        max_steps=int(raw.get("max_steps", 64)),
        output_dir=_path("output_dir") or str((base_dir or Path.cwd()) / "out"),
    )


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, PipelineError):
                raise PipelineError(name, str(exc)) from exc
            return False
    return _Ctx()


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_pipeline(config: dict | str | Path, base_dir: Path | None = None) -> dict:
    """Execute a full mitigation run; returns the manifest document."""
    if not isinstance(config, dict):
        config_path = Path(config)
        base_dir = base_dir if base_dir is not None else config_path.parent
        config = json.loads(config_path.read_text(encoding="utf-8"))
    cfg = resolve_config(config, base_dir=base_dir)

    input_hashes = {}
    with _stage("ingest"):
        if (cfg.edges is None) == (cfg.trees is None):
            raise ValueError("config must name exactly one of 'edges' or 'trees'")
        if cfg.edges is not None:
            edges = parse_edge_list(Path(cfg.edges).read_text(encoding="utf-8"))
            input_hashes["edges"] = _sha256(cfg.edges)
        else:
            _, edges = parse_propagation_trees(cfg.trees)
            tree_dir = Path(cfg.trees)
            digest = hashlib.sha256()
            for f in sorted(p for p in tree_dir.iterdir() if p.is_file()):
                digest.update(f.name.encode())
                digest.update(f.read_bytes())
            input_hashes["trees"] = digest.hexdigest()
        harmful_ids: set[str] = set()
        if cfg.harmful is not None:
            harmful_ids = parse_node_set(Path(cfg.harmful).read_text(encoding="utf-8"))
            input_hashes["harmful"] = _sha256(cfg.harmful)

    with _stage("graph"):
        graph, node_map = build_graph(edges)
        if cfg.fraction < 1.0:
            graph, node_map = sample_subgraph(graph, node_map, cfg.fraction, cfg.sample_seed)
        seeds, dropped = restrict_set(harmful_ids, node_map)

    with _stage("immunize"):
        if cfg.algorithm == "netshield":
            plan = netshield(graph, cfg.k, seeds)
        elif cfg.algorithm == "sparseshield":
            plan = sparseshield(graph, cfg.k, seeds)
        elif cfg.algorithm == "random":
            plan = random_solver(graph, cfg.k, cfg.solver_seed)
        else:
            raise ValueError(f"unknown algorithm {cfg.algorithm!r}")

    with _stage("simulate"):
        spread_cfg = SpreadConfig(p=cfg.p, trials=cfg.trials,
                                  master_seed=cfg.master_seed, max_steps=cfg.max_steps)
        report = compare_with_plan(graph, seeds, plan, spread_cfg)

    with _stage("write"):
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        plan_doc = plan_to_json(plan, node_map)
        report_doc = report_to_json(report)
        report_doc["graph_stats"] = {"n": graph.n, "m": graph.m,
                                     "seeds": len(seeds), "seeds_dropped": dropped}
        _write_json(out / "plan.json", plan_doc)
        _write_json(out / "report.json", report_doc)
        manifest = {
            "config": asdict(cfg),
            "input_hashes": input_hashes,
            "versions": {"netimmune": __version__, "numpy": np.__version__,
                         "python": platform.python_version()},
            "artifacts": {"plan": "plan.json", "report": "report.json"},
        }
        _write_json(out / "manifest.json", manifest)
    return manifest
