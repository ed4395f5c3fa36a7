"""Command-line front door for the toolkit."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingMatrix, fuse_embeddings, generate_walks, train_skipgram
from .graph import build_graph, dump_graph, load_graph, restrict_set, sample_subgraph
from .immunize import netshield, plan_from_json, plan_to_json, random_solver, sparseshield
from .metrics import classification_report, format_confusion
from .parsers import (format_embedding_table, parse_edge_list, parse_embedding_table,
                      parse_label_file, parse_node_set, parse_propagation_trees)
from .pipeline import run_pipeline
from .simulate import (SpreadConfig, compare_with_plan, outcome_to_json,
                       report_to_json, simulate_spread)
from .spectral import largest_eigenpair


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_json(path: str, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_graph_arg(args):
    return load_graph(args.graph)


def _cmd_ingest(args):
    if args.edges:
        edges = parse_edge_list(_read(args.edges), delimiter=args.delimiter)
    else:
        _, edges = parse_propagation_trees(args.trees)
    graph, node_map = build_graph(edges)
    header = dump_graph(graph, node_map, args.out)
    print(f"graph: n={graph.n} m={graph.m} -> {header}")


def _cmd_sample(args):
    graph, node_map = _load_graph_arg(args)
    sub, sub_map = sample_subgraph(graph, node_map, args.fraction, args.seed)
    header = dump_graph(sub, sub_map, args.out)
    print(f"subgraph: n={sub.n} m={sub.m} -> {header}")


def _cmd_eigen(args):
    graph, node_map = _load_graph_arg(args)
    eig = largest_eigenpair(graph, tol=args.tol, max_iter=args.max_iter)
    print(f"lambda = {eig.value:.12g}")
    top = np.argsort(-eig.vector)[:10]
    for i in top:
        print(f"  {node_map.external(int(i))}\t{eig.vector[i]:.6g}")


def _harmful_indices(args, node_map):
    if not args.harmful:
        return set()
    ids = parse_node_set(_read(args.harmful))
    indices, dropped = restrict_set(ids, node_map)
    if dropped:
        print(f"harmful ids outside graph: {dropped}", file=sys.stderr)
    return indices


def _cmd_immunize(args):
    graph, node_map = _load_graph_arg(args)
    harmful = _harmful_indices(args, node_map)
    if args.algorithm == "netshield":
        plan = netshield(graph, args.k, harmful)
    elif args.algorithm == "sparseshield":
        plan = sparseshield(graph, args.k, harmful)
    else:
        plan = random_solver(graph, args.k, args.seed)
    doc = plan_to_json(plan, node_map)
    _write_json(args.out, doc)
    print(f"{args.algorithm}: blocked {len(plan.blocked)} nodes -> {args.out}")


def _seed_indices(args, node_map):
    if args.seeds_from == "harmful":
        return _harmful_indices(args, node_map)
    ids = parse_node_set(_read(args.seeds_from))
    indices, dropped = restrict_set(ids, node_map)
    if dropped:
        print(f"seed ids outside graph: {dropped}", file=sys.stderr)
    return indices


def _cmd_simulate(args):
    graph, node_map = _load_graph_arg(args)
    seeds = _seed_indices(args, node_map)
    cfg = SpreadConfig(p=args.p, trials=args.trials, master_seed=args.seed,
                       max_steps=args.max_steps)
    outcome = simulate_spread(graph, seeds, (), cfg)
    doc = outcome_to_json(outcome)
    if args.out:
        _write_json(args.out, doc)
    print(json.dumps(doc, indent=2, sort_keys=True))


def _cmd_compare(args):
    graph, node_map = _load_graph_arg(args)
    seeds = _seed_indices(args, node_map)
    plan = plan_from_json(json.loads(_read(args.plan)), node_map)
    cfg = SpreadConfig(p=args.p, trials=args.trials, master_seed=args.seed,
                       max_steps=args.max_steps)
    report = compare_with_plan(graph, seeds, plan, cfg)
    doc = report_to_json(report)
    if args.out:
        _write_json(args.out, doc)
    print(json.dumps(doc, indent=2, sort_keys=True))


def _cmd_embed(args):
    graph, node_map = _load_graph_arg(args)
    walks = generate_walks(graph, p=args.p, q=args.q, walk_len=args.walk_len,
                           walks_per_node=args.walks_per_node, seed=args.seed)
    if args.walks_out:
        with open(args.walks_out, "w", encoding="utf-8") as fh:
            for walk in walks:
                fh.write(" ".join(node_map.external(i) for i in walk) + "\n")
    matrix = train_skipgram(walks, dim=args.dim, window=args.window,
                            negatives=args.negatives, epochs=args.epochs,
                            learning_rate=args.learning_rate, seed=args.seed,
                            ids=list(node_map.id_of))
    Path(args.out).write_text(format_embedding_table(matrix), encoding="utf-8")
    print(f"embeddings: {len(matrix.ids)} x {matrix.dim} -> {args.out}")


def _cmd_fuse(args):
    text = parse_embedding_table(_read(args.text))
    node = parse_embedding_table(_read(args.node))
    author_of = {}
    for line in _read(args.authors).splitlines():
        if line.strip():
            doc_id, _, author = line.partition("\t")
            author_of[doc_id.strip()] = author.strip()
    fused = fuse_embeddings(text, node, author_of)
    table = EmbeddingMatrix(ids=fused.ids, vectors=fused.vectors)
    Path(args.out).write_text(format_embedding_table(table), encoding="utf-8")
    print(f"fused: {len(fused.ids)} x {fused.vectors.shape[1]} -> {args.out}")


def _cmd_metrics(args):
    truth = parse_label_file(_read(args.truth))
    pred = parse_label_file(_read(args.pred))
    report = classification_report(truth, pred, classes=args.classes)
    print(json.dumps({k: v for k, v in report.items() if k != "confusion"},
                     indent=2, sort_keys=True))
    print(format_confusion(report))
    if args.out:
        _write_json(args.out, report)


def _cmd_run(args):
    manifest = run_pipeline(args.config)
    print(f"run complete -> {manifest['config']['output_dir']}")


def _cmd_serve(args):
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netimmune",
                                     description="network immunization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse raw inputs into a graph dump")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", help="edge-list file")
    src.add_argument("--trees", help="directory of propagation tree files")
    p.add_argument("--delimiter", default=None)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("sample", help="induced subgraph on a random node fraction")
    p.add_argument("--graph", required=True, help="graph dump header (.json)")
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("eigen", help="largest adjacency eigenpair")
    p.add_argument("--graph", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.set_defaults(func=_cmd_eigen)

    p = sub.add_parser("immunize", help="select nodes to block")
    p.add_argument("--graph", required=True)
    p.add_argument("--algorithm", choices=["netshield", "sparseshield", "random"],
                   required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--harmful", help="file with one harmful node id per line")
    p.add_argument("--seed", type=int, default=0, help="random solver seed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_immunize)

    p = sub.add_parser("simulate", help="Monte-Carlo spread from seed nodes")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--max-steps", type=int, default=64)
    p.add_argument("--seeds-from", default="harmful",
                   help="'harmful' (with --harmful) or a node-set file")
    p.add_argument("--harmful")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="coupled unblocked/blocked runs for a plan")
    p.add_argument("--graph", required=True)
    p.add_argument("--plan", required=True, help="plan JSON from 'immunize'")
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=64)
    p.add_argument("--seeds-from", default="harmful")
    p.add_argument("--harmful")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("embed", help="random-walk node embeddings")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, default=1.0, help="return bias")
    p.add_argument("--q", type=float, default=1.0, help="in-out bias")
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--walk-len", type=int, default=40)
    p.add_argument("--walks-per-node", type=int, default=10)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--walks-out", help="optional walk corpus dump")
    p.add_argument("--out", required=True, help="embedding TSV output")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("fuse", help="concatenate text and node embeddings")
    p.add_argument("--text", required=True, help="text embedding TSV")
    p.add_argument("--node", required=True, help="node embedding TSV")
    p.add_argument("--authors", required=True, help="TSV doc_id<TAB>node_id")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("metrics", help="score predicted labels against truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("run", help="full pipeline from a JSON config or manifest")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
