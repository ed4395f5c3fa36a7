"""Network immunization toolkit: spectral node blocking with harmful-node
penalties, coupled cascade simulation, node embeddings, and an analyst
service."""

__version__ = "0.1.0"

from .embeddings import (EmbeddingMatrix, FusedEmbeddings, fuse_embeddings,
                         generate_walks, train_skipgram)
from .graph import (Graph, NodeIndexMap, build_graph, dump_graph, load_graph,
                    restrict_set, sample_subgraph)
from .immunize import (ImmunizationPlan, ScoreQueue, greedy_select, init_scores,
                       netshield, plan_from_json, plan_to_json, random_solver,
                       sparseshield)
from .metrics import classification_report
from .parsers import (LABEL_ENCODINGS, ParseError, PropagationRecord, RawEdge,
                      parse_edge_list, parse_embedding_table, parse_label_file,
                      parse_node_set, parse_propagation_trees)
from .pipeline import PipelineError, run_pipeline
from .simulate import (MitigationReport, SpreadConfig, SpreadOutcome,
                       compare_with_plan, simulate_spread)
from .spectral import EigenPair, PowerIterationError, largest_eigenpair

__all__ = [
    "EmbeddingMatrix", "FusedEmbeddings", "fuse_embeddings", "generate_walks",
    "train_skipgram", "Graph", "NodeIndexMap", "build_graph", "dump_graph",
    "load_graph", "restrict_set", "sample_subgraph", "ImmunizationPlan",
    "ScoreQueue", "greedy_select", "init_scores", "netshield", "plan_from_json",
    "plan_to_json", "random_solver", "sparseshield", "classification_report",
    "LABEL_ENCODINGS", "ParseError", "PropagationRecord", "RawEdge",
    "parse_edge_list", "parse_embedding_table", "parse_label_file",
    "parse_node_set", "parse_propagation_trees", "PipelineError", "run_pipeline",
    "MitigationReport", "SpreadConfig", "SpreadOutcome", "compare_with_plan",
    "simulate_spread", "EigenPair", "PowerIterationError", "largest_eigenpair",
]
