"""Parsers for the external file formats consumed by the toolkit.

Formats (all UTF-8 text):
  * edge list   — one edge per line, ``src dst [weight]``, tab or space
    delimited, ``#`` starts a comment line
  * propagation trees — one file per source tweet, lines of the form
    ``['uid', 'tweet_id', 'time']->['uid', 'tweet_id', 'time']``; root
    lines carry the literal parent user ``ROOT``
  * label file  — ``classname:tweet_id`` lines, classes true/false/
    unverified/non-rumor
  * node set    — one id per line, blanks ignored
  * embedding table — TSV, id column followed by d real columns
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .embeddings import EmbeddingMatrix

#: class name -> integer code used throughout (true/false/unverified/non-rumor).
LABEL_ENCODINGS = {"true": 0, "false": 1, "unverified": 2, "non-rumor": 3}
LABEL_NAMES = {code: name for name, code in LABEL_ENCODINGS.items()}


class ParseError(ValueError):
    """Malformed input line; carries the 1-based line number and source name."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += source
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class RawEdge:
    """A single edge as it appears on disk, before any graph-level cleanup."""

    src: str
    dst: str
    weight: float = 1.0

    def __post_init__(self):
        if not self.src or not self.dst:
            raise ValueError("edge endpoints must be nonempty")
        if self.weight < 0:
            raise ValueError(f"negative edge weight {self.weight}")


@dataclass(frozen=True)
class PropagationRecord:
    """One parent->child line of a propagation tree file."""

    parent_user: str
    parent_tweet: str
    parent_time: float
    child_user: str
    child_tweet: str
    child_time: float

    def __post_init__(self):
        if not (self.parent_user and self.parent_tweet and self.child_user and self.child_tweet):
            raise ValueError("user/tweet ids must be nonempty")
        if self.child_time < 0:
            raise ValueError(f"negative child time {self.child_time}")


def _lines(stream: IO[str] | str) -> Iterable[tuple[int, str]]:
    if isinstance(stream, str):
        it = stream.splitlines()
    else:
        it = stream
    for lineno, raw in enumerate(it, start=1):
        yield lineno, raw.rstrip("\n")


def parse_edge_list(stream: IO[str] | str, delimiter: str | None = None) -> list[RawEdge]:
    """Parse an edge-list stream into raw edges, in file order.

    ``delimiter=None`` splits on any whitespace run. Self-loops are kept
    (dropped later at graph construction). Raises ParseError with the line
    number on malformed lines or negative weights.
    """
    edges: list[RawEdge] = []
    for lineno, line in _lines(stream):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.split(delimiter) if delimiter is not None else line.split()
        fields = [f.strip() for f in fields]
        if len(fields) < 2 or not fields[0] or not fields[1]:
            raise ParseError(f"expected 'src dst [weight]', got {stripped!r}", line=lineno)
        weight = 1.0
        if len(fields) >= 3 and fields[2]:
            try:
                weight = float(fields[2])
            except ValueError:
                raise ParseError(f"unparsable weight {fields[2]!r}", line=lineno) from None
        try:
            edges.append(RawEdge(fields[0], fields[1], weight))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return edges


def format_edge_list(edges: Iterable[RawEdge]) -> str:
    """Inverse of parse_edge_list; float weights are written with full precision."""
    return "".join(f"{e.src}\t{e.dst}\t{e.weight!r}\n" for e in edges)


_NODE_RE = r"\[\s*'([^']*)'\s*,\s*'([^']*)'\s*,\s*'([^']*)'\s*\]"
_TREE_LINE_RE = re.compile(rf"^\s*{_NODE_RE}\s*->\s*{_NODE_RE}\s*$")


def parse_tree_text(text: str, source: str | None = None) -> list[PropagationRecord]:
    """Parse one propagation-tree file's text into records, in file order."""
    records: list[PropagationRecord] = []
    for lineno, line in _lines(text):
        if not line.strip():
            continue
        m = _TREE_LINE_RE.match(line)
        if m is None:
            raise ParseError(f"line does not match the tree pattern: {line.strip()!r}",
                             line=lineno, source=source)
        pu, pt, ptime, cu, ct, ctime = m.groups()
        try:
            parent_time = float(ptime)
            child_time = float(ctime)
        except ValueError:
            raise ParseError(f"unparsable time field in {line.strip()!r}",
                             line=lineno, source=source) from None
        try:
            records.append(PropagationRecord(pu, pt, parent_time, cu, ct, child_time))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, source=source) from None
    return records


def derive_user_edges(records: Iterable[PropagationRecord]) -> list[RawEdge]:
    """Parent-user -> child-user edges from tree records.

    ROOT-parent lines yield no edge. Duplicate pairs collapse to a single
    weight-1 edge (the scoring treats propagation graphs as unweighted).
    """
    seen: set[tuple[str, str]] = set()
    edges: list[RawEdge] = []
    for rec in records:
        if rec.parent_user == "ROOT":
            continue
        key = (rec.parent_user, rec.child_user)
        if key in seen:
            continue
        seen.add(key)
        edges.append(RawEdge(rec.parent_user, rec.child_user, 1.0))
    return edges


def parse_propagation_trees(directory: str | Path) -> tuple[list[PropagationRecord], list[RawEdge]]:
    """Parse every tree file in a directory (sorted by name) and derive user edges."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ParseError(f"tree directory not found: {directory}")
    records: list[PropagationRecord] = []
    for path in sorted(p for p in directory.iterdir() if p.is_file()):
        records.extend(parse_tree_text(path.read_text(encoding="utf-8"), source=path.name))
    return records, derive_user_edges(records)


def parse_label_file(stream: IO[str] | str) -> dict[str, int]:
    """Parse ``classname:tweet_id`` lines into tweet id -> class code."""
    labels: dict[str, int] = {}
    for lineno, line in _lines(stream):
        stripped = line.strip()
        if not stripped:
            continue
        name, sep, tweet_id = stripped.partition(":")
        name = name.strip()
        tweet_id = tweet_id.strip()
        if not sep or not tweet_id:
            raise ParseError(f"expected 'class:tweet_id', got {stripped!r}", line=lineno)
        if name not in LABEL_ENCODINGS:
            raise ParseError(f"unknown class name {name!r}", line=lineno)
        code = LABEL_ENCODINGS[name]
        if labels.get(tweet_id, code) != code:
            raise ParseError(f"conflicting labels for tweet {tweet_id}", line=lineno)
        labels[tweet_id] = code
    return labels


def format_label_file(labels: dict[str, int]) -> str:
    return "".join(f"{LABEL_NAMES[code]}:{tweet_id}\n" for tweet_id, code in labels.items())


def parse_node_set(stream: IO[str] | str) -> set[str]:
    """One id per line; blank lines ignored; duplicates collapse."""
    ids: set[str] = set()
    for _, line in _lines(stream):
        stripped = line.strip()
        if stripped:
            ids.add(stripped)
    return ids


def parse_embedding_table(stream: IO[str] | str) -> EmbeddingMatrix:
    """Parse a TSV embedding table (id column, then d real columns)."""
    ids: list[str] = []
    rows: list[list[float]] = []
    dim: int | None = None
    for lineno, line in _lines(stream):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise ParseError(f"expected id and at least one value, got {line!r}", line=lineno)
        if dim is None:
            dim = len(fields) - 1
        elif len(fields) - 1 != dim:
            raise ParseError(
                f"ragged row: expected {dim} values, got {len(fields) - 1}", line=lineno)
        try:
            rows.append([float(f) for f in fields[1:]])
        except ValueError:
            raise ParseError(f"non-numeric embedding value in {line!r}", line=lineno) from None
        ids.append(fields[0])
    vectors = np.asarray(rows, dtype=np.float64) if rows else np.zeros((0, 0))
    return EmbeddingMatrix(ids=ids, vectors=vectors)


def format_embedding_table(matrix: EmbeddingMatrix) -> str:
    lines = []
    for i, row_id in enumerate(matrix.ids):
        values = "\t".join(repr(float(v)) for v in matrix.vectors[i])
        lines.append(f"{row_id}\t{values}\n")
    return "".join(lines)
