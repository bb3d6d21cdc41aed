"""Core ontology types and the nodes/edges TSV formats.

A synset is a node carrying zero or more lemma names; edges point
child -> parent (hyponym -> hypernym), so "upward" always means toward
the more general concept.  Graphs may contain directed cycles at this
stage; repairing them is the job of :mod:`ordersketch.dagify`.

Parsing is strict: ids and lemmas may not contain tab, newline or ``|``,
ids may not start with ``#`` (that is the comment marker), and duplicates
are rejected with a 1-based line number in the message.  Serialization is
canonical (ids sorted lexicographically, lemmas kept in stored order) so
that serialize(parse(file)) round-trips canonical files byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

# Lemma name -> sorted tuple of synset ids carrying it.
LemmaIndex = dict[str, tuple[str, ...]]

_RESERVED = ("\t", "\n", "|")


class FormatError(ValueError):
    """Malformed or inconsistent ontology input."""


def _fail(message: str, line: int | None = None) -> FormatError:
    if line is not None:
        return FormatError(f"{message} at line {line}")
    return FormatError(message)


def _check_token(text: str, kind: str) -> None:
    if not text:
        raise FormatError(f"empty {kind}")
    for ch in _RESERVED:
        if ch in text:
            raise FormatError(f"{kind} {text!r} contains reserved character {ch!r}")


@dataclass(frozen=True)
class Synset:
    """One word meaning: an id plus the lemma names expressing it."""

    id: str
    lemmas: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "lemmas", tuple(self.lemmas))
        _check_token(self.id, "node id")
        if self.id.startswith("#"):
            # would serialize to a comment line and break round-tripping
            raise FormatError(f"node id {self.id!r} may not start with '#'")
        seen: set[str] = set()
        for lemma in self.lemmas:
            _check_token(lemma, "lemma")
            if lemma in seen:
                raise FormatError(f"duplicate lemma {lemma!r} in synset {self.id!r}")
            seen.add(lemma)


@dataclass(frozen=True)
class Ontology:
    """Synsets keyed by id plus (child, parent) is-a edges.

    Directed cycles are permitted; every edge endpoint must exist, no
    self-edges, no duplicate edges.  Instances are immutable after
    construction and safe to share across threads.
    """

    synsets: dict[str, Synset]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted(set(self.edges))))
        for child, parent in self.edges:
            if child == parent:
                raise FormatError(f"self-edge on {child!r}")
            for endpoint in (child, parent):
                if endpoint not in self.synsets:
                    raise FormatError(f"edge references unknown node id {endpoint!r}")

    @cached_property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.synsets))

    @cached_property
    def parents(self) -> dict[str, tuple[str, ...]]:
        """child id -> sorted tuple of parent ids (empty tuple for roots)."""
        out: dict[str, list[str]] = {nid: [] for nid in self.synsets}
        for child, parent in self.edges:
            out[child].append(parent)
        return {nid: tuple(sorted(ps)) for nid, ps in out.items()}

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {nid: [] for nid in self.synsets}
        for child, parent in self.edges:
            out[parent].append(child)
        return {nid: tuple(sorted(cs)) for nid, cs in out.items()}


def parse_nodes(stream: Iterable[str]) -> dict[str, Synset]:
    """Parse a nodes.tsv stream: ``<node_id>\\t<lemma1>|<lemma2>|...``.

    Lines starting with ``#`` are comments; the lemma field may be empty.
    Raises :class:`FormatError` (with line number) on duplicate ids,
    malformed lines or reserved characters.
    """
    synsets: dict[str, Synset] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise _fail(f"expected 2 tab-separated fields, found {len(fields)}", lineno)
        node_id, lemma_field = fields
        lemmas = tuple(lemma_field.split("|")) if lemma_field else ()
        try:
            synset = Synset(node_id, lemmas)
        except FormatError as exc:
            raise _fail(str(exc), lineno) from None
        if node_id in synsets:
            raise _fail(f"duplicate node id {node_id!r}", lineno)
        synsets[node_id] = synset
    return synsets


def parse_edges(stream: Iterable[str], synsets: Mapping[str, Synset]) -> Ontology:
    """Parse an edges.tsv stream (``<child_id>\\t<parent_id>`` per line).

    Cycles are allowed here; unknown endpoints, self-edges and duplicate
    edges are errors with line numbers.
    """
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise _fail(f"expected 2 tab-separated fields, found {len(fields)}", lineno)
        child, parent = fields
        for endpoint in (child, parent):
            if endpoint not in synsets:
                raise _fail(f"edge references unknown node id {endpoint!r}", lineno)
        if child == parent:
            raise _fail(f"self-edge on {child!r}", lineno)
        if (child, parent) in seen:
            raise _fail(f"duplicate edge {child!r} -> {parent!r}", lineno)
        seen.add((child, parent))
        edges.append((child, parent))
    return Ontology(dict(synsets), tuple(edges))


def serialize_nodes(synsets: Mapping[str, Synset]) -> str:
    """Canonical nodes.tsv text: ids sorted, lemmas in stored order."""
    lines = []
    for nid in sorted(synsets):
        lines.append(f"{nid}\t{'|'.join(synsets[nid].lemmas)}\n")
    return "".join(lines)


def serialize_edges(ontology: Ontology) -> str:
    """Canonical edges.tsv text: (child, parent) pairs sorted."""
    return "".join(f"{c}\t{p}\n" for c, p in ontology.edges)


def load_ontology(nodes_path: str | Path, edges_path: str | Path) -> Ontology:
    with open(nodes_path, encoding="utf-8") as fh:
        synsets = parse_nodes(fh)
    with open(edges_path, encoding="utf-8") as fh:
        return parse_edges(fh, synsets)


def write_ontology(ontology: Ontology, nodes_path: str | Path, edges_path: str | Path) -> None:
    Path(nodes_path).write_text(serialize_nodes(ontology.synsets), encoding="utf-8")
    Path(edges_path).write_text(serialize_edges(ontology), encoding="utf-8")


def build_lemma_index(ontology: Ontology) -> LemmaIndex:
    """Map every lemma name to the sorted ids of the synsets listing it."""
    senses: dict[str, set[str]] = {}
    for nid, synset in ontology.synsets.items():
        for lemma in synset.lemmas:
            senses.setdefault(lemma, set()).add(nid)
    return {lemma: tuple(sorted(ids)) for lemma, ids in senses.items()}
