"""Token-overlap ontology merging and the depth-1 synonym heuristic.

Auxiliary concepts (id, preferred label, synonyms) are matched against
source synsets by requiring a token overlap with the preferred label AND
with at least one synonym; concepts without synonyms never match.  A
validated match extends the synset's lemma list with the concept's
preferred label and synonyms (nodes and edges are never touched).

Token equality is exact string equality after normalization (lowercase,
alphanumeric runs, stopwords and single characters dropped).  An opt-in
``fold_plurals`` mode also equates a token with its naive English plural
(one trailing "s"), which some curated synonym lists need.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .ontology import FormatError, Ontology, Synset

TokenSet = frozenset[str]

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class AuxConcept:
    """One auxiliary-ontology entry: id, preferred label, synonym labels."""

    id: str
    pref_label: str
    synonyms: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "synonyms", tuple(self.synonyms))
        if not self.id:
            raise FormatError("empty concept id")
        if not self.pref_label:
            raise FormatError(f"concept {self.id!r} has an empty prefLabel")


@dataclass(frozen=True)
class MergeRecord:
    """Provenance for one augmented synset."""

    source_id: str
    matched_aux: tuple[str, ...]
    gained_lemmas: tuple[str, ...]


def default_stopwords() -> frozenset[str]:
    text = resources.files("ordersketch").joinpath("data/stopwords.txt").read_text("utf-8")
    words = set()
    for raw in text.splitlines():
        word = raw.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One stopword per line; blank lines and # comments ignored."""
    words = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        word = raw.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


def tokenize(label: str, stopwords: frozenset[str]) -> TokenSet:
    """Lowercase, split on non-alphanumerics, drop stopwords and 1-char tokens."""
    tokens = _TOKEN_RE.findall(label.lower())
    return frozenset(t for t in tokens if len(t) >= 2 and t not in stopwords)


def _fold(token: str) -> str:
    return token[:-1] if len(token) > 3 and token.endswith("s") else token


def _canon(tokens: Iterable[str], fold_plurals: bool) -> frozenset[str]:
    if not fold_plurals:
        return frozenset(tokens)
    return frozenset(_fold(t) for t in tokens)


def validate_match(
    source: TokenSet,
    aux: AuxConcept,
    stopwords: frozenset[str],
    fold_plurals: bool = False,
) -> bool:
    """True iff the source overlaps the prefLabel AND at least one synonym.

    Concepts with no synonyms never match (both attributes are required).
    Monotone in the source token set: growing it never breaks a match.
    """
    if not aux.synonyms:
        return False
    src = _canon(source, fold_plurals)
    if src.isdisjoint(_canon(tokenize(aux.pref_label, stopwords), fold_plurals)):
        return False
    return any(
        not src.isdisjoint(_canon(tokenize(syn, stopwords), fold_plurals))
        for syn in aux.synonyms
    )


def _concept_tokens(aux: AuxConcept, stopwords: frozenset[str], fold_plurals: bool) -> frozenset[str]:
    tokens = set(tokenize(aux.pref_label, stopwords))
    for syn in aux.synonyms:
        tokens |= tokenize(syn, stopwords)
    return _canon(tokens, fold_plurals)


def merge_ontologies(
    source: Ontology,
    aux: Sequence[AuxConcept],
    stopwords: frozenset[str],
    fold_plurals: bool = False,
) -> tuple[Ontology, list[MergeRecord]]:
    """Extend synset lemma lists with labels of validated concept matches.

    Nodes and edges are untouched; only lemma lists grow.  Gained labels
    keep concept order (prefLabel first, then synonyms in file order) and
    are deduplicated against existing lemmas and each other.  Records are
    emitted in source id order, one per synset with at least one match.
    """
    # inverted token index over concept labels, so each synset only probes
    # candidates that share at least one token
    by_token: dict[str, list[int]] = {}
    for ci, concept in enumerate(aux):
        for token in _concept_tokens(concept, stopwords, fold_plurals):
            by_token.setdefault(token, []).append(ci)

    synsets: dict[str, Synset] = {}
    records: list[MergeRecord] = []
    for nid in sorted(source.synsets):
        synset = source.synsets[nid]
        tokens: set[str] = set()
        for lemma in synset.lemmas:
            tokens |= tokenize(lemma, stopwords)
        src = _canon(tokens, fold_plurals)
        matched: list[str] = []
        gained: list[str] = []
        if src:
            candidates = sorted({ci for t in src for ci in by_token.get(t, ())})
            have = set(synset.lemmas)
            for ci in candidates:
                concept = aux[ci]
                if not validate_match(src, concept, stopwords, fold_plurals):
                    continue
                matched.append(concept.id)
                for label in (concept.pref_label, *concept.synonyms):
                    if label not in have:
                        have.add(label)
                        gained.append(label)
        if matched:
            synsets[nid] = Synset(nid, synset.lemmas + tuple(gained))
            records.append(MergeRecord(nid, tuple(matched), tuple(gained)))
        else:
            synsets[nid] = synset
    return Ontology(synsets, source.edges), records


def depth1_hypernyms(aux: Sequence[AuxConcept]) -> Ontology:
    """Forest of depth 1: each concept above its synonyms.

    The concept becomes a parent node (lemma = prefLabel) and every
    synonym a child node ``<concept_id>#<i>`` (1-based) with an edge
    child -> parent; concepts without synonyms yield isolated nodes.
    """
    seen: set[str] = set()
    synsets: dict[str, Synset] = {}
    edges: list[tuple[str, str]] = []
    for concept in aux:
        if concept.id in seen:
            raise FormatError(f"duplicate concept id {concept.id!r}")
        seen.add(concept.id)
        synsets[concept.id] = Synset(concept.id, (concept.pref_label,))
        for i, synonym in enumerate(concept.synonyms, start=1):
            child_id = f"{concept.id}#{i}"
            if child_id in synsets:
                raise FormatError(f"synonym node id {child_id!r} collides")
            synsets[child_id] = Synset(child_id, (synonym,))
            edges.append((child_id, concept.id))
    return Ontology(synsets, tuple(edges))


def parse_aux(stream: Iterable[str]) -> list[AuxConcept]:
    """Parse aux.tsv: ``<concept_id>\\t<prefLabel>\\t<syn1>|<syn2>|...``.

    The synonym field may be empty.  prefLabel may not contain ``|``
    (it becomes a lemma on merge).  ``#`` lines are comments.
    """
    concepts: list[AuxConcept] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"expected 3 tab-separated fields, found {len(fields)} at line {lineno}")
        concept_id, pref_label, syn_field = fields
        if "|" in pref_label:
            raise FormatError(f"prefLabel may not contain '|' at line {lineno}")
        if concept_id in seen:
            raise FormatError(f"duplicate concept id {concept_id!r} at line {lineno}")
        synonyms = tuple(s for s in syn_field.split("|") if s) if syn_field else ()
        try:
            concepts.append(AuxConcept(concept_id, pref_label, synonyms))
        except FormatError as exc:
            raise FormatError(f"{exc} at line {lineno}") from None
        seen.add(concept_id)
    return concepts


def serialize_merge_records(records: Sequence[MergeRecord]) -> str:
    """merge_report.tsv: ``<source_id>\\t<aux1>|<aux2>\\t<gained1>|<gained2>``."""
    return "".join(
        f"{r.source_id}\t{'|'.join(r.matched_aux)}\t{'|'.join(r.gained_lemmas)}\n"
        for r in records
    )
