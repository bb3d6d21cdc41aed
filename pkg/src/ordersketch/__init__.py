"""Order embeddings for ontologies: upper-set closure + countsketch."""

from .closure import NotADagError, UpperSetIndex, compute_upper_sets, is_ancestor, lemma_upper_set
from .dagify import CondensationMap, condense, is_acyclic, topological_order
from .merge import AuxConcept, MergeRecord, depth1_hypernyms, merge_ontologies, tokenize, validate_match
from .ontology import (
    FormatError,
    LemmaIndex,
    Ontology,
    Synset,
    build_lemma_index,
    load_ontology,
    parse_edges,
    parse_nodes,
    serialize_edges,
    serialize_nodes,
    write_ontology,
)
from .sketch import (
    DegenerateDenominatorError,
    HashSpec,
    OrderScore,
    SketchEmbedding,
    classify,
    derive_hash_spec,
    embed_all,
    fnv1a64,
    h1,
    h2,
    mix64,
    read_embedding,
    score,
    sketch_set,
    write_embedding,
)
from .synth import SynthConfig, generate

__all__ = [
    "AuxConcept",
    "CondensationMap",
    "DegenerateDenominatorError",
    "FormatError",
    "HashSpec",
    "LemmaIndex",
    "MergeRecord",
    "NotADagError",
    "Ontology",
    "OrderScore",
    "SketchEmbedding",
    "Synset",
    "SynthConfig",
    "UpperSetIndex",
    "build_lemma_index",
    "classify",
    "compute_upper_sets",
    "condense",
    "depth1_hypernyms",
    "derive_hash_spec",
    "embed_all",
    "fnv1a64",
    "generate",
    "h1",
    "h2",
    "is_acyclic",
    "is_ancestor",
    "lemma_upper_set",
    "load_ontology",
    "merge_ontologies",
    "mix64",
    "parse_edges",
    "parse_nodes",
    "read_embedding",
    "score",
    "serialize_edges",
    "serialize_nodes",
    "sketch_set",
    "tokenize",
    "topological_order",
    "validate_match",
    "write_embedding",
    "write_ontology",
]
