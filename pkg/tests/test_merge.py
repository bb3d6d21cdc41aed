import pytest
from hypothesis import given, strategies as st

from ordersketch.dagify import is_acyclic
from ordersketch.merge import (
    AuxConcept,
    default_stopwords,
    depth1_hypernyms,
    merge_ontologies,
    parse_aux,
    serialize_merge_records,
    tokenize,
    validate_match,
)
from ordersketch.ontology import FormatError, Ontology, Synset

SKULL_SOURCE_LABEL = "Entire occipitomastoid suture of skull (body structure)"

SKULL_CONCEPTS = [
    AuxConcept("mesh:skull", "Skull", ("Cranium", "Skulls", "Calvaria", "Calvarium")),
    AuxConcept(
        "mesh:suture-techniques",
        "Suture Techniques",
        ("Suture Technique", "Technique, Suture", "Technics, Suture"),
    ),
    AuxConcept(
        "mesh:skull-fractures",
        "Skull Fractures",
        ("Fractures, Skull", "Non-Depressed Skull Fractures", "Linear Skull Fractures"),
    ),
]


def test_tokenize_running_example():
    tokens = tokenize(SKULL_SOURCE_LABEL, frozenset({"of"}))
    assert tokens == {"entire", "occipitomastoid", "suture", "skull", "body", "structure"}


def test_tokenize_simple():
    assert tokenize("Suture Techniques", frozenset()) == {"suture", "techniques"}


def test_tokenize_degenerate_all_stopwords():
    assert tokenize("of the", frozenset({"of", "the"})) == frozenset()


def test_tokenize_drops_single_characters():
    assert tokenize("a b vitamin-D", frozenset()) == {"vitamin"}


_STOP = default_stopwords()
_SOURCE = tokenize(SKULL_SOURCE_LABEL, _STOP)


def test_validate_match_skull_row_needs_plural_fold():
    skull = SKULL_CONCEPTS[0]
    # exact token equality: "Skulls" != "skull" and no other synonym overlaps
    assert validate_match(_SOURCE, skull, _STOP) is False
    assert validate_match(_SOURCE, skull, _STOP, fold_plurals=True) is True


def test_validate_match_other_rows_match_exactly():
    assert validate_match(_SOURCE, SKULL_CONCEPTS[1], _STOP) is True
    assert validate_match(_SOURCE, SKULL_CONCEPTS[2], _STOP) is True


def test_validate_match_domain_irrelevant_source():
    sandals = tokenize("Sandals (physical object)", _STOP)
    for concept in SKULL_CONCEPTS:
        assert validate_match(sandals, concept, _STOP, fold_plurals=True) is False


def test_validate_match_requires_synonyms():
    bare = AuxConcept("m1", "Skull", ())
    assert validate_match(_SOURCE, bare, _STOP, fold_plurals=True) is False


def _source_ontology():
    synsets = {
        "sct:1": Synset("sct:1", (SKULL_SOURCE_LABEL,)),
        "sct:2": Synset("sct:2", ("Sandals (physical object)",)),
    }
    return Ontology(synsets, ())


def test_merge_no_aux_is_identity():
    merged, records = merge_ontologies(_source_ontology(), [], _STOP)
    assert merged == _source_ontology()
    assert records == []


def test_merge_skull_fixture_gains_all_three_concepts():
    merged, records = merge_ontologies(
        _source_ontology(), SKULL_CONCEPTS, _STOP, fold_plurals=True
    )
    lemmas = merged.synsets["sct:1"].lemmas
    assert lemmas[0] == SKULL_SOURCE_LABEL  # original lemmas first
    for concept in SKULL_CONCEPTS:
        assert concept.pref_label in lemmas
        for synonym in concept.synonyms:
            assert synonym in lemmas
    # prefLabel comes before its synonyms, concepts in file order
    assert lemmas.index("Skull") < lemmas.index("Cranium")
    assert lemmas.index("Calvarium") < lemmas.index("Suture Techniques")
    # the sandals synset is untouched
    assert merged.synsets["sct:2"] == _source_ontology().synsets["sct:2"]
    assert len(records) == 1
    assert records[0].source_id == "sct:1"
    assert records[0].matched_aux == tuple(c.id for c in SKULL_CONCEPTS)


def test_merge_two_synsets_match_same_concept_independently():
    synsets = {
        "s1": Synset("s1", ("skull suture",)),
        "s2": Synset("s2", ("skull base",)),
    }
    source = Ontology(synsets, ())
    concept = AuxConcept("m", "Skull", ("Skull, Entire",))
    merged, records = merge_ontologies(source, [concept], _STOP)
    assert "Skull" in merged.synsets["s1"].lemmas
    assert "Skull" in merged.synsets["s2"].lemmas
    assert [r.source_id for r in records] == ["s1", "s2"]


def test_merge_never_touches_nodes_or_edges():
    synsets = {
        "s1": Synset("s1", ("skull suture",)),
        "s2": Synset("s2", ("cranial base",)),
    }
    source = Ontology(synsets, (("s1", "s2"),))
    merged, _ = merge_ontologies(source, SKULL_CONCEPTS, _STOP, fold_plurals=True)
    assert set(merged.synsets) == set(source.synsets)
    assert merged.edges == source.edges
    for nid in source.synsets:
        original = source.synsets[nid].lemmas
        assert merged.synsets[nid].lemmas[: len(original)] == original


@given(
    st.sets(st.text(alphabet="abcdefg", min_size=2, max_size=5), min_size=1, max_size=6),
    st.sets(st.text(alphabet="abcdefg", min_size=2, max_size=5), max_size=4),
)
def test_validate_match_monotone_in_source(source, extra):
    concept = AuxConcept("m", "abc def", ("abc gg", "ff"))
    stop = frozenset()
    base = frozenset(source)
    grown = frozenset(source | extra)
    if validate_match(base, concept, stop):
        assert validate_match(grown, concept, stop)


def test_depth1_skull_concept():
    ontology = depth1_hypernyms([AuxConcept("m", "Skull", ("Cranium", "Calvaria"))])
    assert set(ontology.synsets) == {"m", "m#1", "m#2"}
    assert ontology.synsets["m"].lemmas == ("Skull",)
    assert ontology.synsets["m#1"].lemmas == ("Cranium",)
    assert set(ontology.edges) == {("m#1", "m"), ("m#2", "m")}


def test_depth1_concept_without_synonyms_is_isolated():
    ontology = depth1_hypernyms([AuxConcept("m", "Skull", ())])
    assert set(ontology.synsets) == {"m"}
    assert ontology.edges == ()


def test_depth1_duplicate_concept_ids_rejected():
    with pytest.raises(FormatError, match="duplicate concept id"):
        depth1_hypernyms([AuxConcept("m", "A", ()), AuxConcept("m", "B", ())])


@given(
    st.lists(
        st.tuples(
            st.text(alphabet="mnop01", min_size=1, max_size=4),
            st.lists(st.text(alphabet="qrst", min_size=1, max_size=4), max_size=3),
        ),
        max_size=5,
        unique_by=lambda t: t[0],
    )
)
def test_depth1_is_a_depth_one_forest(entries):
    concepts = [AuxConcept(cid, f"label {cid}", tuple(syns)) for cid, syns in entries]
    ontology = depth1_hypernyms(concepts)
    assert is_acyclic(ontology)
    out_degree = {nid: 0 for nid in ontology.synsets}
    for child, _parent in ontology.edges:
        out_degree[child] += 1
    assert all(v <= 1 for v in out_degree.values())
    # parents are never children: all chains have length <= 1
    parents = {p for _c, p in ontology.edges}
    children = {c for c, _p in ontology.edges}
    assert not (parents & children)


def test_parse_aux_basic_and_errors():
    concepts = parse_aux(
        [
            "# comment\n",
            "m1\tSkull\tCranium|Skulls\n",
            "m2\tBare\t\n",
        ]
    )
    assert concepts == [
        AuxConcept("m1", "Skull", ("Cranium", "Skulls")),
        AuxConcept("m2", "Bare", ()),
    ]
    with pytest.raises(FormatError, match="3 tab-separated fields"):
        parse_aux(["m1\tSkull\n"])
    with pytest.raises(FormatError, match="prefLabel may not contain"):
        parse_aux(["m1\tSk|ull\tx\n"])
    with pytest.raises(FormatError, match="duplicate concept id"):
        parse_aux(["m1\tA\tx\n", "m1\tB\ty\n"])


def test_serialize_merge_records():
    merged, records = merge_ontologies(
        _source_ontology(), SKULL_CONCEPTS, _STOP, fold_plurals=True
    )
    text = serialize_merge_records(records)
    assert text.startswith("sct:1\tmesh:skull|mesh:suture-techniques|mesh:skull-fractures\t")
    assert "Skull|Cranium|Skulls" in text
