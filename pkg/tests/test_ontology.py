import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kse.errors import OntologyError
from kse.index import Document
from kse.ontology import (
    Entity,
    ExpandedQuery,
    ExpansionConfig,
    Ontology,
    Relation,
    cosine,
    expand_query,
    lcs,
    load_ontology,
    save_ontology,
    semantic_similarity,
    wu_palmer,
)
from kse.textproc import Lexicon, StopList, segment, tokenize_query


def ent(eid, label=None, synonyms=(), etype=""):
    return Entity(id=eid, label=label or eid, synonyms=tuple(synonyms), entity_type=etype)


def isa(child, parent):
    return Relation(subject=child, predicate="is_a", object=parent)


# Ten-node taxonomy used for the similarity oracle:
#   root(1) -> a(2), b(2); a -> a1(3), a2(3); a1 -> a1x(4), a1y(4); b -> b1(3), b2(3); b2 -> b2x(4)
TEN_NODES = ["root", "a", "b", "a1", "a2", "a1x", "a1y", "b1", "b2", "b2x"]
TEN_EDGES = [
    ("a", "root"), ("b", "root"),
    ("a1", "a"), ("a2", "a"),
    ("a1x", "a1"), ("a1y", "a1"),
    ("b1", "b"), ("b2", "b"),
    ("b2x", "b2"),
]


@pytest.fixture(scope="module")
def ten_node_tree():
    return Ontology([ent(n) for n in TEN_NODES], [isa(c, p) for c, p in TEN_EDGES], "root")


# -- loading and validation -----------------------------------------------------


def test_sample_ontology_structure(ontology):
    assert ontology.parent("angkor_wat") == "temple"
    located = {
        (r.subject, r.object) for r in ontology.relations if r.predicate == "located_in"
    }
    assert ("angkor_wat", "siem_reap") in located
    part_of = {(r.subject, r.object) for r in ontology.relations if r.predicate == "part_of"}
    assert ("siem_reap", "cambodia") in part_of


def test_dangling_relation_endpoint_names_the_id():
    with pytest.raises(OntologyError, match="ghost"):
        Ontology([ent("x")], [Relation("x", "located_in", "ghost")], "root")


def test_empty_entity_list_gives_synthetic_root():
    ont = Ontology([], [], "root")
    assert set(ont.entities) == {"root"}
    assert ont.depth("root") == 1


def test_multiple_is_a_parents_rejected():
    with pytest.raises(OntologyError, match="multiple is_a parents"):
        Ontology([ent("x"), ent("p"), ent("q")], [isa("x", "p"), isa("x", "q")], "root")


def test_is_a_cycle_rejected():
    with pytest.raises(OntologyError, match="cycle"):
        Ontology([ent("x"), ent("y")], [isa("x", "y"), isa("y", "x")], "root")


def test_self_loop_rejected():
    with pytest.raises(OntologyError, match="self-loop"):
        Ontology([ent("x")], [Relation("x", "part_of", "x")], "root")


def test_duplicate_synonym_rejected():
    with pytest.raises(OntologyError, match="duplicate synonyms"):
        ent("x", synonyms=("a", "a"))


def test_label_as_synonym_rejected():
    with pytest.raises(OntologyError, match="label as a synonym"):
        ent("x", label="lbl", synonyms=("lbl",))


def test_parse_error(tmp_path):
    path = tmp_path / "ont.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(OntologyError, match="invalid JSON"):
        load_ontology(path)


def test_round_trip(tmp_path, ontology):
    path = tmp_path / "ont.json"
    save_ontology(ontology, path)
    assert load_ontology(path) == ontology


def test_parentless_entities_attach_under_root():
    ont = Ontology([ent("orphan")], [], "root")
    assert ont.parent("orphan") == "root"
    assert ont.depth("orphan") == 2


# -- lcs / wu_palmer -------------------------------------------------------------


def brute_force_lcs(ont, a, b):
    chain_a = ont.ancestors(a)
    chain_b = set(ont.ancestors(b))
    common = [n for n in chain_a if n in chain_b]
    return max(common, key=ont.depth)


def test_lcs_of_self(ten_node_tree):
    assert lcs("a1x", "a1x", ten_node_tree) == "a1x"


def test_lcs_siblings_under_root(ten_node_tree):
    assert lcs("a", "b", ten_node_tree) == "root"


def test_lcs_in_sample_ontology(ontology):
    assert lcs("wat_phnom", "wat_botum", ontology) == "temple"


def test_lcs_unknown_id(ten_node_tree):
    with pytest.raises(OntologyError, match="unknown entity"):
        lcs("a", "nope", ten_node_tree)


def test_lcs_matches_brute_force_all_pairs(ten_node_tree):
    for a, b in itertools.product(TEN_NODES, repeat=2):
        assert lcs(a, b, ten_node_tree) == brute_force_lcs(ten_node_tree, a, b)


def test_wu_palmer_identity(ten_node_tree):
    for node in TEN_NODES:
        assert wu_palmer(node, node, ten_node_tree) == pytest.approx(1.0, abs=1e-12)


def test_wu_palmer_depth2_siblings():
    ont = Ontology([ent("x"), ent("y")], [isa("x", "root"), isa("y", "root")], "root")
    assert wu_palmer("x", "y", ont) == pytest.approx(0.5, abs=1e-12)


def test_wu_palmer_deeper_ancestor_beats_root_siblings(ten_node_tree):
    # a1x and a1y share a1 (depth 3); a1x and b1 share only the root.
    assert wu_palmer("a1x", "a1y", ten_node_tree) > wu_palmer("a1x", "b1", ten_node_tree)


def test_wu_palmer_all_pairs_against_oracle(ten_node_tree):
    for a, b in itertools.product(TEN_NODES, repeat=2):
        shared = brute_force_lcs(ten_node_tree, a, b)
        expected = (
            2.0
            * ten_node_tree.depth(shared)
            / (ten_node_tree.depth(a) + ten_node_tree.depth(b))
        )
        got = wu_palmer(a, b, ten_node_tree)
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(wu_palmer(b, a, ten_node_tree), abs=1e-12)
        assert 0.0 < got <= 1.0


# -- expand_query -----------------------------------------------------------------


def q_stream(text, lexicon, stops):
    return tokenize_query(text, lexicon, stops)


def test_expansion_for_temples_in_phnom_penh(ontology, lexicon, stops):
    stream = q_stream("temples in Phnom Penh", lexicon, stops)
    eq = expand_query(stream, ontology)
    expansion = {e.term for e in eq.expansion_terms}
    assert {"wat", "wat phnom", "wat botum"} <= expansion
    assert all(e.weight == 0.5 for e in eq.expansion_terms)


def test_no_match_yields_no_expansion(ontology, lexicon, stops):
    stream = q_stream("zebra quantum", lexicon, stops)
    eq = expand_query(stream, ontology)
    assert eq.expansion_terms == ()
    assert [t for t, _ in eq.original_terms] == ["zebra", "quantum"]


def test_synonym_match_adds_label(ontology, lexicon, stops):
    # "wats" normalizes to the temple synonym "wat"; the label comes back at 0.5.
    eq = expand_query(q_stream("wats", lexicon, stops), ontology)
    by_term = {e.term: e for e in eq.expansion_terms}
    assert "temple" in by_term
    assert by_term["temple"].weight == 0.5
    assert by_term["temple"].entity_id == "temple"


def test_expansion_never_duplicates_original_terms(ontology, lexicon, stops):
    eq = expand_query(q_stream("temple wat", lexicon, stops), ontology)
    originals = {t for t, _ in eq.original_terms}
    assert originals.isdisjoint({e.term for e in eq.expansion_terms})


def test_expansion_weights_below_one(ontology, lexicon, stops):
    eq = expand_query(q_stream("temples in Phnom Penh", lexicon, stops), ontology)
    assert all(0.0 < e.weight < 1.0 for e in eq.expansion_terms)
    assert all(w == 1.0 for _, w in eq.original_terms)


def test_containment_filter_blocks_inconsistent_related_entities(ontology, lexicon, stops):
    # Khmer query names Wat Phnom and Siem Reap. Phnom Penh (Wat Phnom's
    # related city) is not in Siem Reap's containment context, so it is not
    # added; Angkor Wat (related to Siem Reap) still is.
    stream = q_stream("វត្តភ្នំ សៀមរាប", lexicon, stops)
    eq = expand_query(stream, ontology)
    terms = {e.term for e in eq.expansion_terms}
    assert "angkor wat" in terms
    assert "phnom penh" not in terms


def test_khmer_query_matches_entities_via_single_tokens(ontology, lexicon, stops):
    # ប្រាសាទក្នុងភ្នំពេញ = "temples in Phnom Penh" written in Khmer.
    stream = q_stream("ប្រាសាទក្នុងភ្នំពេញ", lexicon, stops)
    eq = expand_query(stream, ontology)
    terms = {e.term for e in eq.expansion_terms}
    assert {"temple", "wat", "wat phnom", "wat botum"} <= terms


def test_hyponym_levels_config(ontology, lexicon, stops):
    stream = q_stream("attraction", lexicon, stops)
    one = expand_query(stream, ontology, ExpansionConfig(hyponym_levels=1))
    two = expand_query(stream, ontology, ExpansionConfig(hyponym_levels=2))
    one_terms = {e.term for e in one.expansion_terms}
    two_terms = {e.term for e in two.expansion_terms}
    assert "temple" in one_terms and "wat phnom" not in one_terms
    assert "wat phnom" in two_terms


def test_expansion_config_validation():
    with pytest.raises(ValueError):
        ExpansionConfig(weight=1.0)
    with pytest.raises(ValueError):
        ExpansionConfig(weight=0.0)


# -- semantic similarity ----------------------------------------------------------


def doc_with(body, lexicon, stops, title="t"):
    from kse.index import tokenize_document

    return tokenize_document("d1", title, body, lexicon, stops, ingested_at=0.0)


def test_identical_terms_give_one(lexicon, stops):
    eq = ExpandedQuery.from_terms(["wat", "phnom"])
    doc = doc_with("wat phnom", lexicon, stops, title="wat phnom")
    assert semantic_similarity(eq, doc) == pytest.approx(1.0)


def test_disjoint_terms_give_zero(lexicon, stops):
    eq = ExpandedQuery.from_terms(["zebra"])
    doc = doc_with("wat phnom", lexicon, stops)
    assert semantic_similarity(eq, doc) == pytest.approx(0.0)


def test_expansion_term_bridges_vocabulary_gap(ontology, lexicon, stops):
    eq = expand_query(q_stream("temples in Phnom Penh", lexicon, stops), ontology)
    doc = doc_with("the wat rises above the city", lexicon, stops, title="Wat Phnom")
    assert semantic_similarity(eq, doc) > 0.0


def test_similarity_scale_invariant(lexicon, stops):
    # Doubling every term count (title and body alike) leaves the score unchanged.
    eq = ExpandedQuery.from_terms(["wat", "temple"])
    once = doc_with("wat temple river", lexicon, stops, title="gate")
    twice = doc_with("wat temple river wat temple river", lexicon, stops, title="gate gate")
    assert semantic_similarity(eq, once) == pytest.approx(semantic_similarity(eq, twice))


@given(
    st.dictionaries(st.sampled_from("abcdef"), st.floats(0.01, 5.0), max_size=6),
    st.dictionaries(st.sampled_from("abcdef"), st.floats(0.01, 5.0), max_size=6),
)
def test_cosine_range_and_symmetry(a, b):
    value = cosine(a, b)
    assert 0.0 <= value <= 1.0 + 1e-12
    assert value == pytest.approx(cosine(b, a))
