import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kse.errors import StateError
from kse.index import Document, IndexBuilder, build_snapshot
from kse.keywords import BODY, TITLE, CorpusStats, compute_idf, compute_tf, extract_keywords
from kse.textproc import Lexicon, StopList, segment


def stream_of(*terms):
    return segment(" ".join(terms), Lexicon.from_words(["xx"]))


def make_corpus(docs):
    """docs: list of (title_terms, body_terms). Terms are plain Latin words."""
    builder = IndexBuilder(Lexicon.from_words(["xx"]), StopList.empty())
    ids = []
    for title_terms, body_terms in docs:
        ids.append(
            builder.add_document(" ".join(title_terms) or "untitled", " ".join(body_terms), now=0.0)
        )
    return ids, builder.build()


# -- compute_tf ----------------------------------------------------------------


def test_tf_direct_count():
    assert compute_tf(stream_of("a", "a", "b")) == {"a": 2 / 3, "b": 1 / 3}


def test_tf_empty_field():
    assert compute_tf(stream_of()) == {}


def test_tf_single_token():
    assert compute_tf(stream_of("x")) == {"x": 1.0}


@given(st.lists(st.sampled_from("abcde"), min_size=1, max_size=50))
def test_tf_sums_to_one(terms):
    tf = compute_tf(stream_of(*terms))
    assert sum(tf.values()) == pytest.approx(1.0)


# -- compute_idf ---------------------------------------------------------------


def stats_with(doc_count, df):
    return CorpusStats(doc_count=doc_count, df_title=df, df_body=df, df_pooled=df)


def test_idf_single_doc_corpus():
    assert compute_idf(stats_with(1, {"t": 1}), "t") == pytest.approx(1.0)


def test_idf_rare_term():
    assert compute_idf(stats_with(3, {"t": 1}), "t") == pytest.approx(math.log(2.0) + 1.0)


def test_idf_ubiquitous_term_is_one():
    for n in (1, 5, 50):
        assert compute_idf(stats_with(n, {"t": n}), "t") == pytest.approx(1.0)


def test_idf_unknown_term_uses_df_zero():
    assert compute_idf(stats_with(4, {}), "nope") == pytest.approx(math.log(5.0) + 1.0)


def test_idf_at_least_one():
    for df in range(0, 11):
        assert compute_idf(stats_with(10, {"t": df} if df else {}), "t") >= 1.0


@given(st.integers(min_value=2, max_value=100), st.data())
def test_idf_strictly_decreasing_in_df(n, data_):
    df1 = data_.draw(st.integers(min_value=0, max_value=n - 1))
    df2 = data_.draw(st.integers(min_value=df1 + 1, max_value=n))
    low = compute_idf(stats_with(n, {"t": df2}), "t")
    high = compute_idf(stats_with(n, {"t": df1} if df1 else {}), "t")
    assert high > low


# -- extract_keywords ----------------------------------------------------------


def test_single_title_token_is_sole_keyword():
    ids, snapshot = make_corpus([(["alpha"], ["beta", "gamma"])])
    ks = extract_keywords(snapshot.documents[ids[0]], snapshot.stats)
    assert [t for t, _ in ks.title_keywords] == ["alpha"]


def test_unique_term_outranks_ubiquitous():
    ids, snapshot = make_corpus(
        [
            (["doc1"], ["rare1", "common"]),
            (["doc2"], ["common", "other2"]),
            (["doc3"], ["common", "other3"]),
        ]
    )
    ks = extract_keywords(snapshot.documents[ids[0]], snapshot.stats, k_body=2)
    terms = [t for t, _ in ks.body_keywords]
    assert terms.index("rare1") < terms.index("common")


def test_untokenized_document_raises_state_error():
    doc = Document(doc_id="d", title="t", body="b")
    with pytest.raises(StateError):
        extract_keywords(doc, stats_with(1, {}))


def test_keyword_set_shape_matches_tool_output():
    # Three keywords out, comparable against a three-keyword manual set.
    ids, snapshot = make_corpus([(["kw1", "kw2", "kw4"], ["kw1", "kw2", "kw4"])])
    ks = extract_keywords(snapshot.documents[ids[0]], snapshot.stats, k_title=3, k_body=3)
    assert len(ks.title_keywords) == 3
    assert {t for t, _ in ks.title_keywords} == {"kw1", "kw2", "kw4"}


def test_rejects_bad_k():
    ids, snapshot = make_corpus([(["a"], ["b"])])
    with pytest.raises(ValueError):
        extract_keywords(snapshot.documents[ids[0]], snapshot.stats, k_title=0)


# -- independent brute-force oracle --------------------------------------------


def oracle_keywords(doc_terms, all_docs_terms, k):
    """Recompute tf-idf from scratch: raw counts, df by scanning every doc,
    smoothed idf, weight sort with the (weight desc, term asc) tie-break."""
    n = len(all_docs_terms)
    weights = {}
    for term in set(doc_terms):
        tf = doc_terms.count(term) / len(doc_terms)
        df = sum(1 for other in all_docs_terms if term in other)
        idf = math.log((1 + n) / (1 + df)) + 1.0
        weights[term] = tf * idf
    ranked = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def test_extract_matches_oracle_on_randomized_corpora():
    rng = random.Random(20240817)
    vocab = [f"w{i:02d}" for i in range(50)]
    for trial in range(25):
        n_docs = rng.randint(1, 20)
        docs = []
        for _ in range(n_docs):
            title = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
            body = [rng.choice(vocab) for _ in range(rng.randint(1, 40))]
            docs.append((title, body))
        ids, snapshot = make_corpus(docs)
        # Dedup by content hash can merge identical docs; mirror that in the oracle.
        unique = list(dict.fromkeys(ids))
        id_to_doc = {i: docs[ids.index(i)] for i in unique}
        titles = [id_to_doc[i][0] for i in unique]
        bodies = [id_to_doc[i][1] for i in unique]
        for doc_id in unique:
            title_terms, body_terms = id_to_doc[doc_id]
            got = extract_keywords(snapshot.documents[doc_id], snapshot.stats, 5, 10)
            want_title = oracle_keywords(title_terms, titles, 5)
            want_body = oracle_keywords(body_terms, bodies, 10)
            assert [t for t, _ in got.title_keywords] == [t for t, _ in want_title]
            assert [t for t, _ in got.body_keywords] == [t for t, _ in want_body]
            for (_, got_w), (_, want_w) in zip(got.title_keywords, want_title):
                assert got_w == pytest.approx(want_w, abs=1e-12)
            for (_, got_w), (_, want_w) in zip(got.body_keywords, want_body):
                assert got_w == pytest.approx(want_w, abs=1e-12)


def test_extraction_is_deterministic():
    docs = [(["a", "b"], ["c", "d", "c"]), (["b"], ["d", "e"])]
    ids1, snap1 = make_corpus(docs)
    ids2, snap2 = make_corpus(docs)
    for i1, i2 in zip(ids1, ids2):
        ks1 = extract_keywords(snap1.documents[i1], snap1.stats)
        ks2 = extract_keywords(snap2.documents[i2], snap2.stats)
        assert ks1 == ks2
        assert ks1.to_dict() == ks2.to_dict()


def test_weights_nonnegative_and_zero_iff_absent():
    ids, snapshot = make_corpus([(["a"], ["b", "c"]), (["d"], ["b"])])
    for doc_id in dict.fromkeys(ids):
        ks = extract_keywords(snapshot.documents[doc_id], snapshot.stats)
        for term, weight in ks.title_keywords + ks.body_keywords:
            assert weight > 0.0
