import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altpresence.corpus import MacroField
from altpresence.errors import EmptySet, LengthMismatch
from altpresence.synth import GeneratorConfig, generate_corpus
from altpresence.topics import (
    AttentionCategory,
    classify_topics,
    competition_rank,
    cutoff,
    hot_report,
    quadrants,
)

from conftest import make_corpus
from oracles import classify_oracle, competition_ranks

H, P, S, U = (AttentionCategory.HOT, AttentionCategory.POPULAR,
              AttentionCategory.STAR_PAPERS, AttentionCategory.UNPOPULAR)


def topic_pubs(tid, counts, year=2015):
    return [(year, "article", tid, {"news": c}) for c in counts]


def four_topic_corpus():
    pubs = (topic_pubs("A", [5, 0])                                  # C=50, I=5
            + topic_pubs("B", [2, 2] + [1] * 8 + [0] * 15)           # C=40, I=1.2
            + topic_pubs("C", [6] + [0] * 19)                        # C=5, I=6
            + topic_pubs("D", [2] + [1] * 9 + [0] * 240))            # C=4, I=1.1
    return make_corpus(pubs, [(t, "LES") for t in "ABCD"])


def test_competition_rank_examples():
    assert competition_rank([10, 8, 8, 5]).tolist() == [1, 2, 2, 4]
    assert competition_rank([10, 8, 8, 5], [0, 7, 3, 0]).tolist() == [1, 2, 3, 4]
    assert competition_rank([7]).tolist() == [1]
    with pytest.raises(LengthMismatch):
        competition_rank([1, 2], [1])
    with pytest.raises(EmptySet):
        competition_rank([])


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 3)), min_size=1, max_size=60))
def test_competition_rank_matches_oracle(pairs):
    v, t = zip(*pairs)
    assert competition_rank(v, t).tolist() == competition_ranks(list(pairs))


def test_cutoff_uses_decimal_quantile():
    assert cutoff(0.29, 100) == 29
    assert cutoff(0.1, 9) == 0
    assert cutoff(1.0, 7) == 7
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            cutoff(bad, 10)


def test_worked_four_topic_example():
    ranked = classify_topics(four_topic_corpus(), "news", q=0.5)
    assert {t.topic_id: t.category for t in ranked} == {"A": H, "B": P, "C": S, "D": U}
    a = next(t for t in ranked if t.topic_id == "A")
    assert (a.triple.coverage_pct, a.triple.intensity) == (50.0, 5.0)
    assert [t.topic_id for t in ranked] == ["A", "B", "C", "D"]


def test_worked_example_direct():
    _, _, cats, k = quadrants([50, 40, 5, 4], [5, 1.2, 6, 1.1], [5, 12, 6, 11], 0.5)
    assert k == 2 and cats == [H, P, S, U]


def test_single_topic_is_unpopular():
    ranked = classify_topics(make_corpus(topic_pubs("X", [3]), [("X", "PSE")]), "news", q=0.1)
    assert len(ranked) == 1 and ranked[0].category is U
    assert (ranked[0].coverage_rank, ranked[0].intensity_rank) == (1, 1)


def test_no_eligible_topics():
    corpus = make_corpus(topic_pubs("X", [0, 0]), [("X", "PSE")])
    with pytest.raises(EmptySet):
        classify_topics(corpus, "news")
    with pytest.raises(EmptySet):
        hot_report(corpus, "news")


def test_scope_restricts_to_field():
    corpus = make_corpus(topic_pubs("A", [1]) + topic_pubs("B", [2]), [("A", "SSH"), ("B", "MCS")])
    assert [t.topic_id for t in classify_topics(corpus, "news", "SSH")] == ["A"]
    assert len(classify_topics(corpus, "news", "global")) == 2


def engineered_ssh_corpus():
    """20 SSH topics; T1 and T7 lead both dimensions, others split the top ranks."""
    pubs, topics = [], []
    for i in range(1, 21):
        tid = f"T{i}"
        topics.append((tid, "SSH", (f"term{i}",)))
        if tid in ("T1", "T7"):
            counts = [10] * 9 + [0]                   # C=90, I=10
        elif i == 2:
            counts = [1] * 8 + [0] * 2                # high C, low I
        elif i == 3:
            counts = [50] + [0] * 9                   # high I, low C
        else:
            counts = [1 + i % 3] * (i % 5 + 1) + [0] * (9 - i % 5)
        pubs += topic_pubs(tid, counts)
    # an MCS topic with no events, so MCS has no eligible topics
    topics.append(("Z", "MCS"))
    pubs += topic_pubs("Z", [0, 0])
    return make_corpus(pubs, topics)


def test_engineered_hot_list():
    report = hot_report(engineered_ssh_corpus(), "news", q=0.10)
    assert list(report.sections) == [MacroField.SSH]
    sec = report.sections[MacroField.SSH]
    assert (sec.m_topics, sec.k) == (20, 2)
    assert {t.topic_id for t in sec.hot} == {"T1", "T7"}
    assert [r[2] for r in report.hot_rows()] == ["term1", "term7"]


def test_hot_report_sections_are_field_local():
    corpus = generate_corpus(GeneratorConfig(seed=4, n_pubs=5000, n_topics_per_field=30))
    report = hot_report(corpus, "twitter", q=0.2)
    for f, sec in report.sections.items():
        local = classify_topics(corpus, "twitter", f, q=0.2)
        assert sec.ranked == local
        assert all(t.field is f for t in sec.ranked)
        assert sec.k == int(0.2 * sec.m_topics + 1e-9)


# --- properties on synthetic topic sets --------------------------------------

topic_sets = st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(1, 6)), min_size=1, max_size=80)
quantiles = st.sampled_from([0.05, 0.1, 0.2, 0.25, 0.5, 1.0])


@given(topic_sets, quantiles)
def test_quadrants_match_oracle(rows, q):
    cov, inten, ev = (list(c) for c in zip(*rows))
    cr, ir, cats, _ = quadrants(cov, inten, ev, q)
    oracle = classify_oracle({i: r for i, r in enumerate(rows)}, q)
    assert [(a, b, c.value) for a, b, c in zip(cr.tolist(), ir.tolist(), cats)] == [oracle[i] for i in range(len(rows))]


@given(topic_sets, quantiles)
def test_partition_and_boundary(rows, q):
    cov, inten, ev = (list(c) for c in zip(*rows))
    cr, ir, cats, k = quadrants(cov, inten, ev, q)
    assert len(cats) == len(rows)
    for a, b, c in zip(cr, ir, cats):
        assert (c is H) == (a <= k and b <= k)
        assert (c in (H, P)) == (a <= k)
        assert (c in (H, S)) == (b <= k)


@given(topic_sets, quantiles)
def test_rank_invariance_under_monotone_transform(rows, q):
    cov, inten, ev = (np.array(c, dtype=float) for c in zip(*rows))
    base = quadrants(cov, inten, ev, q)
    moved = quadrants(np.sqrt(cov) * 10 + 1, np.exp(inten / 3), ev, q)
    assert base[2] == moved[2]
    assert base[0].tolist() == moved[0].tolist() and base[1].tolist() == moved[1].tolist()


@given(topic_sets, quantiles, st.randoms(use_true_random=False))
def test_permutation_determinism(rows, q, rnd):
    perm = list(range(len(rows)))
    rnd.shuffle(perm)
    cov, inten, ev = (list(c) for c in zip(*rows))
    _, _, cats, _ = quadrants(cov, inten, ev, q)
    _, _, pcats, _ = quadrants([cov[i] for i in perm], [inten[i] for i in perm], [ev[i] for i in perm], q)
    assert [cats[i] for i in perm] == pcats


@given(st.lists(st.tuples(st.floats(0, 100), st.floats(1, 50), st.integers(1, 10**6)),
                min_size=1, max_size=80, unique_by=lambda r: r[2]))
def test_monotone_quantile_without_ties(rows):
    cov, inten, ev = (list(c) for c in zip(*rows))
    hot_sets = []
    for q in (0.05, 0.1, 0.2, 0.5, 1.0):
        _, _, cats, _ = quadrants(cov, inten, ev, q)
        hot_sets.append({i for i, c in enumerate(cats) if c is H})
    for small, large in zip(hot_sets, hot_sets[1:]):
        assert small <= large
    assert hot_sets[-1] == set(range(len(rows)))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_corpus_classification_matches_oracle(seed):
    corpus = generate_corpus(GeneratorConfig(seed=seed, n_pubs=3000, n_topics_per_field=20))
    ranked = classify_topics(corpus, "twitter", q=0.1)
    oracle = classify_oracle({t.topic_id: (t.triple.coverage_pct, t.triple.intensity, t.triple.n_events)
                              for t in ranked}, 0.1)
    for t in ranked:
        assert (t.coverage_rank, t.intensity_rank, t.category.value) == oracle[t.topic_id]
