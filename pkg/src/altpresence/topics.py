"""Two-dimensional attention classification of micro-topics.

Topics with at least one event in a source are ranked twice, by coverage and
by intensity, each time with total events breaking ties. With M eligible
topics and quantile q the cutoff is ``k = floor(q * M)``; a topic is in the top
group of a dimension when its competition rank is at most k. Topics tied at a
rank <= k all qualify, so a top group may exceed k members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .corpus import FIELDS, Corpus, MacroField, SourceKind
from .errors import EmptySet, LengthMismatch
from .indicators import IndicatorTriple
from .strata import TopicAggregates, topic_aggregates


class AttentionCategory(str, Enum):
    HOT = "hot"
    STAR_PAPERS = "star_papers"
    POPULAR = "popular"
    UNPOPULAR = "unpopular"

    def __str__(self) -> str:
        return self.value


TOPIC_COLUMNS = ("field", "topic_id", "label", "coverage_pct", "intensity", "n_pubs",
                 "n_events", "coverage_rank", "intensity_rank", "category")


def competition_rank(values: Sequence[float], tiebreak: Sequence[float] | None = None) -> np.ndarray:
    """Descending competition ranks ("1224" ranking).

    Items are ordered by ``values`` and then by ``tiebreak`` (higher is better
    on both keys). Items equal on both keys share a rank, which is one plus
    the number of strictly better items.

    >>> competition_rank([10, 8, 8, 5]).tolist()
    [1, 2, 2, 4]
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise EmptySet("competition_rank needs at least one value")
    tb = np.zeros_like(v) if tiebreak is None else np.asarray(tiebreak, dtype=np.float64)
    if tb.shape != v.shape:
        raise LengthMismatch(f"{v.size} values but {tb.size} tiebreak entries")
    if np.isnan(v).any() or np.isnan(tb).any():
        raise ValueError("cannot rank NaN")
    order = np.lexsort((-tb, -v))
    sv, st = v[order], tb[order]
    starts = np.concatenate(([True], (sv[1:] != sv[:-1]) | (st[1:] != st[:-1])))
    pos = np.arange(v.size)
    first_of_group = np.maximum.accumulate(np.where(starts, pos, 0))
    ranks = np.empty(v.size, dtype=np.int64)
    ranks[order] = first_of_group + 1
    return ranks


def cutoff(q: float, m: int) -> int:
    """``floor(q * m)`` evaluated on the decimal value of ``q`` (0.29 * 100 is 29, not 28)."""
    if not (0.0 < q <= 1.0):
        raise ValueError(f"quantile must lie in (0, 1], got {q}")
    return math.floor(Fraction(repr(float(q))) * m)


def categorize(coverage_rank: int, intensity_rank: int, k: int) -> AttentionCategory:
    high_c = coverage_rank <= k
    high_i = intensity_rank <= k
    if high_c and high_i:
        return AttentionCategory.HOT
    if high_c:
        return AttentionCategory.POPULAR
    if high_i:
        return AttentionCategory.STAR_PAPERS
    return AttentionCategory.UNPOPULAR


def quadrants(coverage: Sequence[float], intensity: Sequence[float], events: Sequence[float],
              q: float) -> tuple[np.ndarray, np.ndarray, list[AttentionCategory], int]:
    """Rank and categorize topics given aligned coverage, intensity and event totals.

    Returns ``(coverage_rank, intensity_rank, categories, k)``.
    """
    cr = competition_rank(coverage, events)
    ir = competition_rank(intensity, events)
    k = cutoff(q, cr.size)
    cats = [categorize(a, b, k) for a, b in zip(cr.tolist(), ir.tolist())]
    return cr, ir, cats, k


@dataclass(frozen=True)
class RankedTopic:
    topic_id: str
    field: MacroField
    label: str
    triple: IndicatorTriple
    coverage_rank: int
    intensity_rank: int
    category: AttentionCategory

    def row(self) -> tuple[str, ...]:
        c, _, i = self.triple.display()
        return (self.field.value, self.topic_id, self.label, c, i, str(self.triple.n_total),
                str(self.triple.n_events), str(self.coverage_rank), str(self.intensity_rank),
                self.category.value)


def classify_topics(
    corpus: Corpus,
    source: SourceKind,
    scope: MacroField | str | None = None,
    q: float = 0.10,
    aggregates: TopicAggregates | None = None,
) -> list[RankedTopic]:
    """Rank eligible topics in ``scope`` (``None``/"all" for every field) and assign categories.

    Output is ordered by coverage rank, then intensity rank, then topic_id.
    """
    source = SourceKind(source)
    cutoff(q, 1)
    agg = aggregates if aggregates is not None else topic_aggregates(corpus)
    col = source.column
    eligible = agg.n_events[:, col] >= 1
    if scope not in (None, "all", "global"):
        field_idx = FIELDS.index(MacroField.parse(str(scope)))
        eligible &= agg.field_code == field_idx
    rows = np.flatnonzero(eligible)
    if rows.size == 0:
        where = "" if scope in (None, "all", "global") else f" in {scope}"
        raise EmptySet(f"no micro-topic{where} has a {source.value} event")
    cov = agg.metric(source, "coverage")[rows]
    inten = agg.metric(source, "intensity")[rows]
    ev = agg.n_events[rows, col]
    cr, ir, cats, _ = quadrants(cov, inten, ev, q)
    topics = corpus.topics
    out = []
    for j, r in enumerate(rows.tolist()):
        t = topics[agg.topic_pos[r]]
        out.append(RankedTopic(t.topic_id, t.field, t.label, agg.triple(r, source),
                               int(cr[j]), int(ir[j]), cats[j]))
    out.sort(key=lambda rt: (rt.coverage_rank, rt.intensity_rank, rt.topic_id))
    return out


@dataclass(frozen=True)
class FieldSection:
    field: MacroField
    m_topics: int
    k: int
    ranked: list[RankedTopic]

    @property
    def hot(self) -> list[RankedTopic]:
        return [t for t in self.ranked if t.category is AttentionCategory.HOT]


@dataclass(frozen=True)
class HotTopicReport:
    source: SourceKind
    quantile: float
    sections: dict[MacroField, FieldSection]

    def hot_rows(self) -> list[tuple[str, ...]]:
        return [t.row() for s in self.sections.values() for t in s.hot]

    def all_rows(self) -> list[tuple[str, ...]]:
        return [t.row() for s in self.sections.values() for t in s.ranked]


def hot_report(corpus: Corpus, source: SourceKind, q: float = 0.10) -> HotTopicReport:
    """Classify topics separately within each macro field; fields with no eligible topic are left out."""
    source = SourceKind(source)
    agg = topic_aggregates(corpus)
    sections: dict[MacroField, FieldSection] = {}
    for f in FIELDS:
        try:
            ranked = classify_topics(corpus, source, f, q, aggregates=agg)
        except EmptySet:
            continue
        sections[f] = FieldSection(f, len(ranked), cutoff(q, len(ranked)), ranked)
    if not sections:
        raise EmptySet(f"no micro-topic has a {source.value} event")
    return HotTopicReport(source, q, sections)
