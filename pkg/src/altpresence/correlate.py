"""Spearman rank correlation of topic-level indicator vectors.

Ties get fractional (average) ranks and the coefficient is the Pearson
correlation of those ranks, so tied data are handled exactly; the
``1 - 6*sum(d^2)/(n(n^2-1))`` shortcut is never used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .corpus import SOURCES, Corpus, SourceKind
from .errors import DegenerateInput, EmptySet
from .strata import TopicAggregates, topic_aggregates

Metric = Literal["coverage", "density", "intensity"]
METRICS: tuple[Metric, ...] = ("coverage", "density", "intensity")


def average_ranks(x: Sequence[float] | np.ndarray) -> np.ndarray:
    """1-based ranks, ties sharing the mean of the positions they span."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    bounds = np.flatnonzero(np.concatenate(([True], xs[1:] != xs[:-1], [True])))
    avg = (bounds[:-1] + 1 + bounds[1:]) / 2.0
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = np.repeat(avg, np.diff(bounds))
    return ranks


def spearman_rho(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise DegenerateInput(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise DegenerateInput("need at least two observations")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DegenerateInput("non-finite values")
    rx = average_ranks(x)
    ry = average_ranks(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("constant sequence")
    rho = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, rho))


def _rho_or_none(x: np.ndarray, y: np.ndarray) -> float | None:
    try:
        return spearman_rho(x, y)
    except DegenerateInput:
        return None


@dataclass(frozen=True)
class TopicMetricVector:
    source: SourceKind
    metric: Metric
    values: dict[str, float]

    def array(self) -> np.ndarray:
        return np.fromiter(self.values.values(), dtype=np.float64, count=len(self.values))


def topic_metric_vector(
    corpus: Corpus, source: SourceKind, metric: Metric, aggregates: TopicAggregates | None = None
) -> TopicMetricVector:
    """One indicator value per micro-topic that has at least one classified publication."""
    agg = aggregates if aggregates is not None else topic_aggregates(corpus)
    vals = agg.metric(source, metric)
    return TopicMetricVector(SourceKind(source), metric, dict(zip(agg.topic_ids, vals.tolist())))


@dataclass(frozen=True, slots=True)
class CorrelationEntry:
    rho: float | None
    n: int

    @property
    def defined(self) -> bool:
        return self.rho is not None


@dataclass(frozen=True)
class CorrelationMatrix:
    metric: Metric
    exclude_mutual_zeros: bool
    sources: tuple[SourceKind, ...]
    entries: dict[tuple[SourceKind, SourceKind], CorrelationEntry]

    def __getitem__(self, pair: tuple[SourceKind, SourceKind]) -> CorrelationEntry:
        a, b = pair
        return self.entries[(SourceKind(a), SourceKind(b))]

    def long_rows(self) -> list[tuple[SourceKind, SourceKind, CorrelationEntry]]:
        """Upper triangle including the diagonal, in source order."""
        return [
            (a, b, self.entries[(a, b)])
            for i, a in enumerate(self.sources)
            for b in self.sources[i:]
        ]


def correlate_vectors(
    vectors: Mapping[SourceKind, Sequence[float] | np.ndarray],
    metric: Metric = "coverage",
    exclude_mutual_zeros: bool = False,
) -> CorrelationMatrix:
    """Pairwise Spearman matrix over aligned per-topic vectors.

    With ``exclude_mutual_zeros`` each pair drops the topics where both
    vectors are exactly zero before ranking. Pairs left with fewer than two
    topics or a constant side get ``rho=None``.
    """
    keys = tuple(vectors)
    arrays = {k: np.asarray(vectors[k], dtype=np.float64) for k in keys}
    sizes = {a.size for a in arrays.values()}
    if len(sizes) > 1:
        raise DegenerateInput(f"vectors of unequal length: {sorted(sizes)}")
    entries: dict[tuple[SourceKind, SourceKind], CorrelationEntry] = {}
    for i, a in enumerate(keys):
        for b in keys[i:]:
            x, y = arrays[a], arrays[b]
            if exclude_mutual_zeros:
                keep = (x != 0) | (y != 0)
                x, y = x[keep], y[keep]
            rho = _rho_or_none(x, y)
            if a == b and rho is not None:
                rho = 1.0
            entry = CorrelationEntry(rho, int(x.size))
            entries[(a, b)] = entry
            entries[(b, a)] = entry
    return CorrelationMatrix(metric, exclude_mutual_zeros, keys, entries)


def cross_source_matrix(
    corpus: Corpus,
    metric: Metric,
    exclude_mutual_zeros: bool = False,
    sources: Iterable[SourceKind] | None = None,
) -> CorrelationMatrix:
    agg = topic_aggregates(corpus)
    if len(agg) < 2:
        raise EmptySet(f"need at least two micro-topics, found {len(agg)}")
    chosen = SOURCES if sources is None else tuple(SourceKind(s) for s in sources)
    vectors = {s: agg.metric(s, metric) for s in chosen}
    return correlate_vectors(vectors, metric, exclude_mutual_zeros)


@dataclass(frozen=True)
class IndicatorCorrelation:
    source: SourceKind
    n: int
    entries: dict[tuple[Metric, Metric], float | None]

    def __getitem__(self, pair: tuple[Metric, Metric]) -> float | None:
        return self.entries[pair]


def indicator_intercorrelation(corpus: Corpus, source: SourceKind) -> IndicatorCorrelation:
    """3x3 Spearman matrix among coverage, density and intensity of one source.

    Entries involving a constant indicator are ``None``; if every off-diagonal
    entry is undefined the input is degenerate and an error is raised.
    """
    source = SourceKind(source)
    agg = topic_aggregates(corpus)
    if len(agg) < 2:
        raise EmptySet(f"need at least two micro-topics, found {len(agg)}")
    vecs = {m: agg.metric(source, m) for m in METRICS}
    entries: dict[tuple[Metric, Metric], float | None] = {}
    for a in METRICS:
        for b in METRICS:
            rho = _rho_or_none(vecs[a], vecs[b])
            entries[(a, b)] = 1.0 if (a == b and rho is not None) else rho
    if all(entries[(a, b)] is None for a in METRICS for b in METRICS if a != b):
        raise DegenerateInput(f"all indicator pairs are degenerate for {source.value}")
    return IndicatorCorrelation(source, len(agg), entries)
