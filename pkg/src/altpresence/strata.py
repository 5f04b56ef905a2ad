"""Indicators stratified by publication year, macro field and document type, and
count-distribution summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .corpus import DOC_TYPES, FIELDS, Corpus, DocType, MacroField, SourceKind
from .errors import EmptySet
from .indicators import IndicatorTriple, grouped_triples

Stratifier = Literal["year", "field", "doc_type"]
StratumKey = int | MacroField | DocType

REPORT_COLUMNS = ("stratum", "n_total", "n_covered", "n_events", "coverage_pct", "density", "intensity")


@dataclass(frozen=True)
class StratifiedReport:
    source: SourceKind
    stratifier: Stratifier
    rows: dict[StratumKey, IndicatorTriple]

    def table(self) -> list[tuple[str, ...]]:
        """Display rows matching ``REPORT_COLUMNS``."""
        out = []
        for key, t in self.rows.items():
            c, d, i = t.display()
            out.append((str(key), str(t.n_total), str(t.n_covered), str(t.n_events), c, d, i))
        return out


def triples_by_year(corpus: Corpus, source: SourceKind) -> StratifiedReport:
    source = SourceKind(source)
    if len(corpus) == 0:
        raise EmptySet("empty corpus")
    cols = corpus.columns
    rows = grouped_triples(cols.years, corpus.counts(source))
    return StratifiedReport(source, "year", dict(sorted(rows.items())))


def triples_by_field(corpus: Corpus, source: SourceKind) -> StratifiedReport:
    """Per-field triples over classified publications only."""
    source = SourceKind(source)
    cols = corpus.columns
    mask = cols.field_code >= 0
    if not mask.any():
        raise EmptySet("no classified publications")
    rows = grouped_triples(cols.field_code[mask], corpus.counts(source)[mask])
    return StratifiedReport(source, "field", {FIELDS[k]: t for k, t in sorted(rows.items())})


def coverage_by_doc_type(corpus: Corpus, source: SourceKind) -> StratifiedReport:
    source = SourceKind(source)
    if len(corpus) == 0:
        raise EmptySet("empty corpus")
    rows = grouped_triples(corpus.columns.doc_type_code, corpus.counts(source))
    return StratifiedReport(source, "doc_type", {DOC_TYPES[k]: t for k, t in sorted(rows.items())})


def share_pct(counts: Sequence[int], total: int | None = None) -> list[float]:
    """Each count as a percentage of ``total`` (default: their sum)."""
    total = sum(counts) if total is None else total
    if total <= 0:
        raise EmptySet("share of an empty total")
    return [100.0 * c / total for c in counts]


# ---------------------------------------------------------------------------
# micro-topics as strata

@dataclass(frozen=True, eq=False)
class TopicAggregates:
    """Per-topic N, NP and NE for every source, over classified publications.

    Row ``r`` describes ``corpus.topics[topic_pos[r]]``; only topics with at
    least one classified publication appear.
    """

    topic_pos: np.ndarray
    topic_ids: tuple[str, ...]
    field_code: np.ndarray
    n_pubs: np.ndarray
    n_covered: np.ndarray
    n_events: np.ndarray

    def __len__(self) -> int:
        return self.topic_pos.size

    def metric(self, source: SourceKind, metric: str) -> np.ndarray:
        col = SourceKind(source).column
        cov = self.n_covered[:, col]
        ev = self.n_events[:, col]
        if metric == "coverage":
            return 100.0 * cov / self.n_pubs
        if metric == "density":
            return ev / self.n_pubs
        if metric == "intensity":
            out = np.zeros(cov.shape, dtype=np.float64)
            np.divide(ev, cov, out=out, where=cov > 0)
            return out
        raise ValueError(f"unknown metric {metric!r}")

    def triple(self, row: int, source: SourceKind) -> IndicatorTriple:
        col = SourceKind(source).column
        return IndicatorTriple(int(self.n_pubs[row]), int(self.n_covered[row, col]),
                               int(self.n_events[row, col]))


def topic_aggregates(corpus: Corpus) -> TopicAggregates:
    cols = corpus.columns
    mask = cols.topic_index >= 0
    if not mask.any():
        raise EmptySet("no classified publications")
    keys, inverse = np.unique(cols.topic_index[mask], return_inverse=True)
    counts = cols.counts[mask]
    n_src = counts.shape[1]
    n_pubs = np.bincount(inverse, minlength=keys.size).astype(np.int64)
    n_covered = np.zeros((keys.size, n_src), dtype=np.int64)
    n_events = np.zeros((keys.size, n_src), dtype=np.int64)
    for j in range(n_src):
        c = counts[:, j]
        n_covered[:, j] = np.bincount(inverse, weights=c > 0, minlength=keys.size)
        n_events[:, j] = np.bincount(inverse, weights=c, minlength=keys.size)
    return TopicAggregates(
        topic_pos=keys,
        topic_ids=tuple(cols.topic_ids[k] for k in keys),
        field_code=cols.topic_field_code[keys],
        n_pubs=n_pubs,
        n_covered=n_covered,
        n_events=n_events,
    )


# ---------------------------------------------------------------------------
# distributions

def log2_bin(value: int) -> int:
    """Lower edge of the base-2 bin holding ``value``: 0, 1, 2, 4, 8, ..."""
    return 0 if value <= 0 else 1 << (int(value).bit_length() - 1)


def bin_upper(lower: int) -> int:
    return 0 if lower == 0 else 2 * lower - 1


@dataclass(frozen=True)
class DistributionSummary:
    """Histogram plus shape statistics for one source.

    ``histogram`` maps a count value (or, when ``log_binned``, a bin's lower
    edge) to the number of publications. ``skewness`` is ``None`` and
    ``skewness_undefined`` set when the counts have zero variance or fewer
    than three publications are present.
    """

    source: SourceKind
    histogram: dict[int, int]
    log_binned: bool
    skewness: float | None
    skewness_undefined: bool
    max_count: int
    n_zero: int
    n_total: int


def adjusted_skewness(values: np.ndarray) -> float | None:
    """Adjusted Fisher-Pearson coefficient G1 = g1 * sqrt(n(n-1)) / (n-2)."""
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    if n < 3:
        return None
    dev = x - x.mean()
    m2 = np.mean(dev**2)
    if m2 == 0.0:
        return None
    m3 = np.mean(dev**3)
    g1 = m3 / m2**1.5
    return float(g1 * math.sqrt(n * (n - 1)) / (n - 2))


def count_distribution(corpus: Corpus, source: SourceKind, log_binned: bool = False) -> DistributionSummary:
    source = SourceKind(source)
    if len(corpus) == 0:
        raise EmptySet("empty corpus")
    return summarize_counts(corpus.counts(source), source, log_binned)


def summarize_counts(counts: np.ndarray, source: SourceKind, log_binned: bool = False) -> DistributionSummary:
    counts = np.asarray(counts, dtype=np.int64)
    values, freq = np.unique(counts, return_counts=True)
    hist: dict[int, int] = {}
    for v, f in zip(values.tolist(), freq.tolist()):
        key = log2_bin(v) if log_binned else v
        hist[key] = hist.get(key, 0) + f
    skew = adjusted_skewness(counts)
    return DistributionSummary(
        source=source,
        histogram=hist,
        log_binned=log_binned,
        skewness=skew,
        skewness_undefined=skew is None,
        max_count=int(counts.max()),
        n_zero=int(np.count_nonzero(counts == 0)),
        n_total=int(counts.size),
    )
