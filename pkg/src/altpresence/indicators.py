"""Coverage, density and intensity of event counts over a publication set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .corpus import Corpus, PublicationRecord, SourceKind
from .errors import EmptySet, InconsistentAggregates

# display precision: coverage %, density, intensity
COVERAGE_DECIMALS = 2
RATE_DECIMALS = 3


@dataclass(frozen=True, slots=True)
class IndicatorTriple:
    """Presence indicators derived from three exact integer aggregates.

    Construct through :func:`compute_triple` or :func:`triple_from_aggregates`;
    the floating-point indicators are computed on access, never stored rounded.
    """

    n_total: int
    n_covered: int
    n_events: int

    @property
    def coverage_pct(self) -> float:
        return 100.0 * self.n_covered / self.n_total

    @property
    def density(self) -> float:
        return self.n_events / self.n_total

    @property
    def intensity(self) -> float:
        if self.n_covered == 0:
            return 0.0
        return self.n_events / self.n_covered

    def display(self) -> tuple[str, str, str]:
        return (
            f"{self.coverage_pct:.{COVERAGE_DECIMALS}f}",
            f"{self.density:.{RATE_DECIMALS}f}",
            f"{self.intensity:.{RATE_DECIMALS}f}",
        )

    def __str__(self) -> str:
        c, d, i = self.display()
        return f"C={c} D={d} I={i}"


def triple_from_aggregates(n_total: int, n_covered: int, n_events: int) -> IndicatorTriple:
    """Build a triple from N (set size), NP (covered publications) and NE (events)."""
    n_total, n_covered, n_events = int(n_total), int(n_covered), int(n_events)
    if n_total <= 0:
        raise EmptySet("indicator triple over an empty publication set")
    if n_covered < 0 or n_events < 0:
        raise InconsistentAggregates(f"negative aggregate ({n_covered=}, {n_events=})")
    if n_covered > n_total:
        raise InconsistentAggregates(f"{n_covered=} exceeds {n_total=}")
    if n_covered > n_events or (n_covered == 0 and n_events > 0):
        raise InconsistentAggregates(
            f"{n_events=} events cannot cover {n_covered=} publications"
        )
    return IndicatorTriple(n_total, n_covered, n_events)


def compute_triple(counts: Sequence[int] | np.ndarray) -> IndicatorTriple:
    """Indicators for one set of per-publication event counts (zeros included)."""
    arr = np.asarray(counts)
    if arr.size == 0:
        raise EmptySet("indicator triple over an empty publication set")
    if arr.dtype.kind not in "iu":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("counts must be integers")
        arr = arr.astype(np.int64)
    if arr.min() < 0:
        raise ValueError("counts must be non-negative")
    return IndicatorTriple(int(arr.size), int(np.count_nonzero(arr)), int(arr.sum(dtype=np.int64)))


def source_triple(
    corpus: Corpus,
    source: SourceKind,
    filter: Callable[[PublicationRecord], bool] | None = None,
) -> IndicatorTriple:
    """Triple for one source over the publications accepted by ``filter``.

    Publications without a tally count as zero.
    """
    counts = corpus.counts(SourceKind(source))
    if filter is not None:
        mask = np.fromiter((bool(filter(p)) for p in corpus.publications), dtype=bool,
                           count=len(corpus.publications))
        counts = counts[mask]
    if counts.size == 0:
        raise EmptySet(f"no publications selected for {SourceKind(source).value}")
    return compute_triple(counts)


def grouped_triples(codes: np.ndarray, counts: np.ndarray) -> dict[int, IndicatorTriple]:
    """One triple per distinct integer code, computed in a single pass."""
    if codes.size == 0:
        return {}
    keys, inverse = np.unique(codes, return_inverse=True)
    n_total = np.bincount(inverse, minlength=keys.size)
    # bincount weights are float64: exact for totals below 2**53
    n_covered = np.bincount(inverse, weights=(counts > 0), minlength=keys.size).astype(np.int64)
    n_events = np.bincount(inverse, weights=counts, minlength=keys.size).astype(np.int64)
    return {
        int(k): IndicatorTriple(int(t), int(c), int(e))
        for k, t, c, e in zip(keys, n_total, n_covered, n_events)
    }


@dataclass(frozen=True)
class AggregateCheck:
    label: str
    triple: IndicatorTriple
    expected: tuple[float, float, float]
    errors: tuple[float, float, float]
    tolerance: tuple[float, float, float]

    @property
    def ok(self) -> bool:
        return all(e <= t for e, t in zip(self.errors, self.tolerance))


def verify_aggregates(
    rows: Iterable[tuple[str, int, int, int, float, float, float]],
    tolerance: tuple[float, float, float] = (0.005, 0.0005, 0.0005),
) -> list[AggregateCheck]:
    """Recompute published (C, D, I) values from (N, NP, NE) aggregates.

    Each row is ``(label, N, NP, NE, C, D, I)``. Recomputed values are rounded
    to display precision before comparison against the published ones.
    """
    out = []
    for label, n, np_, ne, c, d, i in rows:
        t = triple_from_aggregates(n, np_, ne)
        shown = tuple(float(s) for s in t.display())
        errs = tuple(abs(a - b) for a, b in zip(shown, (c, d, i)))
        out.append(AggregateCheck(label, t, (c, d, i), errs, tolerance))
    return out
