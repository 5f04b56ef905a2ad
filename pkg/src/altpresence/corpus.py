"""Publication corpus: data model, CSV ingestion, identifier normalization and validation.

A :class:`Corpus` is built once (by :func:`ingest`, by the synthetic generator,
or by hand in tests) and never mutated afterwards. Analytical modules read it
through :attr:`Corpus.columns`, a lazily-built columnar view holding a
``(n_publications, n_sources)`` count matrix plus integer-coded strata.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import IO, Iterator, Literal, Union

import numpy as np

from .errors import IngestError, MalformedDoi, ReferentialIntegrity

log = logging.getLogger(__name__)

StreamLike = Union[str, os.PathLike, IO[str], IO[bytes]]


class Velocity(str, Enum):
    FAST = "fast"
    SLOW = "slow"
    DELAYED = "delayed"


class _TokenEnum(str, Enum):
    @classmethod
    def parse(cls, token: str):
        try:
            return cls(token.strip())
        except ValueError:
            allowed = "|".join(m.value for m in cls)
            raise ValueError(f"unknown {cls.__name__} token {token!r} (expected {allowed})") from None

    def __str__(self) -> str:
        return self.value


class SourceKind(_TokenEnum):
    MENDELEY = "mendeley"
    TWITTER = "twitter"
    FACEBOOK = "facebook"
    NEWS = "news"
    BLOGS = "blogs"
    WIKIPEDIA = "wikipedia"
    POLICY = "policy"
    REDDIT = "reddit"
    F1000 = "f1000"
    VIDEO = "video"
    PEER_REVIEW = "peer_review"
    QA = "qa"
    CITATIONS = "citations"

    @property
    def velocity(self) -> Velocity:
        return _VELOCITY[self]

    @property
    def column(self) -> int:
        """Column of this source in :attr:`CorpusColumns.counts`."""
        return _SOURCE_COLUMN[self]


_VELOCITY = {
    **{s: Velocity.FAST for s in (SourceKind.TWITTER, SourceKind.FACEBOOK, SourceKind.NEWS,
                                  SourceKind.BLOGS, SourceKind.REDDIT)},
    **{s: Velocity.SLOW for s in (SourceKind.WIKIPEDIA, SourceKind.POLICY, SourceKind.F1000,
                                  SourceKind.VIDEO, SourceKind.PEER_REVIEW, SourceKind.QA,
                                  SourceKind.CITATIONS)},
    SourceKind.MENDELEY: Velocity.DELAYED,
}
SOURCES: tuple[SourceKind, ...] = tuple(SourceKind)
_SOURCE_COLUMN = {s: i for i, s in enumerate(SOURCES)}


class DocType(_TokenEnum):
    ARTICLE = "article"
    REVIEW = "review"
    EDITORIAL = "editorial"
    MEETING_ABSTRACT = "meeting_abstract"
    LETTER = "letter"
    BOOK_REVIEW = "book_review"
    OTHER = "other"

    @property
    def topic_eligible(self) -> bool:
        return self in (DocType.ARTICLE, DocType.REVIEW, DocType.LETTER)


DOC_TYPES: tuple[DocType, ...] = tuple(DocType)


class MacroField(_TokenEnum):
    SSH = "SSH"
    BHS = "BHS"
    PSE = "PSE"
    LES = "LES"
    MCS = "MCS"


FIELDS: tuple[MacroField, ...] = tuple(MacroField)

MAX_TERMS = 5


@dataclass(frozen=True, slots=True)
class MicroTopic:
    topic_id: str
    field: MacroField
    terms: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return self.terms[0] if self.terms else self.topic_id


@dataclass(frozen=True, slots=True)
class PublicationRecord:
    pub_id: str
    doi: str | None
    pmid: str | None
    year: int
    doc_type: DocType
    topic_id: str | None = None

    @property
    def match_key(self) -> str:
        """DOI when present, PMID otherwise."""
        if self.doi:
            return f"doi:{self.doi}"
        return f"pmid:{self.pmid}"


@dataclass(frozen=True, slots=True)
class EventTally:
    pub_id: str
    source: SourceKind
    count: int


@dataclass(frozen=True)
class IngestMeta:
    files: dict[str, str] = field(default_factory=dict)
    accepted: dict[str, int] = field(default_factory=dict)
    rejected: dict[str, int] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class Corpus:
    publications: tuple[PublicationRecord, ...]
    topics: tuple[MicroTopic, ...] = ()
    tallies: tuple[EventTally, ...] = ()
    meta: IngestMeta = field(default_factory=IngestMeta, compare=False)

    def __len__(self) -> int:
        return len(self.publications)

    @cached_property
    def columns(self) -> "CorpusColumns":
        return CorpusColumns.build(self)

    @cached_property
    def topic_map(self) -> dict[str, MicroTopic]:
        return {t.topic_id: t for t in self.topics}

    def counts(self, source: SourceKind) -> np.ndarray:
        """Per-publication counts for one source, aligned with ``publications``."""
        return self.columns.counts[:, SourceKind(source).column]

    def lookup(self, doi: str | None = None, pmid: str | None = None) -> PublicationRecord | None:
        """Find a publication by DOI, falling back to PMID."""
        cols = self.columns
        if doi:
            try:
                row = cols.doi_index.get(normalize_doi(doi))
            except MalformedDoi:
                row = None
            if row is not None:
                return self.publications[row]
        if pmid:
            try:
                row = cols.pmid_index.get(normalize_pmid(pmid))
            except ValueError:
                row = None
            if row is not None:
                return self.publications[row]
        return None


@dataclass(frozen=True, eq=False)
class CorpusColumns:
    """Columnar, integer-coded view of a corpus.

    ``topic_index`` and ``field_code`` are -1 for unclassified publications (or
    for dangling topic references in hand-built corpora). Duplicate tallies in
    a hand-built corpus collapse to their maximum, matching ingestion.
    """

    pub_index: dict[str, int]
    doi_index: dict[str, int]
    pmid_index: dict[str, int]
    years: np.ndarray
    doc_type_code: np.ndarray
    topic_index: np.ndarray
    field_code: np.ndarray
    topic_ids: tuple[str, ...]
    topic_field_code: np.ndarray
    counts: np.ndarray

    @classmethod
    def build(cls, corpus: Corpus) -> "CorpusColumns":
        pubs = corpus.publications
        n = len(pubs)
        topic_ids = tuple(t.topic_id for t in corpus.topics)
        topic_pos: dict[str, int] = {}
        for i, tid in enumerate(topic_ids):
            topic_pos.setdefault(tid, i)
        field_pos = {f: i for i, f in enumerate(FIELDS)}
        doc_pos = {d: i for i, d in enumerate(DOC_TYPES)}
        topic_field_code = np.array([field_pos[t.field] for t in corpus.topics], dtype=np.int64)

        pub_index: dict[str, int] = {}
        doi_index: dict[str, int] = {}
        pmid_index: dict[str, int] = {}
        years = np.empty(n, dtype=np.int64)
        doc_code = np.empty(n, dtype=np.int64)
        topic_index = np.full(n, -1, dtype=np.int64)
        for i, p in enumerate(pubs):
            pub_index.setdefault(p.pub_id, i)
            if p.doi:
                doi_index.setdefault(p.doi, i)
            if p.pmid:
                pmid_index.setdefault(p.pmid, i)
            years[i] = p.year
            doc_code[i] = doc_pos[p.doc_type]
            if p.topic_id is not None:
                topic_index[i] = topic_pos.get(p.topic_id, -1)
        field_code = np.full(n, -1, dtype=np.int64)
        classified = topic_index >= 0
        if classified.any():
            field_code[classified] = topic_field_code[topic_index[classified]]

        counts = np.zeros((n, len(SOURCES)), dtype=np.int64)
        for t in corpus.tallies:
            row = pub_index.get(t.pub_id)
            if row is None:
                continue
            col = _SOURCE_COLUMN[t.source]
            counts[row, col] = max(counts[row, col], t.count)

        return cls(pub_index, doi_index, pmid_index, years, doc_code, topic_index,
                   field_code, topic_ids, topic_field_code, counts)

    @property
    def classified(self) -> np.ndarray:
        return self.topic_index >= 0


# ---------------------------------------------------------------------------
# identifiers

_DOI_PREFIXES = (
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi.org/",
    "dx.doi.org/",
    "doi:",
)
_DOI_RE = re.compile(r"^10\.\d+(?:\.\d+)*/\S+$")


def normalize_doi(raw: str) -> str:
    """Lower-case, trim and strip resolver prefixes from a DOI.

    >>> normalize_doi("https://doi.org/10.1000/ABC")
    '10.1000/abc'
    """
    doi = raw.strip().lower()
    for prefix in _DOI_PREFIXES:
        if doi.startswith(prefix):
            doi = doi[len(prefix):].strip()
            break
    if not _DOI_RE.match(doi):
        raise MalformedDoi(f"malformed DOI {raw!r}")
    return doi


def normalize_pmid(raw: str) -> str:
    pmid = raw.strip()
    if not (pmid.isascii() and pmid.isdigit()) or int(pmid) <= 0:
        raise ValueError(f"PMID must be a positive integer, got {raw!r}")
    return str(int(pmid))


# ---------------------------------------------------------------------------
# ingestion

PUBLICATION_COLUMNS = ("pub_id", "doi", "pmid", "year", "doc_type", "topic_id")
TOPIC_COLUMNS = ("topic_id", "field") + tuple(f"term{i}" for i in range(1, MAX_TERMS + 1))
EVENT_COLUMNS = ("pub_id", "source", "count")

Mode = Literal["strict", "lenient"]


def _read_text(stream: StreamLike, label: str) -> str:
    try:
        if isinstance(stream, (str, os.PathLike)):
            data: str | bytes = Path(stream).read_bytes()
        else:
            data = stream.read()
    except OSError as exc:
        raise IngestError(label, None, f"unreadable stream: {exc}") from exc
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise IngestError(label, None, f"invalid UTF-8 at byte {exc.start}") from exc
    return data.removeprefix("\ufeff")


def _stream_label(stream: StreamLike, default: str) -> str:
    if isinstance(stream, (str, os.PathLike)):
        return Path(stream).name
    return getattr(stream, "name", None) or default


def _rows(text: str, label: str, columns: tuple[str, ...]) -> Iterator[tuple[int, list[str] | str]]:
    """Yield ``(line_number, values)`` per data row, or ``(line, error)`` for bad arity."""
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError(label, 1, "missing header row") from None
    except csv.Error as exc:
        raise IngestError(label, 1, f"unparseable header: {exc}") from None
    header = [h.strip() for h in header]
    missing = [c for c in columns if c not in header]
    if missing:
        raise IngestError(label, 1, f"header lacks column(s) {', '.join(missing)}")
    pos = [header.index(c) for c in columns]
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            yield reader.line_num, f"unparseable row: {exc}"
            continue
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            yield reader.line_num, f"expected {len(header)} fields, got {len(row)}"
            continue
        yield reader.line_num, [row[i].strip() for i in pos]


class _Collector:
    def __init__(self, mode: Mode):
        if mode not in ("strict", "lenient"):
            raise ValueError(f"mode must be 'strict' or 'lenient', got {mode!r}")
        self.mode = mode
        self.warnings: list[str] = []
        self.rejected: Counter[str] = Counter()

    def reject(self, label: str, row: int, reason: str, exc: type[IngestError] = IngestError) -> None:
        if self.mode == "strict":
            raise exc(label, row, reason)
        self.rejected[label] += 1
        self.warn(f"{label}:{row}: skipped: {reason}")

    def warn(self, message: str) -> None:
        log.warning(message)
        self.warnings.append(message)


def ingest(
    pub_stream: StreamLike,
    topic_stream: StreamLike,
    event_stream: StreamLike,
    mode: Mode = "strict",
    year_window: tuple[int, int] | None = None,
) -> Corpus:
    """Read the three canonical CSV streams into a validated :class:`Corpus`.

    Streams may be paths, text streams or binary streams. In ``strict`` mode
    the first row-level violation raises :class:`IngestError` (or
    :class:`ReferentialIntegrity`); in ``lenient`` mode the row is skipped and
    a warning recorded in ``meta.warnings``. Undecodable bytes and missing
    headers abort in both modes. Duplicate ``(pub_id, source)`` tallies keep
    the largest count. Publications outside ``year_window`` are kept with a
    warning.
    """
    col = _Collector(mode)
    labels = {
        "topics": _stream_label(topic_stream, "topics.csv"),
        "publications": _stream_label(pub_stream, "publications.csv"),
        "events": _stream_label(event_stream, "events.csv"),
    }
    texts = {
        "topics": _read_text(topic_stream, labels["topics"]),
        "publications": _read_text(pub_stream, labels["publications"]),
        "events": _read_text(event_stream, labels["events"]),
    }

    topics = _ingest_topics(texts["topics"], labels["topics"], col)
    topic_ids = {t.topic_id for t in topics}
    pubs = _ingest_publications(texts["publications"], labels["publications"], col,
                                topic_ids, year_window)
    pub_ids = {p.pub_id for p in pubs}
    tallies = _ingest_events(texts["events"], labels["events"], col, pub_ids)

    accepted = {"topics": len(topics), "publications": len(pubs), "events": len(tallies)}
    meta = IngestMeta(
        files=labels,
        accepted=accepted,
        rejected={k: col.rejected[labels[k]] for k in labels},
        warnings=tuple(col.warnings),
    )
    return Corpus(tuple(pubs), tuple(topics), tuple(tallies), meta)


def _ingest_topics(text: str, label: str, col: _Collector) -> list[MicroTopic]:
    out: list[MicroTopic] = []
    seen: set[str] = set()
    for line, values in _rows(text, label, TOPIC_COLUMNS):
        if isinstance(values, str):
            col.reject(label, line, values)
            continue
        tid, field_token, *terms = values
        if not tid:
            col.reject(label, line, "empty topic_id")
            continue
        if tid in seen:
            col.reject(label, line, f"duplicate topic_id {tid!r}")
            continue
        try:
            macro = MacroField.parse(field_token)
        except ValueError as exc:
            col.reject(label, line, str(exc))
            continue
        seen.add(tid)
        out.append(MicroTopic(tid, macro, tuple(t for t in terms if t)))
    return out


def _ingest_publications(text: str, label: str, col: _Collector, topic_ids: set[str],
                         year_window: tuple[int, int] | None) -> list[PublicationRecord]:
    out: list[PublicationRecord] = []
    seen: set[str] = set()
    for line, values in _rows(text, label, PUBLICATION_COLUMNS):
        if isinstance(values, str):
            col.reject(label, line, values)
            continue
        pub_id, doi_raw, pmid_raw, year_raw, doc_raw, topic_raw = values
        if not pub_id:
            col.reject(label, line, "empty pub_id")
            continue
        if pub_id in seen:
            col.reject(label, line, f"duplicate pub_id {pub_id!r}")
            continue
        try:
            doi = normalize_doi(doi_raw) if doi_raw else None
            pmid = normalize_pmid(pmid_raw) if pmid_raw else None
            doc_type = DocType.parse(doc_raw)
        except ValueError as exc:
            col.reject(label, line, str(exc))
            continue
        if doi is None and pmid is None:
            col.reject(label, line, "neither doi nor pmid present")
            continue
        try:
            year = int(year_raw)
        except ValueError:
            col.reject(label, line, f"year is not an integer: {year_raw!r}")
            continue
        topic_id = topic_raw or None
        if topic_id is not None:
            if topic_id not in topic_ids:
                col.reject(label, line, f"unknown topic_id {topic_id!r}", ReferentialIntegrity)
                continue
            if not doc_type.topic_eligible:
                col.reject(label, line, f"doc_type {doc_type.value} cannot carry a topic_id")
                continue
        if year_window is not None and not (year_window[0] <= year <= year_window[1]):
            col.warn(f"{label}:{line}: year {year} outside window {year_window[0]}-{year_window[1]}")
        seen.add(pub_id)
        out.append(PublicationRecord(pub_id, doi, pmid, year, doc_type, topic_id))
    return out


def _ingest_events(text: str, label: str, col: _Collector, pub_ids: set[str]) -> list[EventTally]:
    # insertion-ordered so output follows first occurrence
    merged: dict[tuple[str, SourceKind], int] = {}
    for line, values in _rows(text, label, EVENT_COLUMNS):
        if isinstance(values, str):
            col.reject(label, line, values)
            continue
        pub_id, source_raw, count_raw = values
        if pub_id not in pub_ids:
            col.reject(label, line, f"unknown pub_id {pub_id!r}", ReferentialIntegrity)
            continue
        try:
            source = SourceKind.parse(source_raw)
        except ValueError as exc:
            col.reject(label, line, str(exc))
            continue
        if not (count_raw.isascii() and count_raw.isdigit()):
            col.reject(label, line, f"count must be a non-negative integer, got {count_raw!r}")
            continue
        count = int(count_raw)
        key = (pub_id, source)
        if key in merged:
            kept = max(merged[key], count)
            col.warn(f"{label}:{line}: duplicate tally ({pub_id}, {source.value}); "
                     f"counts {merged[key]} and {count}, keeping {kept}")
            merged[key] = kept
        else:
            merged[key] = count
    return [EventTally(p, s, c) for (p, s), c in merged.items()]


def load_corpus(directory: str | os.PathLike, mode: Mode = "strict", **kwargs) -> Corpus:
    """Ingest ``publications.csv``, ``topics.csv`` and ``events.csv`` from a directory."""
    d = Path(directory)
    return ingest(d / "publications.csv", d / "topics.csv", d / "events.csv", mode=mode, **kwargs)


# ---------------------------------------------------------------------------
# export

def export_corpus(corpus: Corpus, directory: str | os.PathLike) -> dict[str, Path]:
    """Write the three canonical files; returns their paths keyed by stream name."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = {
        "publications": d / "publications.csv",
        "topics": d / "topics.csv",
        "events": d / "events.csv",
    }
    with open(paths["topics"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TOPIC_COLUMNS)
        for t in corpus.topics:
            terms = list(t.terms[:MAX_TERMS]) + [""] * (MAX_TERMS - len(t.terms[:MAX_TERMS]))
            w.writerow([t.topic_id, t.field.value, *terms])
    with open(paths["publications"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PUBLICATION_COLUMNS)
        for p in corpus.publications:
            w.writerow([p.pub_id, p.doi or "", p.pmid or "", p.year, p.doc_type.value, p.topic_id or ""])
    with open(paths["events"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EVENT_COLUMNS)
        for t in corpus.tallies:
            w.writerow([t.pub_id, t.source.value, t.count])
    return paths


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ValidationReport:
    violations: dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.violations.values())

    @property
    def ok(self) -> bool:
        return self.total == 0

    def lines(self) -> list[str]:
        return [f"{rule}\t{n}" for rule, n in self.violations.items()]


def validate(corpus: Corpus) -> ValidationReport:
    """Count violations of every data-model invariant."""
    v: dict[str, int] = {
        "publication.unique_pub_id": 0,
        "publication.identifier_present": 0,
        "publication.doi_normalized": 0,
        "publication.pmid_positive": 0,
        "publication.topic_exists": 0,
        "publication.topic_doc_type_eligible": 0,
        "topic.unique_topic_id": 0,
        "topic.max_terms": 0,
        "tally.pub_exists": 0,
        "tally.unique_pair": 0,
        "tally.count_non_negative": 0,
    }
    topic_counts = Counter(t.topic_id for t in corpus.topics)
    v["topic.unique_topic_id"] = sum(n - 1 for n in topic_counts.values() if n > 1)
    v["topic.max_terms"] = sum(1 for t in corpus.topics if len(t.terms) > MAX_TERMS)

    pub_counts = Counter(p.pub_id for p in corpus.publications)
    v["publication.unique_pub_id"] = sum(n - 1 for n in pub_counts.values() if n > 1)
    for p in corpus.publications:
        if not p.doi and not p.pmid:
            v["publication.identifier_present"] += 1
        if p.doi:
            try:
                if normalize_doi(p.doi) != p.doi:
                    v["publication.doi_normalized"] += 1
            except MalformedDoi:
                v["publication.doi_normalized"] += 1
        if p.pmid:
            try:
                if normalize_pmid(p.pmid) != p.pmid:
                    v["publication.pmid_positive"] += 1
            except ValueError:
                v["publication.pmid_positive"] += 1
        if p.topic_id is not None:
            if p.topic_id not in topic_counts:
                v["publication.topic_exists"] += 1
            if not p.doc_type.topic_eligible:
                v["publication.topic_doc_type_eligible"] += 1

    pair_counts = Counter((t.pub_id, t.source) for t in corpus.tallies)
    v["tally.unique_pair"] = sum(n - 1 for n in pair_counts.values() if n > 1)
    for t in corpus.tallies:
        if t.pub_id not in pub_counts:
            v["tally.pub_exists"] += 1
        if t.count < 0:
            v["tally.count_non_negative"] += 1
    return ValidationReport(v)
