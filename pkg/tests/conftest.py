from __future__ import annotations

from pathlib import Path

import pytest

from altpresence.corpus import (
    Corpus,
    DocType,
    EventTally,
    MacroField,
    MicroTopic,
    PublicationRecord,
    SourceKind,
)


def make_corpus(pubs, topics=()):
    """Build a corpus from compact specs.

    ``pubs``: iterable of ``(year, doc_type, topic_id, {source: count})``;
    ``topics``: iterable of ``(topic_id, field)`` or ``(topic_id, field, terms)``.
    """
    topic_objs = []
    for spec in topics:
        tid, field, *rest = spec
        terms = tuple(rest[0]) if rest else (f"{tid} label",)
        topic_objs.append(MicroTopic(tid, MacroField(field), terms))
    records, tallies = [], []
    for i, (year, doc, topic, counts) in enumerate(pubs):
        pid = f"p{i}"
        records.append(PublicationRecord(pid, f"10.1000/{i}", None, year, DocType(doc), topic))
        for src, c in counts.items():
            tallies.append(EventTally(pid, SourceKind(src), c))
    return Corpus(tuple(records), tuple(topic_objs), tuple(tallies))


def twitter_corpus(counts, year=2015, doc="article", topic=None):
    return make_corpus([(year, doc, topic, {"twitter": c}) for c in counts],
                       [(topic, "BHS")] if topic else ())


def write_files(directory: Path, pubs: str, topics: str, events: str) -> tuple[Path, Path, Path]:
    paths = (directory / "publications.csv", directory / "topics.csv", directory / "events.csv")
    for p, text in zip(paths, (pubs, topics, events)):
        p.write_text(text, encoding="utf-8")
    return paths


PUBS_HEADER = "pub_id,doi,pmid,year,doc_type,topic_id\n"
TOPICS_HEADER = "topic_id,field,term1,term2,term3,term4,term5\n"
EVENTS_HEADER = "pub_id,source,count\n"


@pytest.fixture
def small_files(tmp_path):
    pubs = PUBS_HEADER + (
        "a,https://doi.org/10.1000/A1,,2014,article,T1\n"
        "b,,12345,2016,review,T1\n"
        "c,doi:10.1000/c3,777,2016,editorial,\n"
    )
    topics = TOPICS_HEADER + "T1,SSH,gender,education,,,\n"
    events = EVENTS_HEADER + "a,twitter,3\nb,policy,1\n"
    return write_files(tmp_path, pubs, topics, events)


# --- acceptance reporting ------------------------------------------------------

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for the terminal summary, then assert."""
    def check(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
