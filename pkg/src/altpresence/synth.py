"""Seeded synthetic corpora with skewed counts, field bias and velocity-dependent year trends.

Randomness comes from numpy's PCG64 bit generator, and only its uniform
doubles (``Generator.random``) are consumed; every other distribution is
derived here by inverse transform. The same seed and config therefore give
the same corpus on any platform.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from statistics import NormalDist

import numpy as np

from .corpus import (
    DOC_TYPES,
    FIELDS,
    SOURCES,
    Corpus,
    DocType,
    EventTally,
    IngestMeta,
    MacroField,
    MicroTopic,
    PublicationRecord,
    SourceKind,
    Velocity,
    export_corpus,
)
from .errors import InvalidConfig

COUNT_SUPPORT_MAX = 10**6

# year multiplier at (oldest, newest) publication year
_YEAR_RAMP = {
    Velocity.FAST: (1.0, 2.0),
    Velocity.SLOW: (2.0, 1.0),
    Velocity.DELAYED: (1.25, 1.0),
}

_ALTMETRIC_BIAS = {MacroField.SSH: 1.3, MacroField.BHS: 1.3, MacroField.PSE: 0.6,
                   MacroField.LES: 1.1, MacroField.MCS: 0.5}
_CITATION_BIAS = {MacroField.SSH: 0.6, MacroField.BHS: 1.2, MacroField.PSE: 1.1,
                  MacroField.LES: 1.1, MacroField.MCS: 0.7}

# (coverage, tail exponent) per source; qualitative stand-ins
_DEFAULT_PROFILES = {
    SourceKind.MENDELEY: (0.89, 1.8),
    SourceKind.TWITTER: (0.34, 2.0),
    SourceKind.FACEBOOK: (0.086, 2.6),
    SourceKind.NEWS: (0.04, 2.0),
    SourceKind.BLOGS: (0.037, 2.8),
    SourceKind.WIKIPEDIA: (0.0135, 3.0),
    SourceKind.POLICY: (0.0112, 3.5),
    SourceKind.REDDIT: (0.0057, 3.0),
    SourceKind.F1000: (0.0056, 6.0),
    SourceKind.VIDEO: (0.004, 3.0),
    SourceKind.PEER_REVIEW: (0.0026, 6.0),
    SourceKind.QA: (0.0006, 3.5),
    SourceKind.CITATIONS: (0.77, 1.9),
}


@dataclass
class SourceProfile:
    target_coverage: float
    tail_exponent: float = 2.5
    velocity: Velocity = Velocity.FAST
    field_bias: dict[MacroField, float] = field(default_factory=dict)

    def bias(self, f: MacroField) -> float:
        return self.field_bias.get(f, 1.0)


def default_profiles() -> dict[SourceKind, SourceProfile]:
    out = {}
    for s, (cov, tail) in _DEFAULT_PROFILES.items():
        bias = _CITATION_BIAS if s is SourceKind.CITATIONS else _ALTMETRIC_BIAS
        out[s] = SourceProfile(cov, tail, s.velocity, dict(bias))
    return out


@dataclass
class GeneratorConfig:
    seed: int = 0
    n_pubs: int = 10_000
    year_range: tuple[int, int] = (2012, 2018)
    field_mix: dict[MacroField, float] = field(
        default_factory=lambda: {MacroField.SSH: 8.6, MacroField.BHS: 40.2, MacroField.PSE: 29.0,
                                 MacroField.LES: 14.6, MacroField.MCS: 7.6})
    n_topics_per_field: int = 50
    doc_type_mix: dict[DocType, float] = field(
        default_factory=lambda: {DocType.ARTICLE: 80.3, DocType.REVIEW: 5.0, DocType.EDITORIAL: 4.9,
                                 DocType.MEETING_ABSTRACT: 4.3, DocType.LETTER: 2.2,
                                 DocType.BOOK_REVIEW: 1.8, DocType.OTHER: 1.5})
    # share of topic-eligible publications (article/review/letter) given a micro-topic
    classified_share: float = 1.0
    # log-sd of the per-topic attention multiplier shared by all sources
    topic_heterogeneity: float = 0.5
    # log-sd of an additional per-topic multiplier drawn independently for each source
    source_heterogeneity: float = 0.5
    profiles: dict[SourceKind, SourceProfile] = field(default_factory=default_profiles)

    def __post_init__(self) -> None:
        # accept plain tokens for enum-keyed mappings
        self.field_mix = {MacroField(k): v for k, v in self.field_mix.items()}
        self.doc_type_mix = {DocType(k): v for k, v in self.doc_type_mix.items()}
        self.profiles = {SourceKind(k): p for k, p in self.profiles.items()}
        for p in self.profiles.values():
            p.velocity = Velocity(p.velocity)
            p.field_bias = {MacroField(k): v for k, v in p.field_bias.items()}

    def validate(self) -> None:
        if not (0 <= self.seed < 2**64):
            raise InvalidConfig(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.n_pubs < 1:
            raise InvalidConfig("n_pubs must be positive")
        lo, hi = self.year_range
        if lo > hi:
            raise InvalidConfig(f"year_range {lo}-{hi} is reversed")
        if self.n_topics_per_field < 1:
            raise InvalidConfig("n_topics_per_field must be positive")
        _check_weights("field_mix", self.field_mix)
        _check_weights("doc_type_mix", self.doc_type_mix)
        if not (0.0 <= self.classified_share <= 1.0):
            raise InvalidConfig("classified_share must lie in [0, 1]")
        if self.topic_heterogeneity < 0 or self.source_heterogeneity < 0:
            raise InvalidConfig("heterogeneity parameters must be non-negative")
        for s, p in self.profiles.items():
            if not (0.0 <= p.target_coverage <= 1.0):
                raise InvalidConfig(f"{s.value}: target_coverage must lie in [0, 1]")
            if not p.tail_exponent > 1.0:
                raise InvalidConfig(f"{s.value}: tail_exponent must exceed 1")
            if any(b < 0 or not math.isfinite(b) for b in p.field_bias.values()):
                raise InvalidConfig(f"{s.value}: field_bias multipliers must be non-negative")


def _check_weights(name: str, weights: dict) -> None:
    vals = list(weights.values())
    if any(w < 0 or not math.isfinite(w) for w in vals) or not any(w > 0 for w in vals):
        raise InvalidConfig(f"{name}: weights must be non-negative with at least one positive")


# ---------------------------------------------------------------------------
# config files

def load_config(path: str | os.PathLike) -> GeneratorConfig:
    """Read an INI-style generator config.

    Sections: ``[corpus]`` (scalars), ``[field_mix]``, ``[doc_type_mix]`` and
    one ``[source.<token>]`` per generated source with ``target_coverage``,
    ``tail_exponent``, optional ``velocity`` and ``bias.<FIELD>`` keys. When
    any source section is present, only the listed sources receive events.
    """
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
    try:
        return _config_from_parser(cp)
    except (ValueError, KeyError) as exc:
        if isinstance(exc, InvalidConfig):
            raise
        raise InvalidConfig(f"{path}: {exc}") from exc


def _config_from_parser(cp: configparser.ConfigParser) -> GeneratorConfig:
    cfg = GeneratorConfig()
    if cp.has_section("corpus"):
        sec = cp["corpus"]
        cfg.seed = sec.getint("seed", cfg.seed)
        cfg.n_pubs = sec.getint("n_pubs", cfg.n_pubs)
        cfg.year_range = (sec.getint("year_min", cfg.year_range[0]), sec.getint("year_max", cfg.year_range[1]))
        cfg.n_topics_per_field = sec.getint("n_topics_per_field", cfg.n_topics_per_field)
        cfg.classified_share = sec.getfloat("classified_share", cfg.classified_share)
        cfg.topic_heterogeneity = sec.getfloat("topic_heterogeneity", cfg.topic_heterogeneity)
        cfg.source_heterogeneity = sec.getfloat("source_heterogeneity", cfg.source_heterogeneity)
    if cp.has_section("field_mix"):
        cfg.field_mix = {MacroField.parse(k): float(v) for k, v in cp["field_mix"].items()}
    if cp.has_section("doc_type_mix"):
        cfg.doc_type_mix = {DocType.parse(k): float(v) for k, v in cp["doc_type_mix"].items()}
    source_sections = [s for s in cp.sections() if s.startswith("source.")]
    if source_sections:
        cfg.profiles = {}
        for name in source_sections:
            src = SourceKind.parse(name.removeprefix("source."))
            sec = cp[name]
            bias = {MacroField.parse(k.removeprefix("bias.")): float(v)
                    for k, v in sec.items() if k.startswith("bias.")}
            unknown = [k for k in sec if not k.startswith("bias.")
                       and k not in ("target_coverage", "tail_exponent", "velocity")]
            if unknown:
                raise InvalidConfig(f"[{name}]: unknown key(s) {', '.join(unknown)}")
            cfg.profiles[src] = SourceProfile(
                target_coverage=sec.getfloat("target_coverage"),
                tail_exponent=sec.getfloat("tail_exponent", 2.5),
                velocity=Velocity(sec.get("velocity", src.velocity.value)),
                field_bias=bias,
            )
    cfg.validate()
    return cfg


def dump_config(cfg: GeneratorConfig) -> str:
    lines = [
        "[corpus]",
        f"seed = {cfg.seed}",
        f"n_pubs = {cfg.n_pubs}",
        f"year_min = {cfg.year_range[0]}",
        f"year_max = {cfg.year_range[1]}",
        f"n_topics_per_field = {cfg.n_topics_per_field}",
        f"classified_share = {cfg.classified_share!r}",
        f"topic_heterogeneity = {cfg.topic_heterogeneity!r}",
        f"source_heterogeneity = {cfg.source_heterogeneity!r}",
        "",
        "[field_mix]",
        *(f"{f.value} = {w!r}" for f, w in cfg.field_mix.items()),
        "",
        "[doc_type_mix]",
        *(f"{d.value} = {w!r}" for d, w in cfg.doc_type_mix.items()),
    ]
    for s, p in cfg.profiles.items():
        lines += ["", f"[source.{s.value}]",
                  f"target_coverage = {p.target_coverage!r}",
                  f"tail_exponent = {p.tail_exponent!r}",
                  f"velocity = {p.velocity.value}"]
        lines += [f"bias.{f.value} = {b!r}" for f, b in p.field_bias.items()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# sampling primitives

@lru_cache(maxsize=32)
def _power_law_cdf(exponent: float, kmax: int = COUNT_SUPPORT_MAX) -> np.ndarray:
    pmf = np.arange(1, kmax + 1, dtype=np.float64) ** -exponent
    cdf = np.cumsum(pmf)
    cdf /= cdf[-1]
    cdf.setflags(write=False)
    return cdf


def power_law_counts(u: np.ndarray, exponent: float, kmax: int = COUNT_SUPPORT_MAX) -> np.ndarray:
    """Map uniforms to counts with P(k) proportional to k**-exponent on [1, kmax]."""
    cdf = _power_law_cdf(float(exponent), kmax)
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, kmax - 1).astype(np.int64) + 1


def categorical(u: np.ndarray, weights: list[float]) -> np.ndarray:
    cum = np.cumsum(np.asarray(weights, dtype=np.float64))
    cum /= cum[-1]
    return np.minimum(np.searchsorted(cum, u, side="right"), len(weights) - 1)


def standard_normal(u: np.ndarray) -> np.ndarray:
    nd = NormalDist()
    # guard the open interval required by inv_cdf
    clipped = np.clip(u, 1e-300, 1 - 2**-53)
    return np.array([nd.inv_cdf(x) for x in clipped.tolist()], dtype=np.float64)


def calibrated_probabilities(weights: np.ndarray, target: float) -> np.ndarray:
    """Probabilities ``min(1, c * w)`` whose mean equals ``target``.

    ``c`` is found by bisection; weights of zero stay at probability zero, so
    the target may be unreachable, in which case the result saturates.
    """
    if target <= 0.0:
        return np.zeros_like(weights)
    if target >= 1.0:
        return np.where(weights > 0, 1.0, 0.0)
    mean_w = weights.mean()
    if mean_w <= 0:
        return np.zeros_like(weights)
    lo, hi = 0.0, target / mean_w
    while np.minimum(1.0, hi * weights).mean() < target and hi < 1e300:
        hi *= 2.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if np.minimum(1.0, mid * weights).mean() < target:
            lo = mid
        else:
            hi = mid
    return np.minimum(1.0, hi * weights)


def year_multiplier(years: np.ndarray, year_range: tuple[int, int], velocity: Velocity) -> np.ndarray:
    lo, hi = year_range
    frac = np.zeros(years.shape) if hi == lo else (years - lo) / (hi - lo)
    start, end = _YEAR_RAMP[Velocity(velocity)]
    return start + (end - start) * frac


# ---------------------------------------------------------------------------
# generation

def generate_corpus(config: GeneratorConfig) -> Corpus:
    config.validate()
    rng = np.random.Generator(np.random.PCG64(config.seed))
    n = config.n_pubs
    n_t = config.n_topics_per_field
    fields_used = [f for f in FIELDS if config.field_mix.get(f, 0.0) > 0]

    topics: list[MicroTopic] = []
    for f in fields_used:
        for j in range(1, n_t + 1):
            topics.append(MicroTopic(f"{f.value}-{j:04d}", f,
                                     (f"{f.value.lower()} topic {j}", f"{f.value.lower()} term {j}")))
    n_topics = len(topics)
    shared_attention = np.exp(config.topic_heterogeneity * standard_normal(rng.random(n_topics)))

    doc_weights = [config.doc_type_mix.get(d, 0.0) for d in DOC_TYPES]
    doc_code = categorical(rng.random(n), doc_weights)
    lo, hi = config.year_range
    years = lo + np.minimum((rng.random(n) * (hi - lo + 1)).astype(np.int64), hi - lo)
    eligible = np.isin(doc_code, [DOC_TYPES.index(d) for d in DOC_TYPES if d.topic_eligible])
    classified = eligible & (rng.random(n) < config.classified_share)
    field_pick = categorical(rng.random(n), [config.field_mix[f] for f in fields_used])
    topic_in_field = np.minimum((rng.random(n) * n_t).astype(np.int64), n_t - 1)
    topic_row = np.where(classified, field_pick * n_t + topic_in_field, -1)

    counts = {}
    for s in SOURCES:
        if s not in config.profiles:
            continue
        p = config.profiles[s]
        own = np.exp(config.source_heterogeneity * standard_normal(rng.random(n_topics)))
        attention = shared_attention * own
        bias = np.array([p.bias(f) for f in fields_used])
        w = year_multiplier(years, config.year_range, p.velocity)
        w = w * np.where(classified, bias[np.maximum(field_pick, 0)] * attention[np.maximum(topic_row, 0)], 1.0)
        prob = calibrated_probabilities(w, p.target_coverage)
        covered = rng.random(n) < prob
        positive = power_law_counts(rng.random(n), p.tail_exponent)
        counts[s] = np.where(covered, positive, 0)

    width = max(7, len(str(n)))
    doc_types = [DOC_TYPES[c] for c in doc_code.tolist()]
    pubs = []
    for i, (y, d, t) in enumerate(zip(years.tolist(), doc_types, topic_row.tolist())):
        pubs.append(PublicationRecord(
            pub_id=f"P{i:0{width}d}",
            doi=f"10.5555/synth.{config.seed}.{i}",
            pmid=None,
            year=y,
            doc_type=d,
            topic_id=topics[t].topic_id if t >= 0 else None,
        ))
    tallies = []
    for s, c in counts.items():
        for i in np.flatnonzero(c).tolist():
            tallies.append(EventTally(pubs[i].pub_id, s, int(c[i])))

    meta = IngestMeta(
        files={"generator": f"seed={config.seed}"},
        accepted={"topics": len(topics), "publications": len(pubs), "events": len(tallies)},
        rejected={"topics": 0, "publications": 0, "events": 0},
    )
    return Corpus(tuple(pubs), tuple(topics), tuple(tallies), meta)


def write_corpus(config: GeneratorConfig, directory: str | os.PathLike) -> Corpus:
    corpus = generate_corpus(config)
    export_corpus(corpus, Path(directory))
    return corpus
