"""Altmetric presence analytics: coverage, density and intensity over publication
sets, topic-level rank correlation and hot-topic classification."""

from .corpus import (
    Corpus,
    DocType,
    EventTally,
    MacroField,
    MicroTopic,
    PublicationRecord,
    SourceKind,
    Velocity,
    export_corpus,
    ingest,
    load_corpus,
    normalize_doi,
    validate,
)
from .correlate import (
    CorrelationMatrix,
    cross_source_matrix,
    indicator_intercorrelation,
    spearman_rho,
    topic_metric_vector,
)
from .errors import (
    AltpresenceError,
    DegenerateInput,
    EmptySet,
    InconsistentAggregates,
    IngestError,
    InvalidConfig,
    LengthMismatch,
    MalformedDoi,
    ReferentialIntegrity,
)
from .indicators import IndicatorTriple, compute_triple, source_triple, triple_from_aggregates
from .strata import coverage_by_doc_type, count_distribution, triples_by_field, triples_by_year
from .synth import GeneratorConfig, SourceProfile, generate_corpus, load_config
from .topics import AttentionCategory, classify_topics, competition_rank, hot_report

__version__ = "0.1.0"
