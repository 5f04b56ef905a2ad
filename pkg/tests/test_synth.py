import filecmp
from collections import Counter
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altpresence.corpus import FIELDS, SOURCES, MacroField, SourceKind, Velocity, load_corpus, validate
from altpresence.errors import InvalidConfig
from altpresence.indicators import source_triple
from altpresence.strata import count_distribution, triples_by_year
from altpresence.synth import (
    GeneratorConfig,
    SourceProfile,
    calibrated_probabilities,
    dump_config,
    generate_corpus,
    load_config,
    power_law_counts,
    write_corpus,
    year_multiplier,
)


def test_same_seed_byte_identical(tmp_path):
    cfg = GeneratorConfig(seed=7, n_pubs=3000, n_topics_per_field=10)
    write_corpus(cfg, tmp_path / "a")
    write_corpus(cfg, tmp_path / "b")
    for name in ("publications.csv", "topics.csv", "events.csv"):
        assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)
    write_corpus(replace(cfg, seed=8), tmp_path / "c")
    assert (tmp_path / "a" / "events.csv").read_bytes() != (tmp_path / "c" / "events.csv").read_bytes()


def test_roundtrip_through_files(tmp_path):
    corpus = write_corpus(GeneratorConfig(seed=3, n_pubs=2000, n_topics_per_field=5), tmp_path)
    back = load_corpus(tmp_path)
    assert back.publications == corpus.publications
    assert back.topics == corpus.topics
    assert sorted(back.tallies, key=lambda t: (t.pub_id, t.source.column)) == \
        sorted(corpus.tallies, key=lambda t: (t.pub_id, t.source.column))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**64 - 1), st.floats(0.0, 1.0))
def test_generated_corpus_validates(seed, classified):
    corpus = generate_corpus(GeneratorConfig(seed=seed, n_pubs=500, n_topics_per_field=4,
                                             classified_share=classified))
    assert validate(corpus).ok


@pytest.fixture(scope="module")
def big_uniform():
    cfg = GeneratorConfig(seed=2024, n_pubs=100_000,
                          profiles={"twitter": SourceProfile(0.30, 2.5)}, topic_heterogeneity=0.0,
                          source_heterogeneity=0.0)
    return generate_corpus(cfg)


def test_target_coverage_realized(big_uniform):
    t = source_triple(big_uniform, "twitter")
    assert abs(t.coverage_pct / 100 - 0.30) <= 0.02
    assert source_triple(big_uniform, "news").n_covered == 0


def test_field_shares_track_mix(big_uniform):
    cfg = GeneratorConfig()
    tmap = big_uniform.topic_map
    fields = Counter(tmap[p.topic_id].field for p in big_uniform.publications if p.topic_id)
    total = sum(fields.values())
    weight = sum(cfg.field_mix.values())
    for f in FIELDS:
        assert abs(100 * fields[f] / total - 100 * cfg.field_mix[f] / weight) <= 2.0


def test_default_profiles_are_skewed():
    corpus = generate_corpus(GeneratorConfig(seed=5, n_pubs=30_000))
    cfg = GeneratorConfig()
    for s in SOURCES:
        p = cfg.profiles[s]
        if p.tail_exponent <= 3 and p.target_coverage <= 0.5:
            d = count_distribution(corpus, s)
            assert d.skewness is not None and d.skewness > 1, s


def test_velocity_profiles():
    profiles = {"twitter": SourceProfile(0.2, 2.5, Velocity.FAST),
                "policy": SourceProfile(0.2, 2.5, Velocity.SLOW),
                "wikipedia": SourceProfile(0.2, 2.5, Velocity.DELAYED)}
    corpus = generate_corpus(GeneratorConfig(seed=9, n_pubs=50_000, profiles=profiles))
    lo, hi = 2012, 2018
    fast = triples_by_year(corpus, "twitter").rows
    slow = triples_by_year(corpus, "policy").rows
    late = triples_by_year(corpus, "wikipedia").rows
    assert fast[hi].coverage_pct > fast[lo].coverage_pct
    assert slow[hi].coverage_pct < slow[lo].coverage_pct
    assert late[hi].coverage_pct < late[lo].coverage_pct


def test_year_multiplier_endpoints():
    years = np.array([2012, 2015, 2018])
    assert year_multiplier(years, (2012, 2018), Velocity.FAST).tolist() == [1.0, 1.5, 2.0]
    assert year_multiplier(years, (2012, 2018), Velocity.SLOW).tolist() == [2.0, 1.5, 1.0]
    assert year_multiplier(np.array([2015]), (2015, 2015), Velocity.FAST).tolist() == [1.0]


def test_calibrated_probabilities_hit_target():
    w = np.array([1.0, 2.0, 4.0, 8.0] * 50)
    p = calibrated_probabilities(w, 0.25)
    assert p.mean() == pytest.approx(0.25, abs=1e-9)
    assert np.all(np.diff(p[:4]) >= 0) and p.max() <= 1.0
    assert calibrated_probabilities(w, 0.0).max() == 0.0
    assert calibrated_probabilities(w, 1.0).min() == 1.0


def test_power_law_counts():
    u = np.linspace(0, 1, 10_001)[:-1]
    c = power_law_counts(u, 2.0)
    assert c.min() == 1 and c.max() <= 10**6
    assert np.all(np.diff(c) >= 0)
    # P(K = 1) = 1 / zeta(2) on an effectively infinite support
    assert np.mean(c == 1) == pytest.approx(6 / np.pi**2, abs=1e-3)


@pytest.mark.parametrize("change", [
    dict(n_pubs=0),
    dict(year_range=(2019, 2012)),
    dict(n_topics_per_field=0),
    dict(field_mix={"SSH": 0.0}),
    dict(doc_type_mix={"article": -1.0, "review": 2.0}),
    dict(classified_share=1.5),
    dict(topic_heterogeneity=-0.1),
    dict(seed=-1),
    dict(profiles={"twitter": SourceProfile(1.2)}),
    dict(profiles={"twitter": SourceProfile(0.2, 1.0)}),
    dict(profiles={"twitter": SourceProfile(0.2, 2.0, field_bias={"SSH": -1.0})}),
])
def test_invalid_configs(change):
    with pytest.raises(InvalidConfig):
        GeneratorConfig(**change).validate()


def test_config_file_roundtrip(tmp_path):
    cfg = GeneratorConfig(seed=42, n_pubs=1234, classified_share=0.8,
                          profiles={"twitter": SourceProfile(0.3, 2.2, "slow", {"SSH": 1.5}),
                                    "qa": SourceProfile(0.001, 3.5)})
    path = tmp_path / "g.cfg"
    path.write_text(dump_config(cfg))
    back = load_config(path)
    assert back == cfg
    assert dump_config(back) == path.read_text()


def test_config_partial_file(tmp_path):
    path = tmp_path / "g.cfg"
    path.write_text("[corpus]\nseed = 9\nn_pubs = 50\n\n[source.news]\ntarget_coverage = 0.1\n")
    cfg = load_config(path)
    assert (cfg.seed, cfg.n_pubs) == (9, 50)
    assert list(cfg.profiles) == [SourceKind.NEWS]
    assert cfg.profiles[SourceKind.NEWS].velocity is Velocity.FAST
    assert cfg.field_mix[MacroField.BHS] == GeneratorConfig().field_mix[MacroField.BHS]


@pytest.mark.parametrize("text", [
    "[source.twitter]\ntarget_coverage = 2\n",
    "[source.twitter]\ntarget_coverage = 0.2\nspeed = 3\n",
    "[source.tiktok]\ntarget_coverage = 0.2\n",
    "[corpus]\nn_pubs = many\n",
    "not an ini file",
])
def test_bad_config_files(tmp_path, text):
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    with pytest.raises(InvalidConfig):
        load_config(path)
    with pytest.raises(InvalidConfig):
        load_config(tmp_path / "missing.cfg")
