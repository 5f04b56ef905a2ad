"""Command-line entry point: ``altpresence <subcommand> ...``.

Exit status is 0 on success, 1 when the data fail validation or an analysis
has nothing to work on, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .correlate import METRICS, cross_source_matrix, indicator_intercorrelation
from .corpus import SOURCES, Corpus, SourceKind, export_corpus, ingest, validate
from .errors import AltpresenceError
from .indicators import source_triple, triple_from_aggregates
from .strata import (
    REPORT_COLUMNS,
    bin_upper,
    count_distribution,
    coverage_by_doc_type,
    triples_by_field,
    triples_by_year,
)
from .synth import GeneratorConfig, generate_corpus, load_config
from .topics import TOPIC_COLUMNS, classify_topics, hot_report

Table = tuple[Sequence[str], list[Sequence[str]]]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument grammar

def _quantile(text: str) -> float:
    try:
        q = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (0.0 < q <= 1.0):
        raise argparse.ArgumentTypeError(f"--q must lie in (0, 1], got {text}")
    return q


def _aggregates(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    try:
        if len(parts) != 3:
            raise ValueError
        n, np_, ne = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,NP,NE integers, got {text!r}") from None
    return n, np_, ne


def _sources(text: str) -> tuple[SourceKind, ...]:
    if text == "all":
        return SOURCES
    try:
        return tuple(SourceKind.parse(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altpresence",
        description="Altmetric presence indicators, topic correlations and hot-topic classification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="<subcommand>", required=True)

    data = argparse.ArgumentParser(add_help=False)
    g = data.add_argument_group("input corpus")
    g.add_argument("--pubs", type=Path, help="publications.csv")
    g.add_argument("--topics", type=Path, help="topics.csv")
    g.add_argument("--events", type=Path, help="events.csv")
    g.add_argument("--lenient", action="store_true", help="skip invalid rows instead of aborting")

    out = argparse.ArgumentParser(add_help=False)
    g = out.add_argument_group("output")
    g.add_argument("--out", type=Path, help="output file, or directory when --source fans out (default: stdout)")
    g.add_argument("--format", choices=("csv", "text"), default="text", help="report format (default: text)")
    g.add_argument("--no-provenance", action="store_true", help="omit the leading '#' provenance line")

    def source_arg(p, default=None, help_extra=""):
        p.add_argument("--source", type=_sources, default=default, metavar="S|S1,S2|all",
                       help="source token(s) or 'all'" + help_extra)

    p = sub.add_parser("ingest", parents=[data, out], help="validate input files and print snapshot statistics")
    p.add_argument("--year-min", type=int, help="warn about publications before this year")
    p.add_argument("--year-max", type=int, help="warn about publications after this year")

    p = sub.add_parser("indicators", parents=[data, out],
                       help="coverage, density and intensity per source, or from aggregates")
    p.add_argument("--aggregates", type=_aggregates, metavar="N,NP,NE",
                   help="compute from set size, covered publications and total events")
    source_arg(p, SOURCES, " (default: all, one row each)")

    for name, helptext in (("by-year", "indicators per publication year"),
                           ("by-field", "indicators per macro field (classified publications)"),
                           ("by-doctype", "indicators per document type")):
        p = sub.add_parser(name, parents=[data, out], help=helptext)
        source_arg(p)

    p = sub.add_parser("distribution", parents=[data, out], help="count histogram and skewness")
    source_arg(p)
    p.add_argument("--log-binned", action="store_true", help="base-2 bins [0], [1], [2,3], [4,7], ...")

    p = sub.add_parser("correlate", parents=[data, out], help="Spearman correlations at topic level")
    source_arg(p, None, " (cross-source: default all; indicators: exactly one)")
    p.add_argument("--mode", choices=("cross-source", "indicators"), default="cross-source",
                   help="correlate sources for one metric, or C/D/I within one source")
    p.add_argument("--metric", choices=METRICS, default="coverage")
    p.add_argument("--exclude-mutual-zeros", action="store_true",
                   help="drop topics where both sources are zero, per pair")

    p = sub.add_parser("hot-topics", parents=[data, out], help="rank and classify micro-topics")
    source_arg(p)
    p.add_argument("--q", type=_quantile, default=0.10, help="top quantile on both dimensions (default 0.10)")
    p.add_argument("--scope", choices=("global", "field"), default="field",
                   help="rank within each macro field (default) or across all topics")
    p.add_argument("--dump", action="store_true",
                   help="emit every eligible topic with ranks and category (quadrant scatter data)")

    p = sub.add_parser("generate", help="write a synthetic corpus (three canonical CSV files)")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("--config", type=Path, help="generator config (INI); defaults are used when omitted")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    return parser


# ---------------------------------------------------------------------------
# rendering

def render(table: Table, fmt: str, provenance: str | None) -> str:
    header, rows = table
    buf = io.StringIO()
    if provenance:
        buf.write(provenance + "\n")
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
        for r in (header, *rows):
            buf.write("  ".join(str(c).ljust(wd) for c, wd in zip(r, widths)).rstrip() + "\n")
    return buf.getvalue()


def _provenance(args: argparse.Namespace, argv: Sequence[str]) -> str | None:
    if getattr(args, "no_provenance", False):
        return None
    return f"# altpresence {__version__} {' '.join(argv)}"


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def _per_source(args, argv, build: Callable[[Corpus, SourceKind], Table]) -> None:
    sources = args.source
    if not sources:
        raise UsageError("--source is required")
    if len(sources) > 1 and args.out is None:
        raise UsageError("--source with several sources needs --out DIR (one report per source)")
    corpus = _load(args)
    prov = _provenance(args, argv)
    if len(sources) == 1:
        _emit(render(build(corpus, sources[0]), args.format, prov), args.out)
        return
    args.out.mkdir(parents=True, exist_ok=True)
    ext = "csv" if args.format == "csv" else "txt"
    for s in sources:
        table = build(corpus, s)
        (args.out / f"{args.command}_{s.value}.{ext}").write_text(render(table, args.format, prov),
                                                                  encoding="utf-8")


def _load(args) -> Corpus:
    missing = [f"--{n}" for n in ("pubs", "topics", "events") if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    window = None
    if getattr(args, "year_min", None) is not None or getattr(args, "year_max", None) is not None:
        window = (args.year_min if args.year_min is not None else -10**9,
                  args.year_max if args.year_max is not None else 10**9)
    corpus = ingest(args.pubs, args.topics, args.events,
                    mode="lenient" if args.lenient else "strict", year_window=window)
    for w in corpus.meta.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return corpus


# ---------------------------------------------------------------------------
# subcommands

def _stratified_table(report) -> Table:
    return REPORT_COLUMNS, report.table()


def cmd_ingest(args, argv) -> int:
    corpus = _load(args)
    report = validate(corpus)
    rows = []
    for stream in ("topics", "publications", "events"):
        rows.append((f"{stream}.accepted", str(corpus.meta.accepted.get(stream, 0))))
        rows.append((f"{stream}.rejected", str(corpus.meta.rejected.get(stream, 0))))
    rows.append(("warnings", str(len(corpus.meta.warnings))))
    rows.append(("classified_publications", str(int(corpus.columns.classified.sum()))))
    rows += [(f"violations.{rule}", str(n)) for rule, n in report.violations.items()]
    _emit(render((("item", "value"), rows), args.format, _provenance(args, argv)), args.out)
    return 0 if report.ok else 1


def cmd_indicators(args, argv) -> int:
    prov = _provenance(args, argv)
    if args.aggregates is not None:
        t = triple_from_aggregates(*args.aggregates)
        if args.format == "text":
            text = (prov + "\n" if prov else "") + str(t) + "\n"
        else:
            c, d, i = t.display()
            text = render((("n_total", "n_covered", "n_events", "coverage_pct", "density", "intensity"),
                           [(str(t.n_total), str(t.n_covered), str(t.n_events), c, d, i)]), "csv", prov)
        _emit(text, args.out)
        return 0
    corpus = _load(args)
    rows = []
    for s in args.source:
        t = source_triple(corpus, s)
        rows.append((s.value, str(t.n_total), str(t.n_covered), str(t.n_events), *t.display()))
    header = ("source", "n_total", "n_covered", "n_events", "coverage_pct", "density", "intensity")
    _emit(render((header, rows), args.format, prov), args.out)
    return 0


def cmd_stratified(args, argv) -> int:
    fn = {"by-year": triples_by_year, "by-field": triples_by_field, "by-doctype": coverage_by_doc_type}[args.command]
    _per_source(args, argv, lambda c, s: _stratified_table(fn(c, s)))
    return 0


def cmd_distribution(args, argv) -> int:
    def build(c: Corpus, s: SourceKind) -> Table:
        d = count_distribution(c, s, log_binned=args.log_binned)
        skew = "" if d.skewness is None else f"{d.skewness:.3f}"
        rows = [(str(k), str(bin_upper(k) if d.log_binned else k), str(f)) for k, f in d.histogram.items()]
        rows.append(("skewness", skew, "undefined" if d.skewness_undefined else ""))
        rows.append(("max_count", str(d.max_count), ""))
        rows.append(("n_zero", str(d.n_zero), ""))
        return ("bin_low", "bin_high", "frequency"), rows

    _per_source(args, argv, build)
    return 0


def _rho(x: float | None) -> str:
    return "" if x is None else f"{x:.3f}"


def cmd_correlate(args, argv) -> int:
    if args.mode == "indicators" and (not args.source or len(args.source) != 1):
        raise UsageError("--mode indicators needs exactly one --source")
    corpus = _load(args)
    if args.mode == "indicators":
        ic = indicator_intercorrelation(corpus, args.source[0])
        rows = [(a, b, ic.source.value, _rho(ic[a, b]), str(ic.n))
                for i, a in enumerate(METRICS) for b in METRICS[i:]]
        table = (("indicator_a", "indicator_b", "source", "rho", "n"), rows)
    else:
        m = cross_source_matrix(corpus, args.metric, args.exclude_mutual_zeros, args.source)
        flag = "true" if m.exclude_mutual_zeros else "false"
        rows = [(a.value, b.value, m.metric, _rho(e.rho), str(e.n), flag) for a, b, e in m.long_rows()]
        table = (("source_a", "source_b", "metric", "rho", "n", "excluded_flag"), rows)
    _emit(render(table, args.format, _provenance(args, argv)), args.out)
    return 0


def cmd_hot_topics(args, argv) -> int:
    def build(c: Corpus, s: SourceKind) -> Table:
        if args.scope == "global":
            ranked = classify_topics(c, s, None, args.q)
            rows = [t.row() for t in ranked if args.dump or t.category.value == "hot"]
        else:
            rep = hot_report(c, s, args.q)
            rows = rep.all_rows() if args.dump else rep.hot_rows()
        return TOPIC_COLUMNS, rows

    _per_source(args, argv, build)
    return 0


def cmd_generate(args, argv) -> int:
    cfg = load_config(args.config) if args.config is not None else GeneratorConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    corpus = generate_corpus(cfg)
    paths = export_corpus(corpus, args.out)
    for name in ("publications", "topics", "events"):
        print(f"{paths[name]}\t{corpus.meta.accepted[name]}")
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "indicators": cmd_indicators,
    "by-year": cmd_stratified,
    "by-field": cmd_stratified,
    "by-doctype": cmd_stratified,
    "distribution": cmd_distribution,
    "correlate": cmd_correlate,
    "hot-topics": cmd_hot_topics,
    "generate": cmd_generate,
}


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"altpresence {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except AltpresenceError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
