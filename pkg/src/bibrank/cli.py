"""Command-line entry point: ``bibrank <command> ...``.

Every command writes its outputs under ``--out-dir`` together with a
``<command>.manifest.json`` listing input, config and output digests.
Exit codes: 0 success, 1 internal error, 2 input or validation error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import __version__, data_path
from .export import write_clustering, write_graph, write_matrix_market, write_summary
from .graphs import association_strength, bibliographic_coupling, cocitation, keyword_cooccurrence
from .indicators import (
    author_production,
    country_indicators,
    read_indicator_table,
    read_sis,
    write_indicator_table,
)
from .ingest import InputError, dedupe, load_schema, parse_corpus, read_corpus, write_corpus, write_exclusions
from .manifest import RunManifest
from .mcdm import TOPSIS_CRITERIA, VIKOR_CRITERIA, build_matrix, rank_compare, read_criteria, topsis, vikor
from .report import write_ranking_report
from .textmine import bisecting_kmeans, default_rules, default_stopwords, kmeans, load_rules, load_stopwords
from .textmine import tfidf as tfidf_weight
from .textmine import tokenize

log = logging.getLogger("bibrank")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2


def _resolve(out_dir: Path, name: str) -> Path:
    p = Path(name)
    return p if p.is_absolute() else out_dir / p


def _manifest(args, argv) -> RunManifest:
    return RunManifest(command=["bibrank", *argv], tool_version=__version__)


def _finish(manifest: RunManifest, out_dir: Path, name: str, outputs) -> None:
    manifest.add_outputs(outputs, root=out_dir)
    manifest.write(out_dir / f"{name}.manifest.json")
    for p in outputs:
        print(p)


def _need_file(path: str | Path, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{what} not found: {p}")
    return p


# -- commands ---------------------------------------------------------------


def cmd_ingest(args, argv) -> int:
    out_dir = Path(args.out_dir)
    src = _need_file(args.input, "input file")
    schema_path = _need_file(args.schema, "schema file")
    corpus = parse_corpus(src, load_schema(schema_path))
    removed = []
    if not args.no_dedupe:
        corpus, removed = dedupe(corpus)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus_out = write_corpus(corpus, _resolve(out_dir, args.out))
    report_out = write_exclusions(corpus.exclusions, _resolve(out_dir, args.report))
    log.info("%d records, %d exclusions (%d duplicates)", len(corpus), len(corpus.exclusions), len(removed))
    m = _manifest(args, argv)
    m.add_inputs([src])
    m.add_configs([schema_path])
    _finish(m, out_dir, "ingest", [corpus_out, report_out])
    return EXIT_OK


def cmd_indicators(args, argv) -> int:
    out_dir = Path(args.out_dir)
    corpus = read_corpus(_need_file(args.corpus, "corpus"))
    sis = read_sis(args.sis) if args.sis else None
    rows = country_indicators(corpus, sis, fractional=args.fractional)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [write_indicator_table(rows, _resolve(out_dir, args.out))]
    if args.authors:
        path = _resolve(out_dir, args.authors)
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("author,pub,cites\n")
            for a, n, c in author_production(corpus):
                fh.write(f'"{a}",{n},{c}\n')
        outputs.append(path)
    m = _manifest(args, argv)
    m.add_inputs([args.corpus])
    m.add_configs([args.sis])
    _finish(m, out_dir, "indicators", outputs)
    return EXIT_OK


GRAPH_DEFAULT_MIN = {"cooccurrence": 1, "association": 1, "coupling": 1, "country-coupling": 1, "cocitation": 3}


def cmd_graph(args, argv) -> int:
    out_dir = Path(args.out_dir)
    corpus = read_corpus(_need_file(args.corpus, "corpus"))
    minimum = args.min if args.min is not None else GRAPH_DEFAULT_MIN[args.kind]
    if args.kind in ("cooccurrence", "association"):
        g = keyword_cooccurrence(corpus, minimum, source=args.keywords)
        if args.kind == "association":
            g = association_strength(g)
    elif args.kind == "coupling":
        g = bibliographic_coupling(corpus, "document", minimum, min_doc_citations=args.min_doc_citations)
    elif args.kind == "country-coupling":
        g = bibliographic_coupling(corpus, "country", minimum, min_doc_citations=args.min_doc_citations)
    else:
        g = cocitation(corpus, minimum)
    if args.top:
        g = g.restrict(g.top_nodes(args.top))
    if args.drop_isolates:
        g = g.without_isolates()
    out_dir.mkdir(parents=True, exist_ok=True)
    out = write_graph(g, _resolve(out_dir, args.out))
    m = _manifest(args, argv)
    m.add_inputs([args.corpus])
    _finish(m, out_dir, "graph", [out])
    return EXIT_OK


def _cluster(corpus, args):
    stop = load_stopwords(args.stopwords) if args.stopwords else default_stopwords()
    rules = load_rules(args.rules) if args.rules else default_rules()
    tf = tokenize(corpus, stop, rules)
    weighted = tfidf_weight(tf, smooth=args.smooth_idf)
    algo = bisecting_kmeans if args.method == "bisecting" else kmeans
    return weighted, algo(weighted, args.k, seed=args.seed, max_iter=args.max_iter)


def cmd_cluster(args, argv) -> int:
    out_dir = Path(args.out_dir)
    corpus = read_corpus(_need_file(args.corpus, "corpus"))
    out_dir.mkdir(parents=True, exist_ok=True)
    weighted, cl = _cluster(corpus, args)
    outputs = [write_clustering(cl.assignments, out_dir / "clusters.csv")]
    summary = {**cl.summary(), "method": args.method, "documents": len(weighted.doc_ids), "terms": len(weighted.terms)}
    outputs.append(write_summary(summary, out_dir / "cluster_summary.json"))
    if args.matrix:
        outputs.extend(write_matrix_market(weighted.values, weighted.terms, weighted.doc_ids, out_dir / "tfidf.mtx"))
    m = _manifest(args, argv)
    m.add_inputs([args.corpus])
    m.add_configs([args.stopwords, args.rules])
    _finish(m, out_dir, "cluster", outputs)
    return EXIT_OK


def _rank(rows, args):
    if args.criteria:
        tcrit = vcrit = read_criteria(args.criteria)
    else:
        tcrit = read_criteria(args.topsis_criteria) if args.topsis_criteria else TOPSIS_CRITERIA
        vcrit = read_criteria(args.vikor_criteria) if args.vikor_criteria else VIKOR_CRITERIA
    t = topsis(build_matrix(rows, tcrit), normalization=args.normalization)
    v = vikor(build_matrix(rows, vcrit, method="vikor"), v=args.v)
    return t, v


def cmd_rank(args, argv) -> int:
    out_dir = Path(args.out_dir)
    sis = read_sis(args.sis) if args.sis else None
    rows = read_indicator_table(_need_file(args.indicators, "indicator table"), sis)
    t, v = _rank(rows, args)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = write_ranking_report(rows, t, v, _resolve(out_dir, args.out))
    outputs = [report, write_summary(_rank_summary(t, v, args), out_dir / "rank_summary.json")]
    m = _manifest(args, argv)
    m.add_inputs([args.indicators])
    m.add_configs([args.sis, args.criteria, args.topsis_criteria, args.vikor_criteria])
    _finish(m, out_dir, "rank", outputs)
    return EXIT_OK


def _rank_summary(t, v, args) -> dict:
    common = [a for a in t.alternatives if a in set(v.alternatives)]
    tr, vr = t.ranking(), v.ranking()
    cmp = rank_compare({a: tr[a] for a in common}, {a: vr[a] for a in common})
    return {
        "normalization": args.normalization,
        "v": args.v,
        "topsis_best": t.alternatives[int(t.rank.argmin())],
        "vikor_best": v.alternatives[int(v.rank.argmin())],
        "vikor_compromise_set": list(v.compromise_set),
        "vikor_advantage": v.advantage,
        "vikor_stability": v.stability,
        "spearman_rho": round(cmp.spearman_rho, 12),
        "kendall_tau": round(cmp.kendall_tau, 12),
        "rank_delta": cmp.delta,
    }


def cmd_pipeline(args, argv) -> int:
    """ingest -> indicators -> graphs -> clustering -> ranking in one run."""
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    src = _need_file(args.input, "input file")
    schema_path = _need_file(args.schema, "schema file")
    sis_path = _need_file(args.sis, "SIS file")
    corpus, _ = dedupe(parse_corpus(src, load_schema(schema_path)))
    outputs = [write_corpus(corpus, out_dir / "corpus.jsonl"), write_exclusions(corpus.exclusions, out_dir / "exclusions.csv")]

    rows = country_indicators(corpus, read_sis(sis_path), fractional=args.fractional)
    outputs.append(write_indicator_table(rows, out_dir / "indicators.csv"))

    graphs = {
        "keywords_author.graphml": keyword_cooccurrence(corpus, args.min_occurrences, "author"),
        "keywords_indexed.graphml": keyword_cooccurrence(corpus, args.min_occurrences, "indexed"),
        "coupling_documents.graphml": bibliographic_coupling(corpus, "document", 1),
        "coupling_countries.graphml": bibliographic_coupling(corpus, "country", 1, min_doc_citations=1),
        "cocitation.graphml": cocitation(corpus, args.min_cocitations).without_isolates(),
    }
    graphs["keywords_association.graphml"] = association_strength(graphs["keywords_author.graphml"])
    for name, g in graphs.items():
        outputs.append(write_graph(g, out_dir / name))

    weighted, cl = _cluster(corpus, args)
    outputs.append(write_clustering(cl.assignments, out_dir / "clusters.csv"))
    outputs.append(write_summary(cl.summary(), out_dir / "cluster_summary.json"))

    ranked_rows = [r for r in rows if r.sis is not None]
    if len(ranked_rows) >= 2:
        t, v = _rank(ranked_rows, args)
        outputs.append(write_ranking_report(ranked_rows, t, v, out_dir / "ranking.csv"))
        outputs.append(write_summary(_rank_summary(t, v, args), out_dir / "rank_summary.json"))
    m = _manifest(args, argv)
    m.add_inputs([src])
    m.add_configs([schema_path, sis_path, args.stopwords, args.rules, args.criteria])
    _finish(m, out_dir, "pipeline", outputs)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------


def _add_cluster_flags(p):
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--method", choices=("kmeans", "bisecting"), default="kmeans")
    p.add_argument("--stopwords", help="stopword file, one word per line (default: bundled English list)")
    p.add_argument("--rules", help="wildcard rules file, 'pattern canonical' per line")
    p.add_argument("--smooth-idf", action="store_true")


def _add_rank_flags(p):
    p.add_argument("--criteria", help="criteria file used for both methods")
    p.add_argument("--topsis-criteria", help="criteria file for TOPSIS only")
    p.add_argument("--vikor-criteria", help="criteria file for VIKOR only")
    p.add_argument("--v", type=float, default=0.5, help="VIKOR group-utility weight")
    p.add_argument("--normalization", choices=("vector", "minmax"), default="vector")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bibrank", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--out-dir", default=".", help="root directory for outputs and the manifest")
        p.set_defaults(func=func)
        return p

    p = command("ingest", cmd_ingest, "parse and validate an exported record file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--schema", default=str(data_path("scopus.map")))
    p.add_argument("--out", default="corpus.jsonl")
    p.add_argument("--report", default="exclusions.csv")
    p.add_argument("--no-dedupe", action="store_true")

    p = command("indicators", cmd_indicators, "per-country indicator table")
    p.add_argument("--corpus", required=True)
    p.add_argument("--sis", help="country,SIS file")
    p.add_argument("--fractional", action="store_true", help="fractional instead of full country counting")
    p.add_argument("--out", default="indicators.csv")
    p.add_argument("--authors", help="also write author production to this file")

    p = command("graph", cmd_graph, "build and export a network")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", choices=tuple(GRAPH_DEFAULT_MIN), default="cooccurrence")
    p.add_argument("--min", "--min-cocitations", dest="min", type=int, help="edge/occurrence threshold")
    p.add_argument("--keywords", choices=("author", "indexed"), default="author")
    p.add_argument("--min-doc-citations", type=int, default=0)
    p.add_argument("--top", type=int, help="keep only the N heaviest nodes")
    p.add_argument("--drop-isolates", action="store_true")
    p.add_argument("--out", required=True, help="output file; .dot, .graphml or .net")

    p = command("cluster", cmd_cluster, "tf-idf + k-means document clustering")
    p.add_argument("--corpus", required=True)
    p.add_argument("--matrix", action="store_true", help="also export the tf-idf matrix (MatrixMarket)")
    _add_cluster_flags(p)

    p = command("rank", cmd_rank, "TOPSIS and VIKOR ranking of an indicator table")
    p.add_argument("--indicators", required=True)
    p.add_argument("--sis", help="country,SIS file overriding the table's SIS column")
    p.add_argument("--out", default="ranking.csv")
    _add_rank_flags(p)

    p = command("pipeline", cmd_pipeline, "run every stage on one export")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--schema", default=str(data_path("scopus.map")))
    p.add_argument("--sis", default=str(data_path("sis_2015.csv")))
    p.add_argument("--fractional", action="store_true")
    p.add_argument("--min-occurrences", type=int, default=1)
    p.add_argument("--min-cocitations", type=int, default=3)
    _add_cluster_flags(p)
    _add_rank_flags(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: log.warning("%s", msg)
            return args.func(args, argv)
    except (InputError, ValueError, FileNotFoundError) as e:
        print(f"bibrank {args.command}: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001
        print(f"bibrank {args.command}: internal error: {e!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
