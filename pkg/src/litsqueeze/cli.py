"""Command-line entry points.

Every stage of the pipeline runs headlessly from here: fetching corpora,
building the background, analyzing a query set, deriving similarity
networks and heat-maps, and serving the HTTP API.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from litsqueeze import corpus as corpus_mod
from litsqueeze import sigstats, simnet, store as store_mod, textpipe
from litsqueeze.enrich import load_gmt
from litsqueeze.errors import LitsqueezeError
from litsqueeze.pipeline import AnalysisParams, run_analysis
from litsqueeze.query import BooleanQuery

DATA_ROOT_ENV = "LITSQUEEZE_DATA_ROOT"


def _pipeline_from_args(args) -> textpipe.TextPipeline:
    stoplist = (
        textpipe.load_stoplist(args.stoplist)
        if getattr(args, "stoplist", None)
        else textpipe.default_stoplist()
    )
    dictionary = (
        textpipe.load_gene_dictionary(args.genes)
        if getattr(args, "genes", None)
        else textpipe.default_gene_dictionary()
    )
    return textpipe.TextPipeline(stoplist=stoplist, dictionary=dictionary)


def _load_background_index(path: str, pipeline: textpipe.TextPipeline) -> sigstats.BackgroundIndex:
    """Accept either a saved .npz index or a corpus file to index on the fly."""
    if path.endswith(".npz"):
        return sigstats.load_index(path)
    background = corpus_mod.load_corpus(path).document_set
    return sigstats.build_index(background, pipeline)


def _load_gene_sets(args):
    from litsqueeze.enrich import default_pathway_sets, default_process_sets

    pathways = (
        load_gmt(args.pathways, source="pathways").sets
        if args.pathways
        else default_pathway_sets()
    )
    processes = (
        load_gmt(args.processes, source="processes").sets
        if args.processes
        else default_process_sets()
    )
    return pathways, processes


def cmd_fetch(args) -> int:
    from litsqueeze.pubmed import PubMedClient

    query = BooleanQuery.parse(args.query)
    client = PubMedClient()
    docs = client.fetch(query, args.max)
    corpus_mod.save_corpus(docs, args.out)
    print(f"fetched {len(docs)} documents -> {args.out}")
    return 0


def cmd_background(args) -> int:
    if args.keywords_file:
        keywords = [
            line.strip()
            for line in Path(args.keywords_file).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    else:
        keywords = list(corpus_mod.BACKGROUND_KEYWORDS)
    if args.local_corpus:
        fetcher = corpus_mod.LocalCorpusSource.from_file(args.local_corpus)
    else:
        from litsqueeze.pubmed import PubMedClient

        fetcher = PubMedClient()
    background = corpus_mod.build_background(keywords, args.cap, fetcher)
    corpus_mod.save_corpus(background, args.out)
    print(f"background of {len(background)} documents from {len(keywords)} keywords -> {args.out}")
    return 0


def cmd_index(args) -> int:
    pipeline = _pipeline_from_args(args)
    background = corpus_mod.load_corpus(args.corpus).document_set
    index = sigstats.build_index(background, pipeline)
    sigstats.save_index(index, args.out)
    print(f"indexed {index.n_docs} documents, {len(index.terms)} terms -> {args.out}")
    return 0


def cmd_analyze(args) -> int:
    pipeline = _pipeline_from_args(args)
    index = _load_background_index(args.background, pipeline)
    load_result = corpus_mod.load_corpus(args.corpus)
    if load_result.rejects:
        print(f"warning: {len(load_result.rejects)} malformed corpus lines skipped", file=sys.stderr)
    query_docs = load_result.document_set
    query = BooleanQuery.parse(args.query) if args.query else BooleanQuery.parse(Path(args.corpus).stem)
    params = AnalysisParams(
        n_samples=args.samples,
        alpha=args.alpha,
        seed=args.seed,
        max_docs=args.max_docs,
        max_phrase_len=args.max_phrase_len,
        min_phrase_freq=args.min_phrase_freq,
    )
    pathway_sets, process_sets = _load_gene_sets(args)
    outputs = run_analysis(query, query_docs, index, pathway_sets, process_sets, params)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in outputs.csv_files().items():
        (out_dir / name).write_text(content, encoding="utf-8", newline="\n")
    manifest = {
        "query": query.raw,
        "parameters": params.to_dict(),
        "n_query_docs": outputs.n_query_docs,
        "n_excluded": outputs.n_excluded,
        "n_candidates": len(outputs.all_terms),
        "n_significant": len(outputs.ranked.results),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"analyzed {outputs.n_query_docs} docs ({outputs.n_excluded} excluded): "
        f"{len(outputs.ranked_genes.results)} genes, {len(outputs.ranked_words.results)} terms, "
        f"{len(outputs.phrases)} phrases -> {out_dir}"
    )
    return 0


def _load_vectors(analyses_dir: str, namespaces) -> list[simnet.FeatureVector]:
    root = Path(analyses_dir)
    if (root / "analyses").is_dir():
        root = root / "analyses"
    vectors = []
    for manifest_path in sorted(root.glob("*/manifest.json")):
        analysis_dir = manifest_path.parent
        try:
            stored = _load_analysis_dir(analysis_dir)
            vec = simnet.build_feature_vector(stored, namespaces=namespaces)
        except (LitsqueezeError, OSError, KeyError, ValueError) as exc:
            print(f"skipping {analysis_dir.name}: {exc}", file=sys.stderr)
            continue
        if not vec.is_zero:
            vectors.append(vec)
        else:
            print(f"skipping {analysis_dir.name}: no significant features", file=sys.stderr)
    return vectors


def _load_analysis_dir(analysis_dir: Path) -> store_mod.StoredAnalysis:
    """Load a bare analysis directory (as written by `litsqueeze analyze`)."""
    manifest = json.loads((analysis_dir / "manifest.json").read_text(encoding="utf-8"))
    params = manifest.get("parameters", {})
    alpha = float(params.get("alpha", 0.05))
    n_samples = int(params.get("n_samples", 0))
    seed = int(params.get("seed", 0))

    def read(name: str) -> str:
        return (analysis_dir / name).read_text(encoding="utf-8")

    return store_mod.StoredAnalysis(
        analysis_id=analysis_dir.name,
        condition=manifest.get("query", analysis_dir.name),
        ranked_genes=store_mod.parse_ranked_csv(read("genes.csv"), alpha, n_samples, seed),
        ranked_words=store_mod.parse_ranked_csv(read("terms.csv"), alpha, n_samples, seed),
        phrases=store_mod.parse_phrases_csv(read("phrases.csv")),
        pathways=store_mod.parse_enrichment_csv(read("enrichment_pathways.csv")),
        processes=store_mod.parse_enrichment_csv(read("enrichment_processes.csv")),
        manifest=manifest,
    )


def cmd_simnet(args) -> int:
    namespaces = tuple(ns.strip() for ns in args.namespaces.split(",") if ns.strip())
    vectors = _load_vectors(args.analyses, namespaces)
    network = simnet.build_network(vectors, threshold=args.threshold, namespaces=namespaces)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(network.to_json(), encoding="utf-8")
    print(f"network: {len(network.nodes)} nodes, {len(network.edges)} edges -> {args.out}")
    return 0


def cmd_heatmap(args) -> int:
    namespaces = tuple(ns.strip() for ns in args.namespaces.split(",") if ns.strip())
    vectors = _load_vectors(args.analyses, namespaces)
    heatmap = simnet.build_heatmap(vectors, focus=args.focus)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(heatmap.to_csv(), encoding="utf-8", newline="\n")
    if args.focus:
        focus_out = Path(args.out).with_suffix(".focus.csv")
        focus_out.write_text(heatmap.focus_csv(), encoding="utf-8", newline="\n")
        print(f"heat-map {len(heatmap.conditions)}x{len(heatmap.conditions)} -> {args.out}; focus row -> {focus_out}")
    else:
        print(f"heat-map {len(heatmap.conditions)}x{len(heatmap.conditions)} -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from litsqueeze.api import create_app
    from litsqueeze.service import AnalysisEngine, EngineConfig

    pipeline = _pipeline_from_args(args)
    index = _load_background_index(args.background, pipeline)
    if args.local_corpus:
        fetcher = corpus_mod.LocalCorpusSource.from_file(args.local_corpus)
    else:
        from litsqueeze.pubmed import PubMedClient

        fetcher = PubMedClient()
    pathway_sets, process_sets = _load_gene_sets(args)
    data_root = Path(args.data_root or os.environ.get(DATA_ROOT_ENV) or "litsqueeze-data")
    engine = AnalysisEngine(
        EngineConfig(
            data_root=data_root,
            index=index,
            fetcher=fetcher,
            pathway_sets=pathway_sets,
            process_sets=process_sets,
            defaults=AnalysisParams(
                n_samples=args.samples, alpha=args.alpha, max_docs=args.max_docs
            ),
            concurrency=args.concurrency,
        )
    )
    ui_dir = args.ui_dir if args.ui_dir and Path(args.ui_dir).is_dir() else None
    app = create_app(engine, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_curate(args) -> int:
    data_root = Path(args.data_root or os.environ.get(DATA_ROOT_ENV) or "litsqueeze-data")
    store = store_mod.AnalysisStore(data_root)
    store.set_curated(args.id, not args.off)
    print(f"analysis {args.id}: curated={'false' if args.off else 'true'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litsqueeze",
        description="Squeeze biomedical abstracts into ranked structured data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="fetch documents from PubMed into a corpus file")
    p.add_argument("--query", required=True)
    p.add_argument("--max", type=int, default=2000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("background", help="build the heterogeneous background corpus")
    p.add_argument("--keywords-file", default=None, help="one keyword per line (default: built-in list)")
    p.add_argument("--cap", type=int, default=2000)
    p.add_argument("--out", required=True)
    p.add_argument("--local-corpus", default=None, help="serve fetches from a local corpus file instead of PubMed")
    p.set_defaults(func=cmd_background)

    p = sub.add_parser("index", help="build and save a background index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output .npz path")
    p.add_argument("--stoplist", default=None)
    p.add_argument("--genes", default=None)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("analyze", help="run the full pipeline on a query corpus")
    p.add_argument("--corpus", required=True, help="query corpus file")
    p.add_argument("--background", required=True, help=".npz index or corpus file")
    p.add_argument("--query", default=None, help="boolean query (labels the analysis; NOT clauses filter)")
    p.add_argument("--samples", type=int, default=2500)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-docs", type=int, default=2000)
    p.add_argument("--max-phrase-len", type=int, default=4)
    p.add_argument("--min-phrase-freq", type=int, default=2)
    p.add_argument("--stoplist", default=None)
    p.add_argument("--genes", default=None)
    p.add_argument("--pathways", default=None)
    p.add_argument("--processes", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simnet", help="build a similarity network from saved analyses")
    p.add_argument("--analyses", required=True, help="data root or directory of analysis dirs")
    p.add_argument("--namespaces", default="gene,term,set")
    p.add_argument("--threshold", type=float, default=0.3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simnet)

    p = sub.add_parser("heatmap", help="build a similarity heat-map from saved analyses")
    p.add_argument("--analyses", required=True)
    p.add_argument("--namespaces", default="gene,term,set")
    p.add_argument("--focus", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--data-root", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--background", required=True)
    p.add_argument("--local-corpus", default=None)
    p.add_argument("--samples", type=int, default=2500)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--max-docs", type=int, default=2000)
    p.add_argument("--concurrency", type=int, default=1)
    p.add_argument("--stoplist", default=None)
    p.add_argument("--genes", default=None)
    p.add_argument("--pathways", default=None)
    p.add_argument("--processes", default=None)
    p.add_argument("--ui-dir", default=None, help="serve a built browser UI from this directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("curate", help="pin an analysis to the curated list")
    p.add_argument("--data-root", default=None)
    p.add_argument("--id", required=True)
    p.add_argument("--off", action="store_true")
    p.set_defaults(func=cmd_curate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LitsqueezeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
