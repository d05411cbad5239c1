"""Acceptance criteria, one test per criterion.

Each test prints an ACCEPTANCE PASS/FAIL line via the conftest hook.  The
oracles here are independent of the code paths they check: exhaustive
subset enumeration for the randomization test, hand-derived arithmetic for
RAKE, combinatorial enumeration for the hypergeometric tail, and direct
all-pairs recomputation for networks.
"""

import io
import math
import random
import subprocess
import sys
import time
import zipfile
from collections import Counter
from itertools import combinations
from litsqueeze.corpus import filter_excluded, save_corpus
from litsqueeze.enrich import GeneSet, benjamini_hochberg, hypergeom_tail
from litsqueeze.keyphrase import PhraseCandidate, score_phrases
from litsqueeze.pipeline import AnalysisParams, run_analysis
from litsqueeze.query import BooleanQuery
from litsqueeze.service import AnalysisEngine, EngineConfig
from litsqueeze.sigstats import (
    build_index,
    compare_rankings,
    doc_profile,
    empirical_pvalues,
    rank_terms,
    tfidf_baseline,
)
from litsqueeze.simnet import FeatureVector, build_heatmap, build_network, cosine
from litsqueeze.textpipe import GeneDictionary, TextPipeline

from conftest import (
    StubSource,
    TEST_GENES,
    TEST_STOPLIST,
    make_doc,
    make_set,
    planted_background,
    planted_gene_sets,
    planted_query_docs,
)


# --------------------------------------------------------------------------
# 1. Randomization-test oracle
# --------------------------------------------------------------------------


def test_randomization_pvalues_match_exact_enumeration(test_pipeline):
    background = make_set(
        "bg",
        make_doc("b0", "alpha beta p53"),
        make_doc("b1", "alpha gamma"),
        make_doc("b2", "beta gamma tp53"),
        make_doc("b3", "alpha beta delta"),
        make_doc("b4", "delta p53 epsilon"),
        make_doc("b5", "alpha delta"),
        make_doc("b6", "beta epsilon"),
        make_doc("b7", "gamma delta"),
        make_doc("b8", "epsilon alpha"),
        make_doc("b9", "beta gamma"),
    )
    assert len(background) <= 10
    index = build_index(background, test_pipeline)
    query = [
        test_pipeline.run(make_doc("q0", "alpha p53 rareword")),
        test_pipeline.run(make_doc("q1", "alpha beta p53")),
        test_pipeline.run(make_doc("q2", "gamma alpha")),
    ]
    m = len(query)
    assert m <= 3

    started = time.monotonic()
    results = empirical_pvalues(query, index, n_samples=2500, seed=20240101)

    # independent oracle: exact tail fraction over all C(10, 3) subsets
    profiles = [doc_profile(d, index.pipeline.dictionary) for d in query]
    query_df = Counter(pair for prof in profiles for pair in prof)
    bg_sets = [
        {(index.terms[t], index.kinds[t]) for t in index.doc_terms[i]}
        for i in range(index.n_docs)
    ]
    hits = Counter()
    total = 0
    for subset in combinations(range(index.n_docs), m):
        total += 1
        for cand, f in query_df.items():
            if sum(1 for i in subset if cand in bg_sets[i]) >= f:
                hits[cand] += 1
    elapsed = time.monotonic() - started

    assert len(results) == len(query_df)
    for r in results:
        exact = hits[(r.term, r.kind)] / total
        assert abs(r.p_value - exact) <= 0.02, (r.term, r.kind, r.p_value, exact)
    assert elapsed < 5.0, f"oracle comparison took {elapsed:.2f}s"


# --------------------------------------------------------------------------
# 2. Determinism
# --------------------------------------------------------------------------


def test_determinism_same_seed_byte_identical_csvs(test_pipeline):
    index = build_index(planted_background(), test_pipeline)
    pathways, processes = planted_gene_sets()
    params = AnalysisParams(n_samples=400, alpha=0.05, seed=99, min_phrase_freq=1)

    def run_once():
        return run_analysis(
            BooleanQuery.parse("plaque"),
            planted_query_docs(),
            index,
            pathways,
            processes,
            params,
        )

    first, second = run_once().csv_files(), run_once().csv_files()
    for name in ("genes.csv", "terms.csv", "phrases.csv"):
        assert first[name].encode() == second[name].encode(), name

    # changing only the seed may move p-values but not the candidate set
    other_seed = run_analysis(
        BooleanQuery.parse("plaque"),
        planted_query_docs(),
        index,
        pathways,
        processes,
        AnalysisParams(n_samples=400, alpha=0.05, seed=100, min_phrase_freq=1),
    )
    base = run_once()
    assert {(r.term, r.kind) for r in base.all_terms} == {
        (r.term, r.kind) for r in other_seed.all_terms
    }
    assert {(r.term, r.kind, r.query_df) for r in base.all_terms} == {
        (r.term, r.kind, r.query_df) for r in other_seed.all_terms
    }


# --------------------------------------------------------------------------
# 3. RAKE oracle
# --------------------------------------------------------------------------


def test_rake_red_apple_fixture_exact():
    cands = [PhraseCandidate(("red", "apple"), "d1"), PhraseCandidate(("apple",), "d2")]
    scored = {sp.phrase: sp.score for sp in score_phrases(cands)}
    assert scored["red apple"] == 3.5  # deg/freq: 2/1 + 3/2
    assert scored["apple"] == 1.5

    doubled = {sp.phrase: sp.score for sp in score_phrases(cands + cands)}
    assert doubled == scored  # duplication leaves every score unchanged


# --------------------------------------------------------------------------
# 4. Hypergeometric oracle + BH
# --------------------------------------------------------------------------


def test_hypergeometric_matches_enumeration_to_1e9():
    for N in range(1, 13):
        for K in range(N + 1):
            for n in range(N + 1):
                marked = set(range(K))
                overlap_counts = Counter()
                total = 0
                for draw in combinations(range(N), n):
                    total += 1
                    overlap_counts[len(marked.intersection(draw))] += 1
                for k in range(min(K, n) + 1):
                    exact = sum(c for o, c in overlap_counts.items() if o >= k) / total
                    got = hypergeom_tail(k, K, n, N)
                    if exact == 0.0:
                        assert got == 0.0, (k, K, n, N)
                    else:
                        assert abs(got - exact) <= 1e-9 * exact, (k, K, n, N)

    rng = random.Random(17)
    p_values = [rng.random() for _ in range(200)]
    q_values = benjamini_hochberg(p_values)
    assert all(0 < q <= 1 for q in q_values)
    order_p = sorted(range(200), key=lambda i: p_values[i])
    ranks_q = [q_values[i] for i in order_p]
    assert ranks_q == sorted(ranks_q)  # order-preserving


# --------------------------------------------------------------------------
# 5. Planted-signal comparison harness (ranked lists vs TF-IDF workflow)
# --------------------------------------------------------------------------


def _comparison_fixture():
    symbols = [f"G{i:02d}" for i in range(20)]
    dictionary = GeneDictionary.from_pairs([(s.lower(), s) for s in symbols])
    pipeline = TextPipeline(stoplist=TEST_STOPLIST, dictionary=dictionary)

    # background: every gene in ~4 of 40 docs, noise genes in most docs
    target = symbols[:5]
    noise = symbols[15:20]
    rng = random.Random(2024)
    bg_docs = []
    for i in range(40):
        mention = [symbols[(i + j) % 15] for j in range(2)]  # G00..G14 spread
        if i % 4 != 0:
            mention += noise  # noise genes common in background
        bg_docs.append(make_doc(f"bg{i:02d}", " ".join(m.lower() for m in mention) + " filler"))
    background = make_set("bg", *bg_docs)

    # query: target genes in 6 of 8 docs; noise genes mentioned often too
    q_docs = []
    for i in range(8):
        parts = []
        if i < 6:
            parts += [g.lower() for g in target]
        parts += [g.lower() for g in noise] * 3  # high tf, but background-common
        q_docs.append(make_doc(f"q{i}", " ".join(parts) + " condition study"))
    query_set = make_set("query", *q_docs)

    sets = [
        GeneSet("PLANTED", "planted target set", frozenset(target)),
        GeneSet("DECOY_A", "decoy", frozenset(symbols[5:10])),
        GeneSet("DECOY_B", "decoy", frozenset(symbols[10:15])),
    ]
    return pipeline, background, query_set, sets


def test_planted_signal_comparison_harness(test_pipeline):
    pipeline, background, query_set, sets = _comparison_fixture()
    index = build_index(background, pipeline)
    tokenized = [pipeline.run(d) for d in query_set]

    results = empirical_pvalues(tokenized, index, n_samples=800, seed=5)
    ranked = rank_terms(results, alpha=0.05, n_samples=800, seed=5)
    baseline = tfidf_baseline(tokenized, index)
    universe = index.gene_universe()
    assert len(universe) == 20

    table = compare_rankings(
        ranked, baseline, [10, 20, 50], sets, target_set_id="PLANTED", universe=universe
    )
    # both methods produce a row per cut
    methods = {r.method for r in table.rows}
    assert methods == {"randomization", "tfidf"}
    assert len(table.rows) == 6

    by_key = {(r.method, r.cut): r.p_value for r in table.rows}
    assert by_key[("randomization", 10)] <= 0.05

    csv_text = table.to_csv()
    assert csv_text.startswith("method,cut,genes_used,p_value")
    assert len(csv_text.splitlines()) == 7


# --------------------------------------------------------------------------
# 6. Exclusion-query workflow
# --------------------------------------------------------------------------


def test_exclusion_workflow_recovers_unnamed_gene_set(test_pipeline):
    symbols = [f"G{i:02d}" for i in range(20)]
    dictionary = GeneDictionary.from_pairs([(s.lower(), s) for s in symbols])
    pipeline = TextPipeline(stoplist=TEST_STOPLIST, dictionary=dictionary)

    hint_free_genes = ["G10", "G11", "G12", "G13"]
    query = BooleanQuery.parse("condition NOT Glucose NOT (Cell AND Cycle)")

    docs = make_set(
        "fetched",
        # documents carrying excluded hints: must all be removed
        make_doc("x0", "glucose metabolism in condition"),
        make_doc("x1", "the cell cycle governs condition"),
        make_doc("x2", "elevated Glucose and g10 g11"),
        # hint-free documents that still mention the set's genes
        make_doc("k0", "g10 g11 g12 g13 in condition tissue"),
        make_doc("k1", "roles of g10 and g12 with g13 in condition"),
        make_doc("k2", "g11 g13 expression during condition with g10"),
        # cell without cycle is retained (conjunction semantics)
        make_doc("k3", "cell morphology altered with g12 and g11"),
    )

    kept = filter_excluded(docs, query)
    assert kept.doc_ids() == ["k0", "k1", "k2", "k3"]
    clauses = query.excluded_clauses()
    for doc in kept:
        text = (doc.title + " " + doc.abstract).lower()
        assert "glucose" not in text
        assert not ("cell" in text and "cycle" in text)
    assert len(clauses) == 2

    # background where each gene is rare
    bg_docs = [
        make_doc(f"bg{i:02d}", f"{symbols[i % 20].lower()} baseline filler") for i in range(40)
    ]
    background = make_set("bg", *bg_docs)
    index = build_index(background, pipeline)

    sets = [
        # the planted set's name never appears in any surviving abstract
        GeneSet("HINTFREE", "never named process", frozenset(hint_free_genes)),
        GeneSet("DECOY", "decoy", frozenset(["G00", "G01", "G02", "G03"])),
    ]
    outputs = run_analysis(
        query,
        kept,
        index,
        sets,
        [],
        AnalysisParams(n_samples=600, alpha=0.05, seed=3, min_phrase_freq=1),
    )
    top = outputs.pathways[0]
    assert top.set_id == "HINTFREE"
    assert top.p_value <= 0.05
    assert top.overlap == 4


# --------------------------------------------------------------------------
# 7. Cosine / network properties
# --------------------------------------------------------------------------


def test_cosine_and_network_properties():
    rng = random.Random(31)

    # symmetry to 1e-12, bounds, self-similarity, rescaling
    for _ in range(100):
        u = FeatureVector("u", {f"k{i}": rng.uniform(0.01, 9) for i in rng.sample(range(15), 5)})
        v = FeatureVector("v", {f"k{i}": rng.uniform(0.01, 9) for i in rng.sample(range(15), 5)})
        assert abs(cosine(u, v) - cosine(v, u)) <= 1e-12
        assert abs(cosine(u, u) - 1.0) <= 1e-12
        c = rng.uniform(0.001, 1000)
        scaled = FeatureVector("u", {k: w * c for k, w in u.features.items()})
        assert abs(cosine(scaled, v) - cosine(u, v)) <= 1e-9

    assert cosine(FeatureVector("a", {"x": 1.0}), FeatureVector("b", {"y": 2.0})) == 0.0

    # network edge set equals a brute-force all-pairs oracle on 10 vectors
    vectors = [
        FeatureVector(
            f"C{i}",
            {f"gene:G{k}": rng.uniform(0.5, 10) for k in rng.sample(range(12), rng.randint(2, 6))},
        )
        for i in range(10)
    ]
    threshold = 0.3
    net = build_network(vectors, threshold=threshold)
    got = {(e.a, e.b) for e in net.edges}
    expected = set()
    for i in range(10):
        for j in range(i + 1, 10):
            keys = set(vectors[i].features) | set(vectors[j].features)
            dot = sum(
                vectors[i].features.get(k, 0.0) * vectors[j].features.get(k, 0.0)
                for k in keys
            )
            norm_i = math.sqrt(sum(w * w for w in vectors[i].features.values()))
            norm_j = math.sqrt(sum(w * w for w in vectors[j].features.values()))
            if dot / (norm_i * norm_j) >= threshold:
                expected.add(tuple(sorted((vectors[i].condition, vectors[j].condition))))
    assert got == expected

    hm = build_heatmap(vectors)
    n = len(hm.conditions)
    for i in range(n):
        assert hm.matrix[i][i] == 1.0
        for j in range(n):
            assert abs(hm.matrix[i][j] - hm.matrix[j][i]) <= 1e-12


# --------------------------------------------------------------------------
# 8. Service contract
# --------------------------------------------------------------------------


def test_service_contract_cache_zip_and_headless_cli(tmp_path, test_pipeline):
    index = build_index(planted_background(), test_pipeline)
    pathways, processes = planted_gene_sets()
    source = StubSource(corpus=planted_query_docs())
    engine = AnalysisEngine(
        EngineConfig(
            data_root=tmp_path / "data",
            index=index,
            fetcher=source,
            pathway_sets=pathways,
            process_sets=processes,
            defaults=AnalysisParams(n_samples=200, alpha=0.05, seed=1, min_phrase_freq=1),
            concurrency=1,
        )
    )
    try:
        first = engine.submit("plaque")
        assert engine.wait(first, timeout=60) == "done"
        runs_after_first = engine.executions
        second = engine.submit("plaque")
        assert second == first
        assert engine.executions == runs_after_first  # cached, not re-executed
        assert source.calls == 1

        blob1 = engine.export_zip(first)
        blob2 = engine.export_zip(first)
        assert blob1 == blob2
        with zipfile.ZipFile(io.BytesIO(blob1)) as zf:
            assert len(zf.namelist()) == 6
    finally:
        engine.close()

    # headless CLI run with no server: corpus files in, CSVs out
    bg_path = tmp_path / "bg.jsonl"
    save_corpus(planted_background(), bg_path)
    q_path = tmp_path / "q.jsonl"
    save_corpus(planted_query_docs(), q_path)
    stop_path = tmp_path / "stop.txt"
    stop_path.write_text("\n".join(sorted(TEST_STOPLIST)) + "\n", encoding="utf-8")
    genes_path = tmp_path / "genes.tsv"
    genes_path.write_text(
        "\n".join(f"{a}\t{s}" for a, s in sorted(TEST_GENES.alias_to_symbol.items())) + "\n",
        encoding="utf-8",
    )
    out_dir = tmp_path / "cli_out"
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "litsqueeze.cli",
            "analyze",
            "--corpus", str(q_path),
            "--background", str(bg_path),
            "--query", "plaque",
            "--samples", "200",
            "--seed", "1",
            "--min-phrase-freq", "1",
            "--stoplist", str(stop_path),
            "--genes", str(genes_path),
            "--out", str(out_dir),
        ],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    for name in ("genes.csv", "terms.csv", "phrases.csv", "manifest.json"):
        assert (out_dir / name).exists(), name
    genes_csv = (out_dir / "genes.csv").read_text(encoding="utf-8")
    assert "TP53" in genes_csv
