"""Randomization-test statistics against a background corpus.

The background index stores, for every term (word stems and matched gene
symbols), which background documents contain it.  A query set's candidate
terms get empirical p-values by drawing random background subsets of the
query's size and counting how often the sampled document frequency reaches
the observed one; the estimator is add-one smoothed and never returns zero.
The TF-IDF baseline lives here too, for ranked-list comparisons.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from litsqueeze.corpus import DocumentSet
from litsqueeze.errors import ConfigurationError, InsufficientBackgroundError
from litsqueeze.textpipe import (
    GeneDictionary,
    TextPipeline,
    TokenizedDoc,
    count_genes,
    match_genes,
)

logger = logging.getLogger(__name__)

KIND_WORD = "word"
KIND_GENE = "gene"

DEFAULT_N_SAMPLES = 2500
DEFAULT_ALPHA = 0.05

# Subset draws use the Philox counter-based bit generator, keyed per sample
# as SeedSequence(entropy=seed, spawn_key=(sample_index,)).  Samples are
# therefore independent of execution order and could run in parallel while
# reducing to identical counts.
RNG_ALGORITHM = "philox4x64"


@dataclass
class BackgroundIndex:
    """Immutable term<->document postings over the background corpus."""

    n_docs: int
    doc_ids: tuple[str, ...]
    terms: tuple[str, ...]
    kinds: tuple[str, ...]
    vocab: dict[str, int]
    doc_terms: tuple[np.ndarray, ...]
    postings: tuple[np.ndarray, ...]
    pipeline: TextPipeline

    def df(self, term: str) -> int:
        tid = self.vocab.get(term)
        return 0 if tid is None else len(self.postings[tid])

    def gene_universe(self) -> frozenset[str]:
        """Dictionary symbols observed at least once in the background."""
        return frozenset(
            t for t, k in zip(self.terms, self.kinds) if k == KIND_GENE
        )


@dataclass(frozen=True)
class TermResult:
    term: str
    kind: str
    query_df: int
    expected_df: float
    p_value: float
    score: float


@dataclass(frozen=True)
class RankedList:
    results: tuple[TermResult, ...]
    alpha: float
    n_samples: int
    seed: int


def doc_profile(doc: TokenizedDoc, dictionary: GeneDictionary) -> set[tuple[str, str]]:
    """Distinct (term, kind) pairs of one document: word stems + gene symbols."""
    profile = {(t, KIND_WORD) for t in doc.token_set}
    profile.update((g, KIND_GENE) for g in match_genes(doc, dictionary))
    return profile


def build_index(background: DocumentSet, pipeline: TextPipeline) -> BackgroundIndex:
    """Index all distinct tokens and matched gene symbols.

    Documents are sorted by doc_id first, so the result is independent of
    the input ordering.
    """
    if len(background) == 0:
        raise ConfigurationError("background corpus is empty")

    docs = sorted(background.documents, key=lambda d: d.doc_id)
    profiles: list[set[tuple[str, str]]] = []
    vocab_pairs: set[tuple[str, str]] = set()
    for doc in docs:
        profile = doc_profile(pipeline.run(doc), pipeline.dictionary)
        profiles.append(profile)
        vocab_pairs.update(profile)

    ordered = sorted(vocab_pairs)
    terms = tuple(t for t, _ in ordered)
    kinds = tuple(k for _, k in ordered)
    if len(set(terms)) != len(terms):
        # word stems are lowercase, symbols uppercase; a clash would mean a
        # degenerate dictionary (e.g. an all-digit symbol)
        raise ConfigurationError("term string collision between word and gene vocabularies")
    vocab = {t: i for i, t in enumerate(terms)}

    doc_terms = tuple(
        np.array(sorted(vocab[t] for t, _ in profile), dtype=np.int32)
        for profile in profiles
    )
    posting_lists: list[list[int]] = [[] for _ in terms]
    for doc_idx, ids in enumerate(doc_terms):
        for tid in ids:
            posting_lists[int(tid)].append(doc_idx)
    postings = tuple(np.array(p, dtype=np.int32) for p in posting_lists)

    return BackgroundIndex(
        n_docs=len(docs),
        doc_ids=tuple(d.doc_id for d in docs),
        terms=terms,
        kinds=kinds,
        vocab=vocab,
        doc_terms=doc_terms,
        postings=postings,
        pipeline=pipeline,
    )


def _query_dfs(
    query_docs: Sequence[TokenizedDoc], dictionary: GeneDictionary
) -> Counter:
    counts: Counter = Counter()
    for doc in query_docs:
        for pair in doc_profile(doc, dictionary):
            counts[pair] += 1
    return counts


def _sample_rng(seed: int, sample_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(sample_index,))
    return np.random.Generator(np.random.Philox(ss))


def empirical_pvalues(
    query_docs: Sequence[TokenizedDoc],
    index: BackgroundIndex,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed: int = 0,
) -> list[TermResult]:
    """Empirical p-value per candidate term via background subsampling.

    For a candidate with observed query document frequency f, p is
    (1 + #{subsets with sampled df >= f}) / (n_samples + 1), over n_samples
    uniform background subsets of the query's size (drawn without
    replacement within each subset).  Deterministic for a fixed seed.
    """
    m = len(query_docs)
    if m == 0:
        raise ValueError("query set is empty")
    if m > index.n_docs:
        raise InsufficientBackgroundError(
            f"query size {m} exceeds background size {index.n_docs}"
        )
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")

    query_df = _query_dfs(query_docs, index.pipeline.dictionary)
    candidates = sorted(query_df)  # (term, kind), lexicographic
    f_all = np.array([query_df[c] for c in candidates], dtype=np.int64)

    present = [i for i, (t, _) in enumerate(candidates) if t in index.vocab]
    exceed = np.zeros(len(candidates), dtype=np.int64)
    df_sum = np.zeros(len(candidates), dtype=np.int64)

    if present:
        cols = []
        rows = []
        for j, cand_idx in enumerate(present):
            tid = index.vocab[candidates[cand_idx][0]]
            docs_with = index.postings[tid]
            rows.append(docs_with)
            cols.append(np.full(len(docs_with), j, dtype=np.int32))
        row_idx = np.concatenate(rows)
        col_idx = np.concatenate(cols)
        matrix = sparse.csr_matrix(
            (np.ones(len(row_idx), dtype=np.int64), (row_idx, col_idx)),
            shape=(index.n_docs, len(present)),
        )
        f_present = f_all[present]
        exceed_present = np.zeros(len(present), dtype=np.int64)
        sum_present = np.zeros(len(present), dtype=np.int64)
        for s in range(n_samples):
            rng = _sample_rng(seed, s)
            subset = rng.choice(index.n_docs, size=m, replace=False)
            df = np.asarray(matrix[subset].sum(axis=0)).ravel()
            exceed_present += df >= f_present
            sum_present += df
        for j, cand_idx in enumerate(present):
            exceed[cand_idx] = exceed_present[j]
            df_sum[cand_idx] = sum_present[j]
    # terms absent from the background never reach f >= 1 in any subset:
    # their exceed count stays 0 and expected df stays 0.

    results = []
    for i, (term, kind) in enumerate(candidates):
        p = (1 + int(exceed[i])) / (n_samples + 1)
        results.append(
            TermResult(
                term=term,
                kind=kind,
                query_df=int(f_all[i]),
                expected_df=float(df_sum[i]) / n_samples,
                p_value=p,
                score=-math.log10(p),
            )
        )
    return results


def rank_terms(
    results: Iterable[TermResult],
    alpha: float = DEFAULT_ALPHA,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed: int = 0,
) -> RankedList:
    """Keep significant terms, totally ordered.

    Ascending p-value, then descending (query_df - expected_df), then
    term/kind lexicographic; the order is invariant under input permutation.
    """
    kept = [r for r in results if r.p_value <= alpha]
    kept.sort(key=lambda r: (r.p_value, -(r.query_df - r.expected_df), r.term, r.kind))
    return RankedList(results=tuple(kept), alpha=alpha, n_samples=n_samples, seed=seed)


def tfidf_baseline(
    query_docs: Sequence[TokenizedDoc], index: BackgroundIndex
) -> list[tuple[str, float]]:
    """Classic tf*idf over the query set, idf from the background.

    tf counts total occurrences across the query docs; idf is
    ln((N+1)/(df+1)) + 1 with N background documents (add-one keeps terms
    absent from the background finite).  Sorted descending by score, ties
    by term.
    """
    if not query_docs:
        raise ValueError("query set is empty")
    tf: Counter = Counter()
    for doc in query_docs:
        for tok in doc.tokens:
            tf[tok] += 1
        for symbol, count in count_genes(doc, index.pipeline.dictionary).items():
            tf[symbol] += count
    n = index.n_docs
    scored = [
        (term, count * (math.log((n + 1) / (index.df(term) + 1)) + 1.0))
        for term, count in tf.items()
    ]
    scored.sort(key=lambda ts: (-ts[1], ts[0]))
    return scored


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    cut: int
    genes_used: int
    p_value: float


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]
    target_set_id: str

    def to_csv(self) -> str:
        lines = ["method,cut,genes_used,p_value"]
        for r in self.rows:
            lines.append(f"{r.method},{r.cut},{r.genes_used},{format_p(r.p_value)}")
        return "\n".join(lines) + "\n"


def compare_rankings(
    a: RankedList,
    b: Sequence[tuple[str, float]],
    cut_points: Sequence[int],
    gene_sets,
    target_set_id: str,
    universe: frozenset[str],
) -> ComparisonTable:
    """Enrichment of a target gene set at several top-k cuts, per method.

    ``a`` is the randomization ranking, ``b`` a (term, score) baseline.
    Both lists are reduced to genes of the universe before cutting; cuts
    larger than a list truncate to its length.
    """
    from litsqueeze.enrich import enrich_genes

    genes_a = [r.term for r in a.results if r.kind == KIND_GENE and r.term in universe]
    genes_b = [term for term, _ in b if term in universe]

    rows: list[ComparisonRow] = []
    for method, genes in (("randomization", genes_a), ("tfidf", genes_b)):
        for cut in cut_points:
            top = set(genes[: min(cut, len(genes))])
            p_target = 1.0
            if top:
                for res in enrich_genes(top, gene_sets, universe):
                    if res.set_id == target_set_id:
                        p_target = res.p_value
                        break
            rows.append(ComparisonRow(method, int(cut), len(top), p_target))
    return ComparisonTable(rows=tuple(rows), target_set_id=target_set_id)


def format_p(p: float) -> str:
    return f"{p:.10g}"


def export_ranked_csv(ranked: RankedList, kind: str | None = None) -> str:
    """Stable CSV of a ranked list; optionally restricted to one kind.

    Columns term,kind,query_df,expected_df,p_value,score; UTF-8 text with
    LF endings, numeric formats pinned for byte-exact golden files.
    """
    lines = ["term,kind,query_df,expected_df,p_value,score"]
    for r in ranked.results:
        if kind is not None and r.kind != kind:
            continue
        lines.append(
            f"{r.term},{r.kind},{r.query_df},{r.expected_df:.6f},"
            f"{format_p(r.p_value)},{r.score:.6f}"
        )
    return "\n".join(lines) + "\n"


def save_index(index: BackgroundIndex, path: str | Path) -> None:
    """Persist an index (arrays + pipeline resources) to one .npz file."""
    indptr = np.zeros(index.n_docs + 1, dtype=np.int64)
    for i, ids in enumerate(index.doc_terms):
        indptr[i + 1] = indptr[i] + len(ids)
    indices = (
        np.concatenate(index.doc_terms)
        if index.doc_terms
        else np.array([], dtype=np.int32)
    )
    pipeline_blob = json.dumps(
        {
            "stoplist": sorted(index.pipeline.stoplist),
            "dictionary": sorted(index.pipeline.dictionary.alias_to_symbol.items()),
        }
    )
    np.savez_compressed(
        Path(path),
        n_docs=np.int64(index.n_docs),
        doc_ids=np.array(index.doc_ids, dtype=object),
        terms=np.array(index.terms, dtype=object),
        kinds=np.array(index.kinds, dtype=object),
        indptr=indptr,
        indices=indices,
        pipeline=np.array(pipeline_blob, dtype=object),
    )


def load_index(path: str | Path) -> BackgroundIndex:
    with np.load(Path(path), allow_pickle=True) as data:
        n_docs = int(data["n_docs"])
        doc_ids = tuple(str(x) for x in data["doc_ids"])
        terms = tuple(str(x) for x in data["terms"])
        kinds = tuple(str(x) for x in data["kinds"])
        indptr = data["indptr"]
        indices = data["indices"].astype(np.int32)
        blob = json.loads(str(data["pipeline"]))

    doc_terms = tuple(
        indices[indptr[i] : indptr[i + 1]] for i in range(n_docs)
    )
    posting_lists: list[list[int]] = [[] for _ in terms]
    for doc_idx, ids in enumerate(doc_terms):
        for tid in ids:
            posting_lists[int(tid)].append(doc_idx)
    postings = tuple(np.array(p, dtype=np.int32) for p in posting_lists)
    pipeline = TextPipeline(
        stoplist=frozenset(blob["stoplist"]),
        dictionary=GeneDictionary(dict((a, s) for a, s in blob["dictionary"])),
    )
    return BackgroundIndex(
        n_docs=n_docs,
        doc_ids=doc_ids,
        terms=terms,
        kinds=kinds,
        vocab={t: i for i, t in enumerate(terms)},
        doc_terms=doc_terms,
        postings=postings,
        pipeline=pipeline,
    )
