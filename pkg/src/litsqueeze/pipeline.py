"""End-to-end analysis of one query corpus against a background index.

Chain: exclusion filter -> tokenize -> randomization p-values -> ranking ->
RAKE phrases -> gene-set enrichment.  Produces the five canonical CSVs
(genes, terms, phrases, pathway and process enrichment) with pinned
formats; identical inputs and seed give byte-identical files.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Sequence

from litsqueeze import keyphrase, sigstats
from litsqueeze.corpus import DocumentSet, filter_excluded
from litsqueeze.enrich import EnrichmentResult, GeneSet, enrich_genes, export_enrichment_csv
from litsqueeze.errors import ConfigurationError
from litsqueeze.keyphrase import ScoredPhrase, export_phrases_csv
from litsqueeze.query import BooleanQuery
from litsqueeze.sigstats import (
    KIND_GENE,
    KIND_WORD,
    BackgroundIndex,
    RankedList,
    TermResult,
    export_ranked_csv,
)

logger = logging.getLogger(__name__)

CSV_FILES = (
    "genes.csv",
    "terms.csv",
    "phrases.csv",
    "enrichment_pathways.csv",
    "enrichment_processes.csv",
)


@dataclass(frozen=True)
class AnalysisParams:
    n_samples: int = sigstats.DEFAULT_N_SAMPLES
    alpha: float = sigstats.DEFAULT_ALPHA
    seed: int = 0
    max_docs: int = 2000
    max_phrase_len: int = keyphrase.DEFAULT_MAX_PHRASE_LEN
    min_phrase_freq: int = keyphrase.DEFAULT_MIN_PHRASE_FREQ

    def with_overrides(self, overrides: dict | None) -> "AnalysisParams":
        if not overrides:
            return self
        known = {k: v for k, v in overrides.items() if v is not None and hasattr(self, k)}
        return replace(self, **known)

    def to_dict(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "alpha": self.alpha,
            "seed": self.seed,
            "max_docs": self.max_docs,
            "max_phrase_len": self.max_phrase_len,
            "min_phrase_freq": self.min_phrase_freq,
        }


@dataclass
class AnalysisOutputs:
    """Everything one analysis produces, pre-serialization."""

    condition: str
    all_terms: list[TermResult]
    ranked: RankedList
    ranked_genes: RankedList
    ranked_words: RankedList
    phrases: list[ScoredPhrase]
    pathways: list[EnrichmentResult]
    processes: list[EnrichmentResult]
    n_query_docs: int
    n_excluded: int

    def csv_files(self) -> dict[str, str]:
        return {
            "genes.csv": export_ranked_csv(self.ranked, kind=KIND_GENE),
            "terms.csv": export_ranked_csv(self.ranked, kind=KIND_WORD),
            "phrases.csv": export_phrases_csv(self.phrases),
            "enrichment_pathways.csv": export_enrichment_csv(self.pathways),
            "enrichment_processes.csv": export_enrichment_csv(self.processes),
        }


def _restrict(ranked: RankedList, kind: str) -> RankedList:
    return RankedList(
        results=tuple(r for r in ranked.results if r.kind == kind),
        alpha=ranked.alpha,
        n_samples=ranked.n_samples,
        seed=ranked.seed,
    )


def run_analysis(
    query: BooleanQuery,
    query_docs: DocumentSet,
    index: BackgroundIndex,
    pathway_sets: Sequence[GeneSet],
    process_sets: Sequence[GeneSet],
    params: AnalysisParams,
) -> AnalysisOutputs:
    """Run the full pipeline on an already-fetched query corpus."""
    # query sets are capped regardless of source; corpus files keep
    # most-recent-first order, so truncation keeps the latest documents
    with_abstract = tuple(d for d in query_docs if d.has_abstract)[: params.max_docs]
    pre_count = len(with_abstract)
    filtered = filter_excluded(
        DocumentSet(query_docs.label, with_abstract, query_docs.fetched_at), query
    )
    n_excluded = pre_count - len(filtered)
    if len(filtered) == 0:
        raise ConfigurationError("no analyzable documents after exclusion filtering")

    pipeline = index.pipeline
    tokenized = [pipeline.run(doc) for doc in filtered]

    all_terms = sigstats.empirical_pvalues(
        tokenized, index, n_samples=params.n_samples, seed=params.seed
    )
    ranked = sigstats.rank_terms(
        all_terms, alpha=params.alpha, n_samples=params.n_samples, seed=params.seed
    )
    ranked_genes = _restrict(ranked, KIND_GENE)
    ranked_words = _restrict(ranked, KIND_WORD)

    phrases = keyphrase.extract_phrases(
        list(filtered),
        pipeline.stoplist,
        max_phrase_len=params.max_phrase_len,
        min_freq=params.min_phrase_freq,
    )

    universe = index.gene_universe()
    significant_genes = {r.term for r in ranked_genes.results}
    if universe:
        pathways = enrich_genes(significant_genes, pathway_sets, universe)
        processes = enrich_genes(significant_genes, process_sets, universe)
    else:
        logger.warning("background contains no dictionary genes; enrichment skipped")
        pathways = []
        processes = []

    return AnalysisOutputs(
        condition=query.raw,
        all_terms=all_terms,
        ranked=ranked,
        ranked_genes=ranked_genes,
        ranked_words=ranked_words,
        phrases=phrases,
        pathways=pathways,
        processes=processes,
        n_query_docs=len(filtered),
        n_excluded=n_excluded,
    )
