"""Shared fixtures: tiny corpora, pipelines, and stub document sources."""

from __future__ import annotations

from dataclasses import dataclass, field

import pytest

from litsqueeze.corpus import Document, DocumentSet
from litsqueeze.query import BooleanQuery
from litsqueeze.textpipe import GeneDictionary, TextPipeline


def make_doc(doc_id: str, abstract: str, title: str = "", year: int | None = 2020) -> Document:
    return Document(doc_id=doc_id, title=title, abstract=abstract, year=year)


def make_set(label: str, *docs: Document) -> DocumentSet:
    return DocumentSet(label=label, documents=tuple(docs), fetched_at="2024-01-01T00:00:00Z")


TEST_STOPLIST = frozenset({"the", "a", "an", "of", "and", "in", "to", "is", "with"})

TEST_GENES = GeneDictionary.from_pairs(
    [
        ("TP53", "TP53"),
        ("p53", "TP53"),
        ("BRCA1", "BRCA1"),
        ("EGFR", "EGFR"),
        ("ERBB1", "EGFR"),
        ("SNCA", "SNCA"),
        ("APP", "APP"),
        ("MAPT", "MAPT"),
        ("tau", "MAPT"),
        ("PSEN1", "PSEN1"),
        ("LRRK2", "LRRK2"),
        ("PINK1", "PINK1"),
        ("GBA", "GBA"),
        ("IL6", "IL6"),
        ("TNF", "TNF"),
    ]
)


@pytest.fixture
def test_pipeline() -> TextPipeline:
    return TextPipeline(stoplist=TEST_STOPLIST, dictionary=TEST_GENES)


@dataclass
class StubSource:
    """Canned document source; counts fetches for idempotency checks."""

    corpus: DocumentSet
    calls: int = 0
    by_query: dict = field(default_factory=dict)

    def fetch(self, query: BooleanQuery, max_docs: int) -> DocumentSet:
        self.calls += 1
        if query.raw in self.by_query:
            docs = tuple(self.by_query[query.raw])[:max_docs]
        else:
            docs = tuple(d for d in self.corpus if d.has_abstract)[:max_docs]
        return DocumentSet(label=query.raw, documents=docs, fetched_at="2024-01-01T00:00:00Z")

    def fingerprint(self, query: BooleanQuery, max_docs: int) -> str:
        return f"stub:{query.raw}:{max_docs}"


def planted_background() -> DocumentSet:
    """16 varied documents; every dictionary gene appears in one or two."""
    texts = [
        "protein signal measured in tissue sample",
        "pathway analysis of tp53 expression",
        "cellular response and protein folding",
        "signal transduction in model organisms",
        "brca1 variants in population cohort",
        "metabolic profile of liver tissue",
        "protein degradation pathway components",
        "egfr inhibitors tested in culture",
        "snca aggregation under stress with lrrk2",
        "imaging methods for tissue structure",
        "app processing and secretase activity with psen1",
        "statistical methods for cohort studies",
        "mapt tau isoforms in neurons",
        "pink1 and gba variants in families",
        "il6 response after infection",
        "tnf signaling in inflammation",
    ]
    return make_set("bg", *[make_doc(f"bg{i:02d}", t) for i, t in enumerate(texts)])


def planted_query_docs() -> DocumentSet:
    """Four documents where TP53/BRCA1 and plaque/tangle dominate."""
    texts = [
        "tp53 and brca1 drive plaque formation",
        "plaque burden correlates with p53 activity and brca1 loss",
        "tangle pathology follows tp53 disruption with brca1 deficit",
        "brca1 and tp53 interplay in plaque and tangle models",
    ]
    return make_set("query", *[make_doc(f"q{i}", t) for i, t in enumerate(texts)])


def planted_gene_sets():
    from litsqueeze.enrich import GeneSet

    pathways = [
        GeneSet("PW_TARGET", "planted pair", frozenset({"TP53", "BRCA1"}), "pathways"),
        GeneSet("PW_DECOY", "unrelated pair", frozenset({"EGFR", "SNCA"}), "pathways"),
    ]
    processes = [
        GeneSet("GO_OTHER", "other process", frozenset({"APP"}), "processes"),
    ]
    return pathways, processes


def pytest_runtest_logreport(report):
    # one visible line per acceptance criterion, pass or fail
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {status}")
