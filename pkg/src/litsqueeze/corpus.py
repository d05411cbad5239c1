"""Document acquisition and the canonical on-disk corpus format.

A corpus file is UTF-8 JSON Lines: one object per line with keys
``doc_id``, ``title``, ``abstract``, ``year`` (integer or null) and
``source_query``, LF line endings, keys sorted.  The format is stable;
golden files depend on byte-exact output.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Protocol

from litsqueeze.errors import BackgroundBuildError, CorpusIOError
from litsqueeze.query import BooleanQuery, Term
from litsqueeze import textpipe
from litsqueeze.stemmer import stem

logger = logging.getLogger(__name__)

QUERY_SET_CAP = 2000

# Seed keywords for the heterogeneous background.  The published list
# contains the token "DAN", almost certainly a typo for "DNA"; the default
# corrects it and the verbatim list ships alongside.
BACKGROUND_KEYWORDS = (
    "proteomic", "proteomics", "gene", "genetic", "genetics", "genomic",
    "genomics", "DNA", "RNA", "pathology", "syndrome", "disease",
    "metabolism", "metabolic",
)
BACKGROUND_KEYWORDS_VERBATIM = tuple(
    "DAN" if k == "DNA" else k for k in BACKGROUND_KEYWORDS
)


@dataclass(frozen=True)
class Document:
    """One publication record; ``doc_id`` is the PubMed ID when remote-sourced."""

    doc_id: str
    title: str
    abstract: str
    year: int | None = None
    source_query: str = ""

    @property
    def has_abstract(self) -> bool:
        return bool(self.abstract.strip())


@dataclass(frozen=True)
class DocumentSet:
    label: str
    documents: tuple[Document, ...]
    fetched_at: str = ""

    def __post_init__(self):
        seen = set()
        for doc in self.documents:
            if not doc.doc_id:
                raise ValueError("document with empty doc_id")
            if doc.doc_id in seen:
                raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
            seen.add(doc.doc_id)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def doc_ids(self) -> list[str]:
        return [d.doc_id for d in self.documents]


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def dedup_documents(docs: Iterable[Document]) -> tuple[list[Document], int]:
    """Keep the first occurrence of each doc_id; return (docs, dropped count)."""
    seen: set[str] = set()
    out: list[Document] = []
    dropped = 0
    for doc in docs:
        if doc.doc_id in seen:
            dropped += 1
            continue
        seen.add(doc.doc_id)
        out.append(doc)
    return out, dropped


class DocumentSource(Protocol):
    """Anything that can fetch documents for a query (remote or stubbed)."""

    def fetch(self, query: BooleanQuery, max_docs: int) -> DocumentSet: ...

    def fingerprint(self, query: BooleanQuery, max_docs: int) -> str: ...


@dataclass(frozen=True)
class RejectedLine:
    line_no: int
    reason: str


@dataclass
class CorpusLoadResult:
    document_set: DocumentSet
    rejects: list[RejectedLine] = field(default_factory=list)
    duplicate_count: int = 0


def load_corpus(path: str | Path) -> CorpusLoadResult:
    """Read a corpus file; malformed lines go to the rejects report, not fatal."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusIOError(f"cannot read corpus file {path}: {exc}") from exc

    docs: list[Document] = []
    rejects: list[RejectedLine] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            doc = Document(
                doc_id=str(record["doc_id"]),
                title=str(record.get("title", "")),
                abstract=str(record.get("abstract", "")),
                year=int(record["year"]) if record.get("year") is not None else None,
                source_query=str(record.get("source_query", "")),
            )
            if not doc.doc_id:
                raise ValueError("empty doc_id")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            rejects.append(RejectedLine(line_no, str(exc)))
            continue
        docs.append(doc)

    deduped, dropped = dedup_documents(docs)
    if dropped:
        logger.warning("corpus %s: %d duplicate doc_ids collapsed", path, dropped)
    doc_set = DocumentSet(label=str(path), documents=tuple(deduped), fetched_at=_now_iso())
    return CorpusLoadResult(document_set=doc_set, rejects=rejects, duplicate_count=dropped)


def save_corpus(doc_set: DocumentSet, path: str | Path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in doc_set:
            record = {
                "abstract": doc.abstract,
                "doc_id": doc.doc_id,
                "source_query": doc.source_query,
                "title": doc.title,
                "year": doc.year,
            }
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def build_background(
    seed_keywords: Iterable[str],
    per_keyword_cap: int,
    fetcher: DocumentSource,
    max_workers: int = 4,
) -> DocumentSet:
    """Union of per-keyword fetches, deduplicated by doc_id.

    Fetches may run concurrently (the fetcher's rate limiter is the shared
    gate); the merge order is the keyword order, so output is deterministic.
    """
    keywords = list(seed_keywords)
    if not keywords:
        raise ValueError("seed_keywords must be non-empty")
    if per_keyword_cap < 1:
        raise ValueError("per_keyword_cap must be >= 1")

    def fetch_one(keyword: str) -> DocumentSet:
        try:
            return fetcher.fetch(BooleanQuery.parse(keyword), per_keyword_cap)
        except Exception as exc:
            raise BackgroundBuildError(keyword, str(exc)) from exc

    with ThreadPoolExecutor(max_workers=min(max_workers, len(keywords))) as pool:
        results = list(pool.map(fetch_one, keywords))

    merged: list[Document] = []
    for result in results:
        merged.extend(result.documents)
    deduped, dropped = dedup_documents(merged)
    if dropped:
        logger.info("background: %d cross-keyword duplicates removed", dropped)
    label = f"background[{','.join(keywords)}] cap={per_keyword_cap}"
    return DocumentSet(label=label, documents=tuple(deduped), fetched_at=_now_iso())


def _term_matches(term: str, stemmed_tokens: tuple[str, ...], stemmed_set: frozenset[str]) -> bool:
    """Token-boundary match of one (possibly multi-word) term, on stems."""
    words = [stem(w) for w in textpipe.tokenize(term)]
    if not words:
        return False
    if len(words) == 1:
        return words[0] in stemmed_set
    n = len(words)
    return any(
        list(stemmed_tokens[i : i + n]) == words
        for i in range(len(stemmed_tokens) - n + 1)
    )


def document_matches_clause(doc: Document, clause: tuple[str, ...]) -> bool:
    """True when every term of the clause appears in title or abstract.

    Matching is case-insensitive on stemmed tokens, so "Vesicles" excludes
    "vesicle".  No stoplist is applied here: exclusion terms must match
    regardless of their commonness.
    """
    toks = tuple(stem(t) for t in textpipe.tokenize(doc.title + " " + doc.abstract))
    tok_set = frozenset(toks)
    return all(_term_matches(term, toks, tok_set) for term in clause)


def filter_excluded(docs: DocumentSet, query: BooleanQuery) -> DocumentSet:
    """Drop documents containing any excluded clause of the query.

    An AND-group under NOT excludes only when all of its terms appear.
    Idempotent and monotone; with no NOT clauses the input passes through.
    """
    clauses = query.excluded_clauses()
    if not clauses:
        return docs
    kept = tuple(
        doc
        for doc in docs
        if not any(document_matches_clause(doc, clause) for clause in clauses)
    )
    return DocumentSet(label=docs.label, documents=kept, fetched_at=docs.fetched_at)


def evaluate_query(doc: Document, query: BooleanQuery) -> bool:
    """Evaluate the full boolean tree against one document (local source)."""
    toks = tuple(stem(t) for t in textpipe.tokenize(doc.title + " " + doc.abstract))
    tok_set = frozenset(toks)

    def walk(node) -> bool:
        if isinstance(node, Term):
            return _term_matches(node.text, toks, tok_set)
        if node.op == "AND":
            return walk(node.left) and walk(node.right)
        if node.op == "OR":
            return walk(node.left) or walk(node.right)
        return walk(node.left) and not walk(node.right)

    return walk(query.tree)


@dataclass
class LocalCorpusSource:
    """Serve query fetches from a corpus already on disk or in memory.

    Stands in for the remote client in offline runs and tests; documents
    are matched with the same boolean semantics used for exclusion.
    """

    documents: DocumentSet

    @classmethod
    def from_file(cls, path: str | Path) -> "LocalCorpusSource":
        return cls(load_corpus(path).document_set)

    def fetch(self, query: BooleanQuery, max_docs: int) -> DocumentSet:
        hits = [
            doc
            for doc in self.documents
            if doc.has_abstract and evaluate_query(doc, query)
        ][:max_docs]
        docs = tuple(
            Document(d.doc_id, d.title, d.abstract, d.year, source_query=query.raw)
            for d in hits
        )
        return DocumentSet(label=query.raw, documents=docs, fetched_at=_now_iso())

    def fingerprint(self, query: BooleanQuery, max_docs: int) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(query.raw.encode("utf-8"))
        h.update(str(max_docs).encode())
        for doc in self.documents:
            h.update(doc.doc_id.encode("utf-8"))
            h.update(doc.abstract.encode("utf-8"))
        return "local:" + h.hexdigest()[:16]
