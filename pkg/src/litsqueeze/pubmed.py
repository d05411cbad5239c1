"""NCBI E-utilities client: esearch for IDs, efetch for records.

Polite by default: at most 3 requests/second without an API key (the
provider's policy), 10 with one.  Set LITSQUEEZE_NCBI_API_KEY to raise the
cap.  Results come back most-recent-first (the search API's default order
is entry date descending), which is what "the latest N publications" means
here.
"""

from __future__ import annotations

import logging
import os
import threading
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

import requests

from litsqueeze.corpus import Document, DocumentSet, DocumentSource
from litsqueeze.errors import TransportError
from litsqueeze.query import BooleanQuery

logger = logging.getLogger(__name__)

ESEARCH_URL = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esearch.fcgi"
EFETCH_URL = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/efetch.fcgi"
API_KEY_ENV = "LITSQUEEZE_NCBI_API_KEY"

_EFETCH_BATCH = 200


class RateLimiter:
    """Enforce a minimum interval between acquisitions; thread-safe."""

    def __init__(self, per_second: float):
        if per_second <= 0:
            raise ValueError("per_second must be positive")
        self._interval = 1.0 / per_second
        self._lock = threading.Lock()
        self._next_at = 0.0

    def acquire(self) -> None:
        with self._lock:
            now = time.monotonic()
            wait = self._next_at - now
            self._next_at = max(now, self._next_at) + self._interval
        if wait > 0:
            time.sleep(wait)


@dataclass
class PubMedClient(DocumentSource):
    """Fetch the most recent abstracts matching a boolean query."""

    api_key: str | None = None
    requests_per_second: float | None = None
    timeout: float = 30.0
    max_retries: int = 3
    session: requests.Session = field(default_factory=requests.Session)

    def __post_init__(self):
        if self.api_key is None:
            self.api_key = os.environ.get(API_KEY_ENV) or None
        if self.requests_per_second is None:
            self.requests_per_second = 10.0 if self.api_key else 3.0
        self._limiter = RateLimiter(self.requests_per_second)

    def _get(self, url: str, params: dict) -> requests.Response:
        if self.api_key:
            params = {**params, "api_key": self.api_key}
        last_exc: Exception | None = None
        for attempt in range(self.max_retries):
            self._limiter.acquire()
            try:
                resp = self.session.get(url, params=params, timeout=self.timeout)
                if resp.status_code in (429, 500, 502, 503, 504):
                    raise TransportError(f"HTTP {resp.status_code} from {url}")
                resp.raise_for_status()
                return resp
            except (requests.RequestException, TransportError) as exc:
                last_exc = exc
                if attempt < self.max_retries - 1:
                    time.sleep(1.0 * 2**attempt)
        raise TransportError(f"request to {url} failed after {self.max_retries} attempts: {last_exc}")

    def search_ids(self, query: BooleanQuery, max_docs: int) -> list[str]:
        params = {
            "db": "pubmed",
            "term": query.raw,
            "retmax": str(max_docs),
            "retmode": "json",
        }
        data = self._get(ESEARCH_URL, params).json()
        result = data.get("esearchresult", {})
        return list(result.get("idlist", []))

    def fetch(self, query: BooleanQuery, max_docs: int) -> DocumentSet:
        """Up to max_docs most recent documents with non-empty abstracts."""
        if max_docs < 1:
            raise ValueError("max_docs must be >= 1")
        pmids = self.search_ids(query, max_docs)
        docs: list[Document] = []
        for i in range(0, len(pmids), _EFETCH_BATCH):
            batch = pmids[i : i + _EFETCH_BATCH]
            params = {
                "db": "pubmed",
                "id": ",".join(batch),
                "retmode": "xml",
                "rettype": "abstract",
            }
            xml_text = self._get(EFETCH_URL, params).text
            docs.extend(parse_efetch_xml(xml_text, source_query=query.raw))
        kept = [d for d in docs if d.has_abstract]
        order = {pmid: i for i, pmid in enumerate(pmids)}
        kept.sort(key=lambda d: order.get(d.doc_id, len(order)))
        from litsqueeze.corpus import dedup_documents

        deduped, _ = dedup_documents(kept)
        fetched_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return DocumentSet(label=query.raw, documents=tuple(deduped[:max_docs]), fetched_at=fetched_at)

    def fingerprint(self, query: BooleanQuery, max_docs: int) -> str:
        # Remote snapshots are not content-addressable at submit time; the
        # query itself identifies the analysis.
        return f"pubmed:{query.raw}:{max_docs}"


def parse_efetch_xml(xml_text: str, source_query: str = "") -> list[Document]:
    """Extract (pmid, title, abstract, year) from an efetch XML payload."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise TransportError(f"unparseable efetch response: {exc}") from exc

    docs: list[Document] = []
    for article in root.iter("PubmedArticle"):
        pmid_el = article.find(".//PMID")
        if pmid_el is None or not (pmid_el.text or "").strip():
            continue
        pmid = pmid_el.text.strip()
        title_el = article.find(".//ArticleTitle")
        title = "".join(title_el.itertext()) if title_el is not None else ""
        abstract_parts = [
            "".join(el.itertext()).strip()
            for el in article.findall(".//Abstract/AbstractText")
        ]
        abstract = " ".join(p for p in abstract_parts if p)
        year = None
        year_el = article.find(".//Article/Journal/JournalIssue/PubDate/Year")
        if year_el is None:
            year_el = article.find(".//PubDate/Year")
        if year_el is not None and (year_el.text or "").strip().isdigit():
            year = int(year_el.text.strip())
        docs.append(
            Document(
                doc_id=pmid,
                title=title.strip(),
                abstract=abstract,
                year=year,
                source_query=source_query,
            )
        )
    return docs
