"""Analysis orchestration: content-addressed cache, job queue, exports.

An analysis id is a hash of (query, corpus fingerprint, background
fingerprint, parameters), so resubmitting the same request is a cache hit
and the saved result becomes available to every later caller.  Jobs run on
a small in-process worker pool (default one worker); the store provides
crash-safe persistence.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import zipfile
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from io import BytesIO
from pathlib import Path
from typing import Sequence
from urllib.parse import quote_plus

from litsqueeze import store as store_mod
from litsqueeze.corpus import DocumentSource
from litsqueeze.enrich import GeneSet
from litsqueeze.errors import ConflictError, NotFoundError
from litsqueeze.pipeline import CSV_FILES, AnalysisParams, run_analysis
from litsqueeze.query import BooleanQuery
from litsqueeze.sigstats import BackgroundIndex
from litsqueeze.store import (
    STATUS_DONE,
    STATUS_FAILED,
    STATUS_QUEUED,
    STATUS_RUNNING,
    AnalysisIndexEntry,
    AnalysisStore,
)

logger = logging.getLogger(__name__)

LINK_TEMPLATES = {
    "pubmed": "https://pubmed.ncbi.nlm.nih.gov/?term={q}",
    "google": "https://www.google.com/search?q={q}",
    "scholar": "https://scholar.google.com/scholar?q={q}",
    "bing": "https://www.bing.com/search?q={q}",
}


def external_links(text: str) -> dict[str, str]:
    """Search URLs (PubMed/Google/Scholar/Bing) for one result item."""
    q = quote_plus(text)
    return {name: tpl.format(q=q) for name, tpl in LINK_TEMPLATES.items()}


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _index_fingerprint(index: BackgroundIndex) -> str:
    h = hashlib.sha256()
    h.update(str(index.n_docs).encode())
    for doc_id in index.doc_ids:
        h.update(doc_id.encode("utf-8"))
    h.update(str(len(index.terms)).encode())
    return h.hexdigest()[:16]


def compute_analysis_id(
    query: BooleanQuery,
    corpus_fingerprint: str,
    background_fingerprint: str,
    params: AnalysisParams,
) -> str:
    payload = json.dumps(
        {
            "query": query.raw,
            "corpus": corpus_fingerprint,
            "background": background_fingerprint,
            "params": params.to_dict(),
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class EngineConfig:
    data_root: Path
    index: BackgroundIndex
    fetcher: DocumentSource
    pathway_sets: Sequence[GeneSet] = field(default_factory=list)
    process_sets: Sequence[GeneSet] = field(default_factory=list)
    defaults: AnalysisParams = field(default_factory=AnalysisParams)
    concurrency: int = 1


class AnalysisEngine:
    """Submit, run, persist, list, and export analyses."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.store = AnalysisStore(config.data_root)
        self._bg_fingerprint = _index_fingerprint(config.index)
        self._executor = ThreadPoolExecutor(max_workers=max(1, config.concurrency))
        self._futures: dict[str, Future] = {}
        self._submit_lock = threading.Lock()
        self._executions = 0  # pipeline runs, observable for idempotency checks

    # ------------------------------------------------------------ lifecycle

    def close(self) -> None:
        self._executor.shutdown(wait=True)

    def __enter__(self) -> "AnalysisEngine":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # ----------------------------------------------------------- submission

    def submit(self, query_raw: str, overrides: dict | None = None) -> str:
        """Queue an analysis, or return the existing id on a cache hit.

        Parse errors surface synchronously; nothing is enqueued for a
        malformed query.
        """
        query = BooleanQuery.parse(query_raw)
        params = self.config.defaults.with_overrides(overrides)
        analysis_id = compute_analysis_id(
            query,
            self.config.fetcher.fingerprint(query, params.max_docs),
            self._bg_fingerprint,
            params,
        )
        with self._submit_lock:
            entry = self.store.get_entry(analysis_id)
            if entry is not None and entry.status in (
                STATUS_QUEUED,
                STATUS_RUNNING,
                STATUS_DONE,
            ):
                return analysis_id
            self.store.upsert_entry(
                AnalysisIndexEntry(
                    analysis_id=analysis_id,
                    query=query.raw,
                    created_at=_now_iso(),
                    curated=False,
                    status=STATUS_QUEUED,
                )
            )
            self._futures[analysis_id] = self._executor.submit(
                self._run_job, analysis_id, query, params
            )
        return analysis_id

    def _run_job(self, analysis_id: str, query: BooleanQuery, params: AnalysisParams) -> None:
        try:
            self.store.set_status(analysis_id, STATUS_RUNNING)
            self._executions += 1
            docs = self.config.fetcher.fetch(query, params.max_docs)
            outputs = run_analysis(
                query,
                docs,
                self.config.index,
                self.config.pathway_sets,
                self.config.process_sets,
                params,
            )
            entry = self.store.get_entry(analysis_id)
            created_at = entry.created_at if entry else _now_iso()
            manifest = {
                "analysis_id": analysis_id,
                "query": query.raw,
                "parameters": params.to_dict(),
                "created_at": created_at,
                "completed_at": _now_iso(),
                "corpus_fingerprint": self.config.fetcher.fingerprint(query, params.max_docs),
                "background_fingerprint": self._bg_fingerprint,
                "n_query_docs": outputs.n_query_docs,
                "n_excluded": outputs.n_excluded,
                "rng": "philox4x64 keyed per sample",
            }
            self.store.write_analysis(analysis_id, manifest, outputs.csv_files())
            self.store.set_status(analysis_id, STATUS_DONE)
        except Exception as exc:
            logger.exception("analysis %s failed", analysis_id)
            try:
                self.store.set_status(analysis_id, STATUS_FAILED)
                self.store.write_analysis(
                    analysis_id,
                    {
                        "analysis_id": analysis_id,
                        "query": query.raw,
                        "parameters": params.to_dict(),
                        "created_at": _now_iso(),
                        "error": str(exc),
                    },
                    {},
                )
            except Exception:
                logger.exception("could not persist failure for %s", analysis_id)

    def wait(self, analysis_id: str, timeout: float | None = None) -> str:
        """Block until the job finishes; returns the final status."""
        future = self._futures.get(analysis_id)
        if future is not None:
            future.result(timeout=timeout)
        entry = self.store.get_entry(analysis_id)
        return entry.status if entry else STATUS_FAILED

    # -------------------------------------------------------------- reading

    def list_analyses(self, curated_only: bool = False) -> list[AnalysisIndexEntry]:
        return self.store.list_entries(curated_only=curated_only)

    def set_curated(self, analysis_id: str, curated: bool = True) -> None:
        self.store.set_curated(analysis_id, curated)

    def get_analysis(self, analysis_id: str) -> dict:
        """Status plus, when done, full outputs with external search links."""
        entry = self.store.get_entry(analysis_id)
        if entry is None:
            raise NotFoundError(f"unknown analysis {analysis_id!r}")
        view: dict = {
            "analysis_id": entry.analysis_id,
            "query": entry.query,
            "created_at": entry.created_at,
            "curated": entry.curated,
            "status": entry.status,
        }
        if entry.status == STATUS_FAILED and self.store.has_outputs(analysis_id):
            view["error"] = self.store.read_manifest(analysis_id).get("error", "")
        if entry.status != STATUS_DONE:
            return view

        stored = store_mod.load_stored_analysis(self.store, analysis_id)
        view["parameters"] = stored.manifest.get("parameters", {})
        view["outputs"] = {
            "genes": [
                {
                    "term": r.term,
                    "query_df": r.query_df,
                    "expected_df": r.expected_df,
                    "p_value": r.p_value,
                    "score": r.score,
                    "links": external_links(r.term),
                }
                for r in stored.ranked_genes.results
            ],
            "terms": [
                {
                    "term": r.term,
                    "query_df": r.query_df,
                    "expected_df": r.expected_df,
                    "p_value": r.p_value,
                    "score": r.score,
                    "links": external_links(r.term),
                }
                for r in stored.ranked_words.results
            ],
            "phrases": [
                {
                    "phrase": p.phrase,
                    "score": p.score,
                    "freq": p.freq,
                    "links": external_links(p.phrase),
                }
                for p in stored.phrases
            ],
            "pathways": [self._enrichment_item(r) for r in stored.pathways],
            "processes": [self._enrichment_item(r) for r in stored.processes],
        }
        return view

    @staticmethod
    def _enrichment_item(r) -> dict:
        return {
            "set_id": r.set_id,
            "name": r.name,
            "overlap": r.overlap,
            "set_size": r.set_size,
            "query_size": r.query_size,
            "universe_size": r.universe_size,
            "p_value": r.p_value,
            "q_value": r.q_value,
            "overlap_genes": sorted(r.overlap_genes),
            "links": external_links(r.name or r.set_id),
        }

    # ------------------------------------------------------------ exporting

    def export_zip(self, analysis_id: str) -> bytes:
        """Deterministic ZIP of the five CSVs plus the manifest.

        Entry timestamps are pinned to the record's created_at, so two
        exports of the same analysis are byte-identical.
        """
        entry = self.store.get_entry(analysis_id)
        if entry is None:
            raise NotFoundError(f"unknown analysis {analysis_id!r}")
        if entry.status != STATUS_DONE:
            raise ConflictError(f"analysis {analysis_id!r} is {entry.status}, not done")

        created = datetime.strptime(entry.created_at, "%Y-%m-%dT%H:%M:%SZ")
        stamp = (
            max(1980, created.year),
            created.month,
            created.day,
            created.hour,
            created.minute,
            created.second,
        )
        manifest_text = json.dumps(
            self.store.read_manifest(analysis_id), indent=2, sort_keys=True
        ) + "\n"

        buffer = BytesIO()
        with zipfile.ZipFile(buffer, "w", compression=zipfile.ZIP_DEFLATED) as zf:
            names = ("manifest.json",) + CSV_FILES
            contents = {"manifest.json": manifest_text}
            for name in CSV_FILES:
                contents[name] = self.store.read_file(analysis_id, name)
            for name in names:
                info = zipfile.ZipInfo(filename=name, date_time=stamp)
                info.compress_type = zipfile.ZIP_DEFLATED
                info.external_attr = 0o644 << 16
                zf.writestr(info, contents[name])
        return buffer.getvalue()

    @property
    def executions(self) -> int:
        return self._executions
