"""Crash-safe on-disk layout for analyses, the homepage index, and networks.

Layout under a data root:

    analyses/<analysis_id>/manifest.json + the five CSVs
    index.json            (listing entries: id, query, created_at, curated, status)
    networks/<name>.json  (similarity network documents)

Analysis directories are written to a temp path and renamed into place, and
a record's index status becomes "done" only after that rename, so readers
never observe half-written outputs.
"""

from __future__ import annotations

import csv
import io
import json
import os
import shutil
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

from litsqueeze.enrich import EnrichmentResult
from litsqueeze.errors import NotFoundError
from litsqueeze.keyphrase import ScoredPhrase
from litsqueeze.sigstats import RankedList, TermResult

STATUS_QUEUED = "queued"
STATUS_RUNNING = "running"
STATUS_DONE = "done"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class AnalysisIndexEntry:
    analysis_id: str
    query: str
    created_at: str
    curated: bool
    status: str

    def to_dict(self) -> dict:
        return {
            "analysis_id": self.analysis_id,
            "query": self.query,
            "created_at": self.created_at,
            "curated": self.curated,
            "status": self.status,
        }


class AnalysisStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.analyses_dir = self.root / "analyses"
        self.networks_dir = self.root / "networks"
        self.index_path = self.root / "index.json"
        self.analyses_dir.mkdir(parents=True, exist_ok=True)
        self.networks_dir.mkdir(parents=True, exist_ok=True)
        self._index_lock = threading.Lock()

    # ---------------------------------------------------------------- index

    def _read_index(self) -> dict:
        if not self.index_path.exists():
            return {"entries": []}
        return json.loads(self.index_path.read_text(encoding="utf-8"))

    def _write_index(self, data: dict) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".index-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(data, fh, indent=2, sort_keys=True)
            os.replace(tmp, self.index_path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def upsert_entry(self, entry: AnalysisIndexEntry) -> None:
        with self._index_lock:
            data = self._read_index()
            entries = [
                e for e in data["entries"] if e["analysis_id"] != entry.analysis_id
            ]
            entries.append(entry.to_dict())
            data["entries"] = entries
            self._write_index(data)

    def set_status(self, analysis_id: str, status: str) -> None:
        with self._index_lock:
            data = self._read_index()
            for e in data["entries"]:
                if e["analysis_id"] == analysis_id:
                    e["status"] = status
                    break
            else:
                raise NotFoundError(f"unknown analysis {analysis_id!r}")
            self._write_index(data)

    def set_curated(self, analysis_id: str, curated: bool) -> None:
        with self._index_lock:
            data = self._read_index()
            for e in data["entries"]:
                if e["analysis_id"] == analysis_id:
                    e["curated"] = curated
                    break
            else:
                raise NotFoundError(f"unknown analysis {analysis_id!r}")
            self._write_index(data)

    def get_entry(self, analysis_id: str) -> AnalysisIndexEntry | None:
        for e in self._read_index()["entries"]:
            if e["analysis_id"] == analysis_id:
                return AnalysisIndexEntry(**e)
        return None

    def list_entries(self, curated_only: bool = False) -> list[AnalysisIndexEntry]:
        entries = [AnalysisIndexEntry(**e) for e in self._read_index()["entries"]]
        if curated_only:
            entries = [e for e in entries if e.curated]
        entries.sort(key=lambda e: (e.created_at, e.analysis_id), reverse=True)
        return entries

    # ------------------------------------------------------------- analyses

    def analysis_dir(self, analysis_id: str) -> Path:
        return self.analyses_dir / analysis_id

    def write_analysis(
        self, analysis_id: str, manifest: dict, files: dict[str, str]
    ) -> None:
        """Write all outputs into a temp dir, then rename into place."""
        final = self.analysis_dir(analysis_id)
        tmp = Path(
            tempfile.mkdtemp(dir=self.analyses_dir, prefix=f".{analysis_id}-")
        )
        try:
            (tmp / "manifest.json").write_text(
                json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            for name, content in files.items():
                (tmp / name).write_text(content, encoding="utf-8", newline="\n")
            if final.exists():
                shutil.rmtree(final)
            os.replace(tmp, final)
        except BaseException:
            shutil.rmtree(tmp, ignore_errors=True)
            raise

    def has_outputs(self, analysis_id: str) -> bool:
        return (self.analysis_dir(analysis_id) / "manifest.json").exists()

    def read_manifest(self, analysis_id: str) -> dict:
        path = self.analysis_dir(analysis_id) / "manifest.json"
        if not path.exists():
            raise NotFoundError(f"no outputs for analysis {analysis_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def read_file(self, analysis_id: str, name: str) -> str:
        path = self.analysis_dir(analysis_id) / name
        if not path.exists():
            raise NotFoundError(f"missing {name} for analysis {analysis_id!r}")
        return path.read_text(encoding="utf-8")

    def list_done_ids(self) -> list[str]:
        return [
            e.analysis_id for e in self.list_entries() if e.status == STATUS_DONE
        ]

    # ------------------------------------------------------------- networks

    def save_network(self, name: str, document: dict) -> None:
        path = self.networks_dir / f"{name}.json"
        fd, tmp = tempfile.mkstemp(dir=self.networks_dir, prefix=".net-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(document, fh, indent=2, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def list_networks(self) -> list[str]:
        return sorted(p.stem for p in self.networks_dir.glob("*.json"))

    def load_network(self, name: str) -> dict:
        path = self.networks_dir / f"{name}.json"
        if not path.exists():
            raise NotFoundError(f"unknown network {name!r}")
        return json.loads(path.read_text(encoding="utf-8"))


# ------------------------------------------------------- CSV round-tripping


@dataclass
class StoredAnalysis:
    """An analysis reloaded from disk, sufficient for similarity features."""

    analysis_id: str
    condition: str
    ranked_genes: RankedList
    ranked_words: RankedList
    phrases: list[ScoredPhrase]
    pathways: list[EnrichmentResult]
    processes: list[EnrichmentResult]
    manifest: dict


def parse_ranked_csv(content: str, alpha: float, n_samples: int, seed: int) -> RankedList:
    rows = list(csv.DictReader(io.StringIO(content)))
    results = tuple(
        TermResult(
            term=r["term"],
            kind=r["kind"],
            query_df=int(r["query_df"]),
            expected_df=float(r["expected_df"]),
            p_value=float(r["p_value"]),
            score=float(r["score"]),
        )
        for r in rows
    )
    return RankedList(results=results, alpha=alpha, n_samples=n_samples, seed=seed)


def parse_phrases_csv(content: str) -> list[ScoredPhrase]:
    rows = list(csv.DictReader(io.StringIO(content)))
    return [
        ScoredPhrase(phrase=r["phrase"], score=float(r["score"]), freq=int(r["freq"]))
        for r in rows
    ]


def parse_enrichment_csv(content: str) -> list[EnrichmentResult]:
    rows = list(csv.DictReader(io.StringIO(content)))
    return [
        EnrichmentResult(
            set_id=r["set_id"],
            name=r["name"],
            overlap=int(r["k"]),
            set_size=int(r["K"]),
            query_size=int(r["n"]),
            universe_size=int(r["N"]),
            p_value=float(r["p_value"]),
            q_value=float(r["q_value"]),
            overlap_genes=frozenset(g for g in r["overlap_genes"].split(";") if g),
        )
        for r in rows
    ]


def load_stored_analysis(store: AnalysisStore, analysis_id: str) -> StoredAnalysis:
    manifest = store.read_manifest(analysis_id)
    params = manifest.get("parameters", {})
    alpha = float(params.get("alpha", 0.05))
    n_samples = int(params.get("n_samples", 0))
    seed = int(params.get("seed", 0))
    return StoredAnalysis(
        analysis_id=analysis_id,
        condition=manifest.get("query", analysis_id),
        ranked_genes=parse_ranked_csv(store.read_file(analysis_id, "genes.csv"), alpha, n_samples, seed),
        ranked_words=parse_ranked_csv(store.read_file(analysis_id, "terms.csv"), alpha, n_samples, seed),
        phrases=parse_phrases_csv(store.read_file(analysis_id, "phrases.csv")),
        pathways=parse_enrichment_csv(store.read_file(analysis_id, "enrichment_pathways.csv")),
        processes=parse_enrichment_csv(store.read_file(analysis_id, "enrichment_processes.csv")),
        manifest=manifest,
    )
