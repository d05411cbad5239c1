"""HTTP surface over the analysis engine.

Payloads are JSON; the ZIP export streams bytes.  The API carries no
layout or rendering state: networks are served as stored documents and the
browser client does its own force layout.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from pydantic import BaseModel

from litsqueeze.errors import ConflictError, NotFoundError, QuerySyntaxError
from litsqueeze.service import AnalysisEngine


class SubmitRequest(BaseModel):
    query: str
    params: dict | None = None


def create_app(engine: AnalysisEngine, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="litsqueeze", version="0.1.0")

    @app.post("/api/analyses")
    def submit_analysis(body: SubmitRequest) -> dict:
        try:
            analysis_id = engine.submit(body.query, body.params)
        except QuerySyntaxError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"analysis_id": analysis_id}

    @app.get("/api/analyses")
    def list_analyses(filter: str = Query(default="all")) -> dict:
        if filter not in ("all", "curated"):
            raise HTTPException(status_code=400, detail="filter must be 'all' or 'curated'")
        entries = engine.list_analyses(curated_only=filter == "curated")
        return {"analyses": [e.to_dict() for e in entries]}

    @app.get("/api/analyses/{analysis_id}")
    def get_analysis(analysis_id: str) -> dict:
        try:
            return engine.get_analysis(analysis_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/api/analyses/{analysis_id}/export.zip")
    def export_zip(analysis_id: str) -> Response:
        try:
            payload = engine.export_zip(analysis_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return Response(
            content=payload,
            media_type="application/zip",
            headers={
                "Content-Disposition": f'attachment; filename="{analysis_id}.zip"'
            },
        )

    @app.get("/api/networks")
    def list_networks() -> dict:
        return {"networks": engine.store.list_networks()}

    @app.get("/api/networks/{name}")
    def get_network(name: str) -> dict:
        try:
            return engine.store.load_network(name)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/api/networks/{name}/pair")
    def get_pair(name: str, a: str, b: str) -> dict:
        try:
            doc = engine.store.load_network(name)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        wanted = {a, b}
        for edge in doc.get("edges", []):
            if {edge["a"], edge["b"]} == wanted:
                return edge
        raise HTTPException(status_code=404, detail=f"no edge between {a!r} and {b!r}")

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
