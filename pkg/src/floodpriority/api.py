"""HTTP API over the scenario store.

Document-oriented, versioned: every response carries the scenario version
it describes. A static map console is served from / when a frontend build
directory is present.
"""

from __future__ import annotations

import json
import os
import tempfile

from fastapi import FastAPI, Request, Response, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import NotFoundError, StageError, ValidationError
from .pipeline import ScenarioStore, config_from_dict
from .prioritizer import WeightVector


def _error_response(exc):
    cause = exc.cause if isinstance(exc, StageError) else exc
    if isinstance(cause, NotFoundError):
        return JSONResponse({"error": str(exc)}, status_code=404)
    if isinstance(cause, ValidationError):
        return JSONResponse({"error": str(exc)}, status_code=422)
    return JSONResponse({"error": str(exc)}, status_code=500)


def create_app(store_root, frontend_dir=None) -> FastAPI:
    store = ScenarioStore(store_root)
    app = FastAPI(title="floodpriority")

    @app.exception_handler(StageError)
    @app.exception_handler(ValidationError)
    @app.exception_handler(NotFoundError)
    async def _handle(_request: Request, exc):
        return _error_response(exc)

    @app.post("/scenarios", status_code=201)
    async def create_scenario(request: Request):
        doc = await request.json()
        cfg = config_from_dict(doc)
        manifest = store.run_scenario(cfg)
        return {"scenario_id": manifest["scenario_id"],
                "version": manifest["version"],
                "counts": manifest["counts"]}

    @app.get("/scenarios")
    def list_scenarios():
        return {"scenarios": store.scenario_ids()}

    @app.get("/scenarios/{scenario_id}/versions")
    def versions(scenario_id: str):
        return {"scenario_id": scenario_id, "versions": store.versions(scenario_id)}

    @app.get("/scenarios/{scenario_id}/priomap")
    def priomap(scenario_id: str, version: int | None = None):
        data = store.get_priomap_bytes(scenario_id, version)
        return Response(content=data, media_type="application/geo+json")

    @app.get("/scenarios/{scenario_id}/tiles/{tile_id}")
    def tile_detail(scenario_id: str, tile_id: str, version: int | None = None):
        return store.get_tile_detail(scenario_id, tile_id, version)

    @app.post("/scenarios/{scenario_id}/flood")
    async def upload_flood(scenario_id: str, flood: UploadFile):
        payload = await flood.read()
        try:
            json.loads(payload)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"flood upload is not valid JSON: {exc}") from None
        with tempfile.NamedTemporaryFile(
                suffix=".geojson", delete=False, dir=store.root) as tmp:
            tmp.write(payload)
            tmp_path = tmp.name
        try:
            manifest = store.update_flood(scenario_id, tmp_path)
        finally:
            os.unlink(tmp_path)
        return {"scenario_id": scenario_id, "version": manifest["version"],
                "counts": manifest["counts"]}

    @app.patch("/scenarios/{scenario_id}/weights")
    async def patch_weights(scenario_id: str, request: Request):
        doc = await request.json()
        w = doc.get("weights")
        if not isinstance(w, list) or len(w) != 4:
            raise ValidationError("body must be {'weights': [n, l, m, h]}")
        manifest = store.update_weights(scenario_id, WeightVector(*[float(v) for v in w]))
        return {"scenario_id": scenario_id, "version": manifest["version"],
                "counts": manifest["counts"]}

    @app.get("/scenarios/{scenario_id}/summary")
    def summary(scenario_id: str, version: int | None = None):
        return store.get_summary(scenario_id, version)

    frontend = frontend_dir or os.environ.get("FLOODPRIORITY_FRONTEND")
    if frontend and os.path.isdir(frontend):
        app.mount("/", StaticFiles(directory=frontend, html=True), name="console")
    return app
