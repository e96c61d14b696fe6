"""Local HTTP API over campaign project files.

Backs the browser workbench and anything else that wants the workflow over
JSON. One process serves a project store: either a directory of
``<campaign-id>.json`` files or a single project file (new campaigns then
land beside it). Binds loopback by default; there is no authentication in
this version, which is why it must stay local.

Error bodies are always ``{"code", "message", "detail"?}`` where ``code``
mirrors the library error class names. Validation problems map to 400,
unknown ids to 404, mutation of a complete phase to 409, numeric failures
(rank deficiency, incomplete phases at analysis time) to 422.

Writes to one campaign are serialized through a per-campaign lock, so
concurrent conflicting mutations apply whole, one after the other.
Reads are computed from current state and never mutate it.
"""

from __future__ import annotations

import glob
import json
import math
import os
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import campaign as camp
from .design import FACE, ROTATABLE, FactorSpec, box_behnken, ccd
from .errors import (
    CorruptDocument,
    DuplicateRun,
    MalformedNumber,
    NoFirstOrderTerms,
    NoQuadraticTerms,
    PhaseComplete,
    PhaseIncomplete,
    RankDeficient,
    RsmError,
    SchemaVersionUnsupported,
    UnknownPhase,
    UnknownRun,
    ZeroDfResidual,
    ZeroGradient,
)
from .fit import TermBasis, fit
from .surface import contours, default_levels, default_ranges, evaluate_grid

_STATUS_422 = (
    PhaseIncomplete,
    RankDeficient,
    ZeroDfResidual,
    ZeroGradient,
    NoFirstOrderTerms,
    NoQuadraticTerms,
)
_STATUS_404 = (UnknownPhase,)
_STATUS_409 = (PhaseComplete,)


class ApiError(Exception):
    """Transportable error: mirrors library error codes onto HTTP."""

    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail

    @classmethod
    def wrap(cls, exc: RsmError) -> "ApiError":
        detail = None
        if isinstance(exc, RankDeficient):
            detail = {"terms": list(exc.term_names)}
        elif isinstance(exc, MalformedNumber):
            detail = {"row": exc.row, "column": exc.column}
        elif isinstance(exc, CorruptDocument):
            detail = {"path": exc.path}
        if isinstance(exc, _STATUS_422):
            status = 422
        elif isinstance(exc, _STATUS_404):
            status = 404
        elif isinstance(exc, _STATUS_409):
            status = 409
        else:
            status = 400
        return cls(status, exc.code, str(exc), detail)

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.detail is not None:
            body["detail"] = self.detail
        return JSONResponse(status_code=self.status, content=body)


class CampaignStore:
    """Campaigns on disk plus per-campaign write locks."""

    def __init__(self, root: str):
        self._paths: dict[str, str] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if os.path.isfile(root):
            self.directory = os.path.dirname(os.path.abspath(root)) or "."
            self._register_file(root)
        else:
            self.directory = root
            os.makedirs(root, exist_ok=True)
            for path in sorted(glob.glob(os.path.join(root, "*.json"))):
                self._register_file(path)

    def _register_file(self, path: str) -> None:
        campaign = camp.load(path)
        self._paths[campaign.id] = path
        self._locks[campaign.id] = threading.Lock()

    def ids(self) -> "list[str]":
        return sorted(self._paths)

    def get(self, campaign_id: str) -> camp.Campaign:
        path = self._paths.get(campaign_id)
        if path is None:
            raise ApiError(404, "UnknownCampaign",
                           f"no campaign {campaign_id!r}")
        return camp.load(path)

    def lock(self, campaign_id: str) -> threading.Lock:
        lock = self._locks.get(campaign_id)
        if lock is None:
            raise ApiError(404, "UnknownCampaign",
                           f"no campaign {campaign_id!r}")
        return lock

    def save(self, campaign: camp.Campaign) -> None:
        camp.save(campaign, self._paths[campaign.id])

    def create(self, campaign: camp.Campaign) -> camp.Campaign:
        with self._registry_lock:
            base = campaign.id
            candidate = base
            n = 2
            while candidate in self._paths:
                candidate = f"{base}-{n}"
                n += 1
            campaign.id = candidate
            path = os.path.join(self.directory, f"{candidate}.json")
            camp.save(campaign, path)
            self._paths[candidate] = path
            self._locks[candidate] = threading.Lock()
        return campaign


# --- request body helpers ---------------------------------------------------

async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise ApiError(400, "InvalidBody", "request body is not valid JSON") from None
    if not isinstance(body, dict):
        raise ApiError(400, "InvalidBody", "request body must be a JSON object")
    return body


def _field(body: dict, name: str, kind, required=True, default=None):
    if name not in body or body[name] is None:
        if required:
            raise ApiError(400, "MissingField", f"body field {name!r} is required")
        return default
    value = body[name]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ApiError(400, "InvalidField", f"field {name!r} must be a number")
        value = float(value)
        if not math.isfinite(value):
            raise ApiError(400, "InvalidField", f"field {name!r} must be finite")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ApiError(400, "InvalidField", f"field {name!r} must be an integer")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ApiError(400, "InvalidField", f"field {name!r} must be a string")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ApiError(400, "InvalidField", f"field {name!r} must be a list")
        return value
    raise AssertionError(f"unhandled kind {kind}")


def _campaign_summary(campaign: camp.Campaign) -> dict:
    return {
        "id": campaign.id,
        "name": campaign.name,
        "response_name": campaign.response_name,
        "goal": campaign.goal,
        "target_value": campaign.target_value,
        "n_phases": len(campaign.phases),
        "created": campaign.created,
        "modified": campaign.modified,
    }


def _campaign_doc(campaign: camp.Campaign) -> dict:
    return camp.campaign_to_doc(campaign)["campaign"]


def _worksheet_rows(campaign: camp.Campaign, index: int) -> "list[dict]":
    phase = campaign.phase(index)
    design = phase.design
    rows = []
    order = sorted(range(design.n_runs), key=lambda i: design.points[i].run_order)
    for i in order:
        point = design.points[i]
        rows.append({
            "run_order": point.run_order,
            "std_order": point.std_order,
            "block": point.block,
            "settings": {
                f.name: f.to_natural(c)
                for f, c in zip(design.factors, point.coded)
            },
            "response": phase.responses[i],
        })
    return rows


def _parse_basis(body: dict, k: int) -> TermBasis:
    terms = _field(body, "terms", list, required=False, default=["fo", "twi", "pq"])
    tokens = set()
    for t in terms:
        if not isinstance(t, str) or t not in ("fo", "twi", "pq", "block"):
            raise ApiError(400, "InvalidField",
                           f"unknown term group {t!r} "
                           "(expected fo, twi, pq, block)")
        tokens.add(t)
    return TermBasis(
        k=k,
        include_twi="twi" in tokens,
        include_pq="pq" in tokens,
        include_block="block" in tokens,
    )


def _build_design(body: dict, factors: "tuple[FactorSpec, ...]"):
    design_type = _field(body, "type", str, required=False, default="ccd")
    centers = _field(body, "centers", int, required=False, default=1)
    seed = _field(body, "seed", int, required=False, default=0)
    if design_type == "bbd":
        return box_behnken(factors, n_center=centers, seed=seed)
    if design_type not in ("ccd", "factorial"):
        raise ApiError(400, "InvalidField",
                       f"unknown design type {design_type!r}")
    replicates = _field(body, "replicates", int, required=False, default=1)
    blocks = _field(body, "blocks", int, required=False, default=1)
    if design_type == "factorial":
        alpha = None
    else:
        raw = body.get("alpha", "rotatable")
        if raw is None or raw == "none":
            alpha = None
        elif raw == "rotatable":
            alpha = ROTATABLE
        elif raw == "face":
            alpha = FACE
        elif isinstance(raw, (int, float)) and not isinstance(raw, bool):
            alpha = float(raw)
        else:
            raise ApiError(400, "InvalidField",
                           f"alpha must be rotatable, face, none, or a number, "
                           f"got {raw!r}")
    return ccd(factors, alpha=alpha, n_center=centers,
               replicates=replicates, n_blocks=blocks, seed=seed)


# --- application ------------------------------------------------------------

def create_app(project_root: str, workbench_dir: str | None = None,
               now: str | None = None) -> FastAPI:
    """Build the API over a project file or directory.

    ``workbench_dir`` (a built static bundle) is mounted at ``/`` when it
    exists, so the browser UI and the API share one origin. ``now`` pins
    timestamps for reproducible tests.
    """
    store = CampaignStore(project_root)
    app = FastAPI(title="rsmkit service", docs_url=None, redoc_url=None,
                  openapi_url=None)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_request, exc: ApiError):
        return exc.response()

    @app.exception_handler(RsmError)
    async def _rsm_error(_request, exc: RsmError):
        return ApiError.wrap(exc).response()

    @app.exception_handler(Exception)
    async def _internal(_request, exc: Exception):
        return ApiError(500, "Internal", str(exc)).response()

    @app.get("/campaigns")
    async def list_campaigns():
        return JSONResponse([
            _campaign_summary(store.get(cid)) for cid in store.ids()
        ])

    @app.post("/campaigns", status_code=201)
    async def create_campaign(request: Request):
        body = await _json_body(request)
        raw_factors = _field(body, "factors", list)
        factors = []
        for i, f in enumerate(raw_factors):
            if not isinstance(f, dict):
                raise ApiError(400, "InvalidField",
                               f"factors[{i}] must be an object")
            factors.append(FactorSpec(
                name=_field(f, "name", str),
                low=_field(f, "low", float),
                high=_field(f, "high", float),
                unit_label=_field(f, "unit_label", str, required=False,
                                  default=""),
            ))
        goal = _field(body, "goal", str, required=False, default="minimize")
        if goal not in ("minimize", "maximize"):
            raise ApiError(400, "InvalidField",
                           f"goal must be minimize or maximize, got {goal!r}")
        campaign = camp.new_campaign(
            name=_field(body, "name", str),
            factors=factors,
            response_name=_field(body, "response_name", str),
            goal=goal,
            target_value=_field(body, "target_value", float, required=False),
            now=now,
        )
        store.create(campaign)
        return JSONResponse(status_code=201, content=_campaign_doc(campaign))

    @app.get("/campaigns/{campaign_id}")
    async def get_campaign(campaign_id: str):
        return JSONResponse(_campaign_doc(store.get(campaign_id)))

    @app.post("/campaigns/{campaign_id}/phases", status_code=201)
    async def add_phase(campaign_id: str, request: Request):
        body = await _json_body(request)
        with store.lock(campaign_id):
            campaign = store.get(campaign_id)
            design = _build_design(body, campaign.factors)
            camp.add_phase(campaign, design, now=now)
            store.save(campaign)
            index = len(campaign.phases) - 1
            return JSONResponse(status_code=201, content={
                "phase": index,
                "n_runs": design.n_runs,
                "alpha": design.alpha,
                "worksheet": _worksheet_rows(campaign, index),
            })

    @app.get("/campaigns/{campaign_id}/phases/{n}/worksheet.csv")
    async def worksheet_csv(campaign_id: str, n: int):
        campaign = store.get(campaign_id)
        text = camp.export_worksheet(campaign, n)
        return Response(content=text, media_type="text/csv; charset=utf-8")

    @app.put("/campaigns/{campaign_id}/phases/{n}/responses")
    async def put_responses(campaign_id: str, n: int, request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "InvalidBody",
                           "request body is not valid JSON") from None
        if not isinstance(body, list):
            raise ApiError(400, "InvalidBody",
                           "body must be a list of {std_order, block, value}")
        with store.lock(campaign_id):
            campaign = store.get(campaign_id)
            phase = campaign.phase(n)
            if phase.worksheet_status == camp.COMPLETE:
                raise PhaseComplete(
                    "phase is complete; responses are append-only"
                )
            design = phase.design
            by_identity = {
                (p.std_order, p.block): i
                for i, p in enumerate(design.points)
            }
            seen = set()
            updates = {}
            for i, entry in enumerate(body):
                if not isinstance(entry, dict):
                    raise ApiError(400, "InvalidField",
                                   f"entry {i} must be an object")
                std_order = _field(entry, "std_order", int)
                block = _field(entry, "block", int)
                value = _field(entry, "value", float)
                key = (std_order, block)
                if key not in by_identity:
                    raise UnknownRun(
                        f"no run with std_order={std_order}, block={block}"
                    )
                if key in seen:
                    raise DuplicateRun(
                        f"run std_order={std_order}, block={block} "
                        "appears more than once"
                    )
                seen.add(key)
                updates[by_identity[key]] = value
            for i, v in updates.items():
                phase.responses[i] = v
            phase.refresh_status()
            campaign.modified = camp._now_iso(now)
            store.save(campaign)
            return JSONResponse({
                "phase": n,
                "worksheet_status": phase.worksheet_status,
                "filled": sum(r is not None for r in phase.responses),
                "runs": len(phase.responses),
            })

    @app.post("/campaigns/{campaign_id}/phases/{n}/analysis")
    async def run_analysis(campaign_id: str, n: int, request: Request):
        body = await _json_body(request)
        with store.lock(campaign_id):
            campaign = store.get(campaign_id)
            phase = campaign.phase(n)
            basis = _parse_basis(body, phase.design.k)
            radii = _field(body, "radii", list, required=False)
            if radii is not None:
                for r in radii:
                    if isinstance(r, bool) or not isinstance(r, (int, float)):
                        raise ApiError(400, "InvalidField",
                                       "radii must be numbers")
                radii = [float(r) for r in radii]
            result = camp.run_analysis(
                campaign, n, basis,
                path_radii=tuple(radii) if radii else camp.DEFAULT_PATH_RADII,
                now=now,
            )
            store.save(campaign)
            return JSONResponse(camp._analysis_to_doc(result))

    @app.get("/campaigns/{campaign_id}/phases/{n}/surface")
    async def surface(campaign_id: str, n: int, x: str | None = None,
                      y: str | None = None, grid: int = 41, levels: int = 10):
        campaign = store.get(campaign_id)
        phase = campaign.phase(n)
        if phase.analysis is not None:
            model = phase.analysis.fitted
        else:
            if not phase.is_complete:
                raise PhaseIncomplete(
                    f"phase {n} has unfilled responses and no stored analysis"
                )
            basis = TermBasis(k=phase.design.k, include_twi=True,
                              include_pq=True,
                              include_block=phase.design.n_blocks == 2)
            y_values = [float(v) for v in
                        camp.derived_responses(campaign, phase)]
            model = fit(phase.design, y_values, basis)
        names = [f.name for f in campaign.factors]
        for label, value in (("x", x), ("y", y)):
            if value is not None and value not in names:
                raise ApiError(400, "InvalidField",
                               f"unknown factor {value!r} for {label}")
        x_index = names.index(x) if x else 0
        y_index = names.index(y) if y else 1
        ranges = default_ranges(phase.design.alpha)
        grid_data = evaluate_grid(model, x_index, y_index, nx=grid, ny=grid,
                                  x_range=ranges, y_range=ranges)
        level_values = default_levels(grid_data, count=levels)
        contour_set = contours(grid_data, level_values)
        return JSONResponse({
            "x": names[x_index],
            "y": names[y_index],
            "x_range": list(grid_data.x_range),
            "y_range": list(grid_data.y_range),
            "xs": [float(v) for v in grid_data.xs],
            "ys": [float(v) for v in grid_data.ys],
            "z": [[float(v) for v in row] for row in grid_data.z],
            "contours": {
                "levels": list(contour_set.levels),
                "polylines": [
                    [[[float(px), float(py)] for px, py in line]
                     for line in lines]
                    for lines in contour_set.polylines
                ],
            },
        })

    if workbench_dir is None:
        candidate = os.path.join(os.getcwd(), "frontend", "dist")
        if os.path.isdir(candidate):
            workbench_dir = candidate
    if workbench_dir and os.path.isdir(workbench_dir):
        app.mount("/", StaticFiles(directory=workbench_dir, html=True),
                  name="workbench")

    return app


def run(project_root: str, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(create_app(project_root), host=host, port=port)
