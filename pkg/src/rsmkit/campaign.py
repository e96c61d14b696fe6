"""Sequential-experimentation campaign state and persistence.

A campaign ties factor definitions, issued designs, measured responses,
fits, and direction-of-improvement decisions into one append-only history
of phases. Worksheets go out as deterministic CSV (RFC 4180, LF endings,
'.' decimal separator, shortest round-trip numbers) and come back matched
by run identity (std_order, block), never by row position. The project
file is schema-versioned JSON written atomically (temp file + rename).

When a target value is set, analysis runs on the derived response
|measured - target|; raw measurements are always preserved.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .design import Design, DesignPoint, FactorSpec, PointType
from .errors import (
    CorruptDocument,
    DuplicateRun,
    InvalidParameter,
    MalformedNumber,
    MissingColumn,
    PhaseComplete,
    PhaseIncomplete,
    ResponseOutOfRange,
    SchemaVersionUnsupported,
    UnknownPhase,
    UnknownRun,
    ZeroDfResidual,
    ZeroGradient,
)
from .fit import FittedModel, TermBasis, fit
from .inference import AnovaRow, AnovaTable, CoefficientTest, anova, coefficient_tests
from .optimize import (
    MAXIMIZE,
    MINIMIZE,
    DescentPath,
    PathStep,
    StationaryPoint,
    stationary_point,
    steepest_path,
)

SCHEMA_VERSION = 1

ISSUED = "issued"
PARTIALLY_FILLED = "partially_filled"
COMPLETE = "complete"

DEFAULT_PATH_RADII = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5)


def _now_iso(now: str | None = None) -> str:
    if now is not None:
        return now
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def slugify(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    return slug or "campaign"


@dataclass
class AnalysisResult:
    """Everything one analysis pass produces for a phase."""

    fitted: FittedModel
    anova: AnovaTable
    tests: list[CoefficientTest] | None
    stationary: StationaryPoint | None
    path: DescentPath | None
    path_note: str = ""


@dataclass
class Phase:
    """One issued design with its (possibly partial) responses and analysis."""

    design: Design
    responses: list[float | None]
    worksheet_status: str = ISSUED
    decision_note: str = ""
    analysis: AnalysisResult | None = None

    @property
    def is_complete(self) -> bool:
        return all(r is not None for r in self.responses)

    @property
    def fitted(self) -> FittedModel | None:
        return self.analysis.fitted if self.analysis else None

    @property
    def anova(self) -> AnovaTable | None:
        return self.analysis.anova if self.analysis else None

    def refresh_status(self) -> None:
        filled = sum(r is not None for r in self.responses)
        if filled == len(self.responses):
            self.worksheet_status = COMPLETE
        elif filled > 0:
            self.worksheet_status = PARTIALLY_FILLED
        else:
            self.worksheet_status = ISSUED


@dataclass
class Campaign:
    """A named sequential study over a fixed set of factors."""

    id: str
    name: str
    factors: tuple[FactorSpec, ...]
    response_name: str
    goal: str
    target_value: float | None = None
    phases: list[Phase] = field(default_factory=list)
    created: str = ""
    modified: str = ""

    def phase(self, index: int) -> Phase:
        if not (0 <= index < len(self.phases)):
            raise UnknownPhase(
                f"campaign {self.id!r} has {len(self.phases)} phases, "
                f"no phase {index}"
            )
        return self.phases[index]


def new_campaign(
    name: str,
    factors: "list[FactorSpec] | tuple[FactorSpec, ...]",
    response_name: str,
    goal: str = MINIMIZE,
    target_value: float | None = None,
    now: str | None = None,
) -> Campaign:
    if goal not in (MINIMIZE, MAXIMIZE):
        raise InvalidParameter(
            f"goal must be {MINIMIZE!r} or {MAXIMIZE!r}, got {goal!r}")
    if target_value is not None and not math.isfinite(target_value):
        raise ResponseOutOfRange(f"target value must be finite, got {target_value}")
    stamp = _now_iso(now)
    return Campaign(
        id=slugify(name),
        name=name,
        factors=tuple(factors),
        response_name=response_name,
        goal=goal,
        target_value=target_value,
        created=stamp,
        modified=stamp,
    )


def add_phase(campaign: Campaign, design: Design, now: str | None = None) -> Phase:
    phase = Phase(design=design, responses=[None] * design.n_runs)
    campaign.phases.append(phase)
    campaign.modified = _now_iso(now)
    return phase


# --- worksheet CSV ----------------------------------------------------------

def _format_number(x: float) -> str:
    # shortest round-trip decimal; integers keep a trailing .0 so the
    # column stays visibly numeric
    return repr(float(x))


def factor_header(f: FactorSpec) -> str:
    return f"{f.name}[{f.unit_label}]" if f.unit_label else f.name


def export_worksheet(campaign: Campaign, phase_index: int) -> str:
    """Worksheet CSV for one phase: run_order, std_order, block, natural
    factor settings, and the response column (empty until measured)."""
    phase = campaign.phase(phase_index)
    design = phase.design
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(
        ["run_order", "std_order", "block"]
        + [factor_header(f) for f in design.factors]
        + [campaign.response_name]
    )
    order = sorted(range(design.n_runs), key=lambda i: design.points[i].run_order)
    for i in order:
        point = design.points[i]
        naturals = [
            _format_number(f.to_natural(c))
            for f, c in zip(design.factors, point.coded)
        ]
        response = phase.responses[i]
        writer.writerow(
            [point.run_order, point.std_order, point.block]
            + naturals
            + ["" if response is None else _format_number(response)]
        )
    return buf.getvalue()


def _parse_int(text: str, row: int, column: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise MalformedNumber(row, column, text) from None


def ingest_responses(campaign: Campaign, phase_index: int, csv_text: str,
                     now: str | None = None) -> Phase:
    """Fill responses from a (possibly partially) completed worksheet.

    Rows are matched to runs by (std_order, block); operator reordering is
    harmless. Partial fills are accepted. A complete phase accepts only a
    byte-for-byte re-ingestion (a no-op); changed values are rejected.
    """
    phase = campaign.phase(phase_index)
    design = phase.design

    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("worksheet is empty") from None
    header = [h.strip() for h in header]
    for required in ("std_order", "block", campaign.response_name):
        if required not in header:
            raise MissingColumn(f"worksheet lacks required column {required!r}")
    std_col = header.index("std_order")
    block_col = header.index("block")
    resp_col = header.index(campaign.response_name)

    by_identity = {
        (p.std_order, p.block): i for i, p in enumerate(design.points)
    }
    incoming: dict[int, float] = {}
    seen: set[tuple[int, int]] = set()
    for row_number, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        std_order = _parse_int(row[std_col], row_number, "std_order")
        block = _parse_int(row[block_col], row_number, "block")
        key = (std_order, block)
        if key not in by_identity:
            raise UnknownRun(
                f"row {row_number}: no run with std_order={std_order}, block={block}"
            )
        if key in seen:
            raise DuplicateRun(
                f"row {row_number}: run std_order={std_order}, block={block} "
                "appears more than once"
            )
        seen.add(key)
        cell = row[resp_col].strip() if resp_col < len(row) else ""
        if not cell:
            continue
        try:
            value = float(cell)
        except ValueError:
            raise MalformedNumber(row_number, campaign.response_name, cell) from None
        if not math.isfinite(value):
            raise ResponseOutOfRange(
                f"row {row_number}: response must be finite, got {cell!r}"
            )
        incoming[by_identity[key]] = value

    if phase.worksheet_status == COMPLETE:
        if any(phase.responses[i] != v for i, v in incoming.items()):
            raise PhaseComplete(
                "phase is complete; responses are append-only "
                "(start a follow-up phase instead)"
            )
        return phase  # re-ingesting identical values is a no-op

    for i, v in incoming.items():
        phase.responses[i] = v
    phase.refresh_status()
    campaign.modified = _now_iso(now)
    return phase


# --- analysis orchestration -------------------------------------------------

def derived_responses(campaign: Campaign, phase: Phase) -> list[float | None]:
    """The response actually analyzed: |measured - target| when the campaign
    has a target value, the raw measurement otherwise."""
    target = campaign.target_value
    if target is None:
        return list(phase.responses)
    return [None if r is None else abs(r - target) for r in phase.responses]


def run_analysis(
    campaign: Campaign,
    phase_index: int,
    basis: TermBasis,
    path_radii: "tuple[float, ...] | list[float]" = DEFAULT_PATH_RADII,
    now: str | None = None,
) -> AnalysisResult:
    """Fit, ANOVA, coefficient tests, stationary point (when the basis has
    quadratics), and the steepest path toward the campaign goal.

    A flat fitted surface is a reported outcome ("no direction"), not an
    error. Results are persisted into the phase.
    """
    phase = campaign.phase(phase_index)
    if not phase.is_complete:
        filled = sum(r is not None for r in phase.responses)
        raise PhaseIncomplete(
            f"phase incomplete: {filled}/{len(phase.responses)} responses "
            f"entered for phase {phase_index}"
        )
    y = [float(v) for v in derived_responses(campaign, phase)]
    design = phase.design

    fitted = fit(design, y, basis)
    table = anova(design, y, basis)
    try:
        tests = coefficient_tests(fitted)
    except ZeroDfResidual:
        tests = None

    stationary = stationary_point(fitted) if basis.include_pq else None

    region = design.alpha if design.alpha is not None else 1.0
    path: DescentPath | None
    path_note = ""
    try:
        path = steepest_path(fitted, campaign.goal, list(path_radii),
                             region_radius=region)
    except ZeroGradient as exc:
        path = None
        path_note = f"no direction: {exc}"

    result = AnalysisResult(
        fitted=fitted, anova=table, tests=tests,
        stationary=stationary, path=path, path_note=path_note,
    )
    phase.analysis = result
    campaign.modified = _now_iso(now)
    return result


# --- persistence ------------------------------------------------------------

def _require_keys(obj: dict, allowed: set[str], required: set[str], path: str) -> None:
    if not isinstance(obj, dict):
        raise CorruptDocument(path, f"expected object, got {type(obj).__name__}")
    unknown = set(obj) - allowed
    if unknown:
        raise CorruptDocument(path, f"unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise CorruptDocument(path, f"missing fields {sorted(missing)}")


def _finite(value, path: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) \
            or not math.isfinite(float(value)):
        raise CorruptDocument(path, f"expected finite number, got {value!r}")
    return float(value)


def _factor_to_doc(f: FactorSpec) -> dict:
    return {"name": f.name, "low": f.low, "high": f.high, "unit_label": f.unit_label}


def _factor_from_doc(doc: dict, path: str) -> FactorSpec:
    _require_keys(doc, {"name", "low", "high", "unit_label"},
                  {"name", "low", "high"}, path)
    return FactorSpec(
        name=str(doc["name"]),
        low=_finite(doc["low"], f"{path}.low"),
        high=_finite(doc["high"], f"{path}.high"),
        unit_label=str(doc.get("unit_label", "")),
    )


def _design_to_doc(design: Design) -> dict:
    return {
        "factors": [_factor_to_doc(f) for f in design.factors],
        "points": [
            {
                "coded": list(p.coded),
                "point_type": p.point_type.value,
                "block": p.block,
                "std_order": p.std_order,
                "run_order": p.run_order,
            }
            for p in design.points
        ],
        "alpha": design.alpha,
        "n_center_per_block": design.n_center_per_block,
        "replicates": design.replicates,
        "seed": design.seed,
    }


def _design_from_doc(doc: dict, path: str) -> Design:
    _require_keys(
        doc,
        {"factors", "points", "alpha", "n_center_per_block", "replicates", "seed"},
        {"factors", "points", "alpha", "n_center_per_block", "replicates", "seed"},
        path,
    )
    factors = tuple(
        _factor_from_doc(f, f"{path}.factors[{i}]")
        for i, f in enumerate(doc["factors"])
    )
    points = []
    for i, p in enumerate(doc["points"]):
        ppath = f"{path}.points[{i}]"
        _require_keys(p, {"coded", "point_type", "block", "std_order", "run_order"},
                      {"coded", "point_type", "block", "std_order", "run_order"}, ppath)
        try:
            ptype = PointType(p["point_type"])
        except ValueError:
            raise CorruptDocument(f"{ppath}.point_type",
                                  f"unknown point type {p['point_type']!r}") from None
        points.append(
            DesignPoint(
                coded=tuple(_finite(c, f"{ppath}.coded[{j}]")
                            for j, c in enumerate(p["coded"])),
                point_type=ptype,
                block=int(p["block"]),
                std_order=int(p["std_order"]),
                run_order=int(p["run_order"]),
            )
        )
    alpha = doc["alpha"]
    return Design(
        factors=factors,
        points=tuple(points),
        alpha=None if alpha is None else _finite(alpha, f"{path}.alpha"),
        n_center_per_block=int(doc["n_center_per_block"]),
        replicates=int(doc["replicates"]),
        seed=int(doc["seed"]),
    )


def _basis_to_doc(basis: TermBasis) -> dict:
    return {
        "k": basis.k,
        "include_twi": basis.include_twi,
        "include_pq": basis.include_pq,
        "include_block": basis.include_block,
    }


def _basis_from_doc(doc: dict, path: str) -> TermBasis:
    keys = {"k", "include_twi", "include_pq", "include_block"}
    _require_keys(doc, keys, keys, path)
    return TermBasis(
        k=int(doc["k"]),
        include_twi=bool(doc["include_twi"]),
        include_pq=bool(doc["include_pq"]),
        include_block=bool(doc["include_block"]),
    )


def _model_to_doc(model: FittedModel) -> dict:
    return {
        "basis": _basis_to_doc(model.basis),
        "coefficients": [float(v) for v in model.coefficients],
        "std_errors": [float(v) for v in model.std_errors],
        "residuals": [float(v) for v in model.residuals],
        "sigma2": model.sigma2,
        "df_residual": model.df_residual,
        "r_squared": model.r_squared,
        "design_ref": model.design_ref,
        "term_names": list(model.term_names_),
    }


def _model_from_doc(doc: dict, path: str) -> FittedModel:
    keys = {"basis", "coefficients", "std_errors", "residuals", "sigma2",
            "df_residual", "r_squared", "design_ref", "term_names"}
    _require_keys(doc, keys, keys, path)
    return FittedModel(
        basis=_basis_from_doc(doc["basis"], f"{path}.basis"),
        coefficients=np.array([_finite(v, f"{path}.coefficients[{i}]")
                               for i, v in enumerate(doc["coefficients"])]),
        std_errors=np.array([_finite(v, f"{path}.std_errors[{i}]")
                             for i, v in enumerate(doc["std_errors"])]),
        residuals=np.array([_finite(v, f"{path}.residuals[{i}]")
                            for i, v in enumerate(doc["residuals"])]),
        sigma2=_finite(doc["sigma2"], f"{path}.sigma2"),
        df_residual=int(doc["df_residual"]),
        r_squared=_finite(doc["r_squared"], f"{path}.r_squared"),
        design_ref=str(doc["design_ref"]),
        term_names_=tuple(str(t) for t in doc["term_names"]),
    )


def _anova_to_doc(table: AnovaTable) -> dict:
    return {
        "rows": [
            {"source": r.source, "ss": r.ss, "df": r.df, "ms": r.ms,
             "f_stat": r.f_stat, "p_value": r.p_value}
            for r in table.rows
        ],
        "ss_total": table.ss_total,
    }


def _anova_from_doc(doc: dict, path: str) -> AnovaTable:
    _require_keys(doc, {"rows", "ss_total"}, {"rows", "ss_total"}, path)
    rows = []
    for i, r in enumerate(doc["rows"]):
        rpath = f"{path}.rows[{i}]"
        keys = {"source", "ss", "df", "ms", "f_stat", "p_value"}
        _require_keys(r, keys, keys, rpath)
        rows.append(AnovaRow(
            source=str(r["source"]),
            ss=_finite(r["ss"], f"{rpath}.ss"),
            df=int(r["df"]),
            ms=_finite(r["ms"], f"{rpath}.ms"),
            f_stat=None if r["f_stat"] is None else _finite(r["f_stat"], f"{rpath}.f_stat"),
            p_value=None if r["p_value"] is None else _finite(r["p_value"], f"{rpath}.p_value"),
        ))
    return AnovaTable(rows=tuple(rows), ss_total=_finite(doc["ss_total"], f"{path}.ss_total"))


def _analysis_to_doc(result: AnalysisResult) -> dict:
    return {
        "fitted": _model_to_doc(result.fitted),
        "anova": _anova_to_doc(result.anova),
        "tests": None if result.tests is None else [
            {"term": t.term, "estimate": t.estimate, "std_error": t.std_error,
             "t_stat": t.t_stat, "p_value": t.p_value}
            for t in result.tests
        ],
        "stationary": None if result.stationary is None else {
            "coded": None if result.stationary.coded is None
            else [float(v) for v in result.stationary.coded],
            "predicted": result.stationary.predicted,
            "eigenvalues": [float(v) for v in result.stationary.eigenvalues],
            "eigenvectors": [[float(v) for v in row]
                             for row in result.stationary.eigenvectors],
            "nature": result.stationary.nature,
        },
        "path": None if result.path is None else {
            "goal": result.path.goal,
            "origin": [float(v) for v in result.path.origin],
            "steps": [
                {"radius": s.radius,
                 "coded_point": [float(v) for v in s.coded_point],
                 "predicted": s.predicted,
                 "extrapolated": s.extrapolated}
                for s in result.path.steps
            ],
        },
        "path_note": result.path_note,
    }


def _analysis_from_doc(doc: dict, path: str) -> AnalysisResult:
    keys = {"fitted", "anova", "tests", "stationary", "path", "path_note"}
    _require_keys(doc, keys, keys, path)
    tests = None
    if doc["tests"] is not None:
        tests = []
        for i, t in enumerate(doc["tests"]):
            tpath = f"{path}.tests[{i}]"
            tkeys = {"term", "estimate", "std_error", "t_stat", "p_value"}
            _require_keys(t, tkeys, tkeys, tpath)
            tests.append(CoefficientTest(
                term=str(t["term"]),
                estimate=_finite(t["estimate"], f"{tpath}.estimate"),
                std_error=_finite(t["std_error"], f"{tpath}.std_error"),
                t_stat=None if t["t_stat"] is None else _finite(t["t_stat"], f"{tpath}.t_stat"),
                p_value=_finite(t["p_value"], f"{tpath}.p_value"),
            ))
    stationary = None
    if doc["stationary"] is not None:
        s = doc["stationary"]
        spath = f"{path}.stationary"
        skeys = {"coded", "predicted", "eigenvalues", "eigenvectors", "nature"}
        _require_keys(s, skeys, skeys, spath)
        stationary = StationaryPoint(
            coded=None if s["coded"] is None else np.array(
                [_finite(v, f"{spath}.coded[{i}]") for i, v in enumerate(s["coded"])]),
            predicted=None if s["predicted"] is None
            else _finite(s["predicted"], f"{spath}.predicted"),
            eigenvalues=np.array([_finite(v, f"{spath}.eigenvalues[{i}]")
                                  for i, v in enumerate(s["eigenvalues"])]),
            eigenvectors=np.array([[_finite(v, f"{spath}.eigenvectors[{i}][{j}]")
                                    for j, v in enumerate(row)]
                                   for i, row in enumerate(s["eigenvectors"])]),
            nature=str(s["nature"]),
        )
    dpath = None
    if doc["path"] is not None:
        p = doc["path"]
        ppath = f"{path}.path"
        pkeys = {"goal", "origin", "steps"}
        _require_keys(p, pkeys, pkeys, ppath)
        steps = []
        for i, s in enumerate(p["steps"]):
            spath = f"{ppath}.steps[{i}]"
            skeys = {"radius", "coded_point", "predicted", "extrapolated"}
            _require_keys(s, skeys, skeys, spath)
            steps.append(PathStep(
                radius=_finite(s["radius"], f"{spath}.radius"),
                coded_point=np.array([_finite(v, f"{spath}.coded_point[{j}]")
                                      for j, v in enumerate(s["coded_point"])]),
                predicted=_finite(s["predicted"], f"{spath}.predicted"),
                extrapolated=bool(s["extrapolated"]),
            ))
        dpath = DescentPath(
            goal=str(p["goal"]),
            origin=np.array([_finite(v, f"{ppath}.origin[{i}]")
                             for i, v in enumerate(p["origin"])]),
            steps=tuple(steps),
        )
    return AnalysisResult(
        fitted=_model_from_doc(doc["fitted"], f"{path}.fitted"),
        anova=_anova_from_doc(doc["anova"], f"{path}.anova"),
        tests=tests,
        stationary=stationary,
        path=dpath,
        path_note=str(doc["path_note"]),
    )


def campaign_to_doc(campaign: Campaign) -> dict:
    """Schema v1 project document for one campaign."""
    return {
        "schema": SCHEMA_VERSION,
        "campaign": {
            "id": campaign.id,
            "name": campaign.name,
            "factors": [_factor_to_doc(f) for f in campaign.factors],
            "response_name": campaign.response_name,
            "goal": campaign.goal,
            "target_value": campaign.target_value,
            "created": campaign.created,
            "modified": campaign.modified,
            "phases": [
                {
                    "design": _design_to_doc(ph.design),
                    "responses": list(ph.responses),
                    "worksheet_status": ph.worksheet_status,
                    "decision_note": ph.decision_note,
                    "analysis": None if ph.analysis is None
                    else _analysis_to_doc(ph.analysis),
                }
                for ph in campaign.phases
            ],
        },
    }


def campaign_from_doc(doc: dict) -> Campaign:
    _require_keys(doc, {"schema", "campaign"}, {"schema", "campaign"}, "$")
    if doc["schema"] != SCHEMA_VERSION:
        raise SchemaVersionUnsupported(
            f"project schema {doc['schema']!r} is not supported "
            f"(this build reads schema {SCHEMA_VERSION})"
        )
    c = doc["campaign"]
    keys = {"id", "name", "factors", "response_name", "goal", "target_value",
            "created", "modified", "phases"}
    _require_keys(c, keys, keys, "$.campaign")
    if c["goal"] not in (MINIMIZE, MAXIMIZE):
        raise CorruptDocument("$.campaign.goal", f"unknown goal {c['goal']!r}")
    phases = []
    for i, ph in enumerate(c["phases"]):
        ppath = f"$.campaign.phases[{i}]"
        pkeys = {"design", "responses", "worksheet_status", "decision_note", "analysis"}
        _require_keys(ph, pkeys, pkeys, ppath)
        if ph["worksheet_status"] not in (ISSUED, PARTIALLY_FILLED, COMPLETE):
            raise CorruptDocument(f"{ppath}.worksheet_status",
                                  f"unknown status {ph['worksheet_status']!r}")
        design = _design_from_doc(ph["design"], f"{ppath}.design")
        responses = [
            None if r is None else _finite(r, f"{ppath}.responses[{j}]")
            for j, r in enumerate(ph["responses"])
        ]
        if len(responses) != design.n_runs:
            raise CorruptDocument(f"{ppath}.responses",
                                  f"{len(responses)} responses for {design.n_runs} runs")
        filled = sum(r is not None for r in responses)
        derived = (COMPLETE if filled == design.n_runs
                   else PARTIALLY_FILLED if filled else ISSUED)
        if ph["worksheet_status"] != derived:
            raise CorruptDocument(
                f"{ppath}.worksheet_status",
                f"status {ph['worksheet_status']!r} disagrees with "
                f"{filled}/{design.n_runs} filled responses")
        if ph["analysis"] is not None and derived != COMPLETE:
            raise CorruptDocument(f"{ppath}.analysis",
                                  "analysis stored on an incomplete phase")
        phases.append(Phase(
            design=design,
            responses=responses,
            worksheet_status=str(ph["worksheet_status"]),
            decision_note=str(ph["decision_note"]),
            analysis=None if ph["analysis"] is None
            else _analysis_from_doc(ph["analysis"], f"{ppath}.analysis"),
        ))
    return Campaign(
        id=str(c["id"]),
        name=str(c["name"]),
        factors=tuple(_factor_from_doc(f, f"$.campaign.factors[{i}]")
                      for i, f in enumerate(c["factors"])),
        response_name=str(c["response_name"]),
        goal=str(c["goal"]),
        target_value=None if c["target_value"] is None
        else _finite(c["target_value"], "$.campaign.target_value"),
        phases=phases,
        created=str(c["created"]),
        modified=str(c["modified"]),
    )


def save(campaign: Campaign, path: str) -> None:
    """Write the project file atomically (temp file in place, then rename)."""
    doc = campaign_to_doc(campaign)
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".rsmkit-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path: str) -> Campaign:
    with open(path, "r", encoding="utf-8") as handle:
        raw = handle.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CorruptDocument("$", f"not valid JSON: {exc}") from None
    return campaign_from_doc(doc)
