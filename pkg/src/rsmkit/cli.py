"""Command-line workflow: create a project, issue designs, ingest
measurements, fit, and read the next move.

Every command operates on one JSON project file, named by ``--project`` or
the ``RSMKIT_PROJECT`` environment variable. Exit codes: 0 success, 2 bad
usage, 3 data or validation problems, 4 numeric failures (rank deficiency
and friends), 5 I/O. With ``--format json`` errors go to stderr as a JSON
object with ``code``, ``message``, and optional ``detail``.

Set ``RSMKIT_NOW`` (ISO timestamp) to pin created/modified stamps, which
makes project files byte-reproducible across reruns.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import campaign as camp
from .design import FACE, ROTATABLE, FactorSpec, box_behnken, ccd
from .errors import (
    CorruptDocument,
    MalformedNumber,
    NoFirstOrderTerms,
    NoQuadraticTerms,
    PhaseIncomplete,
    RankDeficient,
    RsmError,
    SchemaVersionUnsupported,
    UnknownPhase,
    ZeroDfResidual,
    ZeroGradient,
)
from .fit import TermBasis, fit
from .surface import contours, default_levels, default_ranges, evaluate_grid

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4
EXIT_IO = 5

_NUMERIC_ERRORS = (
    RankDeficient,
    ZeroDfResidual,
    ZeroGradient,
    NoFirstOrderTerms,
    NoQuadraticTerms,
)
_IO_ERRORS = (CorruptDocument, SchemaVersionUnsupported)


class UsageError(Exception):
    pass


def _now() -> str | None:
    return os.environ.get("RSMKIT_NOW")


def _project_path(args) -> str:
    path = args.project or os.environ.get("RSMKIT_PROJECT")
    if not path:
        raise UsageError("no project file: pass --project or set RSMKIT_PROJECT")
    return path


def _error_detail(exc: Exception):
    if isinstance(exc, RankDeficient):
        return {"terms": list(exc.term_names)}
    if isinstance(exc, MalformedNumber):
        return {"row": exc.row, "column": exc.column}
    if isinstance(exc, CorruptDocument):
        return {"path": exc.path}
    return None


def _emit_error(exc: Exception, code: str, fmt: str) -> None:
    if fmt == "json":
        body = {"code": code, "message": str(exc)}
        detail = _error_detail(exc)
        if detail is not None:
            body["detail"] = detail
        print(json.dumps(body), file=sys.stderr)
    else:
        print(f"rsmkit: {code}: {exc}", file=sys.stderr)


# --- small formatting helpers ----------------------------------------------

def _num(value, digits: int = 6) -> str:
    if value is None:
        return "n/a"
    return f"{value:.{digits}g}"


def _table(headers: "list[str]", rows: "list[list[str]]") -> str:
    """Fixed-width text table: first column left-aligned, rest right."""
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    for row in [headers] + rows:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def _parse_factor(text: str) -> FactorSpec:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise UsageError(
            f"bad --factor {text!r}: expected name:low:high or name:low:high:unit"
        )
    name = parts[0].strip()
    try:
        low = float(parts[1])
        high = float(parts[2])
    except ValueError:
        raise UsageError(f"bad --factor {text!r}: low/high must be numbers") from None
    unit = parts[3].strip() if len(parts) == 4 else ""
    return FactorSpec(name=name, low=low, high=high, unit_label=unit)


def _parse_alpha(text: str):
    lowered = text.strip().lower()
    if lowered == "rotatable":
        return ROTATABLE
    if lowered == "face":
        return FACE
    if lowered == "none":
        return None
    try:
        return float(lowered)
    except ValueError:
        raise UsageError(
            f"bad --alpha {text!r}: expected rotatable, face, none, or a number"
        ) from None


def _parse_terms(text: str, n_blocks: int) -> TermBasis:
    if text == "auto":
        tokens = {"fo", "twi", "pq"}
        if n_blocks == 2:
            tokens.add("block")
    else:
        tokens = {t.strip() for t in text.split(",") if t.strip()}
        unknown = tokens - {"fo", "twi", "pq", "block"}
        if unknown:
            raise UsageError(
                f"bad --terms {text!r}: unknown groups {sorted(unknown)} "
                "(expected a comma list from fo, twi, pq, block)"
            )
    return lambda k: TermBasis(
        k=k,
        include_twi="twi" in tokens,
        include_pq="pq" in tokens,
        include_block="block" in tokens,
    )


def _parse_radii(text: str) -> "list[float]":
    try:
        radii = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad --radii {text!r}: expected comma-separated numbers") from None
    if not radii:
        raise UsageError("bad --radii: at least one radius required")
    return radii


def _phase_index(args, campaign: camp.Campaign) -> int:
    if not campaign.phases:
        raise UnknownPhase(f"campaign {campaign.id!r} has no phases yet")
    if args.phase is None:
        return len(campaign.phases) - 1
    return args.phase


def _ensure_analysis(campaign, index, terms, radii, persist_path=None):
    """Stored analysis if compatible, else a fresh run (saved when asked)."""
    phase = campaign.phase(index)
    if phase.analysis is not None and terms is None and radii is None:
        return phase.analysis
    if terms is not None:
        basis = _parse_terms(terms, phase.design.n_blocks)(phase.design.k)
    elif phase.analysis is not None:
        basis = phase.analysis.fitted.basis  # keep the terms already fitted
    else:
        basis = _parse_terms("auto", phase.design.n_blocks)(phase.design.k)
    result = camp.run_analysis(
        campaign, index, basis,
        path_radii=tuple(radii) if radii else camp.DEFAULT_PATH_RADII,
        now=_now(),
    )
    if persist_path:
        camp.save(campaign, persist_path)
    return result


# --- subcommands ------------------------------------------------------------

def cmd_new(args) -> int:
    path = _project_path(args)
    factors = [_parse_factor(t) for t in args.factor]
    goal = {"min": "minimize", "max": "maximize"}[args.goal]
    campaign = camp.new_campaign(
        name=args.name,
        factors=factors,
        response_name=args.response,
        goal=goal,
        target_value=args.target,
        now=_now(),
    )
    camp.save(campaign, path)
    if args.format == "json":
        print(json.dumps(camp.campaign_to_doc(campaign)["campaign"], indent=2))
    elif not args.quiet:
        print(f"created project {path}: campaign {campaign.id!r} "
              f"with {len(factors)} factors, goal {goal} {args.response!r}")
    return EXIT_OK


def cmd_design(args) -> int:
    path = _project_path(args)
    campaign = camp.load(path)
    if args.type == "bbd":
        design = box_behnken(campaign.factors, n_center=args.centers,
                             seed=args.seed)
    else:
        alpha = None if args.type == "factorial" else _parse_alpha(args.alpha)
        design = ccd(
            campaign.factors,
            alpha=alpha,
            n_center=args.centers,
            replicates=args.replicates,
            n_blocks=args.blocks,
            seed=args.seed,
        )
    camp.add_phase(campaign, design, now=_now())
    camp.save(campaign, path)
    index = len(campaign.phases) - 1
    worksheet = camp.export_worksheet(campaign, index)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(worksheet)
        if args.format == "json":
            print(json.dumps({"phase": index, "runs": design.n_runs,
                              "worksheet_path": args.out}))
        elif not args.quiet:
            print(f"phase {index}: {design.n_runs} runs, "
                  f"worksheet written to {args.out}")
    else:
        if args.format == "json":
            print(json.dumps({"phase": index, "runs": design.n_runs,
                              "worksheet_csv": worksheet}))
        else:
            sys.stdout.write(worksheet)
    return EXIT_OK


def cmd_ingest(args) -> int:
    path = _project_path(args)
    campaign = camp.load(path)
    index = _phase_index(args, campaign)
    with open(args.csv, "r", encoding="utf-8", newline="") as handle:
        text = handle.read()
    phase = camp.ingest_responses(campaign, index, text, now=_now())
    camp.save(campaign, path)
    filled = sum(r is not None for r in phase.responses)
    if args.format == "json":
        print(json.dumps({"phase": index, "worksheet_status": phase.worksheet_status,
                          "filled": filled, "runs": len(phase.responses)}))
    elif not args.quiet:
        print(f"phase {index}: {filled}/{len(phase.responses)} responses, "
              f"status {phase.worksheet_status}")
    return EXIT_OK


def _print_analysis_text(campaign, result) -> None:
    model = result.fitted
    headers = ["Term", "Estimate", "Std.Error", "t", "p"]
    by_term = {t.term: t for t in (result.tests or [])}
    rows = []
    for name, est, se in zip(model.term_names(), model.coefficients,
                             model.std_errors):
        test = by_term.get(name)
        rows.append([
            name, _num(float(est)), _num(float(se)),
            _num(test.t_stat, 4) if test else "n/a",
            _num(test.p_value, 4) if test else "n/a",
        ])
    print(_table(headers, rows))
    print()
    print(f"R-squared {model.r_squared:.6g}   "
          f"residual df {model.df_residual}   sigma^2 {_num(model.sigma2)}")
    print()
    headers = ["Source", "SS", "df", "MS", "F", "p"]
    rows = [
        [r.source, _num(r.ss), str(r.df), _num(r.ms),
         _num(r.f_stat, 4), _num(r.p_value, 4)]
        for r in result.anova.rows
    ]
    n = len(model.residuals)
    rows.append(["Total", _num(result.anova.ss_total), str(n - 1), "", "", ""])
    print(_table(headers, rows))
    if result.stationary is not None:
        s = result.stationary
        print()
        if s.coded is None:
            print(f"Stationary point: none ({s.nature}: curvature matrix is "
                  "singular at working precision)")
        else:
            names = [f.name for f in campaign.factors]
            coords = ", ".join(f"{n}={v:.6g}" for n, v in zip(names, s.coded))
            print(f"Stationary point ({s.nature}): {coords}, "
                  f"predicted {_num(s.predicted)}")
        print("Eigenvalues: " + ", ".join(f"{v:.6g}" for v in s.eigenvalues))


def cmd_fit(args) -> int:
    path = _project_path(args)
    campaign = camp.load(path)
    index = _phase_index(args, campaign)
    factory = _parse_terms(args.terms, campaign.phase(index).design.n_blocks)
    basis = factory(campaign.phase(index).design.k)
    result = camp.run_analysis(campaign, index, basis, now=_now())
    camp.save(campaign, path)
    if args.format == "json":
        print(json.dumps(camp._analysis_to_doc(result), indent=2))
    else:
        _print_analysis_text(campaign, result)
    return EXIT_OK


def cmd_path(args) -> int:
    path = _project_path(args)
    campaign = camp.load(path)
    index = _phase_index(args, campaign)
    radii = _parse_radii(args.radii) if args.radii else None
    result = _ensure_analysis(campaign, index, args.terms, radii,
                              persist_path=path)
    if args.format == "json":
        doc = camp._analysis_to_doc(result)
        print(json.dumps({"path": doc["path"], "path_note": doc["path_note"]},
                         indent=2))
        return EXIT_OK
    if result.path is None:
        print(result.path_note or "no direction")
        return EXIT_OK
    names = [f.name for f in campaign.factors]
    headers = ["Radius"] + names + ["Predicted", ""]
    rows = [
        [_num(step.radius)]
        + [f"{v:.6g}" for v in step.coded_point]
        + [_num(step.predicted), "extrapolated" if step.extrapolated else ""]
        for step in result.path.steps
    ]
    print(f"Steepest path, goal {result.path.goal}:")
    print(_table(headers, rows))
    return EXIT_OK


def cmd_surface(args) -> int:
    path = _project_path(args)
    campaign = camp.load(path)
    index = _phase_index(args, campaign)
    phase = campaign.phase(index)
    if phase.analysis is not None:
        model = phase.analysis.fitted
    else:
        # render without mutating the project: ephemeral default-basis fit
        if not phase.is_complete:
            raise PhaseIncomplete(f"phase {index} has unfilled responses")
        factory = _parse_terms("auto", phase.design.n_blocks)
        y = [float(v) for v in camp.derived_responses(campaign, phase)]
        model = fit(phase.design, y, factory(phase.design.k))
    names = [f.name for f in campaign.factors]
    if args.x is not None and args.x not in names:
        raise UsageError(f"unknown factor {args.x!r}")
    if args.y is not None and args.y not in names:
        raise UsageError(f"unknown factor {args.y!r}")
    x_index = names.index(args.x) if args.x else 0
    y_index = names.index(args.y) if args.y else 1
    ranges = default_ranges(phase.design.alpha)
    grid = evaluate_grid(
        model, x_index, y_index,
        nx=args.grid, ny=args.grid,
        x_range=ranges, y_range=ranges,
    )
    levels = default_levels(grid, count=args.levels)
    contour_set = contours(grid, levels)
    doc = {
        "x": names[x_index],
        "y": names[y_index],
        "x_range": list(grid.x_range),
        "y_range": list(grid.y_range),
        "xs": [float(v) for v in grid.xs],
        "ys": [float(v) for v in grid.ys],
        "z": [[float(v) for v in row] for row in grid.z],
        "contours": {
            "levels": list(contour_set.levels),
            "polylines": [
                [[[float(x), float(y)] for x, y in line] for line in lines]
                for lines in contour_set.polylines
            ],
        },
    }
    text = json.dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text + "\n")
        if not args.quiet and args.format != "json":
            print(f"surface grid written to {args.out}")
        elif args.format == "json":
            print(json.dumps({"surface_path": args.out}))
    else:
        print(text)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import run  # deferred: pulls in the HTTP stack

    run(_project_path(args), host=args.host, port=args.port)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsmkit",
        description="Sequential response-surface experimentation from the shell.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--project", help="project file (default: $RSMKIT_PROJECT)")
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--quiet", action="store_true",
                       help="suppress confirmation chatter")

    p = sub.add_parser("new", help="create a project file")
    common(p)
    p.add_argument("--name", required=True)
    p.add_argument("--factor", action="append", required=True,
                   metavar="NAME:LOW:HIGH[:UNIT]")
    p.add_argument("--response", required=True)
    p.add_argument("--goal", choices=["min", "max"], default="min")
    p.add_argument("--target", type=float, default=None,
                   help="analyze |response - target| instead of the raw value")
    p.set_defaults(func=cmd_new)

    p = sub.add_parser("design", help="append a phase and emit its worksheet")
    common(p)
    p.add_argument("--type", choices=["ccd", "factorial", "bbd"], default="ccd")
    p.add_argument("--alpha", default="rotatable",
                   help="rotatable | face | none | <number>")
    p.add_argument("--centers", type=int, default=1)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--blocks", type=int, choices=[1, 2], default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write worksheet CSV here instead of stdout")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("ingest", help="fill responses from a worksheet CSV")
    common(p)
    p.add_argument("csv", help="completed worksheet file")
    p.add_argument("--phase", type=int, default=None,
                   help="phase index (default: latest)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fit", help="fit, test, and summarize a completed phase")
    common(p)
    p.add_argument("--phase", type=int, default=None)
    p.add_argument("--terms", default="auto",
                   help="comma list from fo,twi,pq,block (default: auto)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("path", help="print the steepest ascent/descent path")
    common(p)
    p.add_argument("--phase", type=int, default=None)
    p.add_argument("--terms", default=None)
    p.add_argument("--radii", default=None, metavar="R1,R2,...")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("surface", help="export the fitted surface as JSON")
    common(p)
    p.add_argument("--phase", type=int, default=None)
    p.add_argument("--x", default=None, help="factor name for the x axis")
    p.add_argument("--y", default=None, help="factor name for the y axis")
    p.add_argument("--grid", type=int, default=41)
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--out", help="write grid JSON here instead of stdout")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("serve", help="start the local HTTP service")
    common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "text")
    try:
        return args.func(args)
    except UsageError as exc:
        _emit_error(exc, "Usage", fmt)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        _emit_error(exc, exc.code, fmt)
        return EXIT_NUMERIC
    except _IO_ERRORS as exc:
        _emit_error(exc, exc.code, fmt)
        return EXIT_IO
    except RsmError as exc:
        _emit_error(exc, exc.code, fmt)
        return EXIT_DATA
    except OSError as exc:
        _emit_error(exc, "IoError", fmt)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
