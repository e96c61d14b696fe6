"""ANOVA decomposition and significance tests for fitted surfaces.

Sums of squares are sequential (type I) in the canonical group order
Block -> FirstOrder -> Interaction -> PureQuadratic, computed from an
unpivoted QR of the canonically ordered model matrix, so the block row
equals the between-groups sum of squares whenever blocks are present.
Pure error comes from exact-replicate groups (identical coded rows within
one block); lack of fit is the remainder of the residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import Design
from .distributions import f_cdf, f_upper_p, t_cdf, t_two_sided_p
from .errors import ZeroDfResidual
from .fit import FittedModel, TermBasis, fit, model_matrix

SOURCE_ORDER = (
    "Block",
    "FirstOrder",
    "Interaction",
    "PureQuadratic",
    "Residual",
    "LackOfFit",
    "PureError",
)

_GROUP_SOURCES = {
    "block": "Block",
    "fo": "FirstOrder",
    "twi": "Interaction",
    "pq": "PureQuadratic",
}


@dataclass(frozen=True)
class AnovaRow:
    source: str
    ss: float
    df: int
    ms: float
    f_stat: float | None = None
    p_value: float | None = None


@dataclass(frozen=True)
class AnovaTable:
    """Hierarchical sum-of-squares decomposition of one fitted phase."""

    rows: tuple[AnovaRow, ...]
    ss_total: float

    def row(self, source: str) -> AnovaRow:
        for r in self.rows:
            if r.source == source:
                return r
        raise KeyError(f"no ANOVA row for source {source!r}")

    def has_row(self, source: str) -> bool:
        return any(r.source == source for r in self.rows)


def replicate_groups(design: Design) -> list[list[int]]:
    """Indices of runs sharing one coded setting within one block.

    Grouping rounds coded values to 12 decimals to absorb serialization
    jitter; only groups of size >= 2 are returned.
    """
    groups: dict[tuple, list[int]] = {}
    for i, p in enumerate(design.points):
        key = (p.block, tuple(round(c, 12) for c in p.coded))
        groups.setdefault(key, []).append(i)
    return [g for g in groups.values() if len(g) >= 2]


def pure_error(design: Design, responses: np.ndarray) -> tuple[float, int]:
    """Pure-error sum of squares and degrees of freedom from replicates."""
    ss = 0.0
    df = 0
    for idx in replicate_groups(design):
        y = responses[idx]
        ss += float(np.sum((y - y.mean()) ** 2))
        df += len(idx) - 1
    return ss, df


def anova(design: Design, responses: "list[float] | np.ndarray",
          basis: TermBasis) -> AnovaTable:
    """Sequential ANOVA over the canonical term groups.

    Requires a full-rank fit (RankDeficient propagates from ``fit``).
    Lack-of-fit and pure-error rows appear only when the design contains
    replicated settings.
    """
    y = np.asarray(responses, dtype=float)
    fitted = fit(design, y, basis)  # validates and establishes full rank

    M = model_matrix(design, basis)
    n, p = M.shape
    q, _ = np.linalg.qr(M)
    effects = q.T @ y

    ss_total = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(fitted.residuals @ fitted.residuals)
    df_res = fitted.df_residual
    ms_res = ss_res / df_res if df_res > 0 else 0.0

    groups = basis.slices()
    rows: list[AnovaRow] = []
    for key in ("block", "fo", "twi", "pq"):
        if key not in groups:
            continue
        cols = groups[key]
        ss = float(np.sum(effects[cols] ** 2))
        df = len(cols)
        ms = ss / df
        f_stat = p_value = None
        if df_res > 0 and ms_res > 0.0:
            f_stat = ms / ms_res
            p_value = f_upper_p(f_stat, df, df_res)
        rows.append(AnovaRow(_GROUP_SOURCES[key], ss, df, ms, f_stat, p_value))

    rows.append(AnovaRow("Residual", ss_res, df_res,
                         ss_res / df_res if df_res > 0 else 0.0))

    ss_pe, df_pe = pure_error(design, y)
    if df_pe > 0:
        ss_lof = max(0.0, ss_res - ss_pe)
        df_lof = df_res - df_pe
        ms_lof = ss_lof / df_lof if df_lof > 0 else 0.0
        ms_pe = ss_pe / df_pe
        f_lof = p_lof = None
        if df_lof > 0 and ms_pe > 0.0:
            f_lof = ms_lof / ms_pe
            p_lof = f_upper_p(f_lof, df_lof, df_pe)
        rows.append(AnovaRow("LackOfFit", ss_lof, df_lof, ms_lof, f_lof, p_lof))
        rows.append(AnovaRow("PureError", ss_pe, df_pe, ms_pe))

    return AnovaTable(rows=tuple(rows), ss_total=ss_total)


@dataclass(frozen=True)
class CoefficientTest:
    term: str
    estimate: float
    std_error: float
    t_stat: float | None
    p_value: float


def coefficient_tests(model: FittedModel) -> list[CoefficientTest]:
    """Two-sided t test for every coefficient against zero.

    With a perfect fit (sigma^2 = 0, so every standard error is zero) the
    degenerate convention applies: p = 0 for a nonzero estimate, p = 1 for a
    zero one, and the t statistic is reported as absent.
    """
    if model.df_residual < 1:
        raise ZeroDfResidual(
            f"coefficient tests need df_residual >= 1, got {model.df_residual}"
        )
    out = []
    for term, beta, se in zip(model.term_names_, model.coefficients, model.std_errors):
        if se == 0.0:
            out.append(CoefficientTest(term, float(beta), 0.0, None,
                                       0.0 if beta != 0.0 else 1.0))
        else:
            t = float(beta / se)
            out.append(CoefficientTest(term, float(beta), float(se), t,
                                       t_two_sided_p(t, model.df_residual)))
    return out
