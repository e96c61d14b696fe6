"""Model matrices and least-squares fitting of response-surface models.

The term basis is explicit and canonically ordered: intercept, block
contrast (when present), first-order terms x1..xk, two-way interactions
x_i*x_j with i < j in lexicographic order, then pure quadratics x1^2..xk^2.
Blocks {1, 2} enter as a -1/+1 contrast so the column is orthogonal to the
intercept in balanced designs.

Fitting is ordinary least squares through a Householder QR decomposition
with column pivoting (rank-revealing); normal equations are never formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .design import Design
from .errors import (
    DimensionMismatch,
    LengthMismatch,
    NonFiniteResponse,
    RankDeficient,
)

#: A pivot below this fraction of the largest pivot counts as zero.
RANK_TOLERANCE = 1e-10


@dataclass(frozen=True)
class TermBasis:
    """Which term groups enter the model, over k factors.

    First-order terms are always included; there is no model without them.
    """

    k: int
    include_twi: bool = False
    include_pq: bool = False
    include_block: bool = False
    include_fo: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.k < 1:
            raise DimensionMismatch(f"basis needs k >= 1 factors, got {self.k}")

    @property
    def n_terms(self) -> int:
        p = 1 + self.k
        if self.include_block:
            p += 1
        if self.include_twi:
            p += self.k * (self.k - 1) // 2
        if self.include_pq:
            p += self.k
        return p

    def term_names(self, factor_names: tuple[str, ...] | None = None) -> list[str]:
        """Canonical term labels, using factor names when given."""
        names = list(factor_names) if factor_names else [f"x{j + 1}" for j in range(self.k)]
        if len(names) != self.k:
            raise DimensionMismatch(f"got {len(names)} names for k={self.k}")
        terms = ["Intercept"]
        if self.include_block:
            terms.append("Block")
        terms.extend(names)
        if self.include_twi:
            for a in range(self.k):
                for b in range(a + 1, self.k):
                    terms.append(f"{names[a]}:{names[b]}")
        if self.include_pq:
            terms.extend(f"{n}^2" for n in names)
        return terms

    def row(self, coded: np.ndarray, block_contrast: float = 0.0) -> np.ndarray:
        """Basis expansion of one coded point, in canonical term order."""
        coded = np.asarray(coded, dtype=float)
        if coded.shape != (self.k,):
            raise DimensionMismatch(
                f"point has shape {coded.shape}, expected ({self.k},)"
            )
        parts = [1.0]
        if self.include_block:
            parts.append(float(block_contrast))
        parts.extend(coded.tolist())
        if self.include_twi:
            for a in range(self.k):
                for b in range(a + 1, self.k):
                    parts.append(coded[a] * coded[b])
        if self.include_pq:
            parts.extend((coded * coded).tolist())
        return np.array(parts)

    def slices(self) -> dict[str, list[int]]:
        """Column indices of each term group in canonical order."""
        idx = {"intercept": [0]}
        pos = 1
        if self.include_block:
            idx["block"] = [pos]
            pos += 1
        idx["fo"] = list(range(pos, pos + self.k))
        pos += self.k
        if self.include_twi:
            n_twi = self.k * (self.k - 1) // 2
            idx["twi"] = list(range(pos, pos + n_twi))
            pos += n_twi
        if self.include_pq:
            idx["pq"] = list(range(pos, pos + self.k))
            pos += self.k
        return idx


def block_contrasts(design: Design) -> np.ndarray:
    """Block labels {1, 2} recoded as a -1/+1 column, rows in points order."""
    labels = design.block_labels()
    return np.where(labels == 1, -1.0, 1.0)


def model_matrix(design: Design, basis: TermBasis) -> np.ndarray:
    """Model matrix (n x p) over the canonical term order."""
    if basis.k != design.k:
        raise DimensionMismatch(f"basis k={basis.k} does not match design k={design.k}")
    contrasts = block_contrasts(design)
    rows = [
        basis.row(np.asarray(p.coded), contrasts[i])
        for i, p in enumerate(design.points)
    ]
    return np.vstack(rows)


@dataclass(frozen=True, eq=False)
class FittedModel:
    """Least-squares estimate of a response-surface model."""

    basis: TermBasis
    coefficients: np.ndarray
    std_errors: np.ndarray
    residuals: np.ndarray
    sigma2: float
    df_residual: int
    r_squared: float
    design_ref: str
    term_names_: tuple[str, ...]

    @property
    def k(self) -> int:
        return self.basis.k

    def term_names(self) -> list[str]:
        return list(self.term_names_)

    def coefficient(self, term: str) -> float:
        return float(self.coefficients[self.term_names_.index(term)])

    @classmethod
    def from_coefficients(
        cls,
        basis: TermBasis,
        coefficients: "list[float] | np.ndarray",
        factor_names: tuple[str, ...] | None = None,
    ) -> "FittedModel":
        """Synthetic model with known coefficients (for analysis and demos)."""
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape != (basis.n_terms,):
            raise DimensionMismatch(
                f"expected {basis.n_terms} coefficients, got {coefficients.shape}"
            )
        return cls(
            basis=basis,
            coefficients=coefficients,
            std_errors=np.zeros_like(coefficients),
            residuals=np.zeros(0),
            sigma2=0.0,
            df_residual=0,
            r_squared=1.0,
            design_ref="synthetic",
            term_names_=tuple(basis.term_names(factor_names)),
        )


def fit(design: Design, responses: "list[float] | np.ndarray", basis: TermBasis) -> FittedModel:
    """Ordinary least squares over the canonical basis.

    Solves min ||y - M b|| through a pivoted Householder QR of M. Raises
    RankDeficient naming the inestimable terms when rank(M) < p; standard
    errors come from sigma^2 * diag((M'M)^-1) evaluated through R.
    """
    y = np.asarray(responses, dtype=float)
    if y.ndim != 1 or y.shape[0] != design.n_runs:
        raise LengthMismatch(
            f"got {y.shape[0] if y.ndim == 1 else y.shape} responses for "
            f"{design.n_runs} runs"
        )
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise NonFiniteResponse(f"response at run index {bad} is not finite")

    M = model_matrix(design, basis)
    n, p = M.shape
    names = basis.term_names(design.factor_names)

    Q, R, piv = scipy.linalg.qr(M, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    scale = diag[0] if diag.size else 0.0
    rank = int(np.sum(diag > RANK_TOLERANCE * scale)) if scale > 0 else 0
    if rank < p:
        dropped = sorted((int(piv[j]) for j in range(rank, p)))
        raise RankDeficient([names[j] for j in dropped])

    qty = Q.T @ y
    beta_piv = scipy.linalg.solve_triangular(R, qty)
    beta = np.empty(p)
    beta[piv] = beta_piv

    residuals = y - M @ beta
    ss_res = float(residuals @ residuals)
    df_res = n - rank
    sigma2 = ss_res / df_res if df_res > 0 else 0.0

    # diag((M'M)^-1) = row norms of R^-1, mapped back through the pivot.
    r_inv = scipy.linalg.solve_triangular(R, np.eye(p))
    unscaled = np.sum(r_inv * r_inv, axis=1)
    c_diag = np.empty(p)
    c_diag[piv] = unscaled
    std_errors = np.sqrt(sigma2 * c_diag)

    ss_total = float(np.sum((y - y.mean()) ** 2))
    if ss_total > 0.0:
        r_squared = min(1.0, max(0.0, 1.0 - ss_res / ss_total))
    else:
        r_squared = 1.0

    return FittedModel(
        basis=basis,
        coefficients=beta,
        std_errors=std_errors,
        residuals=residuals,
        sigma2=sigma2,
        df_residual=df_res,
        r_squared=r_squared,
        design_ref=design.ref(),
        term_names_=tuple(names),
    )


def predict(model: FittedModel, coded_point: "list[float] | np.ndarray",
            block: int | None = None) -> float:
    """Evaluate the fitted surface at one coded point.

    With a block term in the model and ``block`` absent, the contrast
    contributes zero (the between-blocks average).
    """
    x = np.asarray(coded_point, dtype=float)
    if x.shape != (model.k,):
        raise DimensionMismatch(f"point has shape {x.shape}, expected ({model.k},)")
    if block is None:
        contrast = 0.0
    elif block == 1:
        contrast = -1.0
    elif block == 2:
        contrast = 1.0
    else:
        raise DimensionMismatch(f"block must be 1 or 2, got {block}")
    row = model.basis.row(x, contrast)
    return float(row @ model.coefficients)
