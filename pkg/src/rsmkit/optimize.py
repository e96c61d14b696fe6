"""Direction-of-improvement analytics on a fitted surface.

Writes the fitted polynomial as yhat = b0 + b'x + x'Bx with B symmetric
(diagonal from the pure quadratic coefficients, off-diagonal from half the
interaction coefficients; the block contrast is qualitative and excluded).

First-order models move along the gradient ray. Second-order models take
ridge-analysis steps: the exact extremum of the quadratic on each sphere
||x - origin|| = r, found through the eigendecomposition of B with a
safeguarded bisection on the Lagrange multiplier, including the degenerate
case where the gradient has no component along the extreme eigenvector.
Eigendecompositions use cyclic Jacobi rotations (factor counts are small).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidParameter,
    NoFirstOrderTerms,
    NoQuadraticTerms,
    ZeroGradient,
)
from .fit import FittedModel, predict

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

_GRADIENT_FLOOR = 1e-12
_SINGULAR_RATIO = 1e-10
_NATURE_RATIO = 1e-8


def jacobi_eigh(a: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi
    rotations.

    Returns (eigenvalues ascending, eigenvector columns in matching order).
    Sweeps stop when the off-diagonal Frobenius norm falls below 1e-12
    relative to the matrix scale.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got {a.shape}")
    v = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(a)))
    tol = 1e-12 * scale

    off_mask = ~np.eye(n, dtype=bool)

    def off(m: np.ndarray) -> float:
        # summed directly over off-diagonal entries: the total-minus-diagonal
        # form cancels catastrophically once the matrix is nearly diagonal
        return math.sqrt(float(np.sum(m[off_mask] ** 2)))

    for _ in range(max_sweeps):
        if off(a) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol / max(1, n * n):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def quadratic_form(model: FittedModel) -> tuple[float, np.ndarray, np.ndarray]:
    """(b0, b, B) of the fitted polynomial, block term excluded."""
    basis = model.basis
    groups = basis.slices()
    k = basis.k
    b0 = float(model.coefficients[0])
    b = np.asarray(model.coefficients)[groups["fo"]].astype(float)
    B = np.zeros((k, k))
    if "pq" in groups:
        np.fill_diagonal(B, np.asarray(model.coefficients)[groups["pq"]])
    if "twi" in groups:
        pos = 0
        twi = np.asarray(model.coefficients)[groups["twi"]]
        for i in range(k):
            for j in range(i + 1, k):
                B[i, j] = B[j, i] = twi[pos] / 2.0
                pos += 1
    return b0, b, B


@dataclass(frozen=True)
class PathStep:
    radius: float
    coded_point: np.ndarray
    predicted: float
    extrapolated: bool = False


@dataclass(frozen=True, eq=False)
class DescentPath:
    goal: str
    origin: np.ndarray
    steps: tuple[PathStep, ...]


@dataclass(frozen=True, eq=False)
class StationaryPoint:
    """Where the fitted quadratic's gradient vanishes, classified by the
    curvature eigenvalues. A singular B yields a Degenerate descriptor with
    eigen-data populated but no point."""

    coded: np.ndarray | None
    predicted: float | None
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    nature: str  # "Minimum" | "Maximum" | "Saddle" | "Degenerate"


def _classify(eigenvalues: np.ndarray) -> str:
    max_abs = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    tau = _NATURE_RATIO * max_abs
    if max_abs == 0.0 or np.any(np.abs(eigenvalues) <= tau):
        return "Degenerate"
    if np.all(eigenvalues > tau):
        return "Minimum"
    if np.all(eigenvalues < -tau):
        return "Maximum"
    return "Saddle"


def stationary_point(model: FittedModel) -> StationaryPoint:
    """Solve grad = 0 for the fitted quadratic via eigendecomposition of B."""
    if not model.basis.include_pq:
        raise NoQuadraticTerms(
            "stationary point requires pure quadratic terms in the basis"
        )
    _, b, B = quadratic_form(model)
    eigenvalues, eigenvectors = jacobi_eigh(B)
    max_abs = float(np.max(np.abs(eigenvalues)))
    if max_abs == 0.0 or float(np.min(np.abs(eigenvalues))) < _SINGULAR_RATIO * max_abs:
        return StationaryPoint(
            coded=None, predicted=None,
            eigenvalues=eigenvalues, eigenvectors=eigenvectors,
            nature="Degenerate",
        )
    # x_s = -1/2 B^-1 b through the eigenbasis
    x_s = eigenvectors @ ((eigenvectors.T @ b) / eigenvalues) * -0.5
    predicted = predict(model, x_s)
    return StationaryPoint(
        coded=x_s, predicted=predicted,
        eigenvalues=eigenvalues, eigenvectors=eigenvectors,
        nature=_classify(eigenvalues),
    )


def _sphere_minimum(eigenvalues: np.ndarray, c: np.ndarray, r: float) -> np.ndarray:
    """Minimize c'z + z'diag(eigenvalues)z on the sphere ||z|| = r.

    Trust-region subproblem in the eigenbasis: z(mu) = -c / (2(lam - mu))
    with mu below the smallest eigenvalue, found by safeguarded bisection on
    ||z(mu)|| = r; the hard case (no gradient component along the extreme
    eigenvector) adds the eigenvector contribution explicitly.
    """
    lam_min = float(eigenvalues[0])
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    extreme = np.abs(eigenvalues - lam_min) <= 1e-12 * scale
    c_norm = float(np.linalg.norm(c))

    def z_of(mu: float) -> np.ndarray:
        return -c / (2.0 * (eigenvalues - mu))

    hard = float(np.linalg.norm(c[extreme])) <= 1e-14 * max(1.0, c_norm)
    if hard:
        z = np.zeros_like(c)
        rest = ~extreme
        z[rest] = -c[rest] / (2.0 * (eigenvalues[rest] - lam_min))
        partial = float(np.linalg.norm(z))
        if partial <= r:
            # pad along the extreme eigenvector to reach the sphere
            j = int(np.argmax(extreme))
            z[j] = math.sqrt(max(0.0, r * r - partial * partial))
            return z
        # fall through: the non-extreme components alone overshoot the radius

    lo = lam_min - c_norm / (2.0 * r) - 1.0
    hi = lam_min - 1e-8 * scale
    # push hi toward lam_min until the sphere radius is bracketed
    for _ in range(200):
        if float(np.linalg.norm(z_of(hi))) >= r:
            break
        hi = lam_min - (lam_min - hi) / 4.0
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if float(np.linalg.norm(z_of(mid))) < r:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(1.0, abs(lam_min)):
            break
    z = z_of(0.5 * (lo + hi))
    norm = float(np.linalg.norm(z))
    if norm > 0.0:
        z *= r / norm
    return z


def steepest_path(
    model: FittedModel,
    goal: str,
    radii: "list[float] | np.ndarray",
    origin: "list[float] | np.ndarray | None" = None,
    region_radius: float | None = None,
) -> DescentPath:
    """Steepest ascent/descent path from the origin (default: design center).

    First-order models step along -+ b/||b||; second-order models solve the
    exact sphere-constrained extremum at each radius. Steps beyond
    ``region_radius`` (the design's axial distance, or 1 when it has none)
    are flagged extrapolated rather than refused.
    """
    if goal not in (MINIMIZE, MAXIMIZE):
        raise InvalidParameter(
            f"goal must be {MINIMIZE!r} or {MAXIMIZE!r}, got {goal!r}")
    if not model.basis.include_fo:
        raise NoFirstOrderTerms("path requires first-order terms")
    radii = [float(r) for r in radii]
    if not radii:
        raise InvalidParameter("at least one radius required")
    if any(r < 0 for r in radii):
        raise InvalidParameter("radii must be >= 0")
    if sorted(radii) != radii:
        raise InvalidParameter("radii must be sorted ascending")

    k = model.k
    origin = np.zeros(k) if origin is None else np.asarray(origin, dtype=float)
    limit = 1.0 if region_radius is None else float(region_radius)

    _, b, B = quadratic_form(model)
    second_order = model.basis.include_pq or model.basis.include_twi
    b_norm = float(np.linalg.norm(b))

    if not second_order:
        if b_norm < _GRADIENT_FLOOR:
            raise ZeroGradient("all first-order slopes are zero; direction undefined")
        direction = -b / b_norm if goal == MINIMIZE else b / b_norm
        steps = []
        for r in radii:
            point = origin + r * direction
            steps.append(PathStep(r, point, predict(model, point), r > limit + 1e-12))
        return DescentPath(goal=goal, origin=origin, steps=tuple(steps))

    if b_norm < _GRADIENT_FLOOR and float(np.linalg.norm(B)) < _GRADIENT_FLOOR:
        raise ZeroGradient("fitted surface is flat; direction undefined")

    eigenvalues, eigenvectors = jacobi_eigh(B)
    gradient = b + 2.0 * B @ origin  # gradient at the path origin
    c = eigenvectors.T @ gradient
    steps = []
    for r in radii:
        if r == 0.0:
            point = origin.copy()
        elif goal == MINIMIZE:
            z = _sphere_minimum(eigenvalues, c, r)
            point = origin + eigenvectors @ z
        else:
            z = _sphere_minimum(-eigenvalues[::-1], -c[::-1], r)
            point = origin + eigenvectors[:, ::-1] @ z
        steps.append(PathStep(r, point, predict(model, point), r > limit + 1e-12))
    return DescentPath(goal=goal, origin=origin, steps=tuple(steps))
