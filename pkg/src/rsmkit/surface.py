"""Surface grids and contour extraction for two chosen factors.

Grids hold predicted responses over a uniform coded-unit lattice, with all
remaining factors pinned. Contours come from marching squares with linear
edge interpolation: each cell is classified by which corners sit at or
above the level, the two ambiguous saddle cases are disambiguated by the
cell-center average, and the resulting segments are chained into polylines
(closed loops are closed explicitly by repeating the first vertex).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fit import FittedModel, predict
from .errors import DimensionMismatch, InvalidRange

WELD_TOLERANCE = 1e-9

Point = tuple[float, float]
Polyline = list[Point]


@dataclass(frozen=True, eq=False)
class SurfaceGrid:
    """Predicted responses over a uniform (ny x nx) coded grid."""

    factor_x: int
    factor_y: int
    fixed_values: dict[int, float]
    nx: int
    ny: int
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    z: np.ndarray  # row-major, z[i][j] at (xs[j], ys[i])

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)


@dataclass(frozen=True, eq=False)
class ContourSet:
    """Iso-level polylines in coded (x, y) coordinates."""

    levels: tuple[float, ...]
    polylines: tuple[tuple[Polyline, ...], ...]  # one tuple of polylines per level

    def for_level(self, level: float) -> tuple[Polyline, ...]:
        return self.polylines[self.levels.index(level)]


def _check_range(r: tuple[float, float], label: str) -> tuple[float, float]:
    lo, hi = float(r[0]), float(r[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise InvalidRange(f"{label} must be finite with min < max, got ({lo}, {hi})")
    return lo, hi


def default_ranges(alpha: float | None) -> tuple[float, float]:
    """Plotting range per factor: the axial distance when the design has
    axial points, else a slight extrapolation margin beyond the cube."""
    limit = alpha if alpha is not None else 1.25
    return (-limit, limit)


def evaluate_grid(
    model: FittedModel,
    factor_x: int,
    factor_y: int,
    fixed_values: dict[int, float] | None = None,
    nx: int = 41,
    ny: int = 41,
    x_range: tuple[float, float] = (-1.0, 1.0),
    y_range: tuple[float, float] = (-1.0, 1.0),
    block: int | None = None,
) -> SurfaceGrid:
    """Evaluate the fitted surface over a uniform grid.

    ``fixed_values`` pins the remaining factors (default 0, the center);
    the block contribution is zero unless ``block`` is given.
    """
    k = model.k
    if not (0 <= factor_x < k) or not (0 <= factor_y < k):
        raise DimensionMismatch(
            f"factor indices must be in 0..{k - 1}, got ({factor_x}, {factor_y})"
        )
    if factor_x == factor_y:
        raise DimensionMismatch("factor_x and factor_y must differ")
    if nx < 2 or ny < 2:
        raise InvalidRange(f"grid needs nx, ny >= 2, got ({nx}, {ny})")
    x_range = _check_range(x_range, "x_range")
    y_range = _check_range(y_range, "y_range")
    fixed_values = dict(fixed_values or {})
    for idx in fixed_values:
        if not (0 <= idx < k) or idx in (factor_x, factor_y):
            raise DimensionMismatch(f"fixed value for invalid factor index {idx}")

    base = np.zeros(k)
    for idx, val in fixed_values.items():
        base[idx] = float(val)
    xs = np.linspace(x_range[0], x_range[1], nx)
    ys = np.linspace(y_range[0], y_range[1], ny)
    z = np.empty((ny, nx))
    point = base.copy()
    for i in range(ny):
        point[factor_y] = ys[i]
        for j in range(nx):
            point[factor_x] = xs[j]
            z[i, j] = predict(model, point, block)
    return SurfaceGrid(
        factor_x=factor_x, factor_y=factor_y, fixed_values=fixed_values,
        nx=nx, ny=ny, x_range=x_range, y_range=y_range, z=z,
    )


def default_levels(grid: SurfaceGrid, count: int = 10) -> list[float]:
    """``count`` equally spaced levels strictly between min z and max z."""
    zmin, zmax = float(grid.z.min()), float(grid.z.max())
    if zmin == zmax:
        return []
    return list(np.linspace(zmin, zmax, count + 2)[1:-1])


# Segments per marching-squares case, as (edge, edge) pairs; edges are
# B(ottom), R(ight), T(op), L(eft). Corner bit order: BL=1, BR=2, TR=4, TL=8.
_CASE_SEGMENTS: dict[int, list[tuple[str, str]]] = {
    0: [],
    1: [("L", "B")],
    2: [("B", "R")],
    3: [("L", "R")],
    4: [("R", "T")],
    6: [("B", "T")],
    7: [("L", "T")],
    8: [("T", "L")],
    9: [("B", "T")],
    11: [("T", "R")],
    12: [("R", "L")],
    13: [("B", "R")],
    14: [("L", "B")],
    15: [],
}


def _interp(pa: Point, va: float, pb: Point, vb: float, level: float) -> Point:
    t = (level - va) / (vb - va)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def _cell_segments(
    x0: float, x1: float, y0: float, y1: float,
    z_bl: float, z_br: float, z_tr: float, z_tl: float,
    level: float,
) -> list[tuple[Point, Point]]:
    case = (
        (1 if z_bl >= level else 0)
        | (2 if z_br >= level else 0)
        | (4 if z_tr >= level else 0)
        | (8 if z_tl >= level else 0)
    )
    if case in (0, 15):
        return []
    edges = {
        "B": _interp((x0, y0), z_bl, (x1, y0), z_br, level) if (case & 1) != ((case >> 1) & 1) else None,
        "R": _interp((x1, y0), z_br, (x1, y1), z_tr, level) if ((case >> 1) & 1) != ((case >> 2) & 1) else None,
        "T": _interp((x0, y1), z_tl, (x1, y1), z_tr, level) if ((case >> 3) & 1) != ((case >> 2) & 1) else None,
        "L": _interp((x0, y0), z_bl, (x0, y1), z_tl, level) if (case & 1) != ((case >> 3) & 1) else None,
    }
    if case in (5, 10):
        center_above = (z_bl + z_br + z_tr + z_tl) / 4.0 >= level
        if case == 5:  # BL and TR above
            pairs = [("B", "R"), ("T", "L")] if center_above else [("L", "B"), ("R", "T")]
        else:  # BR and TL above
            pairs = [("L", "B"), ("R", "T")] if center_above else [("B", "R"), ("T", "L")]
    else:
        pairs = _CASE_SEGMENTS[case]
    return [(edges[a], edges[b]) for a, b in pairs]


def _weld_key(p: Point) -> tuple[int, int]:
    return (round(p[0] / WELD_TOLERANCE), round(p[1] / WELD_TOLERANCE))


def _close(p: Point, q: Point) -> bool:
    return math.hypot(p[0] - q[0], p[1] - q[1]) <= WELD_TOLERANCE


def _chain_segments(segments: list[tuple[Point, Point]]) -> list[Polyline]:
    """Join segments sharing endpoints (within the weld tolerance) into
    polylines; closed loops repeat their first vertex."""
    unused = set(range(len(segments)))
    by_key: dict[tuple[int, int], list[int]] = {}
    for i, (p, q) in enumerate(segments):
        by_key.setdefault(_weld_key(p), []).append(i)
        by_key.setdefault(_weld_key(q), []).append(i)

    def take_neighbor(pt: Point) -> tuple[int, Point] | None:
        for i in by_key.get(_weld_key(pt), []):
            if i not in unused:
                continue
            p, q = segments[i]
            if _close(p, pt):
                unused.discard(i)
                return i, q
            if _close(q, pt):
                unused.discard(i)
                return i, p
        # quantization can split near-identical points across buckets
        for i in list(unused):
            p, q = segments[i]
            if _close(p, pt):
                unused.discard(i)
                return i, q
            if _close(q, pt):
                unused.discard(i)
                return i, p
        return None

    polylines: list[Polyline] = []
    while unused:
        start = unused.pop()
        p, q = segments[start]
        line: Polyline = [p, q]
        while True:  # extend forward
            nxt = take_neighbor(line[-1])
            if nxt is None:
                break
            line.append(nxt[1])
            if _close(line[-1], line[0]):
                line[-1] = line[0]  # weld the loop shut exactly
                break
        if not _close(line[0], line[-1]):
            line.reverse()
            while True:  # extend the other end
                nxt = take_neighbor(line[-1])
                if nxt is None:
                    break
                line.append(nxt[1])
                if _close(line[-1], line[0]):
                    line[-1] = line[0]
                    break
        polylines.append(line)
    return polylines


def contours(grid: SurfaceGrid, levels: "list[float] | None" = None) -> ContourSet:
    """Marching-squares contour polylines for each level.

    Levels outside [min z, max z] simply produce no polylines. When
    ``levels`` is omitted, ten equally spaced interior levels are used.
    """
    if levels is None:
        levels = default_levels(grid)
    levels = [float(v) for v in levels]
    if any(not math.isfinite(v) for v in levels):
        raise InvalidRange("contour levels must be finite")
    if sorted(levels) != levels:
        levels = sorted(levels)

    xs, ys, z = grid.xs, grid.ys, grid.z
    per_level: list[tuple[Polyline, ...]] = []
    for level in levels:
        segments: list[tuple[Point, Point]] = []
        for i in range(grid.ny - 1):
            for j in range(grid.nx - 1):
                segments.extend(
                    _cell_segments(
                        xs[j], xs[j + 1], ys[i], ys[i + 1],
                        z[i, j], z[i, j + 1], z[i + 1, j + 1], z[i + 1, j],
                        level,
                    )
                )
        per_level.append(tuple(_chain_segments(segments)))
    return ContourSet(levels=tuple(levels), polylines=tuple(per_level))
