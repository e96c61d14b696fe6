"""Surface grids and marching-squares contours.

Grid orientation is pinned against predict() directly. Contour geometry is
checked on surfaces whose iso-lines are known exactly: circles for
x^2 + y^2 and straight lines for first-order models, where linear edge
interpolation introduces no error beyond rounding.
"""

import math

import numpy as np
import pytest

from rsmkit import (
    FittedModel,
    SurfaceGrid,
    TermBasis,
    contours,
    default_levels,
    default_ranges,
    evaluate_grid,
    predict,
)
from rsmkit.errors import DimensionMismatch, InvalidRange


def quad_model(b0, b, B):
    """Full second-order model for b0 + b'x + x'Bx."""
    B = np.asarray(B, dtype=float)
    b = np.asarray(b, dtype=float)
    k = len(b)
    basis = TermBasis(k=k, include_twi=True, include_pq=True)
    coefficients = [float(b0)]
    coefficients += [float(v) for v in b]
    for i in range(k):
        for j in range(i + 1, k):
            coefficients.append(float(2.0 * B[i, j]))
    coefficients += [float(B[i, i]) for i in range(k)]
    return FittedModel.from_coefficients(basis, np.array(coefficients))


def fo_model(b0, b):
    basis = TermBasis(k=len(b))
    return FittedModel.from_coefficients(
        basis, np.array([b0] + list(b), dtype=float))


class TestEvaluateGrid:
    def test_orientation_matches_predict(self):
        # asymmetric surface and asymmetric ranges so a transposed or
        # flipped grid cannot pass by accident
        model = quad_model(1.0, (2.0, -3.0, 0.5),
                           [[1.0, 0.3, 0.0], [0.3, -2.0, 0.1], [0.0, 0.1, 0.7]])
        grid = evaluate_grid(model, factor_x=0, factor_y=2,
                             fixed_values={1: 0.7}, nx=7, ny=5,
                             x_range=(-1.5, 0.5), y_range=(-1.0, 2.0))
        assert grid.z.shape == (5, 7)
        for i in range(5):
            for j in range(7):
                point = (grid.xs[j], 0.7, grid.ys[i])
                assert grid.z[i, j] == predict(model, point)

    def test_lattice_endpoints(self):
        model = fo_model(0.0, (1.0, 1.0))
        grid = evaluate_grid(model, 0, 1, nx=11, ny=21,
                             x_range=(-2.0, 2.0), y_range=(0.0, 1.0))
        assert grid.xs[0] == -2.0 and grid.xs[-1] == 2.0
        assert grid.ys[0] == 0.0 and grid.ys[-1] == 1.0
        assert len(grid.xs) == 11 and len(grid.ys) == 21

    def test_fixed_value_shifts_additive_factor(self):
        model = fo_model(0.0, (1.0, 0.0, 10.0))
        base = evaluate_grid(model, 0, 1, nx=5, ny=5)
        shifted = evaluate_grid(model, 0, 1, fixed_values={2: 0.7}, nx=5, ny=5)
        np.testing.assert_allclose(shifted.z, base.z + 7.0, atol=1e-12)

    def test_block_contrast_applied(self):
        basis = TermBasis(k=2, include_block=True)
        model = FittedModel.from_coefficients(
            basis, np.array([10.0, 2.5, 1.0, -1.0]))
        neutral = evaluate_grid(model, 0, 1, nx=4, ny=4)
        first = evaluate_grid(model, 0, 1, nx=4, ny=4, block=1)
        second = evaluate_grid(model, 0, 1, nx=4, ny=4, block=2)
        np.testing.assert_allclose(first.z, neutral.z - 2.5, atol=1e-12)
        np.testing.assert_allclose(second.z, neutral.z + 2.5, atol=1e-12)

    def test_factor_index_validation(self):
        model = fo_model(0.0, (1.0, 2.0, 3.0))
        with pytest.raises(DimensionMismatch):
            evaluate_grid(model, 0, 0)
        with pytest.raises(DimensionMismatch):
            evaluate_grid(model, 0, 3)
        with pytest.raises(DimensionMismatch):
            evaluate_grid(model, -1, 1)
        with pytest.raises(DimensionMismatch):
            evaluate_grid(model, 0, 1, fixed_values={0: 0.5})
        with pytest.raises(DimensionMismatch):
            evaluate_grid(model, 0, 1, fixed_values={3: 0.5})

    def test_grid_and_range_validation(self):
        model = fo_model(0.0, (1.0, 2.0))
        with pytest.raises(InvalidRange):
            evaluate_grid(model, 0, 1, nx=1)
        with pytest.raises(InvalidRange):
            evaluate_grid(model, 0, 1, ny=0)
        with pytest.raises(InvalidRange):
            evaluate_grid(model, 0, 1, x_range=(1.0, 1.0))
        with pytest.raises(InvalidRange):
            evaluate_grid(model, 0, 1, y_range=(2.0, -1.0))
        with pytest.raises(InvalidRange):
            evaluate_grid(model, 0, 1, x_range=(float("nan"), 1.0))


class TestDefaults:
    def test_default_ranges(self):
        assert default_ranges(None) == (-1.25, 1.25)
        assert default_ranges(1.0) == (-1.0, 1.0)
        alpha = math.sqrt(2.0)
        assert default_ranges(alpha) == (-alpha, alpha)

    def test_default_levels_interior_and_even(self):
        grid = evaluate_grid(fo_model(0.0, (1.0, 0.0)), 0, 1, nx=3, ny=3)
        levels = default_levels(grid)
        assert len(levels) == 10
        assert all(-1.0 < v < 1.0 for v in levels)
        steps = np.diff([-1.0] + levels + [1.0])
        np.testing.assert_allclose(steps, steps[0], atol=1e-12)

    def test_default_levels_constant_surface(self):
        grid = evaluate_grid(fo_model(4.0, (0.0, 0.0)), 0, 1, nx=3, ny=3)
        assert default_levels(grid) == []


class TestContourGeometry:
    def circle_contour(self):
        model = quad_model(0.0, (0.0, 0.0), np.eye(2))
        grid = evaluate_grid(model, 0, 1, nx=201, ny=201,
                             x_range=(-1.5, 1.5), y_range=(-1.5, 1.5))
        return contours(grid, [1.0]).for_level(1.0)

    def test_unit_circle_radius(self):
        lines = self.circle_contour()
        assert len(lines) == 1
        radii = [math.hypot(x, y) for x, y in lines[0]]
        assert max(abs(r - 1.0) for r in radii) < 1e-3

    def test_circle_loop_closed(self):
        (line,) = self.circle_contour()
        assert line[0] == line[-1]
        assert len(line) > 100
        gaps = [math.hypot(line[m + 1][0] - line[m][0],
                           line[m + 1][1] - line[m][1])
                for m in range(len(line) - 1)]
        assert min(gaps) > 1e-9

    def test_linear_crossing_position_exact(self):
        # nx=40 keeps the crossing off the grid nodes
        grid = evaluate_grid(fo_model(0.0, (1.0, 0.0)), 0, 1, nx=40, ny=40)
        lines = contours(grid, [0.5]).for_level(0.5)
        assert len(lines) == 1
        (line,) = lines
        assert len(line) == 40
        assert max(abs(x - 0.5) for x, _ in line) < 1e-12
        ys = [y for _, y in line]
        assert min(ys) == -1.0 and max(ys) == 1.0

    def test_first_order_contours_straight_and_perpendicular(self):
        gradient = np.array([3.0, 4.0]) / 5.0
        grid = evaluate_grid(fo_model(2.0, (3.0, 4.0)), 0, 1, nx=61, ny=61)
        result = contours(grid)
        assert len(result.levels) == 10
        checked = 0
        for lines in result.polylines:
            for line in lines:
                pts = np.asarray(line)
                if len(pts) < 3:
                    continue
                centered = pts - pts.mean(axis=0)
                _, s, vt = np.linalg.svd(centered)
                assert s[1] <= 1e-10 * max(s[0], 1.0)
                assert abs(vt[0] @ gradient) < 1e-9
                checked += 1
        assert checked >= 10

    def test_saddle_split_follows_center_average(self):
        # one cell, opposite corners above: the center average decides
        # which diagonal the two contour arcs hug
        z = np.array([[1.0, 0.0], [0.0, 1.0]])
        grid = SurfaceGrid(factor_x=0, factor_y=1, fixed_values={},
                           nx=2, ny=2, x_range=(0.0, 1.0),
                           y_range=(0.0, 1.0), z=z)

        def endpoints(level):
            lines = contours(grid, [level]).for_level(level)
            assert all(len(line) == 2 for line in lines)
            return sorted(tuple(sorted(line)) for line in lines)

        # center (0.5) below level 0.6: arcs cut off the two high corners
        np.testing.assert_allclose(
            endpoints(0.6),
            [((0.0, 0.4), (0.4, 0.0)), ((0.6, 1.0), (1.0, 0.6))],
            atol=1e-12)
        # center above level 0.4: arcs run the other diagonal
        np.testing.assert_allclose(
            endpoints(0.4),
            [((0.0, 0.6), (0.4, 1.0)), ((0.6, 0.0), (1.0, 0.4))],
            atol=1e-12)

    def test_level_outside_range_is_empty(self):
        grid = evaluate_grid(fo_model(0.0, (1.0, 0.0)), 0, 1, nx=5, ny=5)
        result = contours(grid, [99.0, 0.0])
        assert result.for_level(99.0) == ()
        assert len(result.for_level(0.0)) == 1

    def test_levels_reported_sorted(self):
        grid = evaluate_grid(fo_model(0.0, (1.0, 0.0)), 0, 1, nx=5, ny=5)
        result = contours(grid, [0.5, -0.5, 0.0])
        assert result.levels == (-0.5, 0.0, 0.5)

    def test_non_finite_level_rejected(self):
        grid = evaluate_grid(fo_model(0.0, (1.0, 0.0)), 0, 1, nx=5, ny=5)
        with pytest.raises(InvalidRange):
            contours(grid, [float("nan")])
        with pytest.raises(InvalidRange):
            contours(grid, [0.0, float("inf")])
