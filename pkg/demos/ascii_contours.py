"""Terminal contour map of a fitted saddle, descent path overlaid.

The contour extractor returns polylines in coded units; this demo rasters
them onto a character grid, which is enough to eyeball a surface without
any plotting stack. Digits label levels from low to high, 'o' marks the
steepest-descent steps, 'S' the stationary point.

Run with:  python3 demos/ascii_contours.py
"""

import math

import numpy as np

from rsmkit import (
    FittedModel,
    TermBasis,
    contours,
    evaluate_grid,
    stationary_point,
    steepest_path,
)

WIDTH, HEIGHT = 65, 31
X_RANGE = Y_RANGE = (-1.6, 1.6)

basis = TermBasis(2, include_twi=True, include_pq=True)
model = FittedModel.from_coefficients(
    basis, [60.0, 4.0, -2.0, 3.0, 1.5, -2.5])

grid = evaluate_grid(model, 0, 1, nx=81, ny=81,
                     x_range=X_RANGE, y_range=Y_RANGE)
level_set = contours(grid)
canvas = [[" "] * WIDTH for _ in range(HEIGHT)]


def plot(x, y, glyph):
    col = round((x - X_RANGE[0]) / (X_RANGE[1] - X_RANGE[0]) * (WIDTH - 1))
    row = round((Y_RANGE[1] - y) / (Y_RANGE[1] - Y_RANGE[0]) * (HEIGHT - 1))
    if 0 <= col < WIDTH and 0 <= row < HEIGHT:
        canvas[row][col] = glyph


for index, polylines in enumerate(level_set.polylines):
    glyph = str(index % 10)
    for polyline in polylines:
        for (x0, y0), (x1, y1) in zip(polyline, polyline[1:]):
            length = math.hypot(x1 - x0, y1 - y0)
            samples = max(2, int(length / 0.02))
            for t in np.linspace(0.0, 1.0, samples):
                plot(x0 + t * (x1 - x0), y0 + t * (y1 - y0), glyph)

path = steepest_path(model, "minimize", radii=[0.4, 0.8, 1.2])
for step in path.steps:
    plot(step.coded_point[0], step.coded_point[1], "o")
plot(0.0, 0.0, "O")

sp = stationary_point(model)
if sp.coded is not None:
    plot(sp.coded[0], sp.coded[1], "S")

print("\n".join("".join(row).rstrip() for row in canvas))
print()
for index, level in enumerate(level_set.levels):
    print(f"  {index % 10} = {level:7.2f}", end="")
    if index % 4 == 3:
        print()
print()
print(f"\nSurface is a {sp.nature.lower()}; descent steps 'o' walk the "
      "cheapest direction away from the origin 'O'.")
