"""Two-phase optimization of a simulated bench process.

Phase 1 screens a corner of the operating window with an axial-free CCD,
fits a first-order model, and follows the steepest-ascent path out of the
region. Phase 2 re-centers where the path stalled, runs a full rotatable
CCD, and locates the stationary point of the fitted quadratic.

Run with:  python3 demos/two_phase_optimization.py
"""

import numpy as np

from rsmkit import (
    FactorSpec,
    TermBasis,
    anova,
    ccd,
    fit,
    stationary_point,
    steepest_path,
    to_natural,
)

RNG = np.random.default_rng(7)


def bench(speed_rpm, temp_c):
    """Hidden truth: a single ridge with its peak near (170 rpm, 44 C)."""
    clean = (80.0
             - 0.002 * (speed_rpm - 170.0) ** 2
             - 0.15 * (temp_c - 44.0) ** 2
             + 0.004 * (speed_rpm - 170.0) * (temp_c - 44.0))
    return clean + RNG.normal(0.0, 0.3)


def run_design(design):
    naturals = to_natural(design)
    return np.array([bench(s, t) for s, t in naturals])


def show_model(model):
    for name, est in zip(model.term_names(), model.coefficients):
        print(f"  {name:<12} {est:10.4f}")
    print(f"  R-squared    {model.r_squared:10.4f}")


# --- Phase 1: first-order screen far from the optimum -----------------------

factors1 = [FactorSpec("speed", 100.0, 150.0, "rpm"),
            FactorSpec("temp", 30.0, 40.0, "C")]
screen = ccd(factors1, alpha=None, n_center=3, seed=1)
y1 = run_design(screen)

fo = TermBasis(2)
model1 = fit(screen, y1, fo)
print("Phase 1: first-order fit on the screening design")
show_model(model1)

table = anova(screen, y1, TermBasis(2, include_twi=True))
lof = table.row("LackOfFit")
print(f"  lack of fit  F = {lof.f_stat:.2f}, p = {lof.p_value:.3f}"
      "  (curvature is real; the ascent will stall eventually)")

path = steepest_path(model1, "maximize", radii=[0.5, 1.0, 1.5, 2.0])
print("\nSteepest ascent from the phase-1 center:")
print(f"  {'radius':>6} {'speed':>8} {'temp':>7} {'pred':>7}")
for step in path.steps:
    speed = factors1[0].to_natural(step.coded_point[0])
    temp = factors1[1].to_natural(step.coded_point[1])
    flag = "  (extrapolated)" if step.extrapolated else ""
    print(f"  {step.radius:6.2f} {speed:8.1f} {temp:7.1f} {step.predicted:7.2f}{flag}")

# --- Phase 2: quadratic fit around where the path points --------------------

last = path.steps[-1]
center = (factors1[0].to_natural(last.coded_point[0]),
          factors1[1].to_natural(last.coded_point[1]))
factors2 = [FactorSpec("speed", center[0] - 25.0, center[0] + 25.0, "rpm"),
            FactorSpec("temp", center[1] - 5.0, center[1] + 5.0, "C")]

followup = ccd(factors2, alpha="rotatable", n_center=4, seed=2)
y2 = run_design(followup)
model2 = fit(followup, y2, TermBasis(2, include_twi=True, include_pq=True))
print(f"\nPhase 2: rotatable CCD centered at "
      f"({center[0]:.0f} rpm, {center[1]:.1f} C)")
show_model(model2)

sp = stationary_point(model2)
print(f"\nStationary point: {sp.nature}")
if sp.coded is not None:
    best = [f.to_natural(c) for f, c in zip(factors2, sp.coded)]
    print(f"  speed {best[0]:.1f} rpm, temp {best[1]:.1f} C, "
          f"predicted yield {sp.predicted:.2f}")
    print(f"  curvature eigenvalues: {sp.eigenvalues.round(3)}")
print("\n(True peak is at 170 rpm, 44 C with mean yield 80.)")
