"""Experimental design generation in coded units.

Builds full factorial cores, Central Composite Designs (factorial core +
center points + optional axial points), and Box-Behnken designs, with block
assignment, whole-schema replication, and seeded run-order randomization.
Also owns the affine coded<->natural mapping for each factor.

Coded convention: low = -1, high = +1, center = 0. Axial points sit at
distance alpha on one axis. Randomization permutes run order within each
block only, so blocks stay contiguous execution groups.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionOutOfRange,
    EmptyDesign,
    InvalidAlpha,
    InvalidFactor,
    InvalidParameter,
    NonFiniteInput,
    UnsupportedDesign,
)

MIN_FACTORS = 2
MAX_FACTORS = 8

#: Alpha rules accepted by :func:`ccd` besides an explicit positive float.
ROTATABLE = "rotatable"
FACE = "face"


class DesignReplicationWarning(UserWarning):
    """No run setting is replicated, so pure error cannot be estimated."""


class PointType(str, Enum):
    FACTORIAL = "factorial"
    CENTER = "center"
    AXIAL = "axial"


@dataclass(frozen=True)
class FactorSpec:
    """A controllable input with its natural-unit range.

    The coded value of a natural setting X is (X - center) / half_range with
    center = (high + low) / 2 and half_range = (high - low) / 2.
    """

    name: str
    low: float
    high: float
    unit_label: str = ""

    def __post_init__(self):
        if not self.name or not str(self.name).strip():
            raise InvalidFactor("factor name must be nonempty")
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise InvalidFactor(f"factor {self.name!r}: bounds must be finite")
        if not self.low < self.high:
            raise InvalidFactor(
                f"factor {self.name!r}: low ({self.low}) must be strictly below "
                f"high ({self.high})"
            )

    @property
    def center(self) -> float:
        return (self.high + self.low) / 2.0

    @property
    def half_range(self) -> float:
        return (self.high - self.low) / 2.0

    def to_natural(self, coded: float) -> float:
        if not math.isfinite(coded):
            raise NonFiniteInput(f"coded value for {self.name!r} is not finite")
        return self.center + self.half_range * coded

    def to_coded(self, natural: float) -> float:
        if not math.isfinite(natural):
            raise NonFiniteInput(f"natural value for {self.name!r} is not finite")
        return (natural - self.center) / self.half_range


@dataclass(frozen=True)
class DesignPoint:
    """One experimental run in coded units.

    std_order is the deterministic construction position (1-based, global
    across blocks); run_order is the randomized execution position. The pair
    (std_order, block) identifies a run for response ingestion.
    """

    coded: tuple[float, ...]
    point_type: PointType
    block: int
    std_order: int
    run_order: int


@dataclass(frozen=True)
class Design:
    """An ordered set of runs over k factors, in coded units."""

    factors: tuple[FactorSpec, ...]
    points: tuple[DesignPoint, ...]
    alpha: float | None = None
    n_center_per_block: int = 0
    replicates: int = 1
    seed: int = 0

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def n_runs(self) -> int:
        return len(self.points)

    @property
    def n_blocks(self) -> int:
        return max(p.block for p in self.points)

    @property
    def factor_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.factors)

    def coded_matrix(self) -> np.ndarray:
        """Coded settings as an (n, k) array, rows in points order."""
        return np.array([p.coded for p in self.points], dtype=float)

    def block_labels(self) -> np.ndarray:
        return np.array([p.block for p in self.points], dtype=int)

    def ref(self) -> str:
        """Short content hash identifying this design."""
        h = hashlib.sha1()
        h.update(repr([(f.name, f.low, f.high, f.unit_label) for f in self.factors]).encode())
        h.update(repr([(p.coded, p.point_type.value, p.block, p.std_order, p.run_order)
                       for p in self.points]).encode())
        h.update(repr((self.alpha, self.n_center_per_block, self.replicates, self.seed)).encode())
        return h.hexdigest()[:12]

    def has_replicates(self) -> bool:
        """True when some coded setting repeats within a block."""
        seen: dict[tuple, int] = {}
        for p in self.points:
            key = (p.block, tuple(round(c, 12) for c in p.coded))
            seen[key] = seen.get(key, 0) + 1
            if seen[key] >= 2:
                return True
        return False


def _check_factors(factors: list[FactorSpec] | tuple[FactorSpec, ...]) -> tuple[FactorSpec, ...]:
    factors = tuple(factors)
    k = len(factors)
    if k < MIN_FACTORS or k > MAX_FACTORS:
        raise DimensionOutOfRange(
            f"designs support {MIN_FACTORS} to {MAX_FACTORS} factors, got {k}"
        )
    names = [f.name for f in factors]
    if len(set(names)) != len(names):
        raise InvalidFactor(f"factor names must be unique, got {names}")
    return factors


def _yates_core(k: int) -> list[tuple[float, ...]]:
    # Standard order: first factor alternates fastest.
    runs = []
    for i in range(2 ** k):
        runs.append(tuple(1.0 if (i >> j) & 1 else -1.0 for j in range(k)))
    return runs


def _default_factors(k: int) -> tuple[FactorSpec, ...]:
    return tuple(FactorSpec(f"x{j + 1}", -1.0, 1.0) for j in range(k))


def _assemble(
    factors: tuple[FactorSpec, ...],
    blocks: list[list[tuple[tuple[float, ...], PointType]]],
    alpha: float | None,
    n_center_per_block: int,
    replicates: int,
    seed: int,
    randomize: bool = True,
) -> Design:
    """Assign std_order globally and run_order as a seeded permutation within
    each block; blocks occupy contiguous run_order ranges."""
    rng = np.random.default_rng(seed)
    points: list[DesignPoint] = []
    std = 0
    offset = 0
    for label, runs in enumerate(blocks, start=1):
        if not runs:
            raise InvalidParameter(f"block {label} would be empty")
        order = rng.permutation(len(runs)) if randomize else np.arange(len(runs))
        for i, (coded, ptype) in enumerate(runs):
            std += 1
            points.append(
                DesignPoint(
                    coded=coded,
                    point_type=ptype,
                    block=label,
                    std_order=std,
                    run_order=offset + int(order[i]) + 1,
                )
            )
        offset += len(runs)
    return Design(
        factors=factors,
        points=tuple(points),
        alpha=alpha,
        n_center_per_block=n_center_per_block,
        replicates=replicates,
        seed=seed,
    )


def full_factorial(k: int) -> Design:
    """Two-level full factorial in standard (Yates) order.

    Returns 2^k runs with every coordinate +-1, a single block, and
    run_order equal to std_order (no randomization).
    """
    if not isinstance(k, int) or k < MIN_FACTORS or k > MAX_FACTORS:
        raise DimensionOutOfRange(
            f"full factorial supports {MIN_FACTORS} <= k <= {MAX_FACTORS}, got {k}"
        )
    runs = [(coded, PointType.FACTORIAL) for coded in _yates_core(k)]
    return _assemble(
        _default_factors(k), [runs], alpha=None, n_center_per_block=0,
        replicates=1, seed=0, randomize=False,
    )


def ccd(
    factors: list[FactorSpec] | tuple[FactorSpec, ...],
    alpha: float | str | None = ROTATABLE,
    n_center: int = 1,
    replicates: int = 1,
    n_blocks: int = 1,
    seed: int = 0,
    fraction: str = "full",
) -> Design:
    """Central Composite Design: replicated factorial core, center points per
    block, and (unless ``alpha`` is None) 2k axial points.

    Parameters
    ----------
    factors : list of FactorSpec
        Between 2 and 8 factors with unique names.
    alpha : "rotatable", "face", positive float, or None
        Axial distance rule. "rotatable" uses (core run count)^(1/4), which
        for an unreplicated core is (2^k)^(1/4); "face" places axial points
        on the cube faces (alpha = 1); an explicit float is used verbatim;
        None drops the axial component entirely (factorial + center only).
    n_center : int
        Center points added to every block.
    replicates : int
        Whole-core replication count.
    n_blocks : 1 or 2
        With 2 blocks and axial points, the factorial core and its centers
        form block 1 and the axial runs (plus centers) form block 2. With 2
        blocks and ``alpha=None``, core replicates are split across blocks,
        block 1 taking the extra replicate when the count is odd.
    seed : int
        Seed for the within-block run-order permutation.
    fraction : str
        Only "full" cores are supported; anything else is rejected.
    """
    factors = _check_factors(factors)
    k = len(factors)
    if fraction != "full":
        raise UnsupportedDesign(
            f"fractional factorial cores are not supported (fraction={fraction!r})"
        )
    if n_center < 0:
        raise InvalidParameter(f"n_center must be >= 0, got {n_center}")
    if replicates < 1:
        raise InvalidParameter(f"replicates must be >= 1, got {replicates}")
    if n_blocks not in (1, 2):
        raise InvalidParameter(f"n_blocks must be 1 or 2, got {n_blocks}")

    core = _yates_core(k)
    n_core = replicates * len(core)

    if alpha is None:
        alpha_value = None
    elif alpha == ROTATABLE:
        alpha_value = float(n_core) ** 0.25
    elif alpha == FACE:
        alpha_value = 1.0
    elif isinstance(alpha, (int, float)) and not isinstance(alpha, bool):
        if not math.isfinite(float(alpha)) or float(alpha) <= 0.0:
            raise InvalidAlpha(f"explicit alpha must be > 0, got {alpha}")
        alpha_value = float(alpha)
    else:
        raise InvalidParameter(f"unrecognized alpha rule {alpha!r}")

    center = tuple(0.0 for _ in range(k))
    centers = [(center, PointType.CENTER)] * n_center
    core_runs = [(coded, PointType.FACTORIAL) for _ in range(replicates) for coded in core]

    axial_runs: list[tuple[tuple[float, ...], PointType]] = []
    if alpha_value is not None:
        for j in range(k):
            for sign in (-1.0, +1.0):
                coded = tuple(sign * alpha_value if i == j else 0.0 for i in range(k))
                axial_runs.append((coded, PointType.AXIAL))

    if n_blocks == 1:
        blocks = [core_runs + axial_runs + centers]
    elif alpha_value is not None:
        blocks = [core_runs + centers, axial_runs + centers]
    else:
        half = (replicates + 1) // 2
        first = [(coded, PointType.FACTORIAL) for _ in range(half) for coded in core]
        second = [(coded, PointType.FACTORIAL) for _ in range(replicates - half) for coded in core]
        blocks = [first + centers, second + centers]

    total = sum(len(b) for b in blocks)
    if total < k + 1:
        raise EmptyDesign(f"design would have {total} runs; needs at least {k + 1}")

    design = _assemble(
        factors, blocks, alpha=alpha_value, n_center_per_block=n_center,
        replicates=replicates, seed=seed,
    )
    if not design.has_replicates():
        warnings.warn(
            "no run setting is replicated; pure error and lack of fit will be "
            "unavailable (add center points or replicates)",
            DesignReplicationWarning,
            stacklevel=2,
        )
    return design


def box_behnken(
    factors: list[FactorSpec] | tuple[FactorSpec, ...],
    n_center: int = 3,
    seed: int = 0,
) -> Design:
    """Box-Behnken design: for every factor pair, the four +-1 combinations
    with all other factors at center, plus ``n_center`` center points."""
    factors = tuple(factors)
    k = len(factors)
    if k < 3 or k > 5:
        raise DimensionOutOfRange(f"Box-Behnken supports 3 <= k <= 5, got {k}")
    _check_factors(factors)
    if n_center < 0:
        raise InvalidParameter(f"n_center must be >= 0, got {n_center}")

    runs: list[tuple[tuple[float, ...], PointType]] = []
    for a in range(k):
        for b in range(a + 1, k):
            for xa, xb in ((-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)):
                coded = tuple(
                    xa if i == a else xb if i == b else 0.0 for i in range(k)
                )
                runs.append((coded, PointType.FACTORIAL))
    center = tuple(0.0 for _ in range(k))
    runs.extend([(center, PointType.CENTER)] * n_center)

    design = _assemble(
        factors, [runs], alpha=None, n_center_per_block=n_center,
        replicates=1, seed=seed,
    )
    if not design.has_replicates():
        warnings.warn(
            "no run setting is replicated; pure error and lack of fit will be "
            "unavailable (use n_center >= 2)",
            DesignReplicationWarning,
            stacklevel=2,
        )
    return design


def to_natural(design: Design) -> np.ndarray:
    """Natural-unit settings for every run, (n, k), rows in points order."""
    out = np.empty((design.n_runs, design.k), dtype=float)
    for i, p in enumerate(design.points):
        for j, f in enumerate(design.factors):
            out[i, j] = f.to_natural(p.coded[j])
    return out


def to_coded(
    factors: list[FactorSpec] | tuple[FactorSpec, ...],
    natural_point: "list[float] | tuple[float, ...] | np.ndarray",
) -> np.ndarray:
    """Coded vector for one natural-unit point."""
    natural_point = np.asarray(natural_point, dtype=float)
    if natural_point.shape != (len(factors),):
        raise DimensionMismatch(
            f"natural point has shape {natural_point.shape}, expected ({len(factors)},)"
        )
    return np.array([f.to_coded(x) for f, x in zip(factors, natural_point)])
