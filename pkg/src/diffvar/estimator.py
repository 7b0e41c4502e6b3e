"""Variance function estimators built on difference sequences.

The central estimator forms order-r pseudoresiduals, squares them, and
smooths the squares by local polynomial regression; the classical
global estimators (first differences, the symmetric three-point
pattern, and arbitrary-sequence averages) are provided as baselines.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .diffseq import DifferenceSequence
from .errors import TooFewObservationsError
from .smoother import SmootherConfig, fit_on_grid

__all__ = [
    "Sample",
    "PseudoresidualSeries",
    "EstimateProvenance",
    "VarianceEstimate",
    "pseudoresiduals",
    "estimate_variance",
    "clip_at_zero",
    "rice_estimate",
    "gsjs_estimate",
    "hkt_estimate",
]


@dataclass(frozen=True, eq=False)
class Sample:
    """Fixed-design observations (x_i, y_i) with x strictly increasing in (0, 1)."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if xs.ndim != 1 or ys.ndim != 1 or xs.size != ys.size:
            raise ValueError("xs and ys must be 1-d arrays of equal length")
        if xs.size < 2:
            raise TooFewObservationsError(f"need n >= 2, got {xs.size}")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("design points must be strictly increasing")
        if xs[0] <= 0.0 or xs[-1] >= 1.0:
            raise ValueError("design points must lie strictly inside (0, 1)")

    @property
    def n(self) -> int:
        return self.xs.size


@dataclass(frozen=True, eq=False)
class PseudoresidualSeries:
    """Order-r contrasts of consecutive responses.

    ``values[k]`` is the contrast whose window starts at observation k;
    it is attached to the design point ``center_xs[k]``, which sits
    floor(r/2) positions into the window.  ``first_index`` is the
    1-based index of the first attached observation, floor(r/2) + 1.
    """

    order: int
    first_index: int
    values: np.ndarray
    center_xs: np.ndarray


def pseudoresiduals(sample: Sample, seq: DifferenceSequence) -> PseudoresidualSeries:
    """All n - r contrasts sum_j d_j y_{k+j}, centered per the offset convention."""
    r = seq.order
    n = sample.n
    if n < r + 1:
        raise TooFewObservationsError(f"need n >= {r + 1} for order {r}, got {n}")
    m = n - r
    d = seq.coeffs
    values = np.zeros(m)
    for j in range(r + 1):
        values += d[j] * sample.ys[j : j + m]
    half = r // 2
    return PseudoresidualSeries(
        order=r,
        first_index=half + 1,
        values=values,
        center_xs=sample.xs[half : half + m],
    )


@dataclass(frozen=True)
class EstimateProvenance:
    """How a variance curve was produced."""

    sequence: DifferenceSequence
    config: SmootherConfig
    expanded_points: tuple[float, ...]
    has_negative_values: bool
    clipped_at_zero: bool = False


@dataclass(frozen=True, eq=False)
class VarianceEstimate:
    """Fitted variance curve on a grid, with provenance.

    Values are not sign-constrained; negative fits are reported as-is
    and flagged, so risk experiments see the raw estimator.  Use
    :func:`clip_at_zero` when a nonnegative curve is required.
    """

    grid: np.ndarray
    values: np.ndarray
    provenance: EstimateProvenance


def estimate_variance(
    sample: Sample,
    seq: DifferenceSequence,
    config: SmootherConfig,
    grid,
    expand_to_minimum: bool = False,
) -> VarianceEstimate:
    """Smooth squared pseudoresiduals onto ``grid``.

    Each grid value is the intercept of the local polynomial fit of the
    squared contrasts, equivalently the effective-weight inner product
    with them.
    """
    series = pseudoresiduals(sample, seq)
    fits = fit_on_grid(
        series.center_xs,
        series.values**2,
        config,
        grid,
        expand_to_minimum=expand_to_minimum,
    )
    values = np.array([f.value for f in fits])
    expanded = tuple(float(f.weights.eval_point) for f in fits if f.expanded)
    return VarianceEstimate(
        grid=np.asarray(grid, dtype=float),
        values=values,
        provenance=EstimateProvenance(
            sequence=seq,
            config=config,
            expanded_points=expanded,
            has_negative_values=bool(np.any(values < 0.0)),
        ),
    )


def clip_at_zero(estimate: VarianceEstimate) -> VarianceEstimate:
    """Opt-in post-processor: clamp negative fits to zero, flagged."""
    return VarianceEstimate(
        grid=estimate.grid,
        values=np.maximum(estimate.values, 0.0),
        provenance=replace(estimate.provenance, clipped_at_zero=True),
    )


def rice_estimate(sample: Sample) -> float:
    """Mean squared first difference over 2: the classical constant-variance estimate."""
    if sample.n < 2:
        raise TooFewObservationsError("need n >= 2")
    diffs = np.diff(sample.ys)
    return float(diffs @ diffs / (2.0 * (sample.n - 1)))


def gsjs_estimate(sample: Sample) -> float:
    """Three-point contrast estimate (1/2, -1, 1/2), normalized by 2/(3(n-2))."""
    y = sample.ys
    if sample.n < 3:
        raise TooFewObservationsError("need n >= 3")
    inner = 0.5 * y[:-2] - y[1:-1] + 0.5 * y[2:]
    return float(2.0 * (inner @ inner) / (3.0 * (sample.n - 2)))


def hkt_estimate(sample: Sample, seq: DifferenceSequence) -> float:
    """Average squared order-r contrast: the general constant-variance estimate."""
    series = pseudoresiduals(sample, seq)
    v = series.values
    return float(v @ v / v.size)
