"""Difference sequences: validation, classical choices, and optimal ones.

A difference sequence of order r is a vector (d_0, ..., d_r) with
sum(d) = 0 and sum(d^2) = 1.  Applied to r+1 consecutive responses it
cancels a locally constant mean while keeping unit noise scale, which is
what makes squared differences usable as local variance proxies.  The
sequence also controls a variance inflation constant C >= (2r+1)/r; the
minimizing sequences are computed here numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, optimize

from .errors import (
    BadParameterError,
    ConvergenceFailureError,
    DegenerateEndpointError,
    NonPositiveOrderError,
    NormNotOneError,
    SumNotZeroError,
    TooShortError,
    UnknownKindError,
)

__all__ = [
    "DifferenceSequence",
    "validate",
    "standard_sequence",
    "variance_factor",
    "min_constant",
    "optimal_sequence",
]

_CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DifferenceSequence:
    """An order-r coefficient vector (d_0, ..., d_r).

    Instances are validated on construction; use :func:`validate` to turn
    raw coefficient lists into sequences.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.ndim != 1 or coeffs.size < 2:
            raise TooShortError(
                f"need at least two coefficients, got {coeffs.size}"
            )
        total = float(coeffs.sum())
        if abs(total) > _CONSTRAINT_TOL:
            raise SumNotZeroError(f"coefficients sum to {total!r}, not 0")
        sq = float(coeffs @ coeffs)
        if abs(sq - 1.0) > _CONSTRAINT_TOL:
            raise NormNotOneError(f"squared coefficients sum to {sq!r}, not 1")
        if coeffs[0] == 0.0 or coeffs[-1] == 0.0:
            raise DegenerateEndpointError(
                "d_0 and d_r must be nonzero (true order would be smaller)"
            )

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def to_list(self) -> list[float]:
        """Coefficients as plain floats (JSON-ready)."""
        return [float(c) for c in self.coeffs]


def validate(coeffs) -> DifferenceSequence:
    """Check the defining constraints and wrap the coefficients.

    Raises TooShortError, SumNotZeroError, NormNotOneError or
    DegenerateEndpointError when the corresponding constraint fails.
    """
    return DifferenceSequence(np.asarray(coeffs, dtype=float))


def standard_sequence(kind: str) -> DifferenceSequence:
    """Return a classical difference sequence by name.

    ``first_difference`` is (1, -1)/sqrt(2); ``gsjs`` is the symmetric
    three-point pattern (1, -2, 1)/sqrt(6), i.e. (1/2, -1, 1/2) rescaled
    to unit squared norm.
    """
    if kind == "first_difference":
        return DifferenceSequence(np.array([1.0, -1.0]) / np.sqrt(2.0))
    if kind == "gsjs":
        return DifferenceSequence(np.array([1.0, -2.0, 1.0]) / np.sqrt(6.0))
    raise UnknownKindError(f"unknown sequence kind {kind!r}")


def _lag_sums(coeffs: np.ndarray) -> np.ndarray:
    """Autocovariance-style sums a_k = sum_{j=0}^{r-k} d_j d_{j+k}, k=1..r."""
    r = coeffs.size - 1
    return np.array([coeffs[: r + 1 - k] @ coeffs[k:] for k in range(1, r + 1)])


def variance_factor(seq: DifferenceSequence) -> float:
    """Variance inflation constant C = 2 (1 + 2 sum_k a_k^2) of a sequence.

    C >= (2r+1)/r for every valid order-r sequence, with equality exactly
    when every lag sum a_k equals -1/(2r).
    """
    a = _lag_sums(seq.coeffs)
    return float(2.0 * (1.0 + 2.0 * (a @ a)))


def min_constant(r: int) -> float:
    """Smallest achievable variance factor for order r: (2r+1)/r."""
    if r < 1:
        raise NonPositiveOrderError(f"order must be >= 1, got {r}")
    return (2.0 * r + 1.0) / r


def _objective(z: np.ndarray, basis: np.ndarray):
    """Sum of squared lag sums and its gradient, on the chart z -> B z/|z|.

    The columns of ``basis`` span the zero-sum hyperplane orthonormally,
    so normalizing z enforces both constraints at once.
    """
    nz = np.linalg.norm(z)
    u = z / nz
    d = basis @ u
    r = d.size - 1
    a = _lag_sums(d)
    grad_d = np.zeros_like(d)
    for k in range(1, r + 1):
        grad_d[: r + 1 - k] += 2.0 * a[k - 1] * d[k:]
        grad_d[k:] += 2.0 * a[k - 1] * d[: r + 1 - k]
    grad_u = basis.T @ grad_d
    # project out the radial direction (objective is scale-invariant)
    grad_z = (grad_u - u * (u @ grad_u)) / nz
    return float(a @ a), grad_z


def _canonicalize(coeffs: np.ndarray) -> np.ndarray:
    """Pick the representative with d_0 > 0, lexicographically largest.

    Global sign flips and coefficient reversal leave the variance factor
    unchanged, so all four images are equivalent optima.
    """
    images = [coeffs, -coeffs, coeffs[::-1], -coeffs[::-1]]
    candidates = [c for c in images if c[0] > 0.0]
    return np.array(max(candidates, key=tuple))


def optimal_sequence(
    r: int,
    tolerance: float = 1e-8,
    restarts: int = 8,
    seed: int = 20070422,
) -> DifferenceSequence:
    """Numerically minimize the variance factor over order-r sequences.

    Runs seeded quasi-Newton descents from ``restarts`` random starting
    points on the constraint manifold and keeps the best.  The result
    satisfies variance_factor within ``tolerance`` of (2r+1)/r, else a
    ConvergenceFailureError is raised.
    """
    if r < 1:
        raise NonPositiveOrderError(f"order must be >= 1, got {r}")
    if tolerance <= 0:
        raise BadParameterError(f"tolerance must be > 0, got {tolerance}")
    target = min_constant(r)
    basis = linalg.null_space(np.ones((1, r + 1)))
    rng = np.random.default_rng(seed)
    best_c = np.inf
    best_d = None
    for _ in range(restarts):
        z0 = rng.standard_normal(r)
        res = optimize.minimize(
            _objective,
            z0,
            args=(basis,),
            jac=True,
            method="BFGS",
            options={"gtol": 1e-12, "maxiter": 1000},
        )
        if np.linalg.norm(res.jac) > 1e-10:
            continue
        d = basis @ (res.x / np.linalg.norm(res.x))
        c = 2.0 * (1.0 + 2.0 * res.fun)
        if c < best_c:
            best_c, best_d = c, d
    if best_d is None or best_c - target > tolerance:
        raise ConvergenceFailureError(
            f"no restart reached C within {tolerance} of {target} for r={r} "
            f"(best C = {best_c})"
        )
    # exact renormalization guards against drift in the last BFGS step
    best_d = best_d / np.linalg.norm(best_d)
    best_d = best_d - best_d.mean()
    best_d = best_d / np.linalg.norm(best_d)
    return DifferenceSequence(_canonicalize(best_d))
