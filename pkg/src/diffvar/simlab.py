"""Monte Carlo laboratory for the variance estimators.

Data are generated from y_i = g(x_i) + sqrt(V(x_i)) * eps_i on a fixed
design, with unit-variance error laws.  On top of that the module
measures pointwise and integrated squared risks, fits log-log
convergence slopes against the n^(-2*gamma/(2*gamma+1)) benchmark,
inspects the bias/variance structure in the bandwidth, runs normality
diagnostics of the estimator's replication distribution, and compares
rough-mean against flat-mean risk.

Reproducibility contract: every experiment takes one master seed;
replication streams are spawned from it, so results are bit-identical
for a given (seed, replications) regardless of thread count or
execution order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from .bandwidth import rate_optimal_bandwidth
from .diffseq import DifferenceSequence
from .errors import BadParameterError, BadScenarioError, DiffvarError
from .estimator import Sample, estimate_variance, pseudoresiduals
from .kernels import KernelSpec, kernel
from .smoother import SmootherConfig, effective_weights

__all__ = [
    "FunctionSpec",
    "function_spec",
    "ErrorLaw",
    "HoelderClassSpec",
    "Scenario",
    "smooth_scenario",
    "constant_scenario",
    "rough_mean_scenario",
    "quadratic_variance_scenario",
    "EstimatorConfig",
    "RiskValue",
    "RiskReport",
    "risk_report",
    "RateReport",
    "NormalityReport",
    "BiasVarianceReport",
    "MeanEffectReport",
    "generate_sample",
    "pointwise_risk",
    "global_risk",
    "rate_experiment",
    "rate_schedule",
    "normality_experiment",
    "normality_diagnostics",
    "bias_variance_experiment",
    "mean_effect_experiment",
]


# --- named mean / variance functions -----------------------------------

def _f_constant(x, value=0.0):
    return np.full_like(np.asarray(x, dtype=float), float(value))


def _f_sine(x, offset=0.0, amplitude=1.0):
    return offset + amplitude * np.sin(2.0 * np.pi * np.asarray(x, dtype=float))


def _f_cosine(x, offset=0.0, amplitude=1.0):
    return offset + amplitude * np.cos(2.0 * np.pi * np.asarray(x, dtype=float))


def _f_quadratic(x, offset=0.0, curvature=1.0, center=0.5):
    x = np.asarray(x, dtype=float)
    return offset + curvature * (x - center) ** 2


def _f_abs_power(x, exponent=0.5, center=0.5, scale=1.0):
    x = np.asarray(x, dtype=float)
    return scale * np.abs(x - center) ** exponent


_FUNCTIONS = {
    "constant": _f_constant,
    "sine": _f_sine,
    "cosine": _f_cosine,
    "quadratic": _f_quadratic,
    "abs_power": _f_abs_power,
}


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """A named mean/variance function with parameters, JSON-representable."""

    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in _FUNCTIONS:
            raise BadScenarioError(
                f"unknown function {self.name!r}; choose from {sorted(_FUNCTIONS)}"
            )
        try:
            self(np.array([0.5]))
        except TypeError as exc:
            raise BadScenarioError(
                f"bad parameters for {self.name!r}: {exc}"
            ) from exc

    def __call__(self, x):
        return _FUNCTIONS[self.name](x, **self.params)

    def to_dict(self) -> dict:
        return {"name": self.name, "params": dict(self.params)}


def function_spec(name: str, **params) -> FunctionSpec:
    return FunctionSpec(name, params)


# --- error laws and scenario --------------------------------------------

@dataclass(frozen=True)
class ErrorLaw:
    """Unit-variance error distribution with finite fourth moment."""

    kind: str = "gaussian"
    df: float | None = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "scaled_uniform", "student_t"):
            raise BadScenarioError(f"unknown error law {self.kind!r}")
        if self.kind == "student_t":
            if self.df is None or self.df <= 8:
                raise BadScenarioError(
                    "student_t needs df > 8 for the required moments"
                )

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.standard_normal(size)
        if self.kind == "scaled_uniform":
            s = math.sqrt(3.0)
            return rng.uniform(-s, s, size)
        return rng.standard_t(self.df, size) * math.sqrt((self.df - 2.0) / self.df)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "df": self.df}


@dataclass(frozen=True)
class HoelderClassSpec:
    """Smoothness class parameters a scenario function is declared to satisfy."""

    gamma: float
    c1: float
    c2: float
    delta: float = 0.0

    def __post_init__(self):
        if self.gamma <= 0 or self.c1 <= 0 or self.c2 <= 0 or self.delta < 0:
            raise BadScenarioError("class constants must be positive (delta >= 0)")


@dataclass(frozen=True, eq=False)
class Scenario:
    """A complete simulation configuration.

    ``design`` is either None (equispaced x_i = i/(n+1)) or an explicit
    strictly increasing vector inside (0, 1) of length n.
    """

    label: str
    mean_fn: FunctionSpec
    var_fn: FunctionSpec
    n: int
    error_law: ErrorLaw = ErrorLaw("gaussian")
    mean_class: HoelderClassSpec = HoelderClassSpec(2.0, 40.0, 3.0)
    var_class: HoelderClassSpec = HoelderClassSpec(2.0, 10.0, 0.75, delta=0.25)
    design: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 2:
            raise BadScenarioError(f"need n >= 2, got {self.n}")
        if self.design is not None:
            d = np.asarray(self.design, dtype=float)
            object.__setattr__(self, "design", d)
            if d.size != self.n or np.any(np.diff(d) <= 0):
                raise BadScenarioError(
                    "explicit design must be strictly increasing of length n"
                )
            if d[0] <= 0.0 or d[-1] >= 1.0:
                raise BadScenarioError("design points must lie inside (0, 1)")

    def design_points(self) -> np.ndarray:
        if self.design is not None:
            return self.design
        return np.arange(1, self.n + 1) / (self.n + 1.0)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "mean_fn": self.mean_fn.to_dict(),
            "var_fn": self.var_fn.to_dict(),
            "n": self.n,
            "error_law": self.error_law.to_dict(),
            "design": "equispaced" if self.design is None else "explicit",
        }


def smooth_scenario(n: int, error_law: ErrorLaw = ErrorLaw("gaussian")) -> Scenario:
    """Default smooth case: g = 2 + sin(2 pi x), V = 0.5 + 0.25 sin(2 pi x)."""
    return Scenario(
        label=f"smooth-n{n}-{error_law.kind}",
        mean_fn=function_spec("sine", offset=2.0, amplitude=1.0),
        var_fn=function_spec("sine", offset=0.5, amplitude=0.25),
        n=n,
        error_law=error_law,
    )


def constant_scenario(
    n: int, mean: float = 1.0, variance: float = 2.0,
    error_law: ErrorLaw = ErrorLaw("gaussian"),
) -> Scenario:
    """Homoscedastic case with constant mean."""
    if variance <= 0:
        raise BadScenarioError("variance must be positive")
    return Scenario(
        label=f"constant-n{n}-{error_law.kind}",
        mean_fn=function_spec("constant", value=mean),
        var_fn=function_spec("constant", value=variance),
        n=n,
        error_law=error_law,
        var_class=HoelderClassSpec(2.0, 10.0, variance, delta=variance / 2.0),
    )


def rough_mean_scenario(n: int, beta: float,
                        error_law: ErrorLaw = ErrorLaw("gaussian")) -> Scenario:
    """Cusp mean |x - 1/2|^beta over the default smooth variance."""
    if not 0.0 < beta < 1.0:
        raise BadScenarioError(f"need 0 < beta < 1, got {beta}")
    return Scenario(
        label=f"rough-mean-b{beta}-n{n}",
        mean_fn=function_spec("abs_power", exponent=beta),
        var_fn=function_spec("sine", offset=0.5, amplitude=0.25),
        n=n,
        error_law=error_law,
        mean_class=HoelderClassSpec(beta, 1.0, 1.0),
    )


def quadratic_variance_scenario(
    n: int, offset: float = 0.5, curvature: float = 3.0,
    error_law: ErrorLaw = ErrorLaw("gaussian"),
) -> Scenario:
    """Variance with constant second derivative, for bias-structure studies.

    A quadratic variance makes the second-order bias term exact at every
    bandwidth, so log-log slopes in h are clean.  Moderate curvature
    keeps the variance roughly level across wide windows, which the
    1/(n h) variance law needs.
    """
    return Scenario(
        label=f"quadratic-variance-n{n}",
        mean_fn=function_spec("sine", offset=2.0, amplitude=1.0),
        var_fn=function_spec("quadratic", offset=offset, curvature=curvature, center=0.5),
        n=n,
        error_law=error_law,
        var_class=HoelderClassSpec(2.0, 2.0 * curvature, offset + curvature, delta=offset / 2.0),
    )


def generate_sample(scenario: Scenario, seed, check_delta: bool = True) -> Sample:
    """Draw one dataset from the scenario, deterministically in the seed.

    ``check_delta`` enforces the variance lower bound declared by the
    scenario's variance class; disable it to simulate degenerate cases
    such as exactly noise-free data.
    """
    xs = scenario.design_points()
    variances = np.asarray(scenario.var_fn(xs), dtype=float)
    if np.any(variances < 0.0):
        raise BadScenarioError("variance function is negative on the design")
    if check_delta and np.any(variances < scenario.var_class.delta):
        raise BadScenarioError(
            "variance function falls below the declared lower bound "
            f"{scenario.var_class.delta}"
        )
    rng = np.random.default_rng(seed)
    eps = scenario.error_law.draw(rng, xs.size)
    ys = np.asarray(scenario.mean_fn(xs), dtype=float) + np.sqrt(variances) * eps
    return Sample(xs, ys)


# --- estimators as callables ---------------------------------------------

@dataclass(frozen=True, eq=False)
class EstimatorConfig:
    """Difference-sequence estimator bundled with its smoother settings.

    Instances are callable as estimator(sample, grid) -> values, the
    protocol every experiment accepts, so tests can substitute plain
    functions.
    """

    sequence: DifferenceSequence
    smoother: SmootherConfig
    expand_to_minimum: bool = False

    def __call__(self, sample: Sample, grid) -> np.ndarray:
        return estimate_variance(
            sample, self.sequence, self.smoother, grid,
            expand_to_minimum=self.expand_to_minimum,
        ).values

    def to_dict(self) -> dict:
        return {
            "order": self.sequence.order,
            "coefficients": self.sequence.to_list(),
            "kernel": self.smoother.kernel.kind,
            "degree": self.smoother.degree,
            "bandwidth": self.smoother.bandwidth,
            "expand_to_minimum": self.expand_to_minimum,
        }


def _describe(estimator) -> dict | str:
    if hasattr(estimator, "to_dict"):
        return estimator.to_dict()
    return getattr(estimator, "__name__", repr(type(estimator).__name__))


# --- replication engine ---------------------------------------------------

def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _replicate(replications: int, seed, rep_fn, threads: int = 1):
    """Run rep_fn once per replication on independent spawned streams.

    Returns (results, failures): results is a list in replication order
    with None at failed indices; failures is a list of (index, message).
    Estimator failures (DiffvarError) are recorded, anything else
    propagates.  Output is independent of thread count because streams
    are per-replication and results are assembled by index.
    """
    if threads < 1:
        raise BadParameterError(f"threads must be >= 1, got {threads}")
    child_seeds = _seed_sequence(seed).spawn(replications)

    def run_one(i):
        try:
            return rep_fn(child_seeds[i]), None
        except DiffvarError as exc:
            return None, f"{type(exc).__name__}: {exc}"

    if threads == 1:
        outcomes = [run_one(i) for i in range(replications)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run_one, range(replications)))
    results = [value for value, _ in outcomes]
    failures = [(i, msg) for i, (_, msg) in enumerate(outcomes) if msg is not None]
    return results, failures


# --- risks -----------------------------------------------------------------

@dataclass(frozen=True)
class RiskValue:
    """A Monte Carlo risk with its replication standard error."""

    value: float
    stderr: float
    replications: int
    failures: int


def _summarize(values: list, failures) -> RiskValue:
    ok = np.array([v for v in values if v is not None], dtype=float)
    if ok.size == 0:
        raise BadScenarioError("every replication failed")
    stderr = float(ok.std(ddof=1) / math.sqrt(ok.size)) if ok.size > 1 else float("nan")
    return RiskValue(
        value=float(ok.mean()),
        stderr=stderr,
        replications=len(values),
        failures=len(failures),
    )


def pointwise_risk(
    scenario: Scenario, estimator, x0: float, replications: int, seed,
    threads: int = 1,
) -> RiskValue:
    """Mean squared error of the estimator at one point, over replications."""
    if replications < 2:
        raise BadParameterError("need at least 2 replications")
    v_true = float(np.asarray(scenario.var_fn(np.array([x0])))[0])
    grid = np.array([float(x0)])

    def rep(child):
        sample = generate_sample(scenario, child)
        return (float(estimator(sample, grid)[0]) - v_true) ** 2

    return _summarize(*_replicate(replications, seed, rep, threads))


def global_risk(
    scenario: Scenario, estimator, replications: int, seed,
    grid=None, margin: float = 0.05, grid_size: int = 101,
    threads: int = 1,
) -> RiskValue:
    """Trapezoidal integrated squared error, averaged over replications.

    The default grid covers [margin, 1 - margin]; pass margin=0 (or an
    explicit grid) for the full interval.
    """
    if replications < 2:
        raise BadParameterError("need at least 2 replications")
    if grid is None:
        if not 0.0 <= margin < 0.5:
            raise BadParameterError("margin must be in [0, 0.5)")
        grid = np.linspace(margin, 1.0 - margin, grid_size)
    grid = np.asarray(grid, dtype=float)
    v_true = np.asarray(scenario.var_fn(grid), dtype=float)

    def rep(child):
        sample = generate_sample(scenario, child)
        err = estimator(sample, grid) - v_true
        return float(np.trapezoid(err * err, grid))

    return _summarize(*_replicate(replications, seed, rep, threads))


@dataclass(frozen=True)
class RiskReport:
    """Pointwise and global risks of one estimator on one scenario."""

    scenario: dict
    estimator: dict | str
    replications: int
    seed: int
    pointwise: dict
    global_risk: RiskValue | None
    grid_margin: float
    grid_size: int

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "estimator": self.estimator,
            "replications": self.replications,
            "seed": self.seed,
            "pointwise": {
                str(x): {
                    "risk": rv.value, "stderr": rv.stderr,
                    "replications": rv.replications, "failures": rv.failures,
                }
                for x, rv in self.pointwise.items()
            },
            "global": None if self.global_risk is None else {
                "risk": self.global_risk.value,
                "stderr": self.global_risk.stderr,
                "replications": self.global_risk.replications,
                "failures": self.global_risk.failures,
            },
            "grid_margin": self.grid_margin,
            "grid_size": self.grid_size,
        }


def risk_report(
    scenario: Scenario, estimator, replications: int, seed,
    points=(), include_global: bool = True,
    margin: float = 0.05, grid_size: int = 101, threads: int = 1,
) -> RiskReport:
    """Bundle pointwise risks at ``points`` and optionally the global risk."""
    if not points and not include_global:
        raise BadParameterError("nothing to do: no points and no global risk")
    ss = _seed_sequence(seed).spawn(len(tuple(points)) + 1)
    pw = {}
    for k, x0 in enumerate(points):
        pw[float(x0)] = pointwise_risk(
            scenario, estimator, float(x0), replications, ss[k], threads
        )
    gr = None
    if include_global:
        gr = global_risk(
            scenario, estimator, replications, ss[-1],
            margin=margin, grid_size=grid_size, threads=threads,
        )
    return RiskReport(
        scenario=scenario.to_dict(),
        estimator=_describe(estimator),
        replications=replications,
        seed=seed if isinstance(seed, int) else -1,
        pointwise=pw,
        global_risk=gr,
        grid_margin=margin,
        grid_size=grid_size,
    )


# --- convergence rates ------------------------------------------------------

def _loglog_slope(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    """OLS slope and its standard error on (log xs, log ys)."""
    lx = np.log(xs)
    ly = np.log(ys)
    lx_c = lx - lx.mean()
    sxx = float(lx_c @ lx_c)
    slope = float(lx_c @ ly / sxx)
    if xs.size > 2:
        resid = ly - ly.mean() - slope * lx_c
        s2 = float(resid @ resid) / (xs.size - 2)
        stderr = math.sqrt(s2 / sxx)
    else:
        stderr = float("nan")
    return slope, stderr


@dataclass(frozen=True)
class RateReport:
    """Per-n risks with the fitted log-log slope against the benchmark."""

    ns: tuple[int, ...]
    risks: tuple[RiskValue, ...]
    slope: float
    slope_stderr: float
    theoretical_slope: float
    slope_defined: bool
    dropped_smallest: bool
    kind: str

    def to_dict(self) -> dict:
        return {
            "ns": list(self.ns),
            "risks": [
                {"n": n, "risk": rv.value, "stderr": rv.stderr,
                 "failures": rv.failures}
                for n, rv in zip(self.ns, self.risks)
            ],
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "theoretical_slope": self.theoretical_slope,
            "slope_defined": self.slope_defined,
            "dropped_smallest": self.dropped_smallest,
            "kind": self.kind,
        }


def rate_schedule(
    seq: DifferenceSequence,
    gamma: float,
    scale: float = 1.0,
    degree: int | None = None,
    kernel_spec: KernelSpec = kernel("epanechnikov"),
) -> Callable[[int], EstimatorConfig]:
    """n -> estimator with bandwidth scale * n^(-1/(2 gamma + 1)).

    The default degree floor(gamma) + 1 keeps the fit order above the
    smoothness exponent, as the rate statements require.
    """
    if degree is None:
        degree = int(math.floor(gamma)) + 1
    def build(n: int) -> EstimatorConfig:
        return EstimatorConfig(
            sequence=seq,
            smoother=SmootherConfig(
                bandwidth=rate_optimal_bandwidth(n, gamma, scale),
                degree=degree,
                kernel=kernel_spec,
            ),
        )
    return build


def rate_experiment(
    scenarios,
    estimator_schedule,
    replications: int,
    seed,
    gamma: float,
    x0: float | None = None,
    margin: float = 0.05,
    grid_size: int = 101,
    threads: int = 1,
) -> RateReport:
    """Measure risk across sample sizes and fit the convergence slope.

    Parameters
    ----------
    scenarios : sequence of Scenario
        One per sample size; at least 4 distinct n.
    estimator_schedule : callable n -> estimator
        Typically :func:`rate_schedule` output.
    x0 : float or None
        None measures the global (integrated) risk; a point measures the
        pointwise risk there.

    A sample size is abandoned (experiment aborts) when more than 5% of
    its replications fail; the smallest n is silently dropped from the
    slope fit when more than 1% of its replications fail.  A slope over
    zero risks is undefined and reported as NaN with ``slope_defined``
    cleared.
    """
    scenarios = sorted(scenarios, key=lambda s: s.n)
    ns = [s.n for s in scenarios]
    if len(set(ns)) < 4:
        raise BadParameterError("need at least 4 distinct sample sizes")
    master = _seed_sequence(seed).spawn(len(scenarios))
    risks = []
    for s, child in zip(scenarios, master):
        est = estimator_schedule(s.n)
        if x0 is None:
            rv = global_risk(s, est, replications, child,
                             margin=margin, grid_size=grid_size, threads=threads)
        else:
            rv = pointwise_risk(s, est, x0, replications, child, threads=threads)
        if rv.failures > 0.05 * replications:
            raise BadScenarioError(
                f"{rv.failures}/{replications} replications failed at n={s.n}"
            )
        risks.append(rv)

    dropped = risks[0].failures > 0.01 * replications
    fit_ns = np.array(ns[1:] if dropped else ns, dtype=float)
    fit_risks = np.array(
        [rv.value for rv in (risks[1:] if dropped else risks)], dtype=float
    )
    if np.any(fit_risks <= 0.0):
        slope, stderr, defined = float("nan"), float("nan"), False
    else:
        slope, stderr = _loglog_slope(fit_ns, fit_risks)
        defined = True
    return RateReport(
        ns=tuple(ns),
        risks=tuple(risks),
        slope=slope,
        slope_stderr=stderr,
        theoretical_slope=-2.0 * gamma / (2.0 * gamma + 1.0),
        slope_defined=defined,
        dropped_smallest=bool(dropped),
        kind="global" if x0 is None else f"pointwise@{x0}",
    )


# --- normality ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NormalityReport:
    """Shape diagnostics of the estimator's replication distribution.

    Draws are self-studentized: centered at the replication mean and
    scaled by the replication standard deviation, so the diagnostics
    test distributional shape without an analytic asymptotic variance.
    """

    draws: np.ndarray
    standardized: np.ndarray
    skewness: float
    excess_kurtosis: float
    kolmogorov_distance: float
    failures: int = 0

    def to_dict(self) -> dict:
        return {
            "replications": int(self.draws.size),
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
            "kolmogorov_distance": self.kolmogorov_distance,
            "failures": self.failures,
            "draws_mean": float(self.draws.mean()),
            "draws_std": float(self.draws.std(ddof=0)),
        }


def normality_diagnostics(draws, failures: int = 0) -> NormalityReport:
    """Standardize draws and compute skewness, excess kurtosis and the
    Kolmogorov distance to the standard normal."""
    draws = np.asarray(draws, dtype=float)
    if draws.size < 8:
        raise BadParameterError("need at least 8 draws for shape diagnostics")
    z = (draws - draws.mean()) / draws.std(ddof=0)
    return NormalityReport(
        draws=draws,
        standardized=z,
        skewness=float(stats.skew(z)),
        excess_kurtosis=float(stats.kurtosis(z)),
        kolmogorov_distance=float(stats.kstest(z, "norm").statistic),
        failures=failures,
    )


def normality_experiment(
    scenario: Scenario, estimator, x0: float, replications: int, seed,
    threads: int = 1,
) -> NormalityReport:
    """Collect replication draws of the estimate at x0 and diagnose shape."""
    if replications < 500:
        raise BadParameterError("need at least 500 replications")
    grid = np.array([float(x0)])

    def rep(child):
        sample = generate_sample(scenario, child)
        return float(estimator(sample, grid)[0])

    values, failures = _replicate(replications, seed, rep, threads)
    draws = np.array([v for v in values if v is not None], dtype=float)
    return normality_diagnostics(draws, failures=len(failures))


# --- bias / variance structure in h ------------------------------------------

@dataclass(frozen=True, eq=False)
class BiasVarianceReport:
    """Squared bias and variance of the estimate at x0 across bandwidths."""

    bandwidths: np.ndarray
    squared_bias: np.ndarray
    variance: np.ndarray
    bias_slope: float
    variance_slope: float
    replications: int
    x0: float

    def to_dict(self) -> dict:
        return {
            "bandwidths": [float(h) for h in self.bandwidths],
            "squared_bias": [float(b) for b in self.squared_bias],
            "variance": [float(v) for v in self.variance],
            "bias_slope": self.bias_slope,
            "variance_slope": self.variance_slope,
            "replications": self.replications,
            "x0": self.x0,
        }


def bias_variance_experiment(
    scenario: Scenario,
    seq: DifferenceSequence,
    bandwidths,
    x0: float,
    replications: int,
    seed,
    degree: int = 1,
    kernel_spec: KernelSpec = kernel("epanechnikov"),
) -> BiasVarianceReport:
    """Monte Carlo bias^2 and variance of the estimate at x0 per bandwidth.

    The design is fixed across replications, so the effective weights for
    each bandwidth are factorized once and every replication reduces to
    one squared-contrast inner product per bandwidth; this is exactly the
    weight representation of the estimator, which the test suite pins to
    the full fit path.
    """
    if replications < 2:
        raise BadParameterError("need at least 2 replications")
    bandwidths = np.asarray(bandwidths, dtype=float)
    xs = scenario.design_points()
    half = seq.order // 2
    m = xs.size - seq.order
    centers = xs[half : half + m]
    weight_sets = [
        effective_weights(
            centers, SmootherConfig(float(h), degree, kernel_spec), float(x0)
        )
        for h in bandwidths
    ]
    v_true = float(np.asarray(scenario.var_fn(np.array([x0])))[0])

    def rep(child):
        sample = generate_sample(scenario, child)
        z = pseudoresiduals(sample, seq).values ** 2
        return np.array([w.weights @ z[w.indices] for w in weight_sets])

    values, failures = _replicate(replications, seed, rep)
    if failures:
        raise BadScenarioError(f"{len(failures)} replications failed")
    draws = np.vstack(values)
    squared_bias = (draws.mean(axis=0) - v_true) ** 2
    variance = draws.var(axis=0, ddof=1)
    bias_slope, _ = _loglog_slope(bandwidths, squared_bias)
    variance_slope, _ = _loglog_slope(bandwidths, variance)
    return BiasVarianceReport(
        bandwidths=bandwidths,
        squared_bias=squared_bias,
        variance=variance,
        bias_slope=bias_slope,
        variance_slope=variance_slope,
        replications=replications,
        x0=float(x0),
    )


# --- effect of a rough mean ---------------------------------------------------

@dataclass(frozen=True)
class MeanEffectReport:
    """Global risks under a cusp mean versus a flat mean, per sample size.

    Both arms share every replication's noise (common random numbers),
    so ``ratio_stderrs`` are the paired, delta-method standard errors of
    the risk ratios; they are far tighter than the two marginal errors.
    """

    ns: tuple[int, ...]
    rough: tuple[RiskValue, ...]
    flat: tuple[RiskValue, ...]
    ratios: tuple[float, ...]
    ratio_stderrs: tuple[float, ...]
    gamma: float
    beta: float

    def to_dict(self) -> dict:
        return {
            "ns": list(self.ns),
            "rough": [{"risk": r.value, "stderr": r.stderr} for r in self.rough],
            "flat": [{"risk": r.value, "stderr": r.stderr} for r in self.flat],
            "ratios": list(self.ratios),
            "ratio_stderrs": list(self.ratio_stderrs),
            "gamma": self.gamma,
            "beta": self.beta,
        }


def mean_effect_experiment(
    gamma: float,
    beta: float,
    ns,
    replications: int,
    seed,
    seq: DifferenceSequence | None = None,
    scale: float = 1.0,
    margin: float = 0.05,
    grid_size: int = 101,
    threads: int = 1,
) -> MeanEffectReport:
    """Compare risk under mean |x-1/2|^beta against mean zero.

    ``beta`` must lie strictly inside (gamma/(4 gamma + 2),
    gamma/(2 gamma + 2)), the regime where the cusp is rough enough to
    matter in principle yet provably negligible for this estimator.
    Both arms share replication seeds so the ratio is measured with
    common random numbers.
    """
    lo = gamma / (4.0 * gamma + 2.0)
    hi = gamma / (2.0 * gamma + 2.0)
    if not lo < beta < hi:
        raise BadParameterError(
            f"beta must lie strictly inside ({lo:.4g}, {hi:.4g}), got {beta}"
        )
    if replications < 2:
        raise BadParameterError("need at least 2 replications")
    if seq is None:
        from .diffseq import standard_sequence
        seq = standard_sequence("first_difference")
    schedule = rate_schedule(seq, gamma, scale)
    ns = sorted(int(n) for n in ns)
    children = _seed_sequence(seed).spawn(len(ns))
    grid = np.linspace(margin, 1.0 - margin, grid_size)
    rough_risks, flat_risks, ratios, ratio_ses = [], [], [], []
    for n, child in zip(ns, children):
        est = schedule(n)
        rough = rough_mean_scenario(n, beta)
        flat = Scenario(
            label=f"flat-mean-n{n}",
            mean_fn=function_spec("constant", value=0.0),
            var_fn=rough.var_fn,
            n=n,
            error_law=rough.error_law,
        )
        v_true = np.asarray(rough.var_fn(grid), dtype=float)

        def rep(rep_seed, rough=rough, flat=flat, est=est, v_true=v_true):
            # identical seed on both arms: same noise, only the mean differs
            pair = []
            for scen in (rough, flat):
                sample = generate_sample(scen, rep_seed)
                err = est(sample, grid) - v_true
                pair.append(np.trapezoid(err * err, grid))
            return np.array(pair)

        values, failures = _replicate(replications, child, rep, threads)
        pairs = np.vstack([v for v in values if v is not None])
        k = pairs.shape[0]
        means = pairs.mean(axis=0)
        ses = pairs.std(axis=0, ddof=1) / math.sqrt(k)
        rough_risks.append(RiskValue(float(means[0]), float(ses[0]),
                                     replications, len(failures)))
        flat_risks.append(RiskValue(float(means[1]), float(ses[1]),
                                    replications, len(failures)))
        ratio = means[0] / means[1]
        cov = np.cov(pairs.T, ddof=1)
        var_log = (cov[0, 0] / means[0] ** 2 + cov[1, 1] / means[1] ** 2
                   - 2.0 * cov[0, 1] / (means[0] * means[1])) / k
        ratios.append(float(ratio))
        ratio_ses.append(float(ratio * math.sqrt(max(var_log, 0.0))))
    return MeanEffectReport(
        ns=tuple(ns),
        rough=tuple(rough_risks),
        flat=tuple(flat_risks),
        ratios=tuple(ratios),
        ratio_stderrs=tuple(ratio_ses),
        gamma=gamma,
        beta=beta,
    )
