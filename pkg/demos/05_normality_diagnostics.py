"""Asymptotic normality of the variance estimator at a point.

The replication distribution of the estimate is a weighted average of
squared contrasts, so it starts out right-skewed like a chi-square and
gaussianizes as the window fills in.  The skewness trend across window
sizes makes the convergence visible; the final run applies the full
shape diagnostics.
"""

from diffvar import (
    ErrorLaw,
    EstimatorConfig,
    SmootherConfig,
    kernel,
    normality_experiment,
    smooth_scenario,
    standard_sequence,
)

seq = standard_sequence("first_difference")
n = 2000
scenario = smooth_scenario(n)

print(f"n = {n}, replication draws of the estimate at x0 = 0.5")
print()
print(f"{'h':>6} {'~points in window':>18} {'skewness':>9} {'kurtosis':>9}")
for h in (0.1, 0.2, 0.3, 0.45):
    est = EstimatorConfig(seq, SmootherConfig(h, 1, kernel("uniform")))
    rep = normality_experiment(scenario, est, 0.5, 3000, seed=6)
    print(f"{h:>6.2f} {int(2 * h * n):>18} {rep.skewness:>+9.3f} "
          f"{rep.excess_kurtosis:>+9.3f}")

print()
print("full diagnostics at the widest window, heavier-tailed errors:")
scenario_t = smooth_scenario(4000, error_law=ErrorLaw("student_t", df=9.0))
est = EstimatorConfig(seq, SmootherConfig(0.45, 1, kernel("uniform")))
rep = normality_experiment(scenario_t, est, 0.5, 3000, seed=6)
print(f"  skewness            {rep.skewness:+.4f}")
print(f"  excess kurtosis     {rep.excess_kurtosis:+.4f}")
print(f"  Kolmogorov distance {rep.kolmogorov_distance:.4f}")
print()
print("draws standardized across replications; a standard normal sample")
print("of this size has Kolmogorov distance around 0.016 in the median.")
