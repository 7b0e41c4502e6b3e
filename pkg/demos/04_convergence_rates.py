"""Convergence-rate measurement against the n^(-2g/(2g+1)) benchmark.

Runs a reduced version of the rate experiment (fewer replications than
the acceptance suite) and prints the fitted log-log slope next to the
theoretical exponent, plus the bias/variance decomposition in the
bandwidth at fixed n.
"""

import numpy as np

from diffvar import (
    bias_variance_experiment,
    quadratic_variance_scenario,
    rate_experiment,
    rate_schedule,
    smooth_scenario,
    standard_sequence,
)

seq = standard_sequence("first_difference")
gamma = 2.0

ns = (512, 1024, 2048, 4096, 8192)
scenarios = [smooth_scenario(n) for n in ns]
schedule = rate_schedule(seq, gamma, scale=0.8, degree=3)
report = rate_experiment(scenarios, schedule, replications=40, seed=1, gamma=gamma)

print(f"global risk versus n (gamma = {gamma}, degree 3, 40 replications)")
print(f"{'n':>6} {'risk':>12} {'stderr':>10}")
for n, rv in zip(report.ns, report.risks):
    print(f"{n:>6} {rv.value:>12.6f} {rv.stderr:>10.6f}")
print(f"fitted slope      : {report.slope:+.3f} +- {report.slope_stderr:.3f}")
print(f"theoretical slope : {report.theoretical_slope:+.3f}")

print()
print("bias/variance structure in the bandwidth at n = 4096")
scen = quadratic_variance_scenario(4096)
hs = np.geomspace(0.05, 0.4, 7)
bv = bias_variance_experiment(scen, seq, hs, x0=0.5, replications=4000, seed=1)
print(f"{'h':>7} {'bias^2':>12} {'variance':>12}")
for h, b, v in zip(bv.bandwidths, bv.squared_bias, bv.variance):
    print(f"{h:>7.3f} {b:>12.3e} {v:>12.3e}")
print(f"bias^2 slope in h   : {bv.bias_slope:+.2f}  (second-order fits: 4)")
print(f"variance slope in h : {bv.variance_slope:+.2f}  (averaging law: -1)")
