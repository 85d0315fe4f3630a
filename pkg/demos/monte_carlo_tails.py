"""Tail frequencies of W_n = (1/n) X^T T_n(f) X for a stationary AR(1) path X.

The empirical rates -(1/n) log P sit above J at n=200 (polynomial
prefactors are not negligible yet) but within a factor of two.
"""
from toeprod import SimulationConfig, example1_limits, example_pair, rate_function, tail_study
from toeprod.gauss import tail_csv

f, g = example_pair(-1.0, 0.5)
rate = rate_function(f, g, example1_limits(-1.0, 0.5))
cfg = SimulationConfig(theta=0.5, n=200, replicates=200_000, seed=7,
                       thresholds=(-0.95, -0.9, -0.8, -0.55, -0.5, -0.45))
est = tail_study(cfg, f, rate)
print(tail_csv(est, cfg))
for e in est:
    print(f"x={e.threshold:+.2f} {e.side:5s} count={e.count:6d} rate/J={e.empirical_rate / e.rate_reference:.2f}")
