"""Calibration sweep up to n=1024 for a=-1, theta=0.5.

Pins the lambda_min tolerance used by the acceptance suite.  Takes a few
seconds per order above 512.
"""
from toeprod import convergence_sweep, example1_limits, example_pair

f, g = example_pair(-1.0, 0.5)
rep = convergence_sweep(f, g, [32, 64, 128, 256, 512, 1024], reference=example1_limits(-1.0, 0.5))
print(rep.csv_text())
emax = rep.errors_max
for n0, n1, e0, e1 in zip(rep.n[:-1], rep.n[1:], emax[:-1], emax[1:]):
    print(f"err_max ratio {n0}->{n1}: {e0 / e1:.2f}")   # about 4: second order in 1/n
print("lambda_min error at n=1024:", rep.errors_min[-1])
