"""Cumulant generating function, its Legendre transform, and the extended rate function J."""
import math

import numpy as np

from toeprod import constant, example1_limits, example_pair, legendre, rate_function

# sanity: f = g = 1 gives the chi-square rate (x - 1 - log x)/2
one = constant(1.0)
for x in (0.5, 1.0, 2.0):
    print(f"x={x}: I={legendre(one, one, x):.10f}  closed form {(x - 1 - math.log(x)) / 2:.10f}")

f, g = example_pair(-1.0, 0.5)
rf = rate_function(f, g, example1_limits(-1.0, 0.5))
print(f"mu={rf.mu:.6f}  a={rf.a:.6f}  b={rf.b}  domain of L: "
      f"({rf.cgf.domain.t_lo:.4f}, {rf.cgf.domain.t_hi})")

# left of a, J follows the tangent with slope 1/(2 lambda_min) and stays below I
print(rf.csv_text(np.linspace(-7.0, -0.05, 12)))
x = rf.a - 2
print(f"at x={x:.3f}: I={rf.I(x):.5f} J={rf.J(x):.5f}")
