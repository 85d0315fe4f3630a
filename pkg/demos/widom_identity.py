"""Finite-section product defect T_n(fg) - T_n(f)T_n(g) written as two Hankel products."""
import numpy as np

from toeprod import cosine, AR1Density, trig_poly, toeplitz_section, widom_residual
from toeprod.matrices import widom_sides
from toeprod.symbol import ar1_cutoff

# two small trig polys; the identity is exact once the Hankel band covers the degrees
f = trig_poly({-2: 0.3, 0: 1.0, 1: 0.5j, 3: -0.2})
g = trig_poly({-1: 1.0, 0: 0.25, 2: 0.7})
lhs, rhs = widom_sides(f, g, 6, band=3)
print("defect matrix (real part), n=6")
print(np.round(lhs.real, 3))
print("max |lhs - rhs| =", np.abs(lhs - rhs).max())

# the defect only lives in the corners: rank is bounded by the bands
print("rank of defect:", np.linalg.matrix_rank(lhs, tol=1e-12))

# AR(1) has infinitely many coefficients; truncate where they drop below 1e-14
theta = 0.5
K = ar1_cutoff(theta)
print(f"AR(1) theta={theta}: band K={K}")
for n in (8, 16, 32, 64):
    r = widom_residual(cosine(-1.0), AR1Density(theta), n, band=K)
    print(f"  n={n:3d} residual {r:.2e}")

# T_n(f)T_n(g) is not Toeplitz, but T_n(fg) is; the difference is what the identity describes
P = toeplitz_section(cosine(-1.0), 5) @ toeplitz_section(AR1Density(theta), 5)
print("T_5(f)T_5(g) diagonal:", np.round(np.diag(P), 4))
