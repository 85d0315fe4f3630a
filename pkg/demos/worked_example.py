"""Extreme eigenvalues of T_n(a + cos) T_n(g) with g the AR(1) density.

The essential part of the spectrum fills [inf fg, sup fg].  For a inside
]a_theta, b_theta[ one extreme eigenvalue detaches from it and converges to
1/(-4 theta (1 + a theta)).
"""
import numpy as np

from toeprod import example1_limits, example_pair, product_spectrum, convergence_sweep
from toeprod.spectrum import pencil_zero, pencil_zero_check

a, theta = -1.0, 0.5
lim = example1_limits(a, theta)
print("closed-form limits:", lim.as_dict())

f, g = example_pair(a, theta)
rep = convergence_sweep(f, g, [16, 32, 64, 128, 256], reference=lim)
print(rep.csv_text())
# lambda_max creeps toward sup fg = 0 like 1/n^2; lambda_min sits on -1 already

res = product_spectrum(f, g, 64)
outside = res.eigenvalues[~np.array([res.essential.contains(x, 1e-9) for x in res.eigenvalues])]
print("eigenvalues outside [inf fg, sup fg]:", outside)

# cross-check with the pencil t T_n(f) - T_n(g)^{-1}, which is tridiagonal
n = 16
res16 = product_spectrum(f, g, n)
print("max scaled pencil determinant:", pencil_zero_check(a, theta, n, res16))
zeros = [pencil_zero(a, theta, n, lam) for lam in res16.eigenvalues]
diffs = [abs(z - lam) for z, lam in zip(zeros, res16.eigenvalues) if z is not None]
print(f"pencil zeros vs eigenvalues: max diff {max(diffs):.1e} over {len(diffs)} simple eigenvalues")

# theta < 0 flips which end of the spectrum can detach
for a2, th2 in [(-1.0, -0.5), (1.0, -0.5), (-0.8, 0.3)]:
    l2 = example1_limits(a2, th2)
    r2 = product_spectrum(*example_pair(a2, th2), 256)
    print(f"a={a2:+.1f} theta={th2:+.1f}: limits ({l2.lambda_min_limit:.4f}, {l2.lambda_max_limit:.4f})"
          f"  n=256 ({r2.lambda_min:.4f}, {r2.lambda_max:.4f})")
