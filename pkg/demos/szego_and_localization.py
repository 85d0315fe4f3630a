"""Eigenvalue averages against the symbol, and where the detached eigenvector lives."""
import numpy as np

from toeprod import example_pair, localization_profile, product_spectrum, szego_average

f, g = example_pair(-1.0, 0.5)

# mean of phi over the eigenvalues vs the mean of phi(fg) over the circle
for n in (64, 128, 256, 512):
    s1 = szego_average(f, g, [0, 1], n)
    s2 = szego_average(f, g, [0, 0, 1], n)
    print(f"n={n:3d}  phi=x: {s1.discrete:+.6f} vs {s1.integral:+.6f}   "
          f"phi=x^2: gap {abs(s2.discrete - s2.integral):.2e}")

# the lambda_min eigenvector concentrates on low and high Fourier modes;
# its mass on the middle band eps*n..(1-eps)*n collapses fast
for n in (32, 64, 128, 256):
    res = product_spectrum(f, g, n, want_vectors=True)
    v = np.abs(res.eigenvectors[:, 0]) ** 2
    print(f"n={n:3d} mid-band mass {localization_profile(res):.2e}  "
          f"first/last 4 modes {v[:4].sum() + v[-4:].sum():.4f}")
