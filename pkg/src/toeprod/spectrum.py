"""Spectra of products of finite Toeplitz sections and their limits.

The eigenvalues of ``T_n(f) T_n(g)`` (``g >= 0``) are computed through the
Hermitian form ``T_n(g)^{1/2} T_n(f) T_n(g)^{1/2}``, which has the same
eigenvalues with the same multiplicities.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import hermitian_eig, psd_sqrt, slogdet
from .errors import EigenvalueInsideEssentialSpectrum, GNotNonnegative, NotRealValued
from .matrices import ar1_inverse_tridiagonal, toeplitz_section
from .symbol import DEFAULT_QUAD_POINTS, AR1Density, Symbol, cosine, symbol_range, sup_norm

__all__ = [
    "SpectrumResult",
    "EssentialInterval",
    "Example1Limits",
    "ConvergenceReport",
    "SzegoAverage",
    "product_spectrum",
    "symmetric_form",
    "convergence_sweep",
    "essential_interval",
    "example1_limits",
    "pencil_determinant",
    "pencil_residuals",
    "pencil_zero_check",
    "pencil_zero",
    "szego_average",
    "localization_profile",
    "example_pair",
]

NONNEG_TOL = 1e-10


@dataclass(frozen=True)
class EssentialInterval:
    lo: float
    hi: float

    def contains(self, x: float, margin: float = 0.0) -> bool:
        return self.lo - margin <= x <= self.hi + margin


@dataclass(frozen=True)
class SpectrumResult:
    n: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    essential: EssentialInterval | None = None
    norm_bound: float | None = None

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])


def _check_pair(f: Symbol, g: Symbol):
    if not (f.is_real and g.is_real):
        raise NotRealValued("f and g must both be real-valued")
    g_range = symbol_range(g)
    if g_range.inf_value < -NONNEG_TOL:
        raise GNotNonnegative(f"g takes the negative value {g_range.inf_value:.3e}")


def symmetric_form(f: Symbol, g: Symbol, n: int, quad_points: int = DEFAULT_QUAD_POINTS) -> np.ndarray:
    """``T_n(g)^{1/2} T_n(f) T_n(g)^{1/2}``, Hermitian by construction."""
    root = psd_sqrt(toeplitz_section(g, n, quad_points))
    S = root @ toeplitz_section(f, n, quad_points) @ root
    return 0.5 * (S + S.conj().T)


def product_spectrum(
    f: Symbol,
    g: Symbol,
    n: int,
    want_vectors: bool = False,
    quad_points: int = DEFAULT_QUAD_POINTS,
) -> SpectrumResult:
    """Eigenvalues of ``T_n(f) T_n(g)`` for real ``f`` and non-negative ``g``.

    When ``want_vectors`` is set, the eigenvectors returned are those of the
    Hermitian form (columns indexed by Fourier mode ``0..n``).
    """
    _check_pair(f, g)
    S = symmetric_form(f, g, n, quad_points)
    eig = hermitian_eig(S, want_vectors=want_vectors)
    return SpectrumResult(
        n=n,
        eigenvalues=eig.eigenvalues,
        eigenvectors=eig.eigenvectors,
        essential=essential_interval(f, g),
        norm_bound=sup_norm(f) * sup_norm(g),
    )


def essential_interval(f: Symbol, g: Symbol) -> EssentialInterval:
    """``[inf(fg), sup(fg)]``, the essential spectrum of the semi-infinite product."""
    r = symbol_range(f * g)
    return EssentialInterval(r.inf_value, r.sup_value)


@dataclass(frozen=True)
class Example1Limits:
    """Limits of the extreme eigenvalues for ``f = a + cos`` and the AR(1) density ``g``.

    ``a_theta``/``b_theta`` and the third boundary candidate are NaN when
    ``theta == 0``.
    """

    a: float
    theta: float
    a_theta: float
    b_theta: float
    lambda_min_limit: float
    lambda_max_limit: float
    boundary_candidates: tuple
    inf_fg: float
    sup_fg: float

    def as_dict(self) -> dict:
        def clean(v):
            return None if isinstance(v, float) and math.isnan(v) else v

        return {
            "a": self.a,
            "theta": self.theta,
            "a_theta": clean(self.a_theta),
            "b_theta": clean(self.b_theta),
            "lambda_min_limit": self.lambda_min_limit,
            "lambda_max_limit": self.lambda_max_limit,
            "boundary_candidates": [clean(v) for v in self.boundary_candidates],
            "inf_fg": self.inf_fg,
            "sup_fg": self.sup_fg,
        }


def example1_limits(a: float, theta: float) -> Example1Limits:
    if not abs(theta) < 1:
        raise ValueError(f"need |theta| < 1, got {theta}")
    a, theta = float(a), float(theta)
    low = (a - 1.0) / (1.0 + theta) ** 2
    high = (a + 1.0) / (1.0 - theta) ** 2
    inf_fg, sup_fg = min(low, high), max(low, high)
    if theta == 0.0:
        nan = float("nan")
        return Example1Limits(a, theta, nan, nan, a - 1.0, a + 1.0, (low, high, nan), inf_fg, sup_fg)
    a_theta = -(1.0 + theta) / (2.0 * theta)
    b_theta = -(1.0 - theta) / (2.0 * theta)
    denom = -4.0 * theta * (1.0 + a * theta)
    isolated = 1.0 / denom if denom != 0.0 else float("nan")
    inside = min(a_theta, b_theta) < a < max(a_theta, b_theta)
    lam_min, lam_max = inf_fg, sup_fg
    if inside and theta > 0:
        lam_min = isolated
    elif inside:
        lam_max = isolated
    return Example1Limits(a, theta, a_theta, b_theta, lam_min, lam_max, (low, high, isolated), inf_fg, sup_fg)


@dataclass
class ConvergenceReport:
    n: np.ndarray
    lambda_min: np.ndarray
    lambda_max: np.ndarray
    reference_min: float | None = None
    reference_max: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def errors_min(self) -> np.ndarray | None:
        if self.reference_min is None:
            return None
        return np.abs(self.lambda_min - self.reference_min)

    @property
    def errors_max(self) -> np.ndarray | None:
        if self.reference_max is None:
            return None
        return np.abs(self.lambda_max - self.reference_max)

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "lambda_min_n", "lambda_max_n", "err_min", "err_max"])
        emin, emax = self.errors_min, self.errors_max
        for i, n in enumerate(self.n):
            writer.writerow([
                int(n),
                repr(float(self.lambda_min[i])),
                repr(float(self.lambda_max[i])),
                "" if emin is None else repr(float(emin[i])),
                "" if emax is None else repr(float(emax[i])),
            ])
        return buf.getvalue()


def convergence_sweep(f: Symbol, g: Symbol, n_list, reference=None, quad_points: int = DEFAULT_QUAD_POINTS):
    """Extreme eigenvalues of ``T_n(f) T_n(g)`` along an increasing list of orders.

    ``reference`` may be an :class:`Example1Limits` or a ``(min, max)`` pair.
    """
    n_arr = np.asarray(list(n_list), dtype=int)
    if np.any(np.diff(n_arr) <= 0):
        raise ValueError("n_list must be strictly increasing")
    lo, hi = [], []
    for n in n_arr:
        res = product_spectrum(f, g, int(n), quad_points=quad_points)
        lo.append(res.lambda_min)
        hi.append(res.lambda_max)
    ref_min = ref_max = None
    if isinstance(reference, Example1Limits):
        ref_min, ref_max = reference.lambda_min_limit, reference.lambda_max_limit
    elif reference is not None:
        ref_min, ref_max = (float(v) for v in reference)
    return ConvergenceReport(n_arr, np.array(lo), np.array(hi), ref_min, ref_max)


def pencil_determinant(a: float, theta: float, n: int, t: float) -> float:
    """Signed ``det(t T_n(a + cos) - T_n(g)^{-1})`` over a Hadamard-type scale.

    The scale is the product over rows of ``|t| |row of T_n(f)| + |row of
    T_n(g)^{-1}|``, the row norms of the two pencil terms.  Using the row
    norms of ``M`` itself would hide cancellation: when ``M`` is nearly
    diagonal with tiny entries the ratio stays close to 1.
    """
    Tf = toeplitz_section(cosine(a), n)
    Ginv = ar1_inverse_tridiagonal(theta, n)
    M = t * Tf - Ginv
    sign, logabs = slogdet(M)
    rows = abs(t) * np.linalg.norm(Tf, axis=1) + np.linalg.norm(Ginv, axis=1)
    log_scale = float(np.sum(np.log(rows)))
    if not np.isfinite(logabs):
        return 0.0
    return float(np.real(sign)) * math.exp(logabs - log_scale)


def pencil_residuals(a: float, theta: float, n: int, eigenvalues) -> np.ndarray:
    """Scaled ``|det M_n(1/lambda)|`` per eigenvalue; NaN where ``lambda`` is numerically zero."""
    lam = np.asarray(eigenvalues, dtype=float)
    cutoff = 1e-12 * max(1.0, float(np.max(np.abs(lam), initial=0.0)))
    out = np.full(lam.shape, np.nan)
    for i, value in enumerate(lam):
        if abs(value) > cutoff:
            out[i] = abs(pencil_determinant(a, theta, n, 1.0 / value))
    return out


def pencil_zero_check(a: float, theta: float, n: int, spectrum: SpectrumResult) -> float:
    """Largest scaled pencil determinant over the non-zero eigenvalues of ``spectrum``."""
    if n < 1:
        raise ValueError("pencil check needs n >= 1")
    res = pencil_residuals(a, theta, n, spectrum.eigenvalues)
    return float(np.nanmax(res)) if np.any(~np.isnan(res)) else 0.0


def pencil_zero(a: float, theta: float, n: int, guess: float, rel_width: float = 1e-6, tol: float = 1e-15):
    """Locate the eigenvalue near ``guess`` as a sign change of the pencil determinant.

    Bisects ``t -> det M_n(t)`` on ``1/guess * (1 -+ rel_width)`` and returns
    ``1/t`` at the zero.  Independent of the eigensolver; only meaningful for
    simple eigenvalues (no sign change otherwise, and ``None`` is returned).
    """
    t0 = 1.0 / guess
    lo, hi = sorted((t0 * (1 - rel_width), t0 * (1 + rel_width)))
    d_lo = pencil_determinant(a, theta, n, lo)
    d_hi = pencil_determinant(a, theta, n, hi)
    if d_lo == 0.0:
        return 1.0 / lo
    if d_hi == 0.0:
        return 1.0 / hi
    if (d_lo > 0) == (d_hi > 0):
        return None
    while hi - lo > tol * abs(t0):
        mid = 0.5 * (lo + hi)
        d = pencil_determinant(a, theta, n, mid)
        if d == 0.0:
            return 1.0 / mid
        if (d > 0) == (d_lo > 0):
            lo, d_lo = mid, d
        else:
            hi = mid
    return 2.0 / (lo + hi)


@dataclass(frozen=True)
class SzegoAverage:
    discrete: float
    integral: float
    normalization: str = "1/(n+1)"


def szego_average(f: Symbol, g: Symbol, poly, n: int, quad_points: int = DEFAULT_QUAD_POINTS, spectrum=None):
    """Mean of ``phi`` over the eigenvalues versus the mean of ``phi(fg)`` over the torus.

    ``poly`` holds the coefficients of ``phi`` in ascending order (degree <= 4).
    The eigenvalue mean divides by ``n + 1``, the number of eigenvalues.
    """
    coeffs = np.asarray(poly, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0 or coeffs.size > 5:
        raise ValueError("poly must hold 1 to 5 ascending coefficients")
    phi = np.polynomial.Polynomial(coeffs)
    if spectrum is None:
        spectrum = product_spectrum(f, g, n, quad_points=quad_points)
    discrete = float(np.mean(phi(spectrum.eigenvalues)))
    x = 2.0 * np.pi * np.arange(quad_points) / quad_points
    integral = float(np.mean(phi(np.real((f * g)(x)))))
    return SzegoAverage(discrete, integral)


def localization_profile(spectrum: SpectrumResult, which: str = "min", epsilon: float = 1 / 8) -> float:
    """Squared mass of an extreme eigenvector on modes ``eps*n <= k <= (1-eps)*n``.

    Only defined for eigenvalues outside the essential interval (by at least
    1e-6); otherwise :class:`EigenvalueInsideEssentialSpectrum` is raised.
    """
    if spectrum.eigenvectors is None:
        raise ValueError("spectrum was computed without eigenvectors")
    if which not in ("min", "max"):
        raise ValueError("which must be 'min' or 'max'")
    idx = 0 if which == "min" else -1
    lam = float(spectrum.eigenvalues[idx])
    if spectrum.essential is not None and spectrum.essential.contains(lam, margin=1e-6):
        raise EigenvalueInsideEssentialSpectrum(
            f"eigenvalue {lam:.6g} lies within 1e-6 of [{spectrum.essential.lo:.6g}, {spectrum.essential.hi:.6g}]"
        )
    n = spectrum.n
    v = spectrum.eigenvectors[:, idx]
    lo = math.ceil(epsilon * n)
    hi = math.floor((1.0 - epsilon) * n)
    return float(np.sum(np.abs(v[lo:hi + 1]) ** 2))


def example_pair(a: float, theta: float):
    """The pair ``(a + cos, AR(1) density)`` used throughout the worked example."""
    return cosine(a), AR1Density(theta)
