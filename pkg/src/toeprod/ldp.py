"""Cumulant generating functions and rate functions for Gaussian quadratic forms.

For ``h = f g`` the limiting normalised cumulant generating function is

    L(t) = -(1/4pi) int log(1 - 2 t h(x)) dx,

finite on the open interval where ``1 - 2 t h > 0``.  Its Legendre transform
``I`` and the piecewise-linear extension ``J`` (slopes ``1/(2 lambda_min)``
and ``1/(2 lambda_max)`` outside ``[a, b]``) are evaluated here.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BeyondSpectralEdge, DomainViolation, OutsideDomain, QuadratureNotConverged
from .spectrum import Example1Limits, SpectrumResult, product_spectrum
from .symbol import Symbol, symbol_range

__all__ = [
    "CgfDomain",
    "ProductCgf",
    "LegendreResult",
    "RateFunction",
    "cgf_domain",
    "cgf",
    "cgf_deriv",
    "legendre",
    "rate_function",
    "finite_n_cgf",
]

START_POINTS = 4096
MAX_POINTS = 2 ** 20
QUAD_TOL = 1e-9
BISECT_TOL = 1e-12
BOUNDARY_OFFSET = 1e-10
LIMIT_TOL = 1e-9


@dataclass(frozen=True)
class CgfDomain:
    t_lo: float
    t_hi: float

    def contains(self, t: float) -> bool:
        return self.t_lo < t < self.t_hi


class ProductCgf:
    """``L(t)`` and ``L'(t)`` for the product symbol ``f g``, with cached samples."""

    def __init__(self, f: Symbol, g: Symbol, tol: float = QUAD_TOL,
                 start_points: int = START_POINTS, max_points: int = MAX_POINTS):
        self.f, self.g = f, g
        self.product = f * g
        self.tol = tol
        self.start_points = start_points
        self.max_points = max_points
        self._samples: dict[int, np.ndarray] = {}
        r = symbol_range(self.product)
        self.inf_fg, self.sup_fg = r.inf_value, r.sup_value
        t_hi = 1.0 / (2.0 * self.sup_fg) if self.sup_fg > 0 else math.inf
        t_lo = 1.0 / (2.0 * self.inf_fg) if self.inf_fg < 0 else -math.inf
        self.domain = CgfDomain(t_lo, t_hi)

    def samples(self, M: int) -> np.ndarray:
        if M not in self._samples:
            x = 2.0 * np.pi * np.arange(M) / M
            self._samples[M] = np.real(self.product(x))
        return self._samples[M]

    def _adaptive(self, integrand, t: float) -> float:
        if not self.domain.contains(t):
            raise OutsideDomain(f"t={t!r} is outside ({self.domain.t_lo!r}, {self.domain.t_hi!r})")
        M = self.start_points
        prev = integrand(self.samples(M), t)
        while M < self.max_points:
            M *= 2
            cur = integrand(self.samples(M), t)
            if abs(cur - prev) <= self.tol * max(1.0, abs(cur)):
                return cur
            prev = cur
        raise QuadratureNotConverged(f"no agreement to {self.tol:g} up to M={self.max_points} at t={t!r}")

    @staticmethod
    def _value(h, t):
        return -0.5 * float(np.mean(np.log1p(-2.0 * t * h)))

    @staticmethod
    def _deriv(h, t):
        return float(np.mean(h / (1.0 - 2.0 * t * h)))

    def value(self, t: float) -> float:
        if t == 0.0:
            return 0.0
        return self._adaptive(self._value, t)

    def deriv(self, t: float) -> float:
        return self._adaptive(self._deriv, t)

    @property
    def mu(self) -> float:
        return self.deriv(0.0)


def cgf_domain(f: Symbol, g: Symbol) -> CgfDomain:
    return ProductCgf(f, g).domain


def cgf(f: Symbol, g: Symbol, t: float) -> float:
    return ProductCgf(f, g).value(t)


def cgf_deriv(f: Symbol, g: Symbol, t: float) -> float:
    return ProductCgf(f, g).deriv(t)


@dataclass(frozen=True)
class LegendreResult:
    value: float
    t_star: float
    boundary: bool


def _deriv_or_inf(L: ProductCgf, t: float, direction: float) -> float:
    # close to a finite edge L' blows up; quadrature failure there is read as divergence
    try:
        return L.deriv(t)
    except QuadratureNotConverged:
        return direction * math.inf


def _solve_deriv(L: ProductCgf, x: float, direction: float):
    """Bracket and bisect ``L'(t) = x`` on the side of 0 given by ``direction``.

    Returns ``(t_star, boundary)``; ``t_star`` is infinite when the supremum
    escapes to an infinite domain edge.
    """
    edge = L.domain.t_hi if direction > 0 else L.domain.t_lo
    inner = 0.0
    outer = None
    if math.isfinite(edge):
        dist = abs(edge) / 2.0
        while dist >= BOUNDARY_OFFSET:
            t = edge - direction * dist
            d = _deriv_or_inf(L, t, direction)
            if direction * (d - x) >= 0:
                outer = t
                break
            inner = t
            dist /= 2.0
        if outer is None:
            return edge - direction * BOUNDARY_OFFSET, True
    else:
        t = direction
        for _ in range(60):
            d = L.deriv(t)
            if direction * (d - x) >= 0:
                outer = t
                break
            inner = t
            t *= 2.0
        if outer is None:
            return direction * math.inf, True
    lo, hi = sorted((inner, outer))
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        d = _deriv_or_inf(L, mid, direction)
        if d < x:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), False


def legendre(f: Symbol, g: Symbol, x: float, full_output: bool = False, cgf: ProductCgf | None = None):
    """``I(x) = sup_t (x t - L(t))``.

    The maximiser solves ``L'(t) = x`` and is found by bisection.  When ``x``
    lies outside the range of ``L'`` the supremum is approached at a domain
    edge: a finite edge is approached to within 1e-10, an infinite one gives
    ``+inf``.  With ``full_output`` a :class:`LegendreResult` is returned.
    """
    L = cgf if cgf is not None else ProductCgf(f, g)
    mu = L.mu
    if x == mu:
        res = LegendreResult(0.0, 0.0, False)
    else:
        direction = 1.0 if x > mu else -1.0
        t_star, boundary = _solve_deriv(L, float(x), direction)
        if math.isinf(t_star):
            res = LegendreResult(math.inf, t_star, True)
        else:
            res = LegendreResult(x * t_star - L.value(t_star), t_star, boundary)
    return res if full_output else res.value


def _limits_pair(limits):
    if isinstance(limits, Example1Limits):
        return limits.lambda_min_limit, limits.lambda_max_limit
    if isinstance(limits, SpectrumResult):
        return limits.lambda_min, limits.lambda_max
    lo, hi = limits
    return float(lo), float(hi)


@dataclass
class RateFunction:
    """Piecewise rate function built from ``I`` and the extreme spectral limits.

    ``a``/``b`` are ``-inf``/``+inf`` when the linear pieces are absent.
    """

    lambda_min: float
    lambda_max: float
    a: float
    b: float
    t_a: float | None
    t_b: float | None
    mu: float
    cgf: ProductCgf = field(repr=False)
    notes: list = field(default_factory=list)
    _I_a: float | None = field(default=None, repr=False)
    _I_b: float | None = field(default=None, repr=False)

    def I(self, x: float) -> float:  # noqa: E743
        return legendre(None, None, x, cgf=self.cgf)

    def region(self, x: float) -> str:
        if x <= self.a:
            return "left-linear"
        if x >= self.b:
            return "right-linear"
        return "middle"

    def J(self, x: float) -> float:
        region = self.region(x)
        if region == "left-linear":
            return self._I_a + (x - self.a) / (2.0 * self.lambda_min)
        if region == "right-linear":
            return self._I_b + (x - self.b) / (2.0 * self.lambda_max)
        return self.I(x)

    def slope(self, x: float) -> float:
        """Derivative of ``J`` at ``x`` (the Legendre maximiser inside ``]a, b[``)."""
        region = self.region(x)
        if region == "left-linear":
            return 1.0 / (2.0 * self.lambda_min)
        if region == "right-linear":
            return 1.0 / (2.0 * self.lambda_max)
        return legendre(None, None, x, full_output=True, cgf=self.cgf).t_star

    def csv_text(self, xs) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "I", "J", "region"])
        for x in xs:
            x = float(x)
            writer.writerow([repr(x), repr(float(self.I(x))), repr(float(self.J(x))), self.region(x)])
        return buf.getvalue()


def rate_function(f: Symbol, g: Symbol, limits) -> RateFunction:
    """Assemble ``J`` from the spectral limits ``(lambda_min, lambda_max)``.

    ``limits`` may be an :class:`Example1Limits`, a measured
    :class:`SpectrumResult` or a plain pair.  The left piece exists when
    ``lambda_min < 0`` and ``lambda_min < inf(fg)`` (and symmetrically on the
    right); comparisons against ``inf/sup(fg)`` allow a 1e-9 slack.
    """
    lam_min, lam_max = _limits_pair(limits)
    L = ProductCgf(f, g)
    notes = []

    def edge(lam, beyond):
        if not beyond:
            return None, None
        t = 1.0 / (2.0 * lam)
        if not L.domain.contains(t):
            raise DomainViolation(f"1/(2*{lam!r}) = {t!r} is outside the domain of L")
        try:
            return t, L.deriv(t)
        except QuadratureNotConverged:
            notes.append(f"L' did not converge at t={t!r}; treated as infinite")
            return None, None

    t_a, a = edge(lam_min, lam_min < 0 and lam_min < L.inf_fg - LIMIT_TOL)
    t_b, b = edge(lam_max, lam_max > 0 and lam_max > L.sup_fg + LIMIT_TOL)
    rf = RateFunction(
        lambda_min=lam_min,
        lambda_max=lam_max,
        a=-math.inf if a is None else a,
        b=math.inf if b is None else b,
        t_a=t_a,
        t_b=t_b,
        mu=L.mu,
        cgf=L,
        notes=notes,
    )
    # the maximiser at a (resp. b) is t_a (resp. t_b) by construction
    if t_a is not None:
        rf._I_a = a * t_a - L.value(t_a)
    if t_b is not None:
        rf._I_b = b * t_b - L.value(t_b)
    return rf


def finite_n_cgf(f: Symbol, g: Symbol, n: int, t: float, spectrum: SpectrumResult | None = None) -> float:
    """``-(1/(2(n+1))) sum_k log(1 - 2 t lambda_k)`` over the eigenvalues of ``T_n(f) T_n(g)``."""
    if spectrum is None:
        spectrum = product_spectrum(f, g, n)
    arg = 1.0 - 2.0 * t * spectrum.eigenvalues
    if np.any(arg <= 0):
        raise BeyondSpectralEdge(f"1 - 2 t lambda <= 0 for some eigenvalue at t={t!r}")
    return -0.5 * float(np.sum(np.log(arg))) / (spectrum.n + 1)
