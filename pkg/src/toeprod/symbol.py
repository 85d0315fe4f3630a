"""Symbols on the torus: evaluation, Fourier coefficients and ranges.

A symbol is an immutable description of a function on ``[0, 2*pi)``:

* :class:`TrigPoly` -- finitely supported Fourier series ``sum_k c_k e^{ikx}``;
* :class:`AR1Density` -- ``1 / (1 + theta^2 - 2 theta cos x)``;
* :class:`Pointwise` -- product, sum or scalar multiple of symbols;
* :class:`Reflected` -- ``x -> s(-x)``.

Closed forms are used wherever they exist; composite symbols get their
Fourier coefficients from the periodic trapezoidal rule (an FFT of samples).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Number
from typing import Mapping

import numpy as np

from .errors import NotRealValued, QuadratureNotConverged

__all__ = [
    "Symbol",
    "TrigPoly",
    "AR1Density",
    "Pointwise",
    "Reflected",
    "RangeInfo",
    "trig_poly",
    "constant",
    "cosine",
    "exp_mode",
    "evaluate",
    "fourier_coeff",
    "symbol_range",
    "sup_norm",
    "ar1_cutoff",
    "symbol_from_json",
    "DEFAULT_QUAD_POINTS",
    "DEFAULT_RANGE_GRID",
]

DEFAULT_QUAD_POINTS = 4096
DEFAULT_RANGE_GRID = 100_000
DEFAULT_CUTOFF_EPS = 1e-14
QUAD_TOL = 1e-12

TWO_PI = 2.0 * math.pi


def _as_real_if_possible(values, is_real: bool):
    return np.real(values) if is_real else values


class Symbol:
    """Base class; subclasses are frozen dataclasses."""

    is_real: bool = True

    def __call__(self, x):
        return _as_real_if_possible(self._eval(np.asarray(x, dtype=float)), self.is_real)

    def _eval(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def coeffs(self, k, quad_points: int = DEFAULT_QUAD_POINTS) -> np.ndarray:
        """Fourier coefficients ``(1/2pi) int s(x) e^{-ikx} dx`` for integer ``k``."""
        k = np.asarray(k, dtype=np.int64)
        return self._coeffs(k, quad_points)

    def _coeffs(self, k: np.ndarray, quad_points: int) -> np.ndarray:
        raise NotImplementedError

    def band(self, eps: float = DEFAULT_CUTOFF_EPS) -> int:
        """Index beyond which the coefficients are below ``eps`` (exactly zero for trig polynomials)."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # composition
    def __mul__(self, other):
        if isinstance(other, Symbol):
            return Pointwise("product", self, other)
        if isinstance(other, Number):
            return Pointwise("scale", self, complex(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return Pointwise("scale", self, complex(other))
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Symbol):
            return Pointwise("sum", self, other)
        if isinstance(other, Number):
            return Pointwise("sum", self, constant(other))
        return NotImplemented

    __radd__ = __add__

    def reflect(self) -> "Reflected":
        return Reflected(self)


@dataclass(frozen=True, eq=False)
class TrigPoly(Symbol):
    """Trigonometric polynomial with coefficient table ``{k: c_k}``."""

    coeff_table: Mapping[int, complex]
    is_real: bool = field(init=False)

    def __post_init__(self):
        table = {int(k): complex(v) for k, v in self.coeff_table.items() if complex(v) != 0}
        object.__setattr__(self, "coeff_table", table)
        scale = max((abs(v) for v in table.values()), default=0.0)
        real = all(
            abs(table.get(-k, 0.0) - np.conj(v)) <= 1e-14 * max(scale, 1.0) for k, v in table.items()
        )
        object.__setattr__(self, "is_real", real)

    @property
    def degree(self) -> int:
        return max((abs(k) for k in self.coeff_table), default=0)

    def _eval(self, x):
        out = np.zeros(np.shape(x), dtype=complex)
        for k, c in self.coeff_table.items():
            out = out + c * np.exp(1j * k * x)
        return out

    def _coeffs(self, k, quad_points):
        flat = np.array([self.coeff_table.get(int(j), 0.0) for j in k.ravel()], dtype=complex)
        return flat.reshape(k.shape)

    def band(self, eps=DEFAULT_CUTOFF_EPS):
        return self.degree

    def to_json(self):
        return {
            "type": "trigpoly",
            "coeffs": {str(k): [v.real, v.imag] for k, v in sorted(self.coeff_table.items())},
        }


@dataclass(frozen=True, eq=False)
class AR1Density(Symbol):
    """Spectral density ``1 / (1 + theta^2 - 2 theta cos x)`` of a unit-innovation AR(1) process."""

    theta: float

    def __post_init__(self):
        if not abs(self.theta) < 1:
            raise ValueError(f"AR(1) density needs |theta| < 1, got {self.theta}")
        object.__setattr__(self, "theta", float(self.theta))

    def _eval(self, x):
        th = self.theta
        return (1.0 / (1.0 + th * th - 2.0 * th * np.cos(x))).astype(complex)

    def _coeffs(self, k, quad_points):
        th = self.theta
        return (th ** np.abs(k).astype(float) / (1.0 - th * th)).astype(complex)

    def band(self, eps=DEFAULT_CUTOFF_EPS):
        return ar1_cutoff(self.theta, eps)

    def to_json(self):
        return {"type": "ar1", "theta": self.theta}


@dataclass(frozen=True, eq=False)
class Pointwise(Symbol):
    """Pointwise combination: ``op`` is ``"product"``, ``"sum"`` or ``"scale"``.

    For ``"scale"`` the right operand is a number.
    """

    op: str
    left: Symbol
    right: object
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.op not in ("product", "sum", "scale"):
            raise ValueError(f"unknown pointwise op {self.op!r}")
        if self.op == "scale":
            real = self.left.is_real and complex(self.right).imag == 0
        else:
            real = self.left.is_real and self.right.is_real
        object.__setattr__(self, "is_real", real)

    def _eval(self, x):
        lv = self.left._eval(x)
        if self.op == "scale":
            return complex(self.right) * lv
        rv = self.right._eval(x)
        return lv * rv if self.op == "product" else lv + rv

    def _quadrature(self, M: int) -> np.ndarray:
        if M not in self._cache:
            x = TWO_PI * np.arange(M) / M
            samples = self(x)
            self._cache[M] = np.fft.fft(samples) / M
        return self._cache[M]

    def _coeffs(self, k, quad_points):
        kmax = int(np.max(np.abs(k), initial=0))
        M = int(quad_points)
        while M < 4 * (kmax + 1):
            M *= 2
        coarse = self._quadrature(M)[k % M]
        fine = self._quadrature(2 * M)[k % (2 * M)]
        scale = max(1.0, float(np.max(np.abs(fine), initial=0.0)))
        if np.max(np.abs(fine - coarse), initial=0.0) > QUAD_TOL * scale:
            raise QuadratureNotConverged(
                f"Fourier coefficients changed by more than {QUAD_TOL:g} between M={M} and M={2 * M}"
            )
        return coarse

    def band(self, eps=DEFAULT_CUTOFF_EPS):
        if self.op == "scale":
            return self.left.band(eps)
        if self.op == "product":
            return self.left.band(eps) + self.right.band(eps)
        return max(self.left.band(eps), self.right.band(eps))

    def to_json(self):
        if self.op == "scale":
            c = complex(self.right)
            return {"type": "scale", "factor": [c.real, c.imag], "inner": self.left.to_json()}
        return {"type": self.op, "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True, eq=False)
class Reflected(Symbol):
    """``(J s)(x) = s(-x)``; its coefficients are those of ``s`` with ``k -> -k``."""

    inner: Symbol

    def __post_init__(self):
        object.__setattr__(self, "is_real", self.inner.is_real)

    def _eval(self, x):
        return self.inner._eval(-x)

    def _coeffs(self, k, quad_points):
        return self.inner._coeffs(-k, quad_points)

    def band(self, eps=DEFAULT_CUTOFF_EPS):
        return self.inner.band(eps)

    def to_json(self):
        return {"type": "reflect", "inner": self.inner.to_json()}


def trig_poly(coeffs: Mapping[int, complex]) -> TrigPoly:
    return TrigPoly(dict(coeffs))


def constant(c) -> TrigPoly:
    return TrigPoly({0: c})


def cosine(a: float = 0.0) -> TrigPoly:
    """``a + cos(x)``."""
    return TrigPoly({0: a, 1: 0.5, -1: 0.5})


def exp_mode(k: int) -> TrigPoly:
    """``e^{ikx}``."""
    return TrigPoly({k: 1.0})


def ar1_cutoff(theta: float, eps: float = DEFAULT_CUTOFF_EPS) -> int:
    """Smallest ``K`` with ``|theta|^K / (1 - theta^2) <= eps``."""
    th = abs(theta)
    if th == 0.0:
        return 0
    return max(0, math.ceil(math.log(eps * (1.0 - th * th)) / math.log(th)))


def evaluate(s: Symbol, x):
    """Value of ``s`` at ``x`` (radians), always complex."""
    return np.asarray(s._eval(np.asarray(x, dtype=float)), dtype=complex)[()]


def fourier_coeff(s: Symbol, k, quad_points: int = DEFAULT_QUAD_POINTS):
    """Fourier coefficient(s) of ``s`` at integer index ``k``.

    Exact for trigonometric polynomials and AR(1) densities; composites use
    the ``quad_points``-point trapezoidal rule, checked against twice as many
    points (raises :class:`QuadratureNotConverged` on disagreement).
    """
    return s.coeffs(k, quad_points)[()]


@dataclass(frozen=True)
class RangeInfo:
    inf_value: float
    sup_value: float
    argmin: float
    argmax: float
    method: str  # "exact" or "grid-refined"


def _ternary(fun, lo, hi, minimize, width=1e-12, max_iter=200):
    sign = 1.0 if minimize else -1.0
    for _ in range(max_iter):
        if hi - lo <= width:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if sign * fun(m1) <= sign * fun(m2):
            hi = m2
        else:
            lo = m1
    x = 0.5 * (lo + hi)
    return x, float(fun(x))


def symbol_range(s: Symbol, grid_points: int = DEFAULT_RANGE_GRID) -> RangeInfo:
    """Infimum and supremum of a real symbol over the torus.

    Closed forms for trigonometric polynomials of degree <= 1 and AR(1)
    densities; otherwise a uniform grid followed by ternary refinement
    around the best grid point on each side.
    """
    if not s.is_real:
        raise NotRealValued("range is only defined for real-valued symbols")
    if isinstance(s, TrigPoly) and s.degree <= 1:
        c0 = s.coeff_table.get(0, 0.0).real
        c1 = s.coeff_table.get(1, 0.0)
        amp = 2.0 * abs(c1)
        if amp == 0.0:
            return RangeInfo(c0, c0, 0.0, 0.0, "exact")
        phi = math.atan2(c1.imag, c1.real)
        argmax = (-phi) % TWO_PI
        argmin = (math.pi - phi) % TWO_PI
        return RangeInfo(c0 - amp, c0 + amp, argmin, argmax, "exact")
    if isinstance(s, AR1Density):
        th = s.theta
        lo, hi = 1.0 / (1.0 + abs(th)) ** 2, 1.0 / (1.0 - abs(th)) ** 2
        if th > 0:
            return RangeInfo(lo, hi, math.pi, 0.0, "exact")
        if th < 0:
            return RangeInfo(lo, hi, 0.0, math.pi, "exact")
        return RangeInfo(1.0, 1.0, 0.0, 0.0, "exact")

    x = TWO_PI * np.arange(grid_points) / grid_points
    values = np.real(s(x))
    h = TWO_PI / grid_points

    def fun(t):
        return float(np.real(s(t)))

    imin = int(np.argmin(values))
    imax = int(np.argmax(values))
    xmin, vmin = _ternary(fun, x[imin] - h, x[imin] + h, minimize=True)
    xmax, vmax = _ternary(fun, x[imax] - h, x[imax] + h, minimize=False)
    if values[imin] <= vmin:
        xmin, vmin = float(x[imin]), float(values[imin])
    if values[imax] >= vmax:
        xmax, vmax = float(x[imax]), float(values[imax])
    return RangeInfo(vmin, vmax, xmin % TWO_PI, xmax % TWO_PI, "grid-refined")


def sup_norm(s: Symbol, grid_points: int = DEFAULT_RANGE_GRID) -> float:
    r = symbol_range(s, grid_points)
    return max(abs(r.inf_value), abs(r.sup_value))


_NAMED = {
    "one": lambda: constant(1.0),
    "cos": lambda: cosine(0.0),
    "sin": lambda: TrigPoly({1: -0.5j, -1: 0.5j}),
    "eix": lambda: exp_mode(1),
    "e-ix": lambda: exp_mode(-1),
}


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


def symbol_from_json(obj) -> Symbol:
    """Build a symbol from its JSON description (or a short name like ``"cos"``)."""
    if isinstance(obj, str):
        try:
            return _NAMED[obj]()
        except KeyError:
            raise ValueError(f"unknown symbol name {obj!r}; known: {sorted(_NAMED)}") from None
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError(f"symbol description must be an object with a 'type' key, got {obj!r}")
    kind = obj["type"]
    if kind == "trigpoly":
        return TrigPoly({int(k): _complex(v) for k, v in obj["coeffs"].items()})
    if kind == "ar1":
        return AR1Density(float(obj["theta"]))
    if kind in ("product", "sum"):
        return Pointwise(kind, symbol_from_json(obj["left"]), symbol_from_json(obj["right"]))
    if kind == "scale":
        return Pointwise("scale", symbol_from_json(obj["inner"]), _complex(obj["factor"]))
    if kind == "reflect":
        return Reflected(symbol_from_json(obj["inner"]))
    raise ValueError(f"unknown symbol type {kind!r}")
