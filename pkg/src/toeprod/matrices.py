"""Finite Toeplitz and Hankel sections, the Widom identity, and the AR(1) inverse.

Section order ``n`` means the matrix acts on Fourier modes ``0..n`` and has
size ``n + 1``.
"""
from __future__ import annotations

import numpy as np

from .errors import BandTooSmall, DegenerateSection
from .symbol import DEFAULT_QUAD_POINTS, Symbol

__all__ = [
    "toeplitz_section",
    "hankel_section",
    "flip",
    "widom_sides",
    "widom_residual",
    "ar1_inverse_tridiagonal",
    "dump_matrix_csv",
    "load_matrix_csv",
]


def _maybe_real(c: np.ndarray) -> np.ndarray:
    return c.real.copy() if not np.any(c.imag) else c


def toeplitz_section(s: Symbol, n: int, quad_points: int = DEFAULT_QUAD_POINTS) -> np.ndarray:
    """``T_n(s)``: the ``(n+1) x (n+1)`` matrix with entries ``s_hat[i - j]``.

    The result is real whenever every coefficient involved is real.
    """
    if n < 0:
        raise ValueError(f"section order must be >= 0, got {n}")
    c = _maybe_real(s.coeffs(np.arange(-n, n + 1), quad_points))
    i = np.arange(n + 1)
    return c[i[:, None] - i[None, :] + n]


def hankel_section(s: Symbol, rows: int, cols: int, quad_points: int = DEFAULT_QUAD_POINTS) -> np.ndarray:
    """Upper-left ``rows x cols`` block of ``H(s) = (s_hat[i + j + 1])``."""
    if rows < 1 or cols < 1:
        raise ValueError("Hankel section needs rows, cols >= 1")
    c = _maybe_real(s.coeffs(np.arange(1, rows + cols), quad_points))
    return c[np.arange(rows)[:, None] + np.arange(cols)[None, :]]


def flip(n: int) -> np.ndarray:
    """Anti-diagonal permutation on modes ``0..n`` (entry ``(i, j) = 1`` iff ``i + j = n``)."""
    return np.eye(n + 1)[::-1]


def widom_sides(f: Symbol, g: Symbol, n: int, band: int, quad_points: int = DEFAULT_QUAD_POINTS):
    """Both sides of the finite-section product identity.

    Returns ``(lhs, rhs)`` with ``lhs = T_n(fg) - T_n(f) T_n(g)`` and
    ``rhs = H(f) H(Jg) + W H(Jf) H(g) W`` where the Hankel factors are
    truncated to ``band`` inner columns and ``W`` is :func:`flip`.
    """
    band = max(1, int(band))
    Tfg = toeplitz_section(f * g, n, quad_points)
    lhs = Tfg - toeplitz_section(f, n, quad_points) @ toeplitz_section(g, n, quad_points)
    Jf, Jg = f.reflect(), g.reflect()
    head = hankel_section(f, n + 1, band, quad_points) @ hankel_section(Jg, band, n + 1, quad_points)
    tail = hankel_section(Jf, n + 1, band, quad_points) @ hankel_section(g, band, n + 1, quad_points)
    W = flip(n)
    return lhs, head + W @ tail @ W


def default_band(f: Symbol, g: Symbol) -> int:
    # the inner sum vanishes once either factor's coefficients do
    return max(1, min(f.band(), g.band()))


def widom_residual(
    f: Symbol,
    g: Symbol,
    n: int,
    band: int | None = None,
    tol: float = 1e-10,
    quad_points: int = DEFAULT_QUAD_POINTS,
) -> float:
    """Spectral norm of ``lhs - rhs`` from :func:`widom_sides`.

    The residual is recomputed with twice the band; if the two disagree by
    more than ``tol`` the Hankel truncation is too short and
    :class:`BandTooSmall` is raised.
    """
    if n < 0:
        raise ValueError(f"section order must be >= 0, got {n}")
    if band is None:
        band = default_band(f, g)
    lhs, rhs = widom_sides(f, g, n, band, quad_points)
    residual = float(np.linalg.norm(lhs - rhs, 2))
    lhs2, rhs2 = widom_sides(f, g, n, 2 * max(1, band), quad_points)
    residual2 = float(np.linalg.norm(lhs2 - rhs2, 2))
    if abs(residual2 - residual) > tol:
        raise BandTooSmall(f"band {band} too small: residual {residual:.3e} vs {residual2:.3e} at double band")
    return residual


def ar1_inverse_tridiagonal(theta: float, n: int) -> np.ndarray:
    """Inverse of ``T_n`` of the AR(1) density: tridiagonal, corners 1, interior ``1 + theta^2``."""
    if not abs(theta) < 1:
        raise ValueError(f"need |theta| < 1, got {theta}")
    if n < 1:
        raise DegenerateSection("the tridiagonal inverse needs n >= 1")
    diag = np.full(n + 1, 1.0 + theta * theta)
    diag[0] = diag[-1] = 1.0
    return np.diag(diag) - theta * (np.eye(n + 1, k=1) + np.eye(n + 1, k=-1))


def dump_matrix_csv(A, path) -> None:
    """Write ``A`` as ``size=m`` followed by one line of ``re,im`` pairs per row."""
    A = np.asarray(A, dtype=complex)
    m = A.shape[0]
    lines = [f"size={m}"]
    for row in A:
        lines.append(",".join(f"{z.real!r},{z.imag!r}" for z in row.tolist()))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("size="):
            raise ValueError(f"bad matrix header {header!r}")
        m = int(header[5:])
        rows = [np.array(line.split(","), dtype=float) for line in fh if line.strip()]
    if len(rows) != m or any(r.size != 2 * m for r in rows):
        raise ValueError("matrix body does not match header size")
    data = np.vstack(rows)
    return data[:, 0::2] + 1j * data[:, 1::2]
