"""Dense Hermitian eigensolver and small linear-algebra kernel.

The eigensolver reduces a Hermitian matrix to real symmetric tridiagonal
form with Householder reflections (a diagonal unitary phase scaling removes
the complex phases of the off-diagonal) and then runs the implicit-shift QL
iteration.  ``det`` and ``solve`` use LU factorisation with partial pivoting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import drot

from .errors import NoConvergence, NotHermitian, NotPositiveSemidefinite, Singular

__all__ = [
    "EigenDecomposition",
    "is_hermitian",
    "householder_tridiagonal",
    "tridiagonal_ql",
    "hermitian_eig",
    "psd_sqrt",
    "lu_factor",
    "slogdet",
    "det",
    "solve",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and (optionally) unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    def reconstruct(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("decomposition was computed without eigenvectors")
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _scale(A: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0


def is_hermitian(A, tol: float = 1e-10) -> bool:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return bool(np.max(np.abs(A - A.conj().T), initial=0.0) <= tol * _scale(A))


def householder_tridiagonal(A, want_q: bool = True):
    """Reduce a Hermitian matrix to tridiagonal form, ``A = Q T Q^H``.

    Returns ``(d, e, Q)`` with ``d`` the real diagonal of ``T``, ``e`` its
    sub-diagonal (complex for complex input) and ``Q`` unitary, or ``None``
    when ``want_q`` is false.
    """
    A = np.array(A, copy=True)
    if not np.iscomplexobj(A):
        A = A.astype(float)
    n = A.shape[0]
    reflectors = []
    for k in range(n - 2):
        x = A[k + 1:, k]
        xnorm = float(np.linalg.norm(x))
        if xnorm == 0.0 or float(np.linalg.norm(x[1:])) == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        B = A[k + 1:, k + 1:]
        w = B @ v
        u = w - (v.conj() @ w) * v
        B -= np.column_stack((2.0 * v, 2.0 * u)) @ np.vstack((u.conj(), v.conj()))
        A[k + 1:, k] = 0.0
        A[k, k + 1:] = 0.0
        A[k + 1, k] = alpha
        A[k, k + 1] = np.conj(alpha)
        reflectors.append((k, v))
    Q = None
    if want_q:
        # backward accumulation: reflector k only touches the trailing block
        Q = np.eye(n, dtype=A.dtype)
        for k, v in reversed(reflectors):
            Qb = Q[k + 1:, k + 1:]
            Qb -= np.outer(2.0 * v, v.conj() @ Qb)
    d = np.real(np.diag(A)).copy()
    e = np.diag(A, -1).copy()
    return d, e, Q


def tridiagonal_ql(d, e, vectors: np.ndarray | None = None, max_sweeps: int = 50):
    """Implicit-shift QL iteration on a real symmetric tridiagonal matrix.

    ``d`` is the diagonal, ``e`` the sub-diagonal (length ``len(d) - 1``).
    If ``vectors`` is given (``m x n``), its columns are rotated along with
    the iteration, so passing the identity yields the eigenvectors.
    Eigenvalues are returned unsorted.
    """
    n = len(d)
    d = [float(v) for v in d]
    e = [float(v) for v in e] + [0.0]
    # rows of zt are the columns being rotated, kept contiguous
    zt = None if vectors is None else np.ascontiguousarray(np.asarray(vectors, dtype=float).T)
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= _EPS * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                raise NoConvergence(f"QL iteration did not converge for eigenvalue {l}")
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    drot(zt[i + 1], zt[i], c, s, overwrite_x=1, overwrite_y=1)
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    vals = np.array(d)
    return vals, (None if zt is None else zt.T)


def hermitian_eig(A, want_vectors: bool = True, max_sweeps: int = 50) -> EigenDecomposition:
    """Eigen-decomposition of a dense Hermitian matrix.

    Raises
    ------
    NotHermitian
        If ``A`` deviates from its conjugate transpose by more than 1e-10
        (relative to its largest entry).
    NoConvergence
        If the QL iteration needs more than ``max_sweeps`` sweeps for an
        eigenvalue.
    """
    A = np.asarray(A)
    if not is_hermitian(A):
        raise NotHermitian("matrix is not Hermitian within 1e-10")
    n = A.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)) if want_vectors else None)
    A = 0.5 * (A + A.conj().T)
    d, e, Q = householder_tridiagonal(A, want_q=want_vectors)
    # unitary diagonal scaling making the sub-diagonal real and non-negative
    absval = np.abs(e)
    phase = np.ones(n, dtype=e.dtype if np.iscomplexobj(e) else float)
    if np.iscomplexobj(e):
        unit = np.where(absval > 0, e / np.where(absval > 0, absval, 1.0), 1.0)
        phase[1:] = np.cumprod(unit)
        e = absval
    else:
        e = np.real(e)
    Z0 = np.eye(n) if want_vectors else None
    vals, Z = tridiagonal_ql(d, e, Z0, max_sweeps=max_sweeps)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    if not want_vectors:
        return EigenDecomposition(vals, None)
    Z = Z[:, order]
    V = Q @ (phase[:, None] * Z)
    return EigenDecomposition(vals, V)


def psd_sqrt(A, tol_clamp: float = 1e-10) -> np.ndarray:
    """Positive semidefinite square root ``V diag(sqrt(max(lam, 0))) V^H``.

    Eigenvalues down to ``-tol_clamp * ||A||`` are clamped to zero; anything
    more negative raises :class:`NotPositiveSemidefinite`.
    """
    eig = hermitian_eig(A, want_vectors=True)
    lam = eig.eigenvalues
    norm = float(np.max(np.abs(lam), initial=0.0))
    if lam.size and lam[0] < -tol_clamp * norm:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {lam[0]:.3e} is negative")
    root = np.sqrt(np.clip(lam, 0.0, None))
    V = eig.eigenvectors
    R = (V * root) @ V.conj().T
    return 0.5 * (R + R.conj().T)


def lu_factor(A):
    """LU factorisation with partial pivoting, ``P A = L U``.

    Returns ``(lu, perm, sign)``: unit-lower ``L`` and ``U`` packed in ``lu``,
    the row permutation and the permutation sign.
    """
    lu = np.array(A, copy=True)
    if not np.iscomplexobj(lu):
        lu = lu.astype(float)
    n = lu.shape[0]
    if lu.ndim != 2 or lu.shape[1] != n:
        raise ValueError("LU factorisation needs a square matrix")
    perm = np.arange(n)
    sign = 1
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = lu[k, k]
        if pivot == 0:
            continue
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def slogdet(A):
    """Sign (unit complex for complex input) and log-modulus of ``det(A)``."""
    A = np.asarray(A)
    if A.shape[0] == 0:
        return 1.0, 0.0
    lu, _, sign = lu_factor(A)
    piv = np.diag(lu)
    if np.any(piv == 0):
        return 0.0 * sign, -np.inf
    absval = np.abs(piv)
    unit = np.prod(piv / absval) * sign
    if not np.iscomplexobj(unit):
        unit = float(unit)
    return unit, float(np.sum(np.log(absval)))


def det(A):
    sign, logabs = slogdet(A)
    return sign * math.exp(logabs) if np.isfinite(logabs) else 0.0 * sign


def solve(A, b, pivot_tol: float = 1e-13):
    """Solve ``A x = b`` by LU with partial pivoting.

    Raises :class:`Singular` when a pivot is below ``pivot_tol`` times the
    largest entry of ``A``.
    """
    A = np.asarray(A)
    lu, perm, _ = lu_factor(A)
    n = lu.shape[0]
    scale = float(np.max(np.abs(A), initial=0.0))
    if scale == 0.0 or np.any(np.abs(np.diag(lu)) <= pivot_tol * scale):
        raise Singular("matrix is singular to working precision")
    x = np.array(b, dtype=np.result_type(lu, np.asarray(b), float))[perm]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x
