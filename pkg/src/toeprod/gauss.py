"""Monte Carlo for quadratic forms of a stationary AR(1) Gaussian process.

Paths ``X_0..X_n`` have covariance ``T_n(g)`` with ``g`` the AR(1) density,
and ``W_n(f) = (1/n) X^T T_n(f) X``.  Replicates are generated in blocks of
fixed size; block ``b`` draws from a Philox stream keyed by ``(seed, b)``, so
results do not depend on how blocks are scheduled.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCount
from .matrices import toeplitz_section
from .symbol import Symbol

__all__ = [
    "SimulationConfig",
    "TailEstimate",
    "substream",
    "sample_path",
    "sample_paths",
    "quadratic_form",
    "quadratic_forms",
    "simulate_quadratic_forms",
    "tail_study",
    "tail_csv",
]

BLOCK_SIZE = 1 << 14
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimulationConfig:
    theta: float
    n: int
    replicates: int
    seed: int
    thresholds: tuple = ()
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        if not abs(self.theta) < 1:
            raise ValueError("need |theta| < 1")
        if self.n < 1:
            raise ValueError("need n >= 1")
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        th = tuple(float(x) for x in self.thresholds)
        if list(th) != sorted(th):
            raise ValueError("thresholds must be sorted")
        object.__setattr__(self, "thresholds", th)


@dataclass(frozen=True)
class TailEstimate:
    threshold: float
    side: str  # "upper": P(W >= x), "lower": P(W <= x)
    count: int
    empirical_prob: float
    empirical_rate: float
    rate_reference: float
    stderr: float

    @property
    def degenerate(self) -> bool:
        return self.count == 0


def substream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, index)``."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_paths(theta: float, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` stationary AR(1) paths of length ``n + 1``, shape ``(n + 1, size)``."""
    # replicate-major draws: the j-th path only depends on the stream prefix
    # up to it, so truncated blocks reproduce the leading paths
    X = np.ascontiguousarray(rng.standard_normal((size, n + 1)).T)
    X[0] /= math.sqrt(1.0 - theta * theta)
    for t in range(n):
        X[t + 1] += theta * X[t]
    return X


def sample_path(theta: float, n: int, rng: np.random.Generator) -> np.ndarray:
    return sample_paths(theta, n, 1, rng)[:, 0]


def quadratic_form(f: Symbol, path) -> float:
    """``(1/n) x^T T_n(f) x`` for a single path of length ``n + 1``."""
    x = np.asarray(path, dtype=float)
    n = x.size - 1
    if n < 1:
        raise ValueError("path must have length >= 2")
    T = toeplitz_section(f, n)
    return float(np.real(x @ T @ x)) / n


def quadratic_forms(f: Symbol, X: np.ndarray) -> np.ndarray:
    """Vectorised :func:`quadratic_form` over the columns of ``X`` (shape ``(n + 1, size)``).

    Uses the diagonal expansion ``x^T T x = c_0 S_0 + 2 sum_d Re(c_d) S_d``
    with lag products ``S_d``, truncated at the symbol's band.
    """
    n = X.shape[0] - 1
    band = min(f.band(), n)
    c = f.coeffs(np.arange(band + 1))
    total = c[0].real * np.einsum("ij,ij->j", X, X)
    for d in range(1, band + 1):
        if c[d] != 0:
            total += 2.0 * c[d].real * np.einsum("ij,ij->j", X[d:], X[:-d])
    return total / n


def simulate_quadratic_forms(config: SimulationConfig, f: Symbol) -> np.ndarray:
    """All ``replicates`` values of ``W_n(f)``, deterministic in ``config.seed``."""
    out = np.empty(config.replicates)
    nblocks = -(-config.replicates // config.block_size)
    for b in range(nblocks):
        start = b * config.block_size
        size = min(config.block_size, config.replicates - start)
        X = sample_paths(config.theta, config.n, size, substream(config.seed, b))
        out[start:start + size] = quadratic_forms(f, X)
    return out


def tail_study(config: SimulationConfig, f: Symbol, rate, values: np.ndarray | None = None):
    """Empirical tail rates ``-(1/n) log P`` at each threshold, against ``rate.J``.

    Thresholds at or above ``rate.mu`` use the upper tail, the others the
    lower tail.  Thresholds with no exceedances get probability 0 and an
    infinite rate, and a :class:`DegenerateCount` warning is issued.
    """
    if values is None:
        values = simulate_quadratic_forms(config, f)
    N = values.size
    out = []
    for x in config.thresholds:
        side = "upper" if x >= rate.mu else "lower"
        count = int(np.count_nonzero(values >= x if side == "upper" else values <= x))
        p = count / N
        if count == 0:
            warnings.warn(f"no exceedances at threshold {x!r}", DegenerateCount, stacklevel=2)
            emp_rate = math.inf
        else:
            emp_rate = -math.log(p) / config.n
        out.append(TailEstimate(
            threshold=x,
            side=side,
            count=count,
            empirical_prob=p,
            empirical_rate=emp_rate,
            rate_reference=float(rate.J(x)),
            stderr=math.sqrt(p * (1.0 - p) / N),
        ))
    return out


def tail_csv(estimates, config: SimulationConfig) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "empirical_prob", "empirical_rate", "J_reference", "stderr", "n", "replicates", "seed"])
    for e in estimates:
        writer.writerow([
            repr(e.threshold), repr(e.empirical_prob), repr(e.empirical_rate),
            repr(e.rate_reference), repr(e.stderr), config.n, config.replicates, config.seed,
        ])
    return buf.getvalue()
