"""Jacobi polynomials, their cosine expansions, and Gauss-Jacobi quadrature.

``Q_k = P_k / P_k(1)`` is evaluated by a forward three-term recurrence that is
normalized at ``x = 1`` so nothing overflows for large degrees.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dct
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from .spaces import SpaceParams


@dataclass(frozen=True)
class JacobiIndex:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"Jacobi parameters must exceed -1, got ({self.alpha}, {self.beta})")

    @classmethod
    def from_space(cls, p: SpaceParams) -> "JacobiIndex":
        return cls(p.alpha, p.beta)


def _index(idx) -> JacobiIndex:
    if isinstance(idx, JacobiIndex):
        return idx
    if isinstance(idx, SpaceParams):
        return JacobiIndex.from_space(idx)
    a, b = idx
    return JacobiIndex(float(a), float(b))


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + 1e-12):
        raise ValueError("x must lie in [-1, 1]")
    return np.clip(x, -1.0, 1.0)


def jacobi_P_at_one(idx, k):
    """``P_k(1) = binom(k + alpha, k)``."""
    idx = _index(idx)
    k = np.asarray(k, dtype=float)
    return np.exp(gammaln(k + idx.alpha + 1) - gammaln(k + 1) - gammaln(idx.alpha + 1))


def jacobi_Q_rows(idx, kmax: int, x):
    """Yield ``Q_0(x), ..., Q_kmax(x)`` one degree at a time (constant memory)."""
    idx = _index(idx)
    x = _check_x(x)
    a, b = idx.alpha, idx.beta
    s = a + b
    prev = np.ones_like(x)
    yield prev
    if kmax == 0:
        return
    cur = ((s + 2) * x + (a - b)) / (2 * (a + 1))
    yield cur
    for n in range(1, kmax):
        d = 2 * (n + 1) * (n + s + 1) * (2 * n + s)
        A = (2 * n + s + 1) * (2 * n + s + 2) * (2 * n + s) / d
        B = (2 * n + s + 1) * (a * a - b * b) / d
        C = 2 * (n + a) * (n + b) * (2 * n + s + 2) / d
        up = (n + 1) / (n + a + 1)
        prev, cur = cur, (A * x + B) * cur * up - C * prev * up * n / (n + a)
        yield cur


def jacobi_Q_all(idx, kmax: int, x) -> np.ndarray:
    """Rows ``Q_0(x), ..., Q_kmax(x)``; shape ``(kmax + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    for k, row in enumerate(jacobi_Q_rows(idx, kmax, x)):
        out[k] = row
    return out


def jacobi_Q(idx, k: int, x):
    """Normalized Jacobi polynomial, ``Q_k(1) = 1``."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    q = jacobi_Q_all(idx, k, x)[k]
    return float(q) if q.ndim == 0 else q


def jacobi_P(idx, k: int, x):
    """Standard Jacobi polynomial ``P_k^{(alpha, beta)}``."""
    q = jacobi_Q(idx, k, x)
    return q * float(jacobi_P_at_one(idx, k))


def cosine_coeffs(idx, k: int, n_points: int | None = None, tol: float = 1e-10) -> np.ndarray:
    """Coefficients ``c_0..c_k`` with ``Q_k(cos t) = sum_v c_v cos(v t)``.

    Extracted by a discrete cosine transform of samples at Chebyshev points
    and then checked by reconstruction on an independent grid.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    n = max(int(n_points or 0), 4 * k + 8)
    theta = (np.arange(n) + 0.5) * np.pi / n
    samples = jacobi_Q_all(idx, k, np.cos(theta))[k]
    c = dct(samples, type=2) / n
    c[0] /= 2
    c = c[: k + 1]

    check = np.linspace(0.0, np.pi, 2 * n + 1)
    recon = np.cos(np.outer(check, np.arange(k + 1))) @ c
    resid = np.max(np.abs(recon - jacobi_Q_all(idx, k, np.cos(check))[k]))
    if resid > tol:
        raise ArithmeticError(f"cosine reconstruction residual {resid:.3e} exceeds {tol:g} at k={k}")
    return c


@lru_cache(maxsize=32)
def _cosine_table(a: float, b: float, kmax: int) -> np.ndarray:
    n = 2 * kmax + 8
    theta = (np.arange(n) + 0.5) * np.pi / n
    table = dct(jacobi_Q_all((a, b), kmax, np.cos(theta)), type=2, axis=1) / n
    table[:, 0] /= 2
    table = np.tril(table[:, : kmax + 1])
    table.setflags(write=False)
    return table


def cosine_coeffs_all(idx, kmax: int) -> np.ndarray:
    """Lower-triangular table: row ``k`` holds the cosine coefficients of ``Q_k``."""
    idx = _index(idx)
    return _cosine_table(idx.alpha, idx.beta, int(kmax))


def jacobi_mass(idx) -> float:
    """Total mass of ``(1 - x)^alpha (1 + x)^beta`` on ``[-1, 1]``."""
    idx = _index(idx)
    a, b = idx.alpha, idx.beta
    return float(np.exp((a + b + 1) * np.log(2.0) + betaln(a + 1, b + 1)))


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def _recurrence(a: float, b: float, n: int):
    """Diagonal and off-diagonal of the Jacobi matrix for the monic recurrence."""
    s = a + b
    k = np.arange(n, dtype=float)
    diag = np.empty(n)
    diag[0] = (b - a) / (s + 2)
    if n > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / ((2 * kk + s) * (2 * kk + s + 2))
    off = np.empty(max(n - 1, 0))
    if n > 1:
        # k = 1 written with the (k + s) / (2k + s - 1) factor cancelled, valid at s = -1
        off[0] = 4 * (a + 1) * (b + 1) / ((s + 2) ** 2 * (s + 3))
        kk = np.arange(2, n, dtype=float)
        off[1:] = (
            4 * kk * (kk + a) * (kk + b) * (kk + s)
            / ((2 * kk + s) ** 2 * (2 * kk + s + 1) * (2 * kk + s - 1))
        )
    return diag, np.sqrt(off)


@lru_cache(maxsize=64)
def _gauss_jacobi_cached(a: float, b: float, n: int):
    diag, off = _recurrence(a, b, n)
    try:
        nodes, vecs = eigh_tridiagonal(diag, off)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"Golub-Welsch eigen-solve failed for n={n}") from exc
    weights = jacobi_mass((a, b)) * vecs[0] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi(idx, n: int) -> QuadratureRule:
    """``n``-point Gauss rule for the weight ``(1 - x)^alpha (1 + x)^beta``.

    Exact for polynomials of degree ``<= 2n - 1``.
    """
    if n < 1:
        raise ValueError("quadrature order must be >= 1")
    idx = _index(idx)
    nodes, weights = _gauss_jacobi_cached(idx.alpha, idx.beta, int(n))
    return QuadratureRule(nodes, weights)


def default_order(kmax: int) -> int:
    return max(64, 2 * kmax + 16)


__all__ = [
    "JacobiIndex",
    "QuadratureRule",
    "jacobi_P",
    "jacobi_Q",
    "jacobi_Q_all",
    "jacobi_Q_rows",
    "jacobi_P_at_one",
    "cosine_coeffs",
    "cosine_coeffs_all",
    "gauss_jacobi",
    "jacobi_mass",
    "default_order",
]
