"""Multiplier sequences: shifts, generalized shifts, smooth cutoffs.

A multiplier operator scales the degree-``k`` component of a function by
``mu_k``. Everything here builds or inspects such sequences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import comb

from .jacobi import cosine_coeffs_all, jacobi_Q_all
from .spaces import SpaceParams, laplace_eigenvalue
from .zonal import ZonalFunction


@dataclass(frozen=True, eq=False)
class MultiplierSequence:
    space: SpaceParams
    values: np.ndarray
    label: str = ""
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValueError(f"multiplier sequence {self.label!r} has non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def kmax(self) -> int:
        return self.values.size - 1


def _binom(n: int, k: int) -> int:
    # Gamma-function convention: binom(n, 0) = 1, zero for negative k
    return int(comb(n, k, exact=True)) if k >= 0 else 0


def gen_shift_weights(r: int) -> np.ndarray:
    """Weights ``w_j`` (j = 1..r) with ``m_r(k, t) = sum_j w_j Q_k(cos jt)``."""
    if r < 1 or int(r) != r:
        raise ValueError("r must be a positive integer")
    r = int(r)
    c = -2.0 / _binom(2 * r, r)
    return np.array([c * (-1) ** j * _binom(2 * r, r - j) for j in range(1, r + 1)])


def gen_shift_values(p: SpaceParams, r: int, t, kmax: int) -> np.ndarray:
    """``m_r(k, t)`` for ``k = 0..kmax`` and every ``t``; shape ``(kmax+1,) + t.shape``."""
    t = np.asarray(t, dtype=float)
    w = gen_shift_weights(r)
    out = np.zeros((kmax + 1,) + t.shape)
    for j, wj in enumerate(w, start=1):
        # cos is even and 2pi-periodic, so any jt is a valid argument
        out += wj * jacobi_Q_all(p, kmax, np.cos(j * t))
    return out


def one_minus_gen_shift(p: SpaceParams, r: int, t, kmax: int) -> np.ndarray:
    """``1 - m_r(k, t)`` without cancellation; same shape as :func:`gen_shift_values`.

    With ``Q_k(cos u) = sum_v c_v cos(vu)`` and ``c_v >= 0`` the weights
    collapse to ``1 - m_r(k, t) = sum_v c_v (2 sin(vt/2))^(2r) / binom(2r, r)``,
    a sum of nonnegative terms that keeps full relative accuracy as ``kt -> 0``.
    """
    if r < 1 or int(r) != r:
        raise ValueError("r must be a positive integer")
    r = int(r)
    t = np.asarray(t, dtype=float)
    table = cosine_coeffs_all(p, kmax)
    v = np.arange(kmax + 1, dtype=float)
    trig = (2 * np.sin(np.multiply.outer(v, t.reshape(-1)) / 2)) ** (2 * r) / _binom(2 * r, r)
    return (table @ trig).reshape((kmax + 1,) + t.shape)


def shift_multipliers(p: SpaceParams, t: float, kmax: int) -> MultiplierSequence:
    """Multipliers ``Q_k(cos t)`` of the shift (spherical mean) operator."""
    if t == 0:
        return MultiplierSequence(p, np.ones(kmax + 1), "shift(t=0)")
    if not 0 < t < np.pi:
        raise ValueError("shift radius must satisfy 0 < t < pi")
    return MultiplierSequence(p, jacobi_Q_all(p, kmax, math.cos(t)), f"shift(t={t:g})")


def gen_shift_multipliers(p: SpaceParams, r: int, t: float, kmax: int) -> MultiplierSequence:
    label = f"gen_shift(r={r},t={t:g})"
    if t == 0:
        return MultiplierSequence(p, np.ones(kmax + 1), label)
    if t < 0:
        raise ValueError("t must be nonnegative")
    notes = ()
    if t > math.pi / (2 * r):
        notes = (f"t={t:g} exceeds pi/(2r)={math.pi / (2 * r):.6g}; outside the regime of the difference estimates",)
    return MultiplierSequence(p, gen_shift_values(p, r, t, kmax), label, notes)


def _phi(u):
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def eta(s):
    """Smooth cutoff: 1 on ``[0, 1]``, 0 on ``[2, inf)``, monotone in between."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("eta is defined on [0, inf)")
    out = np.where(s <= 1, 1.0, 0.0)
    mid = (s > 1) & (s < 2)
    if np.any(mid):
        u = np.atleast_1d(2 - s[mid])
        v = np.atleast_1d(s[mid] - 1)
        out[mid] = _phi(u) / (_phi(u) + _phi(v))
    return float(out) if out.ndim == 0 else out


def eta_multipliers(p: SpaceParams, t: float, kmax: int) -> MultiplierSequence:
    """Multipliers ``eta(t k)`` of the cutoff operator ``eta_t``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return MultiplierSequence(p, eta(t * np.arange(kmax + 1)), f"eta(t={t:g})")


def apply(mu: MultiplierSequence, f: ZonalFunction) -> ZonalFunction:
    """Image of ``f`` under the multiplier operator; the shorter truncation wins."""
    if mu.space != f.space:
        raise ValueError("multiplier sequence and function live on different spaces")
    n = min(mu.values.size, f.coeffs.size)
    return f.with_coeffs(f.coeffs[:n] * mu.values[:n])


def forward_difference(seq, j: int) -> np.ndarray:
    seq = np.asarray(seq, dtype=float)
    if j < 0 or j > seq.size:
        raise ValueError("difference order must be in [0, len(seq)]")
    return np.diff(seq, n=j) if j else seq.copy()


def default_smoothness_order(m: int) -> int:
    """Smallest integer exceeding ``m / 2``."""
    return m // 2 + 1


@dataclass(frozen=True)
class MarcinkiewiczReport:
    s: int
    sup_abs: float
    block_stats: np.ndarray
    bound: float


def marcinkiewicz_report(mu, s: int, jmax: int) -> MarcinkiewiczReport:
    """Dyadic block statistics ``2^(j(s-1)) sum_{l=2^j}^{2^(j+1)} |Delta^s mu_l|``."""
    values = mu.values if isinstance(mu, MultiplierSequence) else np.asarray(mu, dtype=float)
    need = 2 ** (jmax + 1) + s
    if values.size - 1 < need:
        raise ValueError(f"truncation {values.size - 1} too short; need kmax >= {need}")
    diff = np.abs(np.diff(values, n=s))
    stats = np.array(
        [2.0 ** (j * (s - 1)) * diff[2**j : 2 ** (j + 1) + 1].sum() for j in range(jmax + 1)]
    )
    sup = float(np.abs(values).max())
    return MarcinkiewiczReport(s, sup, stats, max(sup, float(stats.max())))


def marcinkiewicz_bound(mu, s: int, jmax: int) -> float:
    return marcinkiewicz_report(mu, s, jmax).bound


def proof_sequences(p: SpaceParams, r: int, t: float, a: float, kmax: int):
    """The three auxiliary multiplier sequences of the realization argument.

    ``mu1 = (1 - eta(atk)) m^4 / (1 - m)``, ``mu2 = (1 - m) eta(atk) / (lambda t^2)^r``
    and ``mu3 = (lambda t^2)^r eta(atk) / (1 - m)``, with ``m = m_r(k, t)``.
    At ``k = 0`` the last two are 0/0 and are extended by their ``k = 1`` value.
    """
    if not 0 < t <= math.pi / 2:
        raise ValueError("t must lie in (0, pi/2]")
    if not a > 0:
        raise ValueError("a must be positive")
    k = np.arange(kmax + 1)
    one_minus = one_minus_gen_shift(p, r, t, kmax)
    m = 1.0 - one_minus
    cut = eta(a * t * k)
    scale = (laplace_eigenvalue(p, k) * t * t) ** r

    mu1 = np.zeros(kmax + 1)
    live = a * t * k > 1
    mu1[live] = (1 - cut[live]) * m[live] ** 4 / one_minus[live]

    mu2 = np.zeros(kmax + 1)
    mu3 = np.zeros(kmax + 1)
    mu2[1:] = one_minus[1:] / scale[1:] * cut[1:]
    mu3[1:] = scale[1:] / one_minus[1:] * cut[1:]
    mu2[0], mu3[0] = mu2[1], mu3[1]

    tag = f"r={r},t={t:g},a={a:g}"
    return (
        MultiplierSequence(p, mu1, f"mu1({tag})"),
        MultiplierSequence(p, mu2, f"mu2({tag})"),
        MultiplierSequence(p, mu3, f"mu3({tag})"),
    )


@dataclass(frozen=True)
class RatioReport:
    r: int
    ratio_min: float
    ratio_max: float
    ratio_mid: float
    max_multiplier: dict
    min_one_minus: float


def equivalence_ratio_report(p: SpaceParams, r: int, t_grid, kmax: int, taus=(1.0, math.pi)) -> RatioReport:
    """Empirical constants ``a <= (1 - m_r)/(kt)^(2r) <= b`` and ``max m_r`` over ``kt >= tau``.

    ``t_grid`` should sit in ``(0, pi/2]``; the ratio uses cells with
    ``0 < kt <= pi``.
    """
    t = np.asarray(t_grid, dtype=float)
    if np.any((t <= 0) | (t > math.pi / 2 + 1e-12)):
        raise ValueError("t_grid must lie in (0, pi/2]")
    one_minus = one_minus_gen_shift(p, r, t, kmax)
    m = 1.0 - one_minus
    k = np.arange(kmax + 1)[:, None]
    kt = k * t[None, :]
    cell = (kt > 0) & (kt <= math.pi)
    ratio = one_minus[cell] / kt[cell] ** (2 * r)
    mid_t = t[len(t) // 2]
    k_mid = max(1, int(round(1.0 / mid_t)))
    mid = float(ratio.min()) if k_mid > kmax else float(
        one_minus_gen_shift(p, r, mid_t, k_mid)[k_mid] / (k_mid * mid_t) ** (2 * r)
    )
    upper = {float(tau): float(m[kt >= tau].max()) if np.any(kt >= tau) else float("nan") for tau in taus}
    return RatioReport(r, float(ratio.min()), float(ratio.max()), mid, upper, float(one_minus.min()))


def difference_scaling(p: SpaceParams, r: int, t: float, j: int, kmax: int) -> dict:
    """Fitted constants for ``|Delta^j m_r(k, t)| <= C t^j`` on ``kt <= 1``
    and for ``k^j |Delta^j [(1 - m_r)/(lambda t^2)^r]|`` on ``0 < kt < 1``.

    Report-only: no universal constant is asserted.
    """
    one_minus = one_minus_gen_shift(p, r, t, kmax + j)
    m = 1.0 - one_minus
    k = np.arange(kmax + 1)
    d = np.abs(np.diff(m, n=j))[: kmax + 1]
    small = k * t <= 1
    lam = laplace_eigenvalue(p, np.arange(1, kmax + j + 1))
    q = one_minus[1:] / (lam * t * t) ** r
    dq = np.abs(np.diff(q, n=j))
    kk = np.arange(1, dq.size + 1)
    inside = (kk * t < 1) & (kk >= 8)
    return {
        "shift_constant": float((d[small] / t**j).max()) if np.any(small) else float("nan"),
        "ratio_constant": float((dq[inside] * kk[inside] ** j).max()) if np.any(inside) else float("nan"),
    }


__all__ = [
    "MultiplierSequence",
    "gen_shift_weights",
    "gen_shift_values",
    "one_minus_gen_shift",
    "shift_multipliers",
    "gen_shift_multipliers",
    "eta",
    "eta_multipliers",
    "apply",
    "forward_difference",
    "default_smoothness_order",
    "MarcinkiewiczReport",
    "marcinkiewicz_report",
    "marcinkiewicz_bound",
    "proof_sequences",
    "RatioReport",
    "equivalence_ratio_report",
    "difference_scaling",
]
