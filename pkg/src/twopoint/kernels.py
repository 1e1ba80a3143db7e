"""Zonal Mercer kernels: validation, spectra, Hölder exponents, decay verdicts, n-widths."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .jacobi import jacobi_Q_all, jacobi_Q_rows
from .spaces import (
    Family, SpaceId, SpaceParams, catalog, cumulative_dims, harmonic_dims,
    laplace_eigenvalue, log_harmonic_dims,
)
from .zonal import ZonalFunction


@dataclass(frozen=True, eq=False)
class MercerKernel:
    """``K(x, y) = sum_k b_k sum_j Y_kj(x) Y_kj(y)`` with one coefficient per degree."""

    space: SpaceParams
    coeffs: np.ndarray
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        b = np.array(self.coeffs, dtype=float).reshape(-1)
        if b.size == 0 or not np.all(np.isfinite(b)):
            raise ValueError("kernel coefficients must be a nonempty finite sequence")
        b.setflags(write=False)
        object.__setattr__(self, "coeffs", b)

    @property
    def kmax(self) -> int:
        return self.coeffs.size - 1

    def slice(self) -> ZonalFunction:
        """``K(y, .)`` as a zonal function: ``h_k = b_k d_k``."""
        return ZonalFunction(self.space, self.coeffs * harmonic_dims(self.space, self.kmax))

    def to_dict(self) -> dict:
        fam = self.space.family
        return {"family": fam.value if fam else None, "m": self.space.m,
                "coeffs": [float(b) for b in self.coeffs]}

    @classmethod
    def from_dict(cls, data: dict) -> "MercerKernel":
        space = catalog(Family.parse(data["family"]), int(data["m"]))
        if data.get("per_j") is not None:
            warnings.warn("per-j coefficients collapsed to one value per degree by max",
                          UserWarning, stacklevel=2)
            coeffs = [max(map(float, row)) for row in data["per_j"]]
            return cls(space, coeffs, ("per_j collapsed by degree-max",))
        return cls(space, data["coeffs"])


def _tail_ratio(terms) -> float:
    """Ratio-test surrogate on the last decade of a series.

    Fits ``log |term_k| ~ gamma log k`` over ``k`` in the last decade and
    returns ``10^(gamma + 1)``: the factor by which one more decade of terms
    adds to the sum. Values below 1 indicate convergence.
    """
    terms = np.abs(np.asarray(terms, dtype=float))
    n = terms.size - 1
    if n < 2:
        return 0.0
    k = np.arange(terms.size)
    lo = max(1, n // 10)
    sel = (k >= lo) & (terms > 0)
    if sel.sum() < 2:
        return 0.0
    gamma = np.polyfit(np.log(k[sel]), np.log(terms[sel]), 1)[0]
    return float(10.0 ** (gamma + 1))


@dataclass(frozen=True)
class KernelValidation:
    positive: bool
    monotone: bool
    summable: bool
    first_negative: int | None
    first_increase: int | None
    trace: float
    tail_ratio: float

    @property
    def valid(self) -> bool:
        return self.positive and self.monotone and self.summable

    def violations(self) -> list[str]:
        out = []
        if not self.positive:
            out.append(f"positivity fails at k={self.first_negative}")
        if not self.monotone:
            out.append(f"monotonicity fails at k={self.first_increase}")
        if not self.summable:
            out.append(f"trace tail ratio {self.tail_ratio:.3g} >= 1")
        return out


def validate(k: MercerKernel) -> KernelValidation:
    b = k.coeffs
    neg = np.flatnonzero(b < 0)
    inc = np.flatnonzero(np.diff(b) > 0)
    terms = b * harmonic_dims(k.space, k.kmax)
    ratio = _tail_ratio(terms)
    return KernelValidation(
        positive=neg.size == 0,
        monotone=inc.size == 0,
        summable=ratio < 1,
        first_negative=int(neg[0]) if neg.size else None,
        first_increase=int(inc[0]) if inc.size else None,
        trace=float(terms.sum()),
        tail_ratio=ratio,
    )


def _require_valid(k: MercerKernel):
    v = validate(k)
    if not v.valid:
        raise ValueError("kernel fails validation: " + "; ".join(v.violations()))
    return v


@dataclass(frozen=True, eq=False)
class EigenSequence:
    """Spectrum of ``L_K`` stored blockwise: ``lambda_n = b_k`` for ``D_{k-1} < n <= D_k``."""

    block_values: np.ndarray
    block_ends: np.ndarray
    length: int

    def __len__(self) -> int:
        return self.length

    def eigenvalue(self, n):
        """``lambda_n`` with ``n`` counted from 1."""
        n = np.asarray(n)
        if np.any(n < 1) or np.any(n > self.length):
            raise IndexError(f"eigen index must lie in [1, {self.length}]")
        out = self.block_values[np.searchsorted(self.block_ends, n, side="left")]
        return float(out) if out.ndim == 0 else out

    def expand(self, count: int | None = None, limit: int = 10_000_000) -> np.ndarray:
        """The first ``count`` eigenvalues (all by default) as a flat array."""
        count = self.length if count is None else int(count)
        if count > limit:
            raise MemoryError(f"expansion of {count} eigenvalues exceeds limit {limit}")
        nblocks = int(np.searchsorted(self.block_ends, count, side="left")) + 1
        ends = np.minimum(self.block_ends[:nblocks], count)
        dims = np.diff(np.concatenate([[0], ends])).astype(np.int64)
        return np.repeat(self.block_values[:nblocks], dims)

    def block_midpoints(self) -> np.ndarray:
        starts = np.concatenate([[0.0], self.block_ends[:-1]]) + 1
        return (starts + self.block_ends) / 2


def eigen_sequence(k: MercerKernel, N: int | None = None) -> EigenSequence:
    """Eigenvalues of ``L_K`` with multiplicities, truncated to the first ``N``."""
    ends = cumulative_dims(k.space, k.kmax)
    total = int(ends[-1])
    if N is None:
        N = total
    if not 1 <= N <= total:
        raise ValueError(f"N must lie in [1, {total}] for truncation kmax={k.kmax}")
    nblocks = int(np.searchsorted(ends, N, side="left")) + 1
    return EigenSequence(k.coeffs[:nblocks].copy(), ends[:nblocks].copy(), int(N))


def sqrt_kernel(k: MercerKernel) -> MercerKernel:
    """Kernel of the positive square root of ``L_K``."""
    if np.any(k.coeffs < 0):
        raise ValueError("square root needs nonnegative coefficients")
    root = np.sqrt(k.coeffs)
    d = harmonic_dims(k.space, k.kmax)
    # energy bookkeeping: the root's slice carries energy d_k b_k per degree
    assert np.allclose(d * root**2, d * k.coeffs, rtol=1e-12, atol=0)
    return MercerKernel(k.space, root, k.notes)


@dataclass(frozen=True, eq=False)
class FractionalKernel:
    space: SpaceParams
    coeffs: np.ndarray
    r: float
    trace: float
    tail_ratio: float

    @property
    def trace_class(self) -> bool:
        return self.tail_ratio < 1


def fractional_kernel(k: MercerKernel, r: float) -> FractionalKernel:
    """Coefficients ``lambda_k^r b_k`` of ``B^{2r,0} K`` with its trace."""
    if not r > 0:
        raise ValueError("r must be positive")
    c = laplace_eigenvalue(k.space, np.arange(k.kmax + 1)) ** r * k.coeffs
    terms = c * harmonic_dims(k.space, k.kmax)
    return FractionalKernel(k.space, c, float(r), float(terms.sum()), _tail_ratio(terms))


@dataclass(frozen=True)
class HolderEstimate:
    beta: float | None
    raw_slope: float | None
    t_grid: np.ndarray
    D: np.ndarray
    degenerate: bool
    note: str = ""


def holder_profile(k: MercerKernel, t_grid, n_u: int = 2048) -> np.ndarray:
    """``D(t) = sup_u |S_t K^y - K^y|`` on ``n_u`` Chebyshev extrema in ``u``."""
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if np.any((t <= 0) | (t >= math.pi)):
        raise ValueError("t_grid must lie in (0, pi)")
    h = k.coeffs * harmonic_dims(k.space, k.kmax)
    shift = jacobi_Q_all(k.space, k.kmax, np.cos(t)) - 1.0
    c = h[:, None] * shift
    u = np.cos(np.pi * np.arange(n_u) / (n_u - 1))
    acc = np.zeros((t.size, n_u))
    for deg, row in enumerate(jacobi_Q_rows(k.space, k.kmax, u)):
        if deg and h[deg] != 0:
            acc += c[deg][:, None] * row[None, :]
    return np.abs(acc).max(axis=1)


def holder_exponent(k: MercerKernel, t_grid, n_u: int = 2048) -> HolderEstimate:
    """Log-log slope of ``D(t)`` against ``t``, clamped to ``(0, 2]``."""
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if t.size < 8:
        raise ValueError("t_grid needs at least 8 points")
    D = holder_profile(k, t, n_u)
    if np.all(D <= 1e-300):
        return HolderEstimate(None, None, t, D, True, "degenerate kernel: S_t fixes it")
    if np.any(D <= 0):
        return HolderEstimate(None, None, t, D, False, "D(t) vanishes at some t")
    slope = float(np.polyfit(np.log(t), np.log(D), 1)[0])
    if slope <= 0:
        return HolderEstimate(None, slope, t, D, False, "no positive Hölder exponent")
    note = "clamped at 2" if slope > 2 else ""
    return HolderEstimate(min(slope, 2.0), slope, t, D, False, note)


def holder_family(space: SpaceParams, beta0: float, K: int = 16384) -> MercerKernel:
    """Kernel whose slice has ``h_k = (k + c)^-(1 + beta0)``, ``c = (alpha + beta + 1)/2``.

    Its Hölder profile behaves like ``t^beta0`` for ``0 < beta0 < 2``; the
    shift ``c`` centres ``h_k`` on ``sqrt(lambda_k)`` and trims the
    finite-``t`` bias.
    """
    if not 0 < beta0 < 2:
        raise ValueError("beta0 must lie in (0, 2)")
    kk = np.arange(K + 1, dtype=float)
    h = (kk + (space.alpha + space.beta + 1) / 2) ** -(1 + beta0)
    h[0] = 1.0
    return MercerKernel(space, h / harmonic_dims(space, K), (f"holder family beta0={beta0:g}",))


@dataclass
class DecayReport:
    mode: str
    fitted_slope: float
    target_slope: float
    tol: float
    sup_statistic: float
    last_decade_max: float
    window_median: float
    fit_window: tuple
    verdict: bool
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "fitted_slope": self.fitted_slope,
            "target_slope": self.target_slope,
            "tol": self.tol,
            "sup_statistic": self.sup_statistic,
            "last_decade_max": self.last_decade_max,
            "window_median": self.window_median,
            "fit_window": list(self.fit_window),
            "verdict": "pass" if self.verdict else "fail",
            "diagnostics": list(self.diagnostics),
        }


def _default_window(total: float) -> tuple[float, float]:
    centre = math.log10(total) / 2
    return 10 ** (centre - 1), 10 ** (centre + 1)


def fit_block_slope(values, mids, window) -> float:
    """Least-squares slope of ``log values`` on ``log mids`` inside ``window``."""
    lo, hi = window
    sel = (mids >= lo) & (mids <= hi) & (values > 0)
    if sel.sum() < 3:
        raise ValueError(f"fit window [{lo:g}, {hi:g}] holds fewer than 3 degree blocks")
    return float(np.polyfit(np.log(mids[sel]), np.log(values[sel]), 1)[0])


def decay_report(k: MercerKernel, target: float, mode: str, window=None, tol: float = 0.1) -> DecayReport:
    """Slope fit on block midpoints plus the ``lambda_n n^(-target)`` statistic."""
    seq = eigen_sequence(k)
    mids = seq.block_midpoints()
    total = float(seq.block_ends[-1])
    window = tuple(window) if window is not None else _default_window(total)
    lo, hi = window
    if not 1 <= lo < hi <= total:
        raise ValueError(f"fit window {window} outside available indices [1, {total:g}]")
    if math.log10(hi / lo) < 2 - 1e-9:
        raise ValueError(f"fit window {window} spans fewer than 2 decades")
    slope = fit_block_slope(seq.block_values, mids, window)
    stat = seq.block_values * mids ** (-target)
    inside = (mids >= lo) & (mids <= hi)
    last = mids >= total / 10
    median = float(np.median(stat[inside]))
    last_max = float(stat[last].max())
    diags = []
    slope_ok = slope <= target + tol
    if not slope_ok:
        diags.append(f"fitted slope {slope:.4f} above target {target:.4f} + {tol:g}")
    bounded = last_max <= 2 * median
    if not bounded:
        diags.append(f"sup statistic grows: last-decade max {last_max:.4g} > 2 x median {median:.4g}")
    return DecayReport(mode, slope, float(target), tol, float(stat[inside].max()), last_max,
                       median, (float(lo), float(hi)), slope_ok and bounded, diags)


def decay_verdict_holder(k: MercerKernel, beta: float, window=None, tol: float = 0.1) -> DecayReport:
    if not 0 < beta <= 2:
        raise ValueError("beta must lie in (0, 2]")
    _require_valid(k)
    return decay_report(k, -(1 + beta / k.space.m), "holder", window, tol)


def decay_verdict_sobolev(k: MercerKernel, r: float, window=None, tol: float = 0.1) -> DecayReport:
    if not r > 0:
        raise ValueError("r must be positive")
    frac = fractional_kernel(k, r)
    if not frac.trace_class:
        raise ValueError(
            f"B^(2r,0)K does not look trace-class: tail ratio {frac.tail_ratio:.3g} >= 1"
        )
    _require_valid(k)
    return decay_report(k, -(1 + 2 * r / k.space.m), "sobolev", window, tol)


def example_exponent(m: int, eps: float, r: int) -> float:
    return m * (1 + eps) + 2 * r - 1


def example_kernel(space, eps: float, r: int, K: int = 512) -> MercerKernel:
    """Kernel ``1 + sum_n c_n n^-e P_n(cos t)`` with ``e = m(1 + eps) + 2r - 1``.

    Degree coefficients are built from the Gamma-function expression for
    ``c_n``, ``P_n(1)`` and ``d_n``, not from their simplification.
    """
    if isinstance(space, SpaceId):
        space = catalog(space)
    m = space.m
    if not m * eps > 1:
        raise ValueError(f"need m * eps > 1, got {m} * {eps} = {m * eps:g}")
    if r < 1 or int(r) != r:
        raise ValueError("r must be a positive integer")
    a, b = space.alpha, space.beta
    n = np.arange(1, K + 1, dtype=float)
    log_c = (gammaln(b + 1) + np.log(2 * n + a + b + 1) + gammaln(n + a + b + 1)
             - gammaln(a + b + 2) - gammaln(n + b + 1))
    log_p1 = gammaln(n + a + 1) - gammaln(n + 1) - gammaln(a + 1)
    log_d = log_harmonic_dims(space, K)[1:]
    coeffs = np.empty(K + 1)
    coeffs[0] = 1.0
    coeffs[1:] = np.exp(log_c + log_p1 - example_exponent(m, eps, r) * np.log(n) - log_d)
    notes = [f"example kernel eps={eps:g} r={r}"]
    if space.family is Family.SPHERE:
        notes.append("sphere: the decay results target M != S^m, formulas applied uniformly")
    return MercerKernel(space, coeffs, tuple(notes))


def n_width(k: MercerKernel, n) -> float:
    """Kolmogorov n-width of the RKHS unit ball in ``L^2``: ``sqrt(lambda_{n+1})``."""
    seq = eigen_sequence(k)
    n = np.asarray(n)
    if np.any(n < 0) or np.any(n + 1 > seq.length):
        raise ValueError(f"n must lie in [0, {seq.length - 1}]")
    out = np.sqrt(seq.eigenvalue(n + 1))
    return float(out) if np.ndim(out) == 0 else out


def n_width_slope(k: MercerKernel, window=None) -> float:
    """Log-log slope of ``kappa_n`` over block midpoints."""
    seq = eigen_sequence(k)
    mids = seq.block_midpoints()
    window = tuple(window) if window is not None else _default_window(float(seq.block_ends[-1]))
    return fit_block_slope(np.sqrt(seq.block_values), mids, window)


__all__ = [
    "MercerKernel",
    "KernelValidation",
    "EigenSequence",
    "FractionalKernel",
    "HolderEstimate",
    "DecayReport",
    "validate",
    "eigen_sequence",
    "sqrt_kernel",
    "fractional_kernel",
    "holder_profile",
    "holder_exponent",
    "holder_family",
    "decay_report",
    "decay_verdict_holder",
    "decay_verdict_sobolev",
    "fit_block_slope",
    "example_exponent",
    "example_kernel",
    "n_width",
    "n_width_slope",
]
