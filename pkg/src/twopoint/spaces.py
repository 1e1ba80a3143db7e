"""Catalog of compact two-point homogeneous spaces.

Every space is reduced to the Jacobi pair ``(alpha, beta)`` that governs its
zonal harmonic analysis; everything downstream works per degree ``k``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln


class Family(str, enum.Enum):
    SPHERE = "sphere"
    REAL_PROJECTIVE = "real-projective"
    COMPLEX_PROJECTIVE = "complex-projective"
    QUATERNION_PROJECTIVE = "quaternion-projective"
    CAYLEY_PLANE = "cayley-plane"

    @classmethod
    def parse(cls, name: "str | Family") -> "Family":
        if isinstance(name, Family):
            return name
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        aliases = {
            "s": cls.SPHERE,
            "rp": cls.REAL_PROJECTIVE,
            "cp": cls.COMPLEX_PROJECTIVE,
            "hp": cls.QUATERNION_PROJECTIVE,
            "cayley": cls.CAYLEY_PLANE,
            "octonionic-projective": cls.CAYLEY_PLANE,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown family {name!r}; expected one of: {valid}") from None


_ADMISSIBLE = {
    Family.SPHERE: "m >= 1",
    Family.REAL_PROJECTIVE: "m >= 2",
    Family.COMPLEX_PROJECTIVE: "m in {4, 6, 8, ...}",
    Family.QUATERNION_PROJECTIVE: "m in {8, 12, 16, ...}",
    Family.CAYLEY_PLANE: "m = 16",
}


def _admissible(family: Family, m: int) -> bool:
    if family is Family.SPHERE:
        return m >= 1
    if family is Family.REAL_PROJECTIVE:
        return m >= 2
    if family is Family.COMPLEX_PROJECTIVE:
        return m >= 4 and m % 2 == 0
    if family is Family.QUATERNION_PROJECTIVE:
        return m >= 8 and m % 4 == 0
    return m == 16


@dataclass(frozen=True)
class SpaceId:
    family: Family
    m: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        if isinstance(self.m, bool) or int(self.m) != self.m:
            raise ValueError(f"dimension must be an integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if not _admissible(self.family, self.m):
            raise ValueError(
                f"m={self.m} is not admissible for {self.family.value}; "
                f"admissible: {_ADMISSIBLE[self.family]}"
            )


@dataclass(frozen=True)
class SpaceParams:
    """Dimension and Jacobi data of a space.

    ``alpha = (sigma + rho - 1) / 2 = (m - 2) / 2`` and ``beta = (rho - 1) / 2``.
    """

    m: int
    sigma: float
    rho: float
    alpha: float
    beta: float
    family: Family | None = None

    @property
    def index(self) -> tuple[float, float]:
        return (self.alpha, self.beta)


_SIGMA_RHO = {
    Family.SPHERE: lambda m: (0, m - 1),
    Family.REAL_PROJECTIVE: lambda m: (m - 1, 0),
    Family.COMPLEX_PROJECTIVE: lambda m: (m - 2, 1),
    Family.QUATERNION_PROJECTIVE: lambda m: (m - 4, 3),
    Family.CAYLEY_PLANE: lambda m: (8, 7),
}


def catalog(space: SpaceId | str, m: int | None = None) -> SpaceParams:
    """Return the parameter quadruple of a space.

    Accepts either a :class:`SpaceId` or ``(family, m)``.

    >>> catalog("complex-projective", 4)
    SpaceParams(m=4, sigma=2.0, rho=1.0, alpha=1.0, beta=0.0, family=<Family.COMPLEX_PROJECTIVE: 'complex-projective'>)
    """
    if not isinstance(space, SpaceId):
        if m is None:
            raise TypeError("catalog(family, m) requires m")
        space = SpaceId(space, m)
    sigma, rho = _SIGMA_RHO[space.family](space.m)
    # halves are exact in binary floating point
    alpha = (sigma + rho - 1) / 2
    beta = (rho - 1) / 2
    assert alpha == (space.m - 2) / 2
    return SpaceParams(space.m, float(sigma), float(rho), float(alpha), float(beta), space.family)


def all_spaces(max_m: int = 16) -> list[SpaceParams]:
    """One representative per family and admissible dimension up to ``max_m``."""
    out = []
    for family in Family:
        for m in range(1, max_m + 1):
            if _admissible(family, m):
                out.append(catalog(family, m))
    return out


def representative_spaces() -> list[SpaceParams]:
    """The smallest admissible member of each family (plus S^2)."""
    return [
        catalog(Family.SPHERE, 2),
        catalog(Family.REAL_PROJECTIVE, 3),
        catalog(Family.COMPLEX_PROJECTIVE, 4),
        catalog(Family.QUATERNION_PROJECTIVE, 8),
        catalog(Family.CAYLEY_PLANE, 16),
    ]


def laplace_eigenvalue(p: SpaceParams, k):
    """Eigenvalue ``k (k + alpha + beta + 1)`` of the Laplace-Beltrami operator."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("degree must be nonnegative")
    out = k * (k + p.alpha + p.beta + 1.0)
    return float(out) if out.ndim == 0 else out


def log_harmonic_dims(p: SpaceParams, kmax: int) -> np.ndarray:
    """``log d_k`` for ``k = 0..kmax``, accumulated through log-Gamma."""
    a, b = p.alpha, p.beta
    k = np.arange(kmax + 1, dtype=float)
    out = np.zeros(kmax + 1)
    if kmax == 0:
        return out
    kk = k[1:]
    s = a + b + 1.0
    # 2k + a + b + 1 > 0 for k >= 1 since a + b >= -1
    out[1:] = (
        np.log(2 * kk + s)
        + gammaln(b + 1)
        + gammaln(kk + s)
        + gammaln(kk + a + 1)
        - gammaln(a + b + 2)
        - gammaln(a + 1)
        - gammaln(kk + 1)
        - gammaln(kk + b + 1)
    )
    return out


def harmonic_dims(p: SpaceParams, kmax: int) -> np.ndarray:
    """Eigenspace dimensions ``d_0..d_kmax`` as floats (rounded to integers)."""
    return np.rint(np.exp(log_harmonic_dims(p, kmax)))


def harmonic_dim(p: SpaceParams, k: int) -> int:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return int(harmonic_dims(p, k)[k])


def cumulative_dims(p: SpaceParams, nmax: int) -> np.ndarray:
    return np.cumsum(harmonic_dims(p, nmax))


def cumulative_dim(p: SpaceParams, n: int) -> int:
    """``D_n = d_0 + ... + d_n``: how many eigenvalues sit in degrees ``<= n``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n < 2048:
        return int(sum(int(d) for d in harmonic_dims(p, n)))
    return int(cumulative_dims(p, n)[-1])


def describe(p: SpaceParams) -> str:
    name = p.family.value if p.family else "space"
    return f"{name}(m={p.m}, alpha={p.alpha:g}, beta={p.beta:g})"


__all__ = [
    "Family",
    "SpaceId",
    "SpaceParams",
    "catalog",
    "all_spaces",
    "representative_spaces",
    "laplace_eigenvalue",
    "harmonic_dim",
    "harmonic_dims",
    "log_harmonic_dims",
    "cumulative_dim",
    "cumulative_dims",
    "describe",
]
