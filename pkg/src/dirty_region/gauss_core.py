"""Exact differential entropy and mutual information for linear-Gaussian systems.

Every random variable in a :class:`LinearGaussianSystem` is a linear
combination of independent zero-mean Gaussian base variables, so every
covariance is exact (no sampling, no estimation) and every entropy or mutual
information reduces to log-determinants of small covariance matrices.

All rates are in bits (base-2 logarithms).  Determinants are computed through
a Cholesky factorization with a positive-definiteness tolerance of 1e-12 on
the pivots; singular subsets raise :class:`SingularCovarianceError` naming
the offending variables instead of returning infinities.

Everything here is immutable and pure, hence thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

LOG2E_HALF = 0.5 / math.log(2.0)  # converts nats -> bits with the 1/2 factor
PIVOT_TOL = 1e-12
MI_CLAMP_TOL = 1e-9

Names = str | Sequence[str]


class GaussCoreError(Exception):
    """Base error for linear-Gaussian system operations."""


class DuplicateNameError(GaussCoreError):
    """A variable name is declared twice."""


class UnknownVariableError(GaussCoreError):
    """A requested variable does not exist in the system."""


class SystemShapeError(GaussCoreError):
    """A derived coefficient vector does not match the base count."""


class NegativeVarianceError(GaussCoreError):
    """A base variance is negative."""


class SingularCovarianceError(GaussCoreError):
    """A covariance sub-matrix is singular (to pivot tolerance)."""


@dataclass(frozen=True)
class LinearGaussianSystem:
    """Jointly Gaussian variables given as linear maps of independent bases.

    ``rows`` holds one coefficient row per variable (bases are unit rows) so
    that ``cov = rows @ diag(variances) @ rows.T`` for any subset.
    """

    base_names: tuple[str, ...]
    base_variances: tuple[float, ...]
    derived_names: tuple[str, ...]
    _index: Mapping[str, int] = field(repr=False)
    _rows: np.ndarray = field(repr=False)         # (n_vars, n_bases)
    _scaled_rows: np.ndarray = field(repr=False)  # rows * variances

    @property
    def names(self) -> tuple[str, ...]:
        return self.base_names + self.derived_names

    def coefficient_vector(self, name: str) -> np.ndarray:
        """Coefficients of ``name`` over the base variables (copy)."""
        if name not in self._index:
            raise UnknownVariableError(f"unknown variable {name!r}")
        return self._rows[self._index[name]].copy()

    def variance(self, name: str) -> float:
        row = self.coefficient_vector(name)
        return float(row @ (np.asarray(self.base_variances) * row))


def _as_tuple(names: Names) -> tuple[str, ...]:
    if isinstance(names, str):
        return (names,)
    return tuple(names)


def build_system(
    bases: Iterable[tuple[str, float]],
    derived: Iterable[tuple[str, Sequence[float]]] = (),
) -> LinearGaussianSystem:
    """Construct a system from base (name, variance) pairs and derived rows.

    Base variances must be nonnegative (zero is allowed and models a
    deterministically-zero variable); derived coefficient vectors must have
    one entry per base; names must be unique across bases and derived.
    """
    base_names: list[str] = []
    variances: list[float] = []
    for name, var in bases:
        if var < 0:
            raise NegativeVarianceError(f"variance of {name!r} is negative: {var}")
        base_names.append(str(name))
        variances.append(float(var))

    nb = len(base_names)
    rows = [np.eye(nb)[i] for i in range(nb)]
    derived_names: list[str] = []
    for name, coeffs in derived:
        vec = np.asarray(coeffs, dtype=float)
        if vec.shape != (nb,):
            raise SystemShapeError(
                f"coefficient vector of {name!r} has length {vec.size}, expected {nb}"
            )
        derived_names.append(str(name))
        rows.append(vec)

    all_names = base_names + derived_names
    seen: set[str] = set()
    for name in all_names:
        if name in seen:
            raise DuplicateNameError(f"duplicate variable name {name!r}")
        seen.add(name)

    rows_arr = np.vstack(rows) if rows else np.zeros((0, 0))
    var_arr = np.asarray(variances)
    return LinearGaussianSystem(
        base_names=tuple(base_names),
        base_variances=tuple(variances),
        derived_names=tuple(derived_names),
        _index={n: i for i, n in enumerate(all_names)},
        _rows=rows_arr,
        _scaled_rows=rows_arr * var_arr,
    )


def covariance(sys: LinearGaussianSystem, names: Names) -> np.ndarray:
    """Exact covariance matrix of the requested variables."""
    names = _as_tuple(names)
    idx = []
    for n in names:
        if n not in sys._index:
            raise UnknownVariableError(f"unknown variable {n!r}")
        idx.append(sys._index[n])
    rows = sys._rows[idx]
    scaled = sys._scaled_rows[idx]
    return scaled @ rows.T


def _logdet(sys: LinearGaussianSystem, names: tuple[str, ...]) -> float:
    """log-determinant (natural log) of the subset covariance.

    Raises :class:`SingularCovarianceError` when the Cholesky factorization
    fails or any pivot falls at or below the 1e-12 tolerance.
    """
    if not names:
        return 0.0
    sigma = covariance(sys, names)
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise SingularCovarianceError(
            f"covariance of {names} is not positive definite"
        ) from exc
    diag = np.diagonal(chol)
    if np.min(diag) ** 2 <= PIVOT_TOL:
        raise SingularCovarianceError(
            f"covariance of {names} is singular to tolerance (pivot "
            f"{np.min(diag) ** 2:.3e} <= {PIVOT_TOL})"
        )
    return float(2.0 * np.sum(np.log(diag)))


def entropy_bits(sys: LinearGaussianSystem, names: Names) -> float:
    """Differential entropy h = (1/2) log2((2*pi*e)^n det Sigma), in bits."""
    names = _as_tuple(names)
    ld = _logdet(sys, names)
    n = len(names)
    return LOG2E_HALF * (n * math.log(2.0 * math.pi * math.e) + ld)


def _mutual_info_unclamped(
    sys: LinearGaussianSystem,
    a: Names,
    b: Names,
    given: Names = (),
) -> float:
    a, b, c = _as_tuple(a), _as_tuple(b), _as_tuple(given)
    ld_ac = _logdet(sys, a + c)
    ld_bc = _logdet(sys, b + c)
    ld_abc = _logdet(sys, a + b + c)
    ld_c = _logdet(sys, c)
    return LOG2E_HALF * (ld_ac + ld_bc - ld_abc - ld_c)


def mutual_info_bits(sys: LinearGaussianSystem, a: Names, b: Names) -> float:
    """I(A;B) in bits; clamped at zero (raw value stays above -1e-9)."""
    return max(0.0, _mutual_info_unclamped(sys, a, b))


def cond_mutual_info_bits(
    sys: LinearGaussianSystem, a: Names, b: Names, given: Names
) -> float:
    """I(A;B|C) in bits via log-determinants; clamped at zero."""
    return max(0.0, _mutual_info_unclamped(sys, a, b, given))
