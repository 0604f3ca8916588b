"""Eigenvalues, singular values and Wishart-type normalisation of square matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import (
    DegenerateInputError,
    InvalidInputError,
    InvalidParameterError,
    KindMismatchError,
    ShapeError,
)

__all__ = [
    "SpectrumSample",
    "WishartSpectrum",
    "eigenvalues",
    "singular_values_squared",
    "matrix_product",
    "matrix_power",
    "wishart_normalize",
    "wishart_from_singular",
    "shannon_entropy_rel",
    "count_real_eigenvalues",
]


@dataclass(frozen=True)
class SpectrumSample:
    """Eigenvalues (``kind="eigen"``) or squared singular values (``kind="singular-squared"``)."""

    values: np.ndarray
    kind: Literal["eigen", "singular-squared"] = "eigen"
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass(frozen=True)
class WishartSpectrum:
    """Eigenvalues of ``AA^dagger / Tr AA^dagger`` and their rescaling ``x = N' * lambda``."""

    lambdas: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def n_retained(self) -> int:
        return len(self.lambdas)

    @property
    def rescaled(self) -> np.ndarray:
        return self.n_retained * self.lambdas


def _check_square(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def eigenvalues(a, meta=None) -> SpectrumSample:
    """All N eigenvalues of a dense square matrix, with multiplicity.

    Real inputs (including complex arrays with zero imaginary part) go
    through the real LAPACK driver, which returns exact conjugate pairs and
    exactly real eigenvalues on the axis.
    """
    a = _check_square(a)
    if np.iscomplexobj(a) and not np.any(a.imag):
        a = a.real
    z = np.linalg.eigvals(a).astype(np.complex128)
    return SpectrumSample(z, "eigen", dict(meta or {}))


def singular_values_squared(a, meta=None) -> SpectrumSample:
    """Squared singular values via bidiagonalisation (no explicit ``AA^dagger``)."""
    a = _check_square(a)
    if np.iscomplexobj(a) and not np.any(a.imag):
        a = a.real
    sv = np.linalg.svd(a, compute_uv=False)
    return SpectrumSample(sv**2, "singular-squared", dict(meta or {}))


def matrix_product(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Left-to-right product ``factors[0] @ factors[1] @ ...``."""
    if len(factors) == 0:
        raise InvalidParameterError("need at least one factor")
    out = _check_square(factors[0])
    for f in factors[1:]:
        f = _check_square(f)
        if f.shape != out.shape:
            raise ShapeError(f"cannot multiply {out.shape} by {f.shape}")
        out = out @ f
    return out


def matrix_power(a, s: int) -> np.ndarray:
    """``a**s`` by repeated multiplication; ``s = 0`` returns the identity."""
    a = _check_square(a)
    if s < 0 or int(s) != s:
        raise InvalidParameterError(f"power must be a non-negative integer, got {s!r}")
    out = np.eye(a.shape[0], dtype=a.dtype)
    for _ in range(int(s)):
        out = out @ a
    return out


def wishart_from_singular(sv2, drop_leading: bool = False, meta=None) -> WishartSpectrum:
    """Normalise squared singular values to unit sum, optionally removing the largest first."""
    sv2 = np.sort(np.asarray(sv2, dtype=float))[::-1]
    if np.any(sv2 < 0):
        raise InvalidInputError("squared singular values must be non-negative")
    if drop_leading:
        sv2 = sv2[1:]
    total = sv2.sum()
    if sv2.size == 0 or not total > 0:
        raise DegenerateInputError("zero matrix has no Wishart normalisation")
    return WishartSpectrum(sv2 / total, dict(meta or {}))


def wishart_normalize(a, drop_leading: bool = False, meta=None) -> WishartSpectrum:
    """Spectrum of ``W = AA^dagger / Tr AA^dagger``.

    With ``drop_leading`` the largest eigenvalue is set aside and the
    remaining N-1 are renormalised to unit sum.
    """
    return wishart_from_singular(singular_values_squared(a).values, drop_leading, meta)


def shannon_entropy_rel(w: WishartSpectrum) -> float:
    """Entropy ``-sum lambda ln lambda`` minus its maximum ``ln N'``."""
    lam = np.asarray(w.lambdas, dtype=float)
    if np.any(lam < 0):
        raise InvalidInputError("negative weight in spectrum")
    nz = lam[lam > 0]
    return float(-np.sum(nz * np.log(nz)) - np.log(lam.size))


def count_real_eigenvalues(spec: SpectrumSample, eps: float | None = None) -> int:
    """Number of eigenvalues with ``|Im z| < eps``.

    The default threshold is ``1e-8`` times the spectral radius.
    """
    if spec.kind != "eigen":
        raise KindMismatchError("real-eigenvalue count needs an eigenvalue spectrum")
    z = np.asarray(spec.values)
    if eps is None:
        radius = np.max(np.abs(z)) if z.size else 0.0
        eps = 1e-8 * radius if radius > 0 else 1e-8
    if not eps > 0:
        raise InvalidParameterError("eps must be positive")
    return int(np.count_nonzero(np.abs(z.imag) < eps))
