"""Random quantum operations as superoperator matrices.

Density matrices are vectorised row by row, so the Kraus form
``rho -> sum_j X_j rho X_j^dagger`` becomes the matrix
``sum_j kron(X_j, conj(X_j))`` acting on ``rho.reshape(-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .ensembles import RngStream, sample_haar_unitary
from .errors import BasisInconsistencyError, InvalidParameterError, ShapeError
from .spectral import SpectrumSample, eigenvalues

__all__ = [
    "ChannelSpec",
    "Superoperator",
    "AffineForm",
    "kraus_to_superoperator",
    "random_map",
    "unitary_channel",
    "depolarizing_channel",
    "identity_superoperator",
    "compose",
    "random_composition",
    "gell_mann_basis",
    "bloch_matrix",
    "to_affine",
    "spectrum_bulk",
    "fixed_point",
]


@dataclass(frozen=True)
class ChannelSpec:
    d: int
    M: int
    seed: int = 0
    index: int = 0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise InvalidParameterError(f"system dimension d must be >= 2, got {self.d!r}")
        if int(self.M) != self.M or self.M < 1:
            raise InvalidParameterError(f"environment dimension M must be >= 1, got {self.M!r}")

    @property
    def stream(self) -> RngStream:
        return RngStream(self.seed, self.index)


@dataclass(frozen=True, eq=False)
class Superoperator:
    """A d^2 x d^2 superoperator, optionally carrying the Kraus operators it came from."""

    matrix: np.ndarray
    kraus: np.ndarray | None = None

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"superoperator must be square, got {m.shape}")
        d = int(round(np.sqrt(m.shape[0])))
        if d * d != m.shape[0]:
            raise ShapeError(f"superoperator size {m.shape[0]} is not a square number")

    @property
    def d(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = self.d
        return (self.matrix @ np.asarray(rho).reshape(-1)).reshape(d, d)

    def kraus_completeness_error(self) -> float:
        """max |sum_j X_j^dagger X_j - I|; NaN when no Kraus operators are attached."""
        if self.kraus is None:
            return float("nan")
        s = np.einsum("jki,jkl->il", self.kraus.conj(), self.kraus)
        return float(np.max(np.abs(s - np.eye(self.d))))

    def trace_preservation_error(self) -> float:
        """max |vec(I)^T Psi - vec(I)^T|, i.e. deviation of Tr Psi(rho) from Tr rho."""
        v = np.eye(self.d).reshape(-1)
        return float(np.max(np.abs(v @ self.matrix - v)))


@dataclass(frozen=True)
class AffineForm:
    """Bloch-vector action ``a' = C a + kappa a_0`` with ``a_0 = 1/sqrt(d)`` for states."""

    C: np.ndarray
    kappa: np.ndarray

    def block_matrix(self) -> np.ndarray:
        n = self.C.shape[0] + 1
        out = np.zeros((n, n))
        out[0, 0] = 1.0
        out[1:, 0] = self.kappa
        out[1:, 1:] = self.C
        return out


def kraus_to_superoperator(kraus) -> Superoperator:
    kraus = np.asarray(kraus, dtype=np.complex128)
    if kraus.ndim == 2:
        kraus = kraus[np.newaxis]
    m, d, d2 = kraus.shape
    if d != d2:
        raise ShapeError("Kraus operators must be square")
    mat = np.einsum("jac,jbe->abce", kraus, kraus.conj()).reshape(d * d, d * d)
    return Superoperator(mat, kraus)


def random_map(spec: ChannelSpec) -> Superoperator:
    """Random operation ``rho -> Tr_E U (rho x |0><0|) U^dagger`` with Haar U on C^d x C^M.

    Composite index of (system m, environment j) is ``m * M + j``, so the
    Kraus operators are ``X_j[m, n] = U[m*M + j, n*M]``.
    """
    d, M = spec.d, spec.M
    u = sample_haar_unitary(d * M, spec.stream)
    kraus = u.reshape(d, M, d, M)[:, :, :, 0].transpose(1, 0, 2)
    return kraus_to_superoperator(np.ascontiguousarray(kraus))


def unitary_channel(u) -> Superoperator:
    return kraus_to_superoperator(np.asarray(u)[np.newaxis])


def identity_superoperator(d: int) -> Superoperator:
    return unitary_channel(np.eye(d))


def depolarizing_channel(d: int) -> Superoperator:
    """Completely depolarising map rho -> Tr(rho) I/d, via its d^2 Kraus operators."""
    kraus = np.zeros((d * d, d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            kraus[a * d + b, a, b] = 1.0 / np.sqrt(d)
    return kraus_to_superoperator(kraus)


def compose(maps: Sequence[Superoperator]) -> Superoperator:
    """Matrix product ``maps[0] @ maps[1] @ ...``; the last map acts first."""
    if not maps:
        raise InvalidParameterError("cannot compose an empty list of maps")
    out = maps[0].matrix
    for m in maps[1:]:
        if m.matrix.shape != out.shape:
            raise ShapeError(f"cannot compose maps of sizes {out.shape} and {m.matrix.shape}")
        out = out @ m.matrix
    return Superoperator(out)


def random_composition(d: int, M: int, s: int, seed: int, index: int = 0) -> Superoperator:
    """Composition of s independent random maps, each drawn on its own substream."""
    parent = RngStream(seed, index)
    maps = []
    for k in range(s):
        child = parent.child(k)
        maps.append(random_map(ChannelSpec(d, M, child.master_seed, child.stream_index)))
    return compose(maps[::-1])


@lru_cache(maxsize=8)
def gell_mann_basis(d: int) -> np.ndarray:
    """Orthonormal Hermitian basis ``(d^2, d, d)``: I/sqrt(d), then symmetric,
    antisymmetric and diagonal traceless generators, each with Tr(g_i g_j) = delta_ij.
    """
    basis = [np.eye(d, dtype=np.complex128) / np.sqrt(d)]
    r = 1.0 / np.sqrt(2.0)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = r
        basis.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = -1j * r
        g[k, j] = 1j * r
        basis.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        basis.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(np.complex128))
    out = np.array(basis)
    out.setflags(write=False)
    return out


def bloch_matrix(sop: Superoperator, tol: float = 1e-10) -> np.ndarray:
    """Superoperator in the Bloch basis; real for Hermiticity-preserving maps."""
    d = sop.d
    t = gell_mann_basis(d).reshape(d * d, d * d).T
    r = t.conj().T @ sop.matrix @ t
    resid = float(np.max(np.abs(r.imag))) if r.size else 0.0
    if resid > tol:
        raise BasisInconsistencyError(f"Bloch representation has imaginary residue {resid:.3g}")
    return np.ascontiguousarray(r.real)


def to_affine(sop: Superoperator, tol: float = 1e-10) -> AffineForm:
    r = bloch_matrix(sop, tol)
    return AffineForm(C=r[1:, 1:].copy(), kappa=r[1:, 0].copy())


def spectrum_bulk(sop: Superoperator, meta=None) -> SpectrumSample:
    """The d^2 - 1 eigenvalues of the distortion block C (leading unit eigenvalue excluded)."""
    return eigenvalues(to_affine(sop).C, meta)


def fixed_point(sop: Superoperator) -> np.ndarray:
    """Invariant state from the eigenvector of the eigenvalue closest to 1, normalised to unit trace."""
    w, v = np.linalg.eig(sop.matrix)
    k = int(np.argmin(np.abs(w - 1.0)))
    rho = v[:, k].reshape(sop.d, sop.d)
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)
