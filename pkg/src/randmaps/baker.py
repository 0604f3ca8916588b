"""Generalized quantum baker map coupled projectively to an M-level environment.

The stochastic map is ``Phi(rho) = sum_j P_j B^L rho B^-L P_j`` where the P_j
project onto M consecutive blocks of K = d/M basis vectors. Its
superoperator factorises as ``Phi = P (U x conj U)`` with ``U = B^L`` and
``P = sum_j P_j x P_j`` a 0/1 diagonal of rank d^2/M. Hence every nonzero
eigenvalue and singular value of ``Phi^s`` is carried by the
``d^2/M x d^2/M`` block of ``U x conj U`` on the support of P; the reduced
routines below work on that block directly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import block_diag

from .channels import Superoperator, kraus_to_superoperator
from .ensembles import RngStream, fourier_matrix
from .errors import InvalidParameterError, StructureViolationError
from .spectral import (
    SpectrumSample,
    WishartSpectrum,
    eigenvalues,
    matrix_power,
    singular_values_squared,
    wishart_from_singular,
)

__all__ = [
    "BakerSpec",
    "baker_unitary",
    "baker_power",
    "block_projectors",
    "stochastic_baker",
    "propagator_power",
    "reduced_propagator",
    "baker_bulk_spectrum",
    "phi_phidagger_projector_check",
    "sstep_singular_spectrum",
    "random_phases",
]


@dataclass(frozen=True)
class BakerSpec:
    d: int
    M: int
    L: int = 1
    phi1: float = 0.0
    phi2: float = 0.0
    s: int = 1

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2 or self.d % 2:
            raise InvalidParameterError(f"baker dimension d must be even and >= 2, got {self.d!r}")
        if int(self.M) != self.M or self.M < 1 or self.d % self.M:
            raise InvalidParameterError(f"M={self.M!r} must divide d={self.d}")
        if int(self.L) != self.L or self.L < 1:
            raise InvalidParameterError(f"L must be a positive integer, got {self.L!r}")
        if int(self.s) != self.s or self.s < 1:
            raise InvalidParameterError(f"s must be a positive integer, got {self.s!r}")

    @property
    def K(self) -> int:
        return self.d // self.M

    def with_phases(self, phi1: float, phi2: float) -> "BakerSpec":
        return replace(self, phi1=phi1, phi2=phi2)


def random_phases(stream: RngStream) -> tuple[float, float]:
    """Uniform i.i.d. phase pair in [0, 1)^2."""
    phi1, phi2 = stream.generator().random(2)
    return float(phi1), float(phi2)


def baker_unitary(spec: BakerSpec) -> np.ndarray:
    """``B = F_d^dagger blockdiag(F_{d/2}, F_{d/2})`` built from phase-shifted Fourier matrices."""
    d, p1, p2 = spec.d, spec.phi1, spec.phi2
    half = fourier_matrix(d // 2, p1, p2)
    return fourier_matrix(d, p1, p2).conj().T @ block_diag(half, half)


def _reunitarize(u):
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def baker_power(spec: BakerSpec) -> np.ndarray:
    """``B^L`` by repeated multiplication, re-projected onto U(d) if drift exceeds 1e-10."""
    b = baker_unitary(spec)
    eye = np.eye(spec.d)
    out = b
    for k in range(2, spec.L + 1):
        out = out @ b
        if k % 8 == 0 and np.max(np.abs(out.conj().T @ out - eye)) > 1e-10:
            out = _reunitarize(out)
    return out


def block_projectors(d: int, M: int) -> np.ndarray:
    """Stack of M diagonal projectors onto consecutive blocks of d/M basis vectors."""
    K = d // M
    out = np.zeros((M, d, d))
    for j in range(M):
        idx = np.arange(j * K, (j + 1) * K)
        out[j, idx, idx] = 1.0
    return out


def stochastic_baker(spec: BakerSpec) -> Superoperator:
    """Full d^2 x d^2 superoperator of one step, with Kraus operators ``P_j B^L``."""
    u = baker_power(spec)
    kraus = block_projectors(spec.d, spec.M) @ u
    return kraus_to_superoperator(kraus)


def propagator_power(sop: Superoperator, s: int) -> Superoperator:
    if int(s) != s or s < 1:
        raise InvalidParameterError(f"s must be a positive integer, got {s!r}")
    return Superoperator(matrix_power(sop.matrix, s))


def _support(spec: BakerSpec):
    """Row-major index pairs (a, b) of the support of P: a and b in the same block."""
    block = np.arange(spec.d) // spec.K
    a, b = np.nonzero(block[:, None] == block[None, :])
    return a, b


def reduced_propagator(spec: BakerSpec) -> tuple[np.ndarray, np.ndarray]:
    """Compressed one-step operator W on the support of P, and the support's flat indices.

    ``W[(a,b),(c,e)] = U[a,c] conj(U[b,e])`` for (a,b), (c,e) in the support.
    """
    u = baker_power(spec)
    a, b = _support(spec)
    w = u[np.ix_(a, a)] * u[np.ix_(b, b)].conj()
    return w, a * spec.d + b


def baker_bulk_spectrum(spec: BakerSpec, meta=None) -> SpectrumSample:
    """Nonzero eigenvalues of ``Phi^s`` with the leading unit eigenvalue removed.

    The remaining ``d^2 (1 - 1/M)`` eigenvalues of the full superoperator
    are exactly zero and are not returned.
    """
    w, _ = reduced_propagator(spec)
    z = eigenvalues(matrix_power(w, spec.s)).values
    lead = int(np.argmin(np.abs(z - 1.0)))
    return SpectrumSample(np.delete(z, lead), "eigen", dict(meta or {}))


def phi_phidagger_projector_check(sop: Superoperator, tol: float = 1e-6) -> tuple[int, float]:
    """Check that ``Phi Phi^dagger`` is an orthogonal projector.

    Returns its rank and the largest distance of any eigenvalue from
    {0, 1}; raises when that distance exceeds ``tol``.
    """
    m = sop.matrix
    lam = np.linalg.eigvalsh(m @ m.conj().T)
    dev = np.minimum(np.abs(lam), np.abs(lam - 1.0))
    max_dev = float(np.max(dev))
    if max_dev > tol:
        raise StructureViolationError(f"Phi Phi^dagger is not a projector (deviation {max_dev:.3g})")
    return int(np.count_nonzero(np.abs(lam - 1.0) <= tol)), max_dev


def sstep_singular_spectrum(spec: BakerSpec, drop_leading: bool = True, full: bool = False,
                            meta=None) -> WishartSpectrum:
    """Normalised nonzero squared singular values of ``Phi^s``.

    These equal the squared singular values of ``W^(s-1)`` on the d^2/M
    dimensional support. The largest one belongs to the identity direction
    (it is exactly 1 before normalisation) and is set aside with
    ``drop_leading``, leaving d^2/M - 1 values. ``full=True`` takes the
    dense route through the d^2 x d^2 superoperator, discarding its
    d^2 (1 - 1/M) numerically zero values.
    """
    n_keep = spec.d**2 // spec.M
    if full:
        phi = propagator_power(stochastic_baker(spec), spec.s)
        sv2 = np.sort(singular_values_squared(phi.matrix).values)[::-1][:n_keep]
    else:
        w, _ = reduced_propagator(spec)
        sv2 = singular_values_squared(matrix_power(w, spec.s - 1)).values
    return wishart_from_singular(sv2, drop_leading=drop_leading, meta=meta)
