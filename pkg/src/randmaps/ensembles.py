"""Seeded random matrix ensembles and Fourier-type matrices.

Every sampler takes an explicit :class:`RngStream`, so a sample is a pure
function of ``(parameters, master_seed, stream_index)`` and the order in
which streams are consumed never matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "GinibreParams",
    "RngStream",
    "sample_ginibre",
    "sample_haar_unitary",
    "fourier_matrix",
]

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Independent random substream identified by ``(master_seed, stream_index)``."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= _U64:
            raise InvalidParameterError("master_seed must be a 64-bit unsigned integer")
        if self.stream_index < 0:
            raise InvalidParameterError("stream_index must be non-negative")

    def generator(self) -> np.random.Generator:
        # SeedSequence hashes (entropy, spawn_key) with an avalanche mixer, so
        # neighbouring indices give uncorrelated streams.
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, index: int) -> "RngStream":
        """Substream nested under this one (used for multi-factor samples)."""
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index, index))
        seed = int(seq.generate_state(1, np.uint64)[0])
        return RngStream(seed, 0)


@dataclass(frozen=True)
class GinibreParams:
    dim: int
    scale: float = 1.0
    kind: Literal["complex", "real"] = "complex"

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidParameterError(f"dim must be a positive integer, got {self.dim!r}")
        if not self.scale > 0:
            raise InvalidParameterError(f"scale must be positive, got {self.scale!r}")
        if self.kind not in ("complex", "real"):
            raise InvalidParameterError(f"unknown Ginibre kind {self.kind!r}")

    @property
    def variance(self) -> float:
        """Per-entry variance E|G_mn|^2 = scale^2 / dim."""
        return self.scale**2 / self.dim


def sample_ginibre(params: GinibreParams, stream: RngStream) -> np.ndarray:
    """Draw an N x N Ginibre matrix with E|G_mn|^2 = scale^2 / N.

    Complex entries have independent real and imaginary parts of variance
    sigma^2/2 each. The real kind is returned as a complex array whose
    imaginary part is exactly zero.
    """
    n = params.dim
    rng = stream.generator()
    sigma = np.sqrt(params.variance)
    if params.kind == "real":
        g = sigma * rng.standard_normal((n, n))
        return g.astype(np.complex128)
    z = rng.standard_normal((n, n, 2))
    return (sigma / np.sqrt(2.0)) * (z[..., 0] + 1j * z[..., 1])


def sample_haar_unitary(dim: int, stream: RngStream) -> np.ndarray:
    """Haar-distributed unitary from the QR factorisation of a complex Ginibre matrix.

    The columns of Q are rephased by the unit-modulus diagonal of R, which
    removes the bias of the bare QR output and yields exact Haar measure.
    """
    if int(dim) != dim or dim < 1:
        raise InvalidParameterError(f"dim must be a positive integer, got {dim!r}")
    z = sample_ginibre(GinibreParams(int(dim), np.sqrt(dim)), stream)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases[np.newaxis, :]


def fourier_matrix(dim: int, phi1: float = 0.0, phi2: float = 0.0) -> np.ndarray:
    """Generalized unitary DFT, ``F[j, k] = exp(2 pi i (j + phi1)(k + phi2) / d) / sqrt(d)``.

    Phases are fractions of a full period; ``phi1 = phi2 = 0`` gives the
    ordinary unitary DFT.
    """
    if int(dim) != dim or dim < 1:
        raise InvalidParameterError(f"dim must be a positive integer, got {dim!r}")
    idx = np.arange(dim, dtype=float)
    phase = np.outer(idx + phi1, idx + phi2) / dim
    # reduce before exponentiating to keep the argument small for large d
    phase -= np.floor(phase)
    return np.exp(2j * np.pi * phase) / np.sqrt(dim)
