"""Histograms, Kolmogorov-Smirnov distances and the finite-size edge fit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize, stats as sps

from .ensembles import GinibreParams, RngStream, sample_ginibre
from .errors import InvalidInputError, InvalidParameterError, KindMismatchError, NonConvergenceError
from .laws import RadialLawParams, edge_factor, finite_size_bin_masses
from .spectral import SpectrumSample, eigenvalues, matrix_power, matrix_product

__all__ = [
    "RadialHistogram",
    "FitResult",
    "default_bins",
    "histogram",
    "radial_histogram",
    "ks_distance",
    "fit_q",
    "fit_objective",
    "product_power_comparison",
    "sample_finite_size_radii",
]


@dataclass(frozen=True)
class RadialHistogram:
    edges: np.ndarray
    counts: np.ndarray
    n_total: int

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.n_total * self.widths)


@dataclass(frozen=True)
class FitResult:
    q: float
    residual: float
    iterations: int
    converged: bool


def default_bins(n: int) -> int:
    return 50 if n >= 10_000 else max(2, math.ceil(math.sqrt(n)))


def histogram(values, bins: int, range_=None) -> RadialHistogram:
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise InvalidInputError("cannot histogram an empty sample")
    if int(bins) != bins or bins < 2:
        raise InvalidParameterError(f"need at least 2 bins, got {bins!r}")
    if range_ is None:
        range_ = (0.0, float(values.max()))
    lo, hi = range_
    if not hi > lo:
        hi = lo + 1.0
    counts, edges = np.histogram(values, bins=int(bins), range=(lo, hi))
    return RadialHistogram(edges, counts, int(values.size))


def radial_histogram(spec, bins: int | None = None, r_max: float | None = None) -> RadialHistogram:
    """Histogram of eigenvalue moduli on ``[0, max|z|]`` (or ``[0, r_max]``), unit-mass density."""
    if isinstance(spec, SpectrumSample):
        if spec.kind != "eigen":
            raise KindMismatchError("radial histogram needs an eigenvalue spectrum")
        r = spec.moduli
    else:
        r = np.abs(np.asarray(spec))
    if r.size == 0:
        raise InvalidInputError("cannot histogram an empty sample")
    if bins is None:
        bins = default_bins(r.size)
    return histogram(r, bins, (0.0, float(r.max()) if r_max is None else r_max))


def ks_distance(sample, reference: Callable | np.ndarray) -> float:
    """Sup-distance between the empirical CDF of ``sample`` and a CDF callable or a second sample."""
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise InvalidInputError("KS distance of an empty sample")
    if callable(reference):
        return float(sps.ks_1samp(x, reference).statistic)
    y = np.asarray(reference, dtype=float).ravel()
    if y.size == 0:
        raise InvalidInputError("KS distance against an empty sample")
    return float(sps.ks_2samp(x, y).statistic)


def fit_objective(hist: RadialHistogram, p: RadialLawParams, variant="standard-erfc") -> float:
    """Width-weighted squared error between histogram density and bin-averaged model density."""
    w = hist.widths
    model = finite_size_bin_masses(hist.edges, p, variant) / w
    return float(np.sum((hist.density - model) ** 2 * w))


def fit_q(hist: RadialHistogram, p: RadialLawParams, variant="standard-erfc",
          q_range=(1e-2, 1e4)) -> FitResult:
    """Least-squares q of the finite-size radial law (s, xi, N taken from ``p``).

    A log-spaced scan brackets the minimum, then golden-section search in
    log q refines it.
    """
    if len(hist.counts) < 10:
        raise InvalidParameterError("fit needs a histogram with at least 10 bins")
    lo, hi = math.log(q_range[0]), math.log(q_range[1])
    nfev = 0

    def f(logq):
        nonlocal nfev
        nfev += 1
        return fit_objective(hist, RadialLawParams(p.s, p.xi, p.N, math.exp(logq)), variant)

    grid = np.linspace(lo, hi, 49)
    vals = np.array([f(g) for g in grid])
    i = int(np.argmin(vals))
    if i == 0 or i == grid.size - 1:
        raise NonConvergenceError(
            "no bracketing minimum for q inside the search range",
            diagnostics={"q_grid": np.exp(grid).tolist(), "objective": vals.tolist()},
        )
    res = optimize.minimize_scalar(f, bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                   method="golden", tol=1e-8)
    q = math.exp(res.x)
    return FitResult(q=q, residual=float(res.fun), iterations=nfev, converged=bool(res.success) and q > 0)


def product_power_comparison(N: int, s: int, n_samples: int, seed: int) -> float:
    """Two-sample KS distance between pooled |z| of ``G_1...G_s`` and of ``G^s``.

    Sample i draws its factors from substreams ``(seed, i*s + k)``; the
    power uses the first factor's stream, so ``s = 1`` compares identical data.
    """
    prod_r, pow_r = [], []
    for i in range(n_samples):
        gs = [sample_ginibre(GinibreParams(N), RngStream(seed, i * s + k)) for k in range(s)]
        prod_r.append(eigenvalues(matrix_product(gs)).moduli)
        pow_r.append(eigenvalues(matrix_power(gs[0], s)).moduli)
    return ks_distance(np.concatenate(prod_r), np.concatenate(pow_r))


def sample_finite_size_radii(p: RadialLawParams, n: int, stream: RngStream,
                             variant="standard-erfc") -> np.ndarray:
    """Exact draws from the normalised finite-size radial law by rejection.

    In ``v = (r/xi)^(2/s)`` the law is proportional to the edge factor,
    which is bounded by its value at ``v = 0``.
    """
    rng = stream.generator()
    width = 1.0 / (p.q * p.xi * math.sqrt(p.N))
    v_max = (1.0 + 40.0 * width) ** (2.0 / p.s)
    g_max = float(edge_factor(-p.q * p.xi * math.sqrt(p.N), variant))
    out, have = [], 0
    while have < n:
        v = v_max * rng.random(2 * n)
        g = edge_factor(p.q * p.xi * (v ** (p.s / 2.0) - 1.0) * math.sqrt(p.N), variant)
        keep = v[rng.random(v.size) * g_max < g]
        out.append(p.xi * keep ** (p.s / 2.0))
        have += keep.size
    return np.concatenate(out)[:n]
