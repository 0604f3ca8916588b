"""Reference densities: circular law, product radial law, finite-size edge
ansatz and the Fuss-Catalan family.

FC densities of order s diverge like ``x**(-s/(s+1))`` at the origin and
vanish like a square root at the upper edge ``(s+1)**(s+1) / s**s``. All
integrals over them use the map ``x = edge * sin(pi w / 2)**(2(s+1))``,
which removes both endpoint singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, InvalidParameterError

__all__ = [
    "RadialLawParams",
    "ginibre_density",
    "ginibre_radial_cdf",
    "product_radial_density",
    "product_radial_cdf",
    "edge_factor",
    "finite_size_radial_density",
    "finite_size_bin_masses",
    "hypergeometric_3F2",
    "fc_density",
    "fc_cdf",
    "fc_support",
    "fc_moment",
    "fc_mean_entropy",
    "fuss_catalan_number",
]

Variant = Literal["standard-erfc", "gaussian-q"]
VARIANTS = ("standard-erfc", "gaussian-q")


@dataclass(frozen=True)
class RadialLawParams:
    s: int = 1
    xi: float = 1.0
    N: int = 1
    q: float = 1.0

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 1:
            raise InvalidParameterError(f"s must be a positive integer, got {self.s!r}")
        if not self.xi > 0:
            raise InvalidParameterError(f"xi must be positive, got {self.xi!r}")
        if int(self.N) != self.N or self.N < 1:
            raise InvalidParameterError(f"N must be a positive integer, got {self.N!r}")
        if not self.q > 0:
            raise InvalidParameterError(f"q must be positive, got {self.q!r}")


# --------------------------------------------------------------------------
# single Ginibre matrix at finite N (entries of variance 1/N)


def _check_dim(N):
    if int(N) != N or N < 1:
        raise InvalidParameterError(f"N must be a positive integer, got {N!r}")
    return int(N)


def _regularized_upper_gamma_int(n: int, x: np.ndarray) -> np.ndarray:
    """Gamma(n, x) / Gamma(n) for integer n via ``exp(-x) sum_{k<n} x^k / k!``.

    The sum is accumulated in log space so large ``n`` and ``x`` neither
    overflow nor underflow.
    """
    x = np.asarray(x, dtype=float)
    k = np.arange(n, dtype=float)
    log_terms = special.xlogy(k, x[..., np.newaxis]) - special.gammaln(k + 1.0)
    return np.exp(special.logsumexp(log_terms, axis=-1) - x)


def ginibre_density(z, N: int):
    """Finite-N eigenvalue density ``Gamma(N, N|z|^2) / (pi Gamma(N))``.

    Normalised to unit mass in the plane for matrices whose entries have
    variance 1/N, so the spectrum fills the unit disk as N grows.
    """
    N = _check_dim(N)
    x = N * np.abs(np.asarray(z)) ** 2
    out = _regularized_upper_gamma_int(N, x) / np.pi
    return float(out) if np.ndim(out) == 0 else out


def ginibre_radial_cdf(r, N: int):
    """P(|z| <= r) implied by :func:`ginibre_density`.

    Equal to ``(1/N) sum_{k=0}^{N-1} P(k+1, N r^2)`` with P the regularised
    lower incomplete gamma function.
    """
    N = _check_dim(N)
    r = np.asarray(r, dtype=float)
    y = N * r.ravel() ** 2
    k = np.arange(1, N + 1, dtype=float)
    cdf = special.gammainc(k[np.newaxis, :], y[:, np.newaxis]).mean(axis=1)
    return cdf.reshape(r.shape) if r.ndim else float(cdf[0])


# --------------------------------------------------------------------------
# products of s Ginibre matrices


def product_radial_density(r, p: RadialLawParams, extend: bool = False):
    """Radial eigenvalue density ``(2/s) xi^(-2/s) r^(-1+2/s)`` on ``[0, xi]``.

    With ``extend=True`` the power law is continued past ``xi`` (the form
    used under the finite-size edge factor).
    """
    r = np.asarray(r, dtype=float)
    s, xi = p.s, p.xi
    with np.errstate(divide="ignore"):
        val = (2.0 / s) * xi ** (-2.0 / s) * r ** (-1.0 + 2.0 / s)
    if not extend:
        val = np.where(r <= xi, val, 0.0)
    val = np.where(r < 0, 0.0, val)
    return float(val) if val.ndim == 0 else val


def product_radial_cdf(r, s: int, xi: float = 1.0):
    r = np.clip(np.asarray(r, dtype=float) / xi, 0.0, 1.0)
    out = r ** (2.0 / s)
    return float(out) if out.ndim == 0 else out


def edge_factor(x, variant: Variant = "standard-erfc"):
    """Edge function E: ``erfc(x)``, or the Gaussian tail ``(1/sqrt(2 pi)) int_x^inf e^(-t^2/2) dt``."""
    x = np.asarray(x, dtype=float)
    if variant == "standard-erfc":
        return special.erfc(x)
    if variant == "gaussian-q":
        return 0.5 * special.erfc(x / np.sqrt(2.0))
    raise InvalidParameterError(f"unknown edge variant {variant!r}")


def _edge_argument(r, p):
    return p.q * (np.asarray(r, dtype=float) - p.xi) * np.sqrt(p.N)


def finite_size_radial_density(r, p: RadialLawParams, variant: Variant = "standard-erfc",
                               normalize: bool = False):
    """Power law softened at the edge: ``P(r) * E(q (r - xi) sqrt(N)) / 2``.

    Unnormalised by default; ``normalize=True`` divides by the total mass
    over ``[0, inf)``.
    """
    val = product_radial_density(r, p, extend=True) * 0.5 * edge_factor(_edge_argument(r, p), variant)
    if normalize:
        val = val / _finite_size_total_mass(p, variant)
    return val


# In v = (r/xi)^(2/s) the power law becomes the uniform density on [0, 1], so
# masses are integrals of the smooth edge factor alone.

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


def _edge_in_v(v, p, variant):
    r = p.xi * np.asarray(v) ** (p.s / 2.0)
    return 0.5 * edge_factor(_edge_argument(r, p), variant)


def _v_cutoff(p, variant):
    # beyond this the edge factor is below ~1e-80 for either variant
    width = 1.0 / (p.q * p.xi * np.sqrt(p.N))
    return (1.0 + 40.0 * width) ** (2.0 / p.s)


def _v_grid(p, variant, extra=()):
    """Breakpoints resolving the edge transition, plus any requested points."""
    width = 1.0 / (p.q * p.xi * np.sqrt(p.N))
    r_pts = p.xi * (1.0 + width * np.concatenate([np.linspace(-12, 12, 97), np.linspace(12, 40, 15)]))
    r_pts = r_pts[r_pts > 0]
    v_pts = (r_pts / p.xi) ** (2.0 / p.s)
    base = np.linspace(0.0, max(_v_cutoff(p, variant), 1.0), 129)
    pts = np.concatenate([base, v_pts, np.asarray(extra, dtype=float)])
    return np.unique(np.clip(pts, 0.0, None))


def _cumulative_edge_mass(p, variant, extra=()):
    grid = _v_grid(p, variant, extra)
    a, b = grid[:-1], grid[1:]
    half = 0.5 * (b - a)
    nodes = (a[:, None] + b[:, None]) * 0.5 + half[:, None] * _GL_NODES[None, :]
    seg = (half[:, None] * _GL_WEIGHTS[None, :] * _edge_in_v(nodes, p, variant)).sum(axis=1)
    return grid, np.concatenate([[0.0], np.cumsum(seg)])


def _finite_size_total_mass(p, variant):
    _, cum = _cumulative_edge_mass(p, variant)
    return cum[-1]


def finite_size_bin_masses(edges, p: RadialLawParams, variant: Variant = "standard-erfc") -> np.ndarray:
    """Probability mass of the normalised finite-size law in each histogram bin."""
    edges = np.asarray(edges, dtype=float)
    v_edges = (np.clip(edges, 0.0, None) / p.xi) ** (2.0 / p.s)
    grid, cum = _cumulative_edge_mass(p, variant, extra=v_edges)
    # mass beyond the last breakpoint is negligible by construction
    total = cum[-1]
    at_edges = np.interp(v_edges, grid, cum, right=cum[-1])
    return np.diff(at_edges) / total


# --------------------------------------------------------------------------
# generalized hypergeometric 3F2


_CHUNK_MAX = 1 << 21
_TERM_CAP = 1 << 23


class _Coefficients:
    """Lazily extended table of 3F2 series coefficients for fixed parameters."""

    def __init__(self, a, b):
        self.a = tuple(float(x) for x in a)
        self.b = tuple(float(x) for x in b)
        self.c = np.array([1.0])

    def upto(self, n):
        while self.c.size < n:
            m = self.c.size
            grow = min(max(m, 256), _CHUNK_MAX)
            k = np.arange(m - 1, m - 1 + grow, dtype=float)
            a1, a2, a3 = self.a
            b1, b2 = self.b
            ratio = (k + a1) * (k + a2) * (k + a3) / ((k + b1) * (k + b2) * (k + 1.0))
            self.c = np.concatenate([self.c, self.c[-1] * np.cumprod(ratio)])
        return self.c[:n]


@lru_cache(maxsize=32)
def _coefficients(a, b):
    return _Coefficients(a, b)


def _upper_gamma(a, y):
    """Non-regularised Gamma(a, y) for real a (negative a via downward recurrence)."""
    if a > 0:
        return special.gammaincc(a, y) * special.gamma(a)
    return (_upper_gamma(a + 1.0, y) - y**a * math.exp(-y)) / a


def _tail_estimate(c_last, n, sigma, z):
    """Approximate sum_{k>n} C k^(-sigma) z^k with C fitted to the last coefficient."""
    C = c_last * n**sigma
    if z == 1.0:
        return C * (n ** (1.0 - sigma) / (sigma - 1.0) - 0.5 * n ** (-sigma))
    alpha = -math.log(z)
    integral = alpha ** (sigma - 1.0) * _upper_gamma(1.0 - sigma, alpha * n)
    return C * (integral - 0.5 * n ** (-sigma) * z**n)


def _hyp3f2_scalar(a, b, z, tol):
    if z == 0.0:
        return 1.0, 0.0
    coeffs = _coefficients(a, b)
    # a nonpositive integer numerator parameter terminates the series
    for ai in a:
        if ai <= 0 and float(ai).is_integer():
            c = coeffs.upto(int(-ai) + 1)
            return float(np.sum(c * z ** np.arange(c.size))), 0.0
    sigma = 1.0 + sum(b) - sum(a)
    logz = math.log(abs(z))
    total = 0.0
    n = 0
    size = 512
    while True:
        c = coeffs.upto(min(n + size, _TERM_CAP))
        k = np.arange(n, c.size, dtype=float)
        terms = c[n:] * np.exp(k * logz) * (np.sign(z) ** k if z < 0 else 1.0)
        total += float(np.sum(terms))
        n = c.size
        last = abs(terms[-1])
        ratio = abs(c[-1] / c[-2]) * abs(z)
        scale = max(1.0, abs(total))
        if ratio < 1.0 and abs(z) < 1.0:
            bound = last * abs(z) / (1.0 - abs(z))
            if bound < tol * scale:
                return total, bound
        if n >= _TERM_CAP:
            break
        size *= 2
    if z < 0:
        return total, last
    if sigma <= 1.0:
        raise AccuracyError(f"3F2 series diverges at z={z} for these parameters", achieved=np.inf)
    return total + _tail_estimate(c[-1], n - 1, sigma, z), 1e-6


def hypergeometric_3F2(a: Sequence[float], b: Sequence[float], z, tol: float = 1e-14):
    """Power series ``sum_n (a1)_n (a2)_n (a3)_n / ((b1)_n (b2)_n n!) z^n`` for real ``|z| <= 1``.

    Terms are generated by the ratio recursion. Up to ``|z| ~ 0.99`` the
    truncation error is below ``tol``; closer to 1 the series is summed to
    a few million terms and closed with an asymptotic tail estimate, good
    to roughly 1e-6. At ``z = 1`` the series is only defined when
    ``b1 + b2 > a1 + a2 + a3``.
    """
    a = tuple(float(x) for x in a)
    b = tuple(float(x) for x in b)
    if len(a) != 3 or len(b) != 2:
        raise InvalidParameterError("3F2 needs three numerator and two denominator parameters")
    if any(bi <= 0 and float(bi).is_integer() for bi in b):
        raise InvalidParameterError("denominator parameter is a nonpositive integer")
    z_arr = np.asarray(z, dtype=float)
    if np.any(np.abs(z_arr) > 1.0):
        raise InvalidParameterError("3F2 series is only evaluated for |z| <= 1")
    out = np.array([_hyp3f2_scalar(a, b, float(zi), tol)[0] for zi in z_arr.ravel()])
    return float(out[0]) if z_arr.ndim == 0 else out.reshape(z_arr.shape)


# --------------------------------------------------------------------------
# Fuss-Catalan family


def _check_order(order) -> int:
    if order not in (1, 2, 3):
        raise InvalidParameterError(f"closed-form FC density available for orders 1-3, got {order!r}")
    return int(order)


def fc_support(order: int) -> tuple[float, float]:
    if int(order) != order or order < 1:
        raise InvalidParameterError(f"order must be a positive integer, got {order!r}")
    s = int(order)
    return 0.0, (s + 1) ** (s + 1) / s**s


def fuss_catalan_number(m: int, s: int) -> int:
    """``binom(m(s+1), m) / (ms + 1)`` in exact integer arithmetic."""
    if int(m) != m or m < 0:
        raise InvalidParameterError(f"m must be a non-negative integer, got {m!r}")
    if int(s) != s or s < 1:
        raise InvalidParameterError(f"s must be a positive integer, got {s!r}")
    m, s = int(m), int(s)
    num = math.comb(m * (s + 1), m)
    q, rem = divmod(num, m * s + 1)
    assert rem == 0
    return q


def _fc1(x):
    return np.sqrt(4.0 / x - 1.0) / (2.0 * np.pi)


def _fc2(x):
    root = 27.0 + 3.0 * np.sqrt(np.clip(81.0 - 12.0 * x, 0.0, None))
    c2 = 2.0 ** (1.0 / 3.0)
    num = c2 * root ** (2.0 / 3.0) - 6.0 * np.cbrt(x)
    den = x ** (2.0 / 3.0) * root ** (1.0 / 3.0)
    return c2 * np.sqrt(3.0) / (12.0 * np.pi) * num / den


_FC3_TERMS = (
    ((-1.0 / 12, 1.0 / 4, 7.0 / 12), (1.0 / 2, 3.0 / 4)),
    ((1.0 / 6, 1.0 / 2, 5.0 / 6), (3.0 / 4, 5.0 / 4)),
    ((5.0 / 12, 3.0 / 4, 13.0 / 12), (5.0 / 4, 3.0 / 2)),
)


def _fc3(x):
    z = 27.0 * x / 256.0
    (a1, b1), (a2, b2), (a3, b3) = _FC3_TERMS
    return (hypergeometric_3F2(a1, b1, z) / (np.sqrt(2.0) * np.pi * x**0.75)
            - hypergeometric_3F2(a2, b2, z) / (4.0 * np.pi * np.sqrt(x))
            - hypergeometric_3F2(a3, b3, z) / (32.0 * np.sqrt(2.0) * np.pi * x**0.25))


_FC_IMPL = {1: _fc1, 2: _fc2, 3: _fc3}


def fc_density(x, order: int):
    """Fuss-Catalan density of order 1 (Marchenko-Pastur), 2 or 3.

    Zero outside the open support; ``inf`` at ``x = 0``.
    """
    s = _check_order(order)
    _, edge = fc_support(s)
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.zeros_like(flat)
    inside = (flat > 0) & (flat < edge)
    if np.any(inside):
        out[inside] = np.maximum(_FC_IMPL[s](flat[inside]), 0.0)
    out[flat == 0] = np.inf
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def _mapped(w, s):
    """x(w) and dx/dw for the endpoint-regularising substitution."""
    _, edge = fc_support(s)
    t = 0.5 * np.pi * np.asarray(w, dtype=float)
    sn, cs = np.sin(t), np.cos(t)
    x = edge * sn ** (2 * (s + 1))
    dx = edge * 2 * (s + 1) * sn ** (2 * s + 1) * cs * 0.5 * np.pi
    return x, dx


def _fc_integral(g, s, tol=1e-11):
    def integrand(w):
        x, dx = _mapped(w, s)
        if x <= 0.0 or dx == 0.0:
            return 0.0
        return g(x) * fc_density(x, s) * dx

    val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=400)
    if not err < 1e3 * tol * max(1.0, abs(val)):
        raise AccuracyError(f"FC quadrature did not converge (error estimate {err:.3g})", achieved=err)
    return val


def fc_moment(m: int, order: int) -> float:
    """m-th moment of ``fc_density`` by adaptive quadrature."""
    s = _check_order(order)
    return _fc_integral(lambda x: x**m, s)


def fc_mean_entropy(order: int) -> float:
    """``-int x ln x FC_s(x) dx``, the asymptotic mean of ``S - ln N'``."""
    s = _check_order(order)
    return -_fc_integral(lambda x: x * math.log(x), s)


@lru_cache(maxsize=8)
def _fc_cdf_table(s, n_intervals=1024):
    w = np.linspace(0.0, 1.0, n_intervals + 1)
    nodes, weights = np.polynomial.legendre.leggauss(8)
    a, b = w[:-1], w[1:]
    half = 0.5 * (b - a)
    pts = (0.5 * (a + b))[:, None] + half[:, None] * nodes[None, :]
    x, dx = _mapped(pts, s)
    seg = (half[:, None] * weights[None, :] * fc_density(x, s) * dx).sum(axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    return w, cum / cum[-1], float(cum[-1])


def fc_cdf(x, order: int):
    """Cumulative distribution of ``fc_density`` (tabulated, then interpolated)."""
    s = _check_order(order)
    _, edge = fc_support(s)
    w_tab, cdf_tab, _ = _fc_cdf_table(s)
    x = np.asarray(x, dtype=float)
    ratio = np.clip(x / edge, 0.0, 1.0)
    w = (2.0 / np.pi) * np.arcsin(ratio ** (1.0 / (2 * (s + 1))))
    out = np.interp(w, w_tab, cdf_tab)
    return float(out) if out.ndim == 0 else out
