"""Reference density curves on a grid over each law's support."""

from __future__ import annotations

import numpy as np
from scipy import optimize, special

from .. import laws
from ..errors import InvalidParameterError

LAWS = ("fc1", "fc2", "fc3", "radial", "finite-radial", "ginibre-finite")


def _fc_order(law):
    return int(law[2]) if law in ("fc1", "fc2", "fc3") else None


def _support(law, params):
    order = _fc_order(law)
    if order is not None:
        return laws.fc_support(order)
    xi = params.get("xi", 1.0)
    if law == "radial":
        return 0.0, xi
    if law == "finite-radial":
        width = 1.0 / (params.get("q", 1.0) * xi * np.sqrt(params.get("N", 1)))
        return 0.0, xi * (1.0 + 8.0 * width)
    if law == "ginibre-finite":
        return 0.0, 1.0 + 8.0 / np.sqrt(params.get("N", 1))
    raise InvalidParameterError(f"unknown law {law!r}")


def _singular_at_zero(law, params):
    return _fc_order(law) is not None or (law in ("radial", "finite-radial") and params.get("s", 1) > 2)


def _graded_fc_grid(order, n):
    """``n`` points ``x = E * I^{-1}(w; a, b)`` on ``w = k/n``, k = 1..n.

    Near 0 the density behaves like ``x^(-s/(s+1))``; point density
    ``|f''|^(-1/3)`` there equidistributes the trapezoid error and gives
    ``a = 1/(3(s+1))``. The trapezoid rule overshoots on the convex part and
    undershoots on the concave square-root edge, so ``b`` is calibrated in
    ``[1/2, 2]`` to make the two cancel against the exact unit mass; coarse
    grids with no such ``b`` keep ``b = 1/2`` (quadratic edge clustering).
    """
    hi = laws.fc_support(order)[1]
    w = np.linspace(0.0, 1.0, n + 1)[1:]
    a = 1.0 / (3.0 * (order + 1))

    def grid(b):
        return hi * special.betaincinv(a, b, w)

    def excess(b):
        x = grid(b)
        return float(np.trapezoid(laws.fc_density(x, order), x)) - 1.0

    lo_b, hi_b = 0.5, 2.0
    if excess(lo_b) * excess(hi_b) >= 0:
        return grid(lo_b)
    return grid(optimize.brentq(excess, lo_b, hi_b, xtol=1e-12))


def curve_grid(law, params, grid, spacing="auto"):
    """Grid of ``grid`` abscissae over the support, never including a singular x = 0.

    ``uniform`` spacing steps by ``width/grid`` (starting one step in when
    the density diverges at 0). ``graded`` clusters FC points towards both
    ends (see :func:`_graded_fc_grid`) so that trapezoid sums over the
    emitted rows reproduce the unit mass; ``auto`` picks graded for FC laws
    and uniform otherwise.
    """
    lo, hi = _support(law, params)
    order = _fc_order(law)
    if spacing == "auto":
        spacing = "graded" if order is not None else "uniform"
    if spacing == "graded":
        if order is None:
            raise InvalidParameterError("graded spacing is only defined for FC laws")
        return _graded_fc_grid(order, grid)
    if spacing != "uniform":
        raise InvalidParameterError(f"unknown spacing {spacing!r}")
    if _singular_at_zero(law, params):
        return np.linspace(lo, hi, grid + 1)[1:]
    return np.linspace(lo, hi, grid)


def evaluate(law, x, params):
    order = _fc_order(law)
    if order is not None:
        return laws.fc_density(x, order)
    p = laws.RadialLawParams(params.get("s", 1), params.get("xi", 1.0), params.get("N", 1), params.get("q", 1.0))
    if law == "radial":
        return laws.product_radial_density(x, p)
    if law == "finite-radial":
        return laws.finite_size_radial_density(x, p, params.get("variant", "standard-erfc"), normalize=True)
    if law == "ginibre-finite":
        return laws.ginibre_density(x, p.N)
    raise InvalidParameterError(f"unknown law {law!r}")


def emit_density_curve(law: str, params: dict, grid: int, spacing: str = "uniform"):
    """Rows ``(x, density)`` of ``law`` on a grid of ``grid`` points (see :func:`curve_grid`)."""
    if law not in LAWS:
        raise InvalidParameterError(f"unknown law {law!r}; expected one of {', '.join(LAWS)}")
    if int(grid) != grid or grid < 2:
        raise InvalidParameterError("grid needs at least 2 points")
    x = curve_grid(law, params, int(grid), spacing)
    y = np.atleast_1d(evaluate(law, x, params))
    return np.column_stack([x, y])
