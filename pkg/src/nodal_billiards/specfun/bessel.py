"""Real-order Bessel functions and the annulus cross-product combination.

Evaluation is delegated to scipy's jv/yv (AMOS); the test suite checks them
against an independent high-precision oracle and the Wronskian identity.
"""

import numpy as np
from scipy.special import jv as _jv, yv as _yv

from ..errors import DomainError

_Y_SMALL_CUT = 1e-300  # below this Y diverges; callers never need that regime


def _check_order(order):
    order = float(order)
    if not np.isfinite(order) or order < 0:
        raise DomainError(f"Bessel order must be finite and >= 0, got {order}")
    return order


def bessel_j(order, x):
    """J_order(x) for real order >= 0 and x >= 0 (scalar or array)."""
    order = _check_order(order)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise DomainError("bessel_j requires finite x >= 0")
    return _jv(order, x)


def bessel_y(order, x):
    """Y_order(x) for real order >= 0 and x > 0 (scalar or array)."""
    order = _check_order(order)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < _Y_SMALL_CUT):
        raise DomainError("bessel_y requires x above the singular cutoff")
    return _yv(order, x)


def annulus_radial(order, k, r1, r):
    """J(kr) Y(kr1) - J(kr1) Y(kr): the radial factor vanishing at r = r1."""
    if r1 <= 0 or k <= 0:
        raise DomainError("annulus_radial requires k > 0 and r1 > 0")
    r = np.asarray(r, dtype=float)
    if np.any(r < r1):
        raise DomainError("annulus_radial requires r >= r1")
    j1 = _jv(order, k * r1)
    y1 = _yv(order, k * r1)
    return bessel_j(order, k * r) * y1 - j1 * bessel_y(order, k * r)
