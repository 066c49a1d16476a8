"""Circular-family solver: disk, circular annulus, circular sector.

The angular factor is trigonometric with order m (or m * pi / opening for a
sector).  k is the n-th root of the radial boundary value at the outer
radius: J_order alone when the inner radius is 0, the cross-product
combination otherwise.  Each accepted root is certified by counting interior
radial zeros, which must equal n - 1 (Sturm ordering).
"""

import math

import numpy as np
from scipy.special import jv as _jv, yv as _yv

from ..errors import InvalidSpecError, SolverError
from ..geometry import Family, chart_for
from ..specfun import count_sign_changes
from .state import Eigenstate, nth_root

_INTERIOR_PAD = 1e-6


def _angular_order(spec, m):
    fam = spec.family
    if fam is Family.CIRCULAR_SECTOR:
        if m < 1:
            raise InvalidSpecError("sector angular quantum number m starts at 1")
        opening = spec["theta2"] - spec["theta1"]
        return m * math.pi / opening
    if m < 0:
        raise InvalidSpecError("angular quantum number m must be >= 0")
    return float(m)


def _radii(spec):
    if spec.family is Family.DISK:
        return 0.0, spec["radius"]
    return spec["r1"], spec["r2"]


def _radial_factory(order, r1):
    if r1 == 0.0:
        def radial(k, r):
            return _jv(order, k * np.asarray(r, dtype=float))
    else:
        def radial(k, r):
            r = np.asarray(r, dtype=float)
            kr1 = k * r1
            return (_jv(order, k * r) * _yv(order, kr1)
                    - _jv(order, kr1) * _yv(order, k * r))
    return radial


def _check_qnums(m, n):
    if n < 1 or int(n) != n or int(m) != m:
        raise InvalidSpecError("quantum numbers must be integers with n >= 1")


def assemble_circular(spec, qnums, k):
    """Eigenstate from an already-solved k (also the cache-rebuild path)."""
    m, n = qnums
    _check_qnums(m, n)
    order = _angular_order(spec, m)
    r1, r2 = _radii(spec)
    radial = _radial_factory(order, r1)
    chart = chart_for(spec)

    if spec.family is Family.CIRCULAR_SECTOR:
        theta1 = spec["theta1"]

        def angular(v):
            return np.sin(order * (np.asarray(v, dtype=float) - theta1))
    else:
        def angular(v):
            return np.cos(order * np.asarray(v, dtype=float))

    def radial_fn(u):
        return radial(k, u)

    amp = np.max(np.abs(radial_fn(np.linspace(r1, r2, 512))))
    residual = abs(float(np.atleast_1d(radial(k, r2))[0])) / amp
    if r1 > 0.0:
        residual += abs(float(np.atleast_1d(radial(k, r1))[0])) / amp

    return Eigenstate(
        spec=spec, qnums=(int(m), int(n)), symmetry=None, k=float(k),
        separation=order, radial_coeffs=(), residual=residual,
        chart=chart, radial=radial_fn, angular=angular,
    )


def solve_circular(spec, qnums):
    m, n = qnums
    _check_qnums(m, n)
    order = _angular_order(spec, m)
    r1, r2 = _radii(spec)
    radial = _radial_factory(order, r1)
    width = r2 - r1

    # the n-th boundary root sits near (n*pi + order)/r2; scan with margin
    step = math.pi / (8.0 * width)
    span = (n + 2) * math.pi / width + order / r2 + 2.0
    k_lo = 1e-9 if r1 == 0.0 else 1e-6

    def f(k):
        return float(np.atleast_1d(radial(k, r2))[0])

    root_index = n
    while True:
        k, _ = nth_root(f, root_index, k_lo, step, span, max_span=20.0 * span)
        interior = count_sign_changes(
            lambda r: radial(k, r),
            r1 + _INTERIOR_PAD * width, r2 - _INTERIOR_PAD * width)
        if interior == n - 1:
            break
        if interior > n - 1 or root_index - n > 4:
            raise SolverError(
                f"radial certification failed: boundary root {root_index} has "
                f"{interior} interior zeros, wanted {n - 1}")
        root_index += 1   # scan skipped a boundary root; take the next one

    return assemble_circular(spec, qnums, k)
