"""Elliptic-family solver: full ellipse and confocal elliptic annulus.

Symmetry classes are labelled by the reflection parities across the two axes,
y-axis parity first, as the reference nodal-count tables list them.  Each
class selects one angular Mathieu periodicity family; l indexes states within
the class and r counts radial excitations.  For each trial k the angular
characteristic value fixes the separation constant and the radial equation is
integrated outward; k is the (r+1)-th root of the outer boundary value,
certified by the interior radial zero count.

Class map (adjudicated against measured nodal counts):
  '++' -> cosine-elliptic, order 2l      (4l angular zeros)
  '+-' -> sine-elliptic,   order 2l+1    (4l+2)
  '-+' -> cosine-elliptic, order 2l+1    (4l+2)
  '--' -> sine-elliptic,   order 2l+2    (4l+4)
Cosine-elliptic radial partners start with F'(0) = 0 at the focal segment,
sine-elliptic ones with F(0) = 0.  Annulus modes instead vanish at the inner
confocal ellipse, so the radial data there is (0, 1) regardless of class.
"""

import math

import numpy as np

from ..errors import InvalidSpecError, SolverError
from ..geometry import Family, chart_for
from ..specfun import AngularMathieu, MathieuParams, mathieu_char, \
    mathieu_radial_profile
from .state import Eigenstate, nth_root

_INTERIOR_PAD = 1e-6

CLASS_ORDER = {
    "++": (lambda l: 2 * l, "even"),
    "+-": (lambda l: 2 * l + 1, "odd"),
    "-+": (lambda l: 2 * l + 1, "even"),
    "--": (lambda l: 2 * l + 2, "odd"),
}


def class_to_order(clazz, l):
    if clazz not in CLASS_ORDER:
        raise InvalidSpecError(f"unknown symmetry class {clazz!r}")
    if l < 0 or int(l) != l:
        raise InvalidSpecError("class index l must be a natural number")
    fn, parity = CLASS_ORDER[clazz]
    return fn(int(l)), parity


def _geometry(spec):
    if spec.family is Family.ELLIPSE:
        return 0.0, spec["rho_max"], spec["f"]
    return spec["rho_min"], spec["rho_max"], spec["f"]


def _radial_init(parity, rho0):
    if rho0 > 0.0:
        return (0.0, 1.0)
    return (1.0, 0.0) if parity == "even" else (0.0, 1.0)


def _boundary_profile(order, parity, k, f, rho0, rho1):
    c2 = (k * f) ** 2
    lam = mathieu_char(order, parity, c2)
    init = _radial_init(parity, rho0)
    sol = mathieu_radial_profile(MathieuParams(lam, c2), init, rho0, rho1)
    return sol, lam


def assemble_elliptic(spec, clazz, qnums, k):
    """Eigenstate from an already-solved k (also the cache-rebuild path)."""
    l, r = qnums
    order, parity = class_to_order(clazz, l)
    rho0, rho1, f = _geometry(spec)
    sol, lam = _boundary_profile(order, parity, k, f, rho0, rho1)
    chart = chart_for(spec)
    angular = AngularMathieu(order, parity, (k * f) ** 2)

    def radial_fn(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return sol.sol(u)[0]

    amp = np.max(np.abs(radial_fn(np.linspace(rho0, rho1, 512))))
    residual = abs(float(sol.sol(rho1)[0])) / amp

    return Eigenstate(
        spec=spec, qnums=(int(l), int(r)), symmetry=clazz, k=float(k),
        separation=lam, radial_coeffs=(), residual=residual,
        chart=chart, radial=radial_fn, angular=angular,
    )


def solve_elliptic(spec, clazz, qnums):
    l, r = qnums
    if r < 0 or int(r) != r:
        raise InvalidSpecError("radial quantum number r must be >= 0")
    order, parity = class_to_order(clazz, l)
    rho0, rho1, f = _geometry(spec)

    # k-spacing of boundary roots follows the physical radial width
    width = max(rho1 - rho0, f * (math.sinh(rho1) - math.sinh(rho0)))
    step = math.pi / (8.0 * width)
    span = (r + 3) * math.pi / width + order / (f * math.cosh(rho1)) + 2.0

    def boundary(k):
        sol, _ = _boundary_profile(order, parity, k, f, rho0, rho1)
        return float(sol.sol(rho1)[0])

    wanted = r  # interior radial zeros
    root_index = r + 1
    while True:
        k, _ = nth_root(boundary, root_index, 1e-6, step, span,
                        max_span=20.0 * span)
        sol, _ = _boundary_profile(order, parity, k, f, rho0, rho1)
        pad = _INTERIOR_PAD * (rho1 - rho0)
        xs = np.linspace(rho0 + pad, rho1 - pad, 2048)
        s = np.sign(sol.sol(xs)[0])
        interior = int(np.count_nonzero(s[:-1] != s[1:]))
        if interior == wanted:
            break
        if interior > wanted or root_index - (r + 1) > 4:
            raise SolverError(
                f"elliptic certification failed: boundary root {root_index} "
                f"has {interior} interior zeros, wanted {wanted}")
        root_index += 1

    return assemble_elliptic(spec, clazz, qnums, k)
