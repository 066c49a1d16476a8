"""Family dispatch for eigenvalue solves and cache reassembly."""

from ..errors import InvalidSpecError
from ..geometry import Family
from .circular import assemble_circular, solve_circular
from .elliptic import CLASS_ORDER, assemble_elliptic, class_to_order, \
    solve_elliptic
from .parabolic import (
    assemble_parabolic_annulus,
    assemble_parabolic_full,
    solve_parabolic_annulus,
    solve_parabolic_full,
)
from .state import Eigenstate

# bump when solver numerics change; part of every cache key
SOLVER_VERSION = "1"

_CIRCULAR = (Family.DISK, Family.CIRCULAR_ANNULUS, Family.CIRCULAR_SECTOR)
_ELLIPTIC = (Family.ELLIPSE, Family.ELLIPTIC_ANNULUS)


def solve(spec, qnums, clazz=None):
    """Solve one separable Dirichlet mode.

    clazz is required for the elliptic families (one of '++', '+-', '-+',
    '--') and for the full confocal-parabola region ('even' or 'odd'); the
    other families ignore it."""
    fam = spec.family
    qnums = (int(qnums[0]), int(qnums[1]))
    if fam in _CIRCULAR:
        return solve_circular(spec, qnums)
    if fam in _ELLIPTIC:
        if clazz is None:
            raise InvalidSpecError("elliptic families need a symmetry class")
        return solve_elliptic(spec, clazz, qnums)
    if fam is Family.CONFOCAL_PARABOLA:
        if clazz is None:
            raise InvalidSpecError("confocal-parabola needs class 'even' or 'odd'")
        return solve_parabolic_full(spec, clazz, qnums)
    if fam is Family.PARABOLIC_ANNULUS:
        return solve_parabolic_annulus(spec, qnums)
    raise InvalidSpecError(f"no solver for family {fam}")


def assemble(spec, qnums, clazz, k, separation=None):
    """Rebuild an Eigenstate from stored roots without re-solving."""
    fam = spec.family
    qnums = (int(qnums[0]), int(qnums[1]))
    if fam in _CIRCULAR:
        return assemble_circular(spec, qnums, k)
    if fam in _ELLIPTIC:
        return assemble_elliptic(spec, clazz, qnums, k)
    if fam is Family.CONFOCAL_PARABOLA:
        return assemble_parabolic_full(spec, clazz, qnums, k, separation)
    if fam is Family.PARABOLIC_ANNULUS:
        return assemble_parabolic_annulus(spec, qnums, k, separation)
    raise InvalidSpecError(f"no solver for family {fam}")


__all__ = [
    "CLASS_ORDER",
    "Eigenstate",
    "SOLVER_VERSION",
    "assemble",
    "class_to_order",
    "solve",
    "solve_circular",
    "solve_elliptic",
    "solve_parabolic_annulus",
    "solve_parabolic_full",
]
