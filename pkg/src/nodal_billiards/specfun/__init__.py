"""Special-function kernel: Bessel, Mathieu, Kummer/Weber, zero finding.

All operations are pure functions of their inputs and safe to call from
multiple threads.
"""

from .bessel import annulus_radial, bessel_j, bessel_y
from .kummer import kummer_m, weber_assembly, weber_u, weber_v
from .mathieu import (
    AngularMathieu,
    MathieuParams,
    mathieu_angular,
    mathieu_char,
    mathieu_radial,
    mathieu_radial_profile,
)
from .weber_ode import WeberPair, weber_pair_for
from .zeros import ZeroList, count_sign_changes, find_zeros

__all__ = [
    "AngularMathieu",
    "MathieuParams",
    "WeberPair",
    "ZeroList",
    "annulus_radial",
    "bessel_j",
    "bessel_y",
    "count_sign_changes",
    "find_zeros",
    "kummer_m",
    "mathieu_angular",
    "mathieu_char",
    "mathieu_radial",
    "mathieu_radial_profile",
    "weber_assembly",
    "weber_pair_for",
    "weber_u",
    "weber_v",
]
