"""Billiard specifications, native-coordinate charts, and boundary gluings.

Each separable family lives on a rectangle in its natural coordinates
(u = radial-like, v = angular-like).  Where the chart wraps or degenerates
(angular periodicity, the elliptic focal segment, the parabolic seam) the
chart carries gluing records so connected-component counting can identify
boundary cells that represent the same physical points.  Counting always
happens in chart space; physical coordinates are only used for plotting and
diagnostics, which avoids the branch ambiguity of the inverse parabolic map.
"""

import cmath
import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidSpecError, OutOfChartError

TWO_PI = 2.0 * math.pi


class Family(str, Enum):
    DISK = "disk"
    CIRCULAR_ANNULUS = "circular-annulus"
    CIRCULAR_SECTOR = "circular-sector"
    ELLIPSE = "ellipse"
    ELLIPTIC_ANNULUS = "elliptic-annulus"
    CONFOCAL_PARABOLA = "confocal-parabola"
    PARABOLIC_ANNULUS = "parabolic-annulus"


@dataclass(frozen=True)
class BilliardSpec:
    family: Family
    params: tuple  # sorted (name, value) pairs

    # ---- constructors ----

    @staticmethod
    def disk(radius):
        if not radius > 0:
            raise InvalidSpecError("disk requires radius > 0")
        return BilliardSpec(Family.DISK, (("radius", float(radius)),))

    @staticmethod
    def circular_annulus(r1, r2):
        if not 0 < r1 < r2:
            raise InvalidSpecError("circular annulus requires 0 < r1 < r2")
        return BilliardSpec(Family.CIRCULAR_ANNULUS,
                            (("r1", float(r1)), ("r2", float(r2))))

    @staticmethod
    def circular_sector(r1, r2, theta1, theta2):
        if not (0 <= r1 < r2 and 0 <= theta1 < theta2 <= TWO_PI):
            raise InvalidSpecError("sector requires 0 <= r1 < r2 and "
                                   "0 <= theta1 < theta2 <= 2*pi")
        return BilliardSpec(Family.CIRCULAR_SECTOR,
                            (("r1", float(r1)), ("r2", float(r2)),
                             ("theta1", float(theta1)), ("theta2", float(theta2))))

    @staticmethod
    def ellipse(rho_max, f):
        if not (rho_max > 0 and f > 0):
            raise InvalidSpecError("ellipse requires rho_max > 0 and f > 0")
        return BilliardSpec(Family.ELLIPSE,
                            (("f", float(f)), ("rho_max", float(rho_max))))

    @staticmethod
    def elliptic_annulus(rho_min, rho_max, f):
        if not (0 < rho_min < rho_max and f > 0):
            raise InvalidSpecError("elliptic annulus requires 0 < rho_min < rho_max, f > 0")
        return BilliardSpec(Family.ELLIPTIC_ANNULUS,
                            (("f", float(f)), ("rho_max", float(rho_max)),
                             ("rho_min", float(rho_min))))

    @staticmethod
    def confocal_parabola():
        # the normalised region |tau| <= 1, 0 <= sigma <= 1
        return BilliardSpec(Family.CONFOCAL_PARABOLA, ())

    @staticmethod
    def parabolic_annulus(tau1, tau2, sigma1, sigma2):
        if not (0 < tau1 < tau2 and 0 < sigma1 < sigma2):
            raise InvalidSpecError("parabolic annulus requires 0 < tau1 < tau2 "
                                   "and 0 < sigma1 < sigma2")
        return BilliardSpec(Family.PARABOLIC_ANNULUS,
                            (("sigma1", float(sigma1)), ("sigma2", float(sigma2)),
                             ("tau1", float(tau1)), ("tau2", float(tau2))))

    # ---- accessors ----

    def __getitem__(self, name):
        for key, val in self.params:
            if key == name:
                return val
        raise KeyError(name)

    def to_json(self):
        """Canonical serialization: family first, params sorted by name.
        This string is the cache-key input."""
        return json.dumps(
            {"family": self.family.value, "params": dict(self.params)},
            sort_keys=False, separators=(",", ":"),
        )

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        return spec_from_dict(data["family"], data.get("params", {}))


_CONSTRUCTORS = {
    Family.DISK: ("disk", ("radius",)),
    Family.CIRCULAR_ANNULUS: ("circular_annulus", ("r1", "r2")),
    Family.CIRCULAR_SECTOR: ("circular_sector", ("r1", "r2", "theta1", "theta2")),
    Family.ELLIPSE: ("ellipse", ("rho_max", "f")),
    Family.ELLIPTIC_ANNULUS: ("elliptic_annulus", ("rho_min", "rho_max", "f")),
    Family.CONFOCAL_PARABOLA: ("confocal_parabola", ()),
    Family.PARABOLIC_ANNULUS: ("parabolic_annulus", ("tau1", "tau2", "sigma1", "sigma2")),
}


def spec_from_dict(family, params):
    try:
        fam = Family(family)
    except ValueError:
        raise InvalidSpecError(f"unknown family {family!r}") from None
    ctor, names = _CONSTRUCTORS[fam]
    try:
        args = [params[name] for name in names]
    except KeyError as exc:
        raise InvalidSpecError(f"missing parameter {exc} for family {family}") from None
    return getattr(BilliardSpec, ctor)(*args)


@dataclass(frozen=True)
class Gluing:
    """Identification of chart-edge points.

    edge/other name rectangle edges ('u_lo','u_hi','v_lo','v_hi'); reverse
    says whether the identification runs the opposite edge backwards (an
    involution, e.g. phi <-> 2pi - phi on the focal segment)."""
    edge: str
    other: str
    reverse: bool


@dataclass(frozen=True)
class Chart:
    spec: BilliardSpec
    u_range: tuple
    v_range: tuple
    gluings: tuple

    def to_physical(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        fam = self.spec.family
        if fam in (Family.DISK, Family.CIRCULAR_ANNULUS, Family.CIRCULAR_SECTOR):
            return u * np.cos(v), u * np.sin(v)
        if fam in (Family.ELLIPSE, Family.ELLIPTIC_ANNULUS):
            f = self.spec["f"]
            return f * np.cosh(u) * np.cos(v), f * np.sinh(u) * np.sin(v)
        # parabolic: u = tau, v = sigma
        return u * v, 0.5 * (u * u - v * v)

    def to_chart(self, x, y):
        """Inverse map for a single physical point (diagnostics only)."""
        fam = self.spec.family
        if fam in (Family.DISK, Family.CIRCULAR_ANNULUS, Family.CIRCULAR_SECTOR):
            u = math.hypot(x, y)
            v = math.atan2(y, x) % TWO_PI
            if fam is Family.CIRCULAR_SECTOR and v < self.v_range[0]:
                v += TWO_PI
            return u, v
        if fam in (Family.ELLIPSE, Family.ELLIPTIC_ANNULUS):
            w = cmath.acosh(complex(x, y) / self.spec["f"])
            rho, phi = abs(w.real), w.imag
            if y < 0 or (y == 0 and x < 0 and phi > 0):
                phi = TWO_PI - abs(phi)
            else:
                phi = abs(phi)
            return rho, phi % TWO_PI
        w = cmath.sqrt(complex(-2.0 * y, 2.0 * x))
        sigma, tau = w.real, w.imag
        if sigma < 0:
            sigma, tau = -sigma, -tau
        return tau, sigma

    def contains(self, u, v):
        (ul, uh), (vl, vh) = self.u_range, self.v_range
        return (ul - 1e-12 <= u <= uh + 1e-12) and (vl - 1e-12 <= v <= vh + 1e-12)

    def require(self, u, v):
        if not self.contains(u, v):
            raise OutOfChartError(f"({u}, {v}) outside chart "
                                  f"{self.u_range} x {self.v_range}")


def chart_for(spec):
    """Native rectangle and gluing list for a billiard spec.

    The disk centre and the r = 0 sector apex are point degeneracies: a
    single point cannot join two open sign regions, so they carry no gluing
    (unlike the focal segment and parabolic seam, which are 1-D)."""
    fam = spec.family
    if fam is Family.DISK:
        return Chart(spec, (0.0, spec["radius"]), (0.0, TWO_PI),
                     (Gluing("v_lo", "v_hi", False),))
    if fam is Family.CIRCULAR_ANNULUS:
        return Chart(spec, (spec["r1"], spec["r2"]), (0.0, TWO_PI),
                     (Gluing("v_lo", "v_hi", False),))
    if fam is Family.CIRCULAR_SECTOR:
        full = abs((spec["theta2"] - spec["theta1"]) - TWO_PI) < 1e-12
        gl = (Gluing("v_lo", "v_hi", False),) if full else ()
        return Chart(spec, (spec["r1"], spec["r2"]),
                     (spec["theta1"], spec["theta2"]), gl)
    if fam is Family.ELLIPSE:
        return Chart(spec, (0.0, spec["rho_max"]), (0.0, TWO_PI),
                     (Gluing("v_lo", "v_hi", False),
                      Gluing("u_lo", "u_lo", True)))
    if fam is Family.ELLIPTIC_ANNULUS:
        return Chart(spec, (spec["rho_min"], spec["rho_max"]), (0.0, TWO_PI),
                     (Gluing("v_lo", "v_hi", False),))
    if fam is Family.CONFOCAL_PARABOLA:
        return Chart(spec, (-1.0, 1.0), (0.0, 1.0),
                     (Gluing("v_lo", "v_lo", True),))
    if fam is Family.PARABOLIC_ANNULUS:
        return Chart(spec, (spec["tau1"], spec["tau2"]),
                     (spec["sigma1"], spec["sigma2"]), ())
    raise InvalidSpecError(f"no chart for family {fam}")


def physical_boundary(spec, points_per_edge=256):
    """Closed boundary polyline(s) of the billiard in physical coordinates."""
    chart = chart_for(spec)
    (ul, uh), (vl, vh) = chart.u_range, chart.v_range
    fam = spec.family
    t = np.linspace(0.0, 1.0, points_per_edge)

    def edge(u0, v0, u1, v1):
        return chart.to_physical(u0 + (u1 - u0) * t, v0 + (v1 - v0) * t)

    if fam in (Family.DISK, Family.CIRCULAR_ANNULUS, Family.ELLIPSE,
               Family.ELLIPTIC_ANNULUS):
        loops = [np.column_stack(edge(uh, vl, uh, vh))]
        if fam in (Family.CIRCULAR_ANNULUS, Family.ELLIPTIC_ANNULUS):
            loops.append(np.column_stack(edge(ul, vl, ul, vh)))
        return [np.vstack([lp, lp[:1]]) for lp in loops]

    if fam is Family.CONFOCAL_PARABOLA:
        # sigma = 1 arc plus the tau = +/-1 arcs, which meet at (0, 1/2);
        # the sigma = 0 seam is interior (the + y-axis), not boundary
        segs = [edge(ul, vh, uh, vh),
                edge(uh, vh, uh, vl),
                edge(ul, vl, ul, vh)]
    else:
        segs = [edge(ul, vl, uh, vl), edge(uh, vl, uh, vh),
                edge(uh, vh, ul, vh), edge(ul, vh, ul, vl)]
    pts = np.vstack([np.column_stack(s) for s in segs])
    return [np.vstack([pts, pts[:1]])]
