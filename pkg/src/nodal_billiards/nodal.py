"""Nodal-domain counting for separable eigenstates.

Two independent routes:

* count_grid / count_converged: sample the sign of psi = F(u) G(v) on a
  cell-centred chart grid and count connected components with union-find,
  honouring the chart gluings (angular wrap, focal segment, parabolic seam).
  Separability means only the two 1-D profiles are ever evaluated.

* count_product: combinatorial count from the interior zero counts of the
  two profiles.  It presumes nodal lines meet the chart like a grid, which
  fails for the simply connected families whose chart has a degenerate inner
  edge (disk centre, focal segment, parabolic seam); those raise
  InapplicableFamilyError rather than return a silently wrong number.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InapplicableFamilyError, SolverError
from .geometry import Family

_ZERO_TOL = 1e-13
_MIN_RESOLUTION = 64
_MAX_RESOLUTION = 4096


@dataclass(frozen=True)
class SignGrid:
    """Cell-centre sign samples; signs[i, j] is the sign at (us[i], vs[j])."""
    chart: object = field(repr=False)
    us: np.ndarray = field(repr=False)
    vs: np.ndarray = field(repr=False)
    f_signs: np.ndarray = field(repr=False)
    g_signs: np.ndarray = field(repr=False)

    @property
    def signs(self):
        return np.outer(self.f_signs, self.g_signs)

    @property
    def shape(self):
        return (self.f_signs.size, self.g_signs.size)


@dataclass(frozen=True)
class NodalReport:
    grid_count: int
    grid_resolutions: tuple      # (resolution, count) pairs in order
    product_count: int | None
    formula_count: int | None
    converged: bool
    agree: bool


def _profile_signs(profile, lo, hi, n, offset=0.5):
    """Signs of a 1-D profile at n cell centres, nudged off near-zeros.

    A sample counts as "at a zero" relative to its neighbours, not the
    global maximum: high-order profiles are legitimately many orders of
    magnitude below their peak near a degenerate chart edge (Bessel J_m
    near the disk centre), and those regions still carry a clean sign."""
    du = (hi - lo) / n
    xs = lo + (np.arange(n) + offset) * du
    for attempt in range(8):
        vals = np.asarray(profile(xs), dtype=float)
        a = np.abs(vals)
        padded = np.concatenate((a[:1], a, a[-1:]))
        local = np.maximum(np.maximum(padded[:-2], padded[1:-1]), padded[2:])
        if np.all(a > _ZERO_TOL * local):
            return xs, np.sign(vals).astype(np.int8)
        xs = xs + du * (0.25 / (attempt + 2.0))
    raise SolverError("could not sample profile away from its zeros")


def sample(state, resolution, offset=(0.5, 0.5)):
    """Cell-centre SignGrid at the given per-axis resolution.

    offset shifts the sampling lattice in cell units; the default is exact
    cell centres, other values support shift-robustness checks."""
    if resolution < _MIN_RESOLUTION:
        raise ValueError(f"resolution must be >= {_MIN_RESOLUTION}")
    (ul, uh), (vl, vh) = state.chart.u_range, state.chart.v_range
    us, fs = _profile_signs(state.radial, ul, uh, resolution, offset[0])
    vs, gs = _profile_signs(state.angular, vl, vh, resolution, offset[1])
    return SignGrid(state.chart, us, vs, fs, gs)


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _run_ids(signs):
    """Label maximal same-sign runs along each row; returns (ids, n_runs)."""
    change = np.empty(signs.shape, dtype=np.int64)
    change[:, 0] = 1
    change[:, 1:] = signs[:, 1:] != signs[:, :-1]
    ids = np.cumsum(change.ravel()).reshape(signs.shape) - 1
    return ids, int(ids[-1, -1]) + 1


def _edge_cells(shape, edge):
    nu, nv = shape
    if edge == "u_lo":
        return np.zeros(nv, dtype=np.intp), np.arange(nv)
    if edge == "u_hi":
        return np.full(nv, nu - 1, dtype=np.intp), np.arange(nv)
    if edge == "v_lo":
        return np.arange(nu), np.zeros(nu, dtype=np.intp)
    if edge == "v_hi":
        return np.arange(nu), np.full(nu, nv - 1, dtype=np.intp)
    raise ValueError(f"unknown edge {edge!r}")


def count_grid(grid, gluings=None):
    """Connected same-sign components of the sign grid under 4-connectivity
    plus the chart's gluing identifications."""
    if gluings is None:
        gluings = grid.chart.gluings
    signs = grid.signs
    ids, n_runs = _run_ids(signs)
    dsu = _DSU(n_runs)

    def union_pairs(a, b):
        for key in np.unique(a * np.int64(n_runs) + b).tolist():
            dsu.union(int(key // n_runs), int(key % n_runs))

    # vertical adjacency between consecutive rows, deduplicated
    same = signs[:-1, :] == signs[1:, :]
    union_pairs(ids[:-1, :][same], ids[1:, :][same])

    for gl in gluings:
        iu1, iv1 = _edge_cells(signs.shape, gl.edge)
        iu2, iv2 = _edge_cells(signs.shape, gl.other)
        if gl.reverse:
            iu2, iv2 = iu2[::-1], iv2[::-1]
        m = signs[iu1, iv1] == signs[iu2, iv2]
        union_pairs(ids[iu1, iv1][m], ids[iu2, iv2][m])

    return len({dsu.find(i) for i in range(n_runs)})


def count_grid_at(state, resolution, offset=(0.5, 0.5)):
    return count_grid(sample(state, resolution, offset))


def count_converged(state, start_resolution=_MIN_RESOLUTION,
                    cap=_MAX_RESOLUTION, offset=(0.5, 0.5)):
    """NodalReport from grid counts at doubling resolutions until two agree,
    cross-filled with the product and formula counts where applicable."""
    history = []
    res = start_resolution
    converged = False
    while res <= cap:
        c = count_grid_at(state, res, offset)
        history.append((res, c))
        if len(history) >= 2 and history[-2][1] == c:
            converged = True
            break
        res *= 2

    grid_count = history[-1][1]
    try:
        product = count_product(state)
    except InapplicableFamilyError:
        product = None
    try:
        from .predict import formula_count
        formula = formula_count(state.spec.family, state.symmetry, state.qnums)
    except Exception:
        formula = None

    counts = [c for c in (grid_count, product, formula) if c is not None]
    agree = converged and all(c == counts[0] for c in counts)
    return NodalReport(grid_count, tuple(history), product, formula,
                       converged, agree)


_PRODUCT_EXCLUDED = (Family.DISK, Family.ELLIPSE, Family.CONFOCAL_PARABOLA)


def _interior_changes(profile, lo, hi, periodic=False, n=4096):
    xs = lo + (np.arange(n) + 0.5) * (hi - lo) / n
    s = np.sign(np.asarray(profile(xs), dtype=float)).astype(np.int8)
    if periodic:
        return int(np.count_nonzero(s != np.roll(s, -1)))
    return int(np.count_nonzero(s[:-1] != s[1:]))


def count_product(state):
    """(z_u + 1)(z_v + 1) from interior profile zeros; a periodic angular
    coordinate contributes its max(z_v, 1) sign sectors instead."""
    fam = state.spec.family
    if fam in _PRODUCT_EXCLUDED:
        raise InapplicableFamilyError(
            f"product count is not valid for family {fam.value}: the chart "
            "has a degenerate inner edge where domains can merge")
    (ul, uh), (vl, vh) = state.chart.u_range, state.chart.v_range
    periodic = any(gl.edge == "v_lo" and gl.other == "v_hi" and not gl.reverse
                   for gl in state.chart.gluings)
    zu = _interior_changes(state.radial, ul, uh)
    zv = _interior_changes(state.angular, vl, vh, periodic=periodic)
    if periodic:
        # z_v = 0 (angular order 0) still leaves one full ring per radial band
        return (zu + 1) * max(zv, 1)
    return (zu + 1) * (zv + 1)
