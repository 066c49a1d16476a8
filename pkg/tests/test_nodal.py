"""Nodal counting: union-find on synthetic grids, gluing effects, and
known-count eigenstates across every family."""

import numpy as np
import pytest

from nodal_billiards.errors import InapplicableFamilyError
from nodal_billiards.geometry import BilliardSpec, Gluing, chart_for
from nodal_billiards.nodal import (
    SignGrid,
    count_converged,
    count_grid,
    count_grid_at,
    count_product,
    sample,
)


def _product_grid(f_signs, g_signs):
    f = np.asarray(f_signs, dtype=np.int8)
    g = np.asarray(g_signs, dtype=np.int8)
    return SignGrid(None, np.arange(f.size, dtype=float),
                    np.arange(g.size, dtype=float), f, g)


def test_checkerboard():
    grid = _product_grid([1, -1, 1, -1], [1, -1, 1, -1])
    assert count_grid(grid, gluings=()) == 16


def test_uniform_grid_is_one_domain():
    grid = _product_grid([1] * 6, [1] * 9)
    assert count_grid(grid, gluings=()) == 1


def test_stripes_and_wrap_gluing():
    # four angular sign sectors: wrap joins the first and last columns'
    # same-sign cells into a ring of alternating sectors
    grid = _product_grid([1, 1, 1], [1, -1, 1, -1])
    assert count_grid(grid, gluings=()) == 4
    wrapped = count_grid(grid, gluings=(Gluing("v_lo", "v_hi", False),))
    assert wrapped == 4    # signs alternate, nothing merges
    grid2 = _product_grid([1, 1], [1, -1, 1])
    # without wrap: three stripes; with wrap the two outer + stripes merge
    assert count_grid(grid2, gluings=()) == 3
    assert count_grid(grid2, gluings=(Gluing("v_lo", "v_hi", False),)) == 2


def test_reverse_self_gluing_folds_edge():
    # the u_lo fold identifies (0, j) with (0, nv-1-j): the two outer +
    # stripes are separate domains without it and one domain with it
    grid = _product_grid([1, 1], [1, 1, -1, 1, 1])
    assert count_grid(grid, gluings=()) == 3
    assert count_grid(grid, gluings=(Gluing("u_lo", "u_lo", True),)) == 2
    # when reversal only pairs opposite signs, nothing merges
    asym = _product_grid([1, 1], [1, -1, -1, 1, -1])
    assert count_grid(asym, gluings=()) == 4
    assert count_grid(asym, gluings=(Gluing("u_lo", "u_lo", True),)) == 4


KNOWN_COUNTS = [
    (lambda: BilliardSpec.disk(1.0), (3, 3), None, 18),
    (lambda: BilliardSpec.disk(1.0), (0, 4), None, 4),
    (lambda: BilliardSpec.circular_annulus(1.0, 2.0), (2, 3), None, 12),
    (lambda: BilliardSpec.circular_sector(1.0, 2.0, np.pi / 6, 2 * np.pi / 3),
     (3, 2), None, 6),
    (lambda: BilliardSpec.ellipse(1.0, 1.0), (3, 2), "++", 31),
    (lambda: BilliardSpec.ellipse(1.0, 1.0), (2, 2), "--", 36),
    (lambda: BilliardSpec.elliptic_annulus(1.0, 2.0, 1.0), (2, 2), "++", 24),
    (lambda: BilliardSpec.elliptic_annulus(1.0, 2.0, 1.0), (1, 2), "+-", 18),
    (lambda: BilliardSpec.confocal_parabola(), (4, 3), "even", 18),
    (lambda: BilliardSpec.confocal_parabola(), (3, 2), "odd", 12),
    (lambda: BilliardSpec.parabolic_annulus(0.5, 1.5, 0.5, 1.5),
     (2, 3), None, 6),
]


@pytest.mark.parametrize("build,qnums,clazz,expected", KNOWN_COUNTS)
def test_known_counts(solver, build, qnums, clazz, expected):
    state = solver(build(), qnums, clazz)
    report = count_converged(state)
    assert report.converged
    assert report.grid_count == expected
    assert report.formula_count == expected
    if report.product_count is not None:
        assert report.product_count == expected
    assert report.agree


def test_wrap_gluing_is_load_bearing(solver):
    # dropping the angular wrap identification splits every ring-shaped
    # domain of the m = 0 disk modes is not applicable (no angular lines);
    # use a mode whose domains straddle the v = 0 cut instead
    state = solver(BilliardSpec.disk(1.0), (3, 3))
    grid = sample(state, 128)
    with_wrap = count_grid(grid)
    without = count_grid(grid, gluings=())
    assert with_wrap == 18
    assert without > with_wrap


def test_focal_gluing_is_load_bearing(solver):
    # classes whose angular factor is even about the x axis do not vanish
    # on the focal segment, so the fold there merges upper and lower cells
    state = solver(BilliardSpec.ellipse(1.0, 1.0), (3, 2), "++")
    grid = sample(state, 128)
    folded = count_grid(grid)
    unfolded = count_grid(grid, gluings=grid.chart.gluings[:1])
    assert folded == 31
    assert unfolded > folded


def test_product_count_applicability(solver):
    state = solver(BilliardSpec.disk(1.0), (3, 3))
    with pytest.raises(InapplicableFamilyError):
        count_product(state)
    state = solver(BilliardSpec.circular_annulus(1.0, 2.0), (2, 3))
    assert count_product(state) == 12


def test_offset_robustness(solver):
    # converged counts must not depend on where the sampling lattice sits
    rng = np.random.default_rng(17)
    state = solver(BilliardSpec.circular_annulus(1.0, 2.0), (3, 3))
    base = count_grid_at(state, 192)
    for _ in range(6):
        off = tuple(rng.uniform(0.05, 0.95, size=2))
        assert count_grid_at(state, 192, offset=off) == base


def test_resolution_robustness(solver):
    state = solver(BilliardSpec.ellipse(1.0, 1.0), (2, 1), "-+")
    assert count_grid_at(state, 128) == count_grid_at(state, 192)


def test_sample_rejects_tiny_resolution(solver):
    state = solver(BilliardSpec.disk(1.0), (1, 1))
    with pytest.raises(ValueError):
        sample(state, 16)
