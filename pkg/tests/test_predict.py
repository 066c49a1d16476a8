"""Formula layer: closed-form counts, difference tables, published-table
expectations, and the printed-table discrepancy detection."""

import pytest

from nodal_billiards.errors import InvalidSpecError
from nodal_billiards.geometry import Family
from nodal_billiards.predict import (
    TABLE2_EXPECTED,
    TABLE2_M,
    TABLE2_N,
    check_table1,
    difference_table,
    formula_count,
    infer_phi,
    phi_formula,
    summarize_table1,
)


def test_formula_count_basics():
    assert formula_count(Family.DISK, None, (3, 3)) == 18
    assert formula_count(Family.DISK, None, (0, 4)) == 4
    assert formula_count(Family.CIRCULAR_ANNULUS, None, (2, 3)) == 12
    assert formula_count(Family.CIRCULAR_SECTOR, None, (3, 2)) == 6
    assert formula_count(Family.ELLIPSE, "++", (3, 2)) == 31
    assert formula_count(Family.ELLIPSE, "--", (2, 2)) == 36
    assert formula_count(Family.ELLIPTIC_ANNULUS, "--", (3, 2)) == 48
    assert formula_count(Family.CONFOCAL_PARABOLA, "even", (4, 3)) == 18
    assert formula_count(Family.CONFOCAL_PARABOLA, "odd", (3, 2)) == 12
    assert formula_count(Family.PARABOLIC_ANNULUS, None, (5, 4)) == 20


def test_formula_count_edge_cases():
    # l = 0 even-even modes are ring stacks regardless of the tabulated 4l(r+1)
    assert formula_count(Family.ELLIPSE, "++", (0, 3)) == 4
    assert formula_count(Family.ELLIPTIC_ANNULUS, "++", (0, 3)) == 4
    with pytest.raises(InvalidSpecError):
        formula_count(Family.ELLIPSE, None, (1, 1))
    with pytest.raises(InvalidSpecError):
        formula_count(Family.CONFOCAL_PARABOLA, "sideways", (1, 1))
    with pytest.raises(InvalidSpecError):
        formula_count(Family.DISK, None, (1.5, 2))


def test_phi_formula_values():
    assert phi_formula(Family.DISK, None, 4) == 32
    assert phi_formula(Family.CIRCULAR_SECTOR, None, 4) == 16
    assert phi_formula(Family.ELLIPSE, "++", 4) == 72
    assert phi_formula(Family.ELLIPTIC_ANNULUS, "++", 4) == 80
    assert phi_formula(Family.CONFOCAL_PARABOLA, "even", 4) == 28
    assert phi_formula(Family.CONFOCAL_PARABOLA, "odd", 4) == 32
    assert phi_formula(Family.PARABOLIC_ANNULUS, None, 4) == 16


def _formula_source(family, clazz, qnums):
    return formula_count(family, clazz, qnums)


def test_difference_table_is_constant():
    t = difference_table(_formula_source, Family.CIRCULAR_ANNULUS, None, 4,
                         m_start=5, rows=5)
    assert [r.nu for r in t.rows] == [40, 72, 104, 136, 168]
    assert t.first_diffs == (32, 32, 32, 32)
    assert t.second_diffs == (0, 0, 0)
    assert t.constant and t.phi == 32 and t.residue == 1


def test_difference_table_records_row_failures():
    def flaky(family, clazz, qnums):
        if qnums[0] == 9:
            raise RuntimeError("synthetic failure")
        return formula_count(family, clazz, qnums)

    t = difference_table(flaky, Family.CIRCULAR_ANNULUS, None, 4,
                         m_start=5, rows=4)
    assert t.rows[1].nu is None and "synthetic" in t.rows[1].error
    assert not t.constant


def test_table2_expectations_from_formulas():
    plans = [
        (Family.CIRCULAR_ANNULUS, None, "circular-annulus"),
        (Family.ELLIPSE, "++", "ellipse-++"),
        (Family.ELLIPTIC_ANNULUS, "++", "elliptic-annulus-++"),
        (Family.CONFOCAL_PARABOLA, "even", "parabola-even"),
    ]
    for family, clazz, key in plans:
        expected_nu, expected_delta = TABLE2_EXPECTED[key]
        t = difference_table(_formula_source, family, clazz, TABLE2_N,
                             m_start=TABLE2_M[0], rows=len(TABLE2_M))
        assert tuple(r.nu for r in t.rows) == expected_nu
        assert t.phi == expected_delta


def test_infer_phi_all_residues():
    out = infer_phi(_formula_source, Family.CONFOCAL_PARABOLA, "even",
                    [1, 2, 3, 4])
    assert out == {1: 1, 2: 6, 3: 15, 4: 28}    # 2n^2 - n


def test_check_table1_flags_right_panel_mixed_classes():
    findings = check_table1(_formula_source, panel="both", lr_max=3)
    summary = summarize_table1(findings)
    # every printed nu formula agrees with itself by construction
    assert all(s["nu_matches_all"] for s in summary.values())
    # left panel: the printed Delta column is consistent with its own nu
    for clazz in ("++", "+-", "-+", "--"):
        assert summary[("left", clazz)]["delta_matches_step_r_all"]
        assert not summary[("left", clazz)]["discrepancy"]
    # right panel: ++ and -- consistent; the mixed classes' printed
    # Delta = 4l^2 + 8l contradicts their own nu = 2(2l+1)(r+1), whose
    # r-step difference is 4l^2 + 2l
    for clazz in ("++", "--"):
        assert not summary[("right", clazz)]["discrepancy"]
    for clazz in ("+-", "-+"):
        assert not summary[("right", clazz)]["delta_matches_step_r_all"]
        assert not summary[("right", clazz)]["delta_matches_step_l_all"]
        assert summary[("right", clazz)]["discrepancy"]
    for f in findings:
        if f["panel"] == "right" and f["class"] in ("+-", "-+"):
            l = f["l"]
            assert f["measured_step_r"] == 4 * l * l + 2 * l
            assert f["tabulated_delta"] == 4 * l * l + 8 * l
