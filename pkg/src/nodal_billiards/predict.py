"""Closed-form nodal-count formulas, residue-class difference tables, and
constancy checks for the first and second differences.

Quantum-number conventions: circular and parabolic families use (m, n) with
m angular-like and n radial-like; elliptic families use (l, r) passed as
qnums = (l, r).  The canonical difference operator steps the first quantum
number by the (fixed) second one, matching the published example table; the
alternative operator that steps r by l for the elliptic families is
exercised separately by check_table1.
"""

from dataclasses import dataclass, field

from .errors import InvalidSpecError
from .geometry import Family


def _require_naturals(qnums):
    m, n = qnums
    if int(m) != m or int(n) != n or m < 0 or n < 0:
        raise InvalidSpecError(f"quantum numbers must be naturals, got {qnums}")
    return int(m), int(n)


def formula_count(family, clazz, qnums):
    """Closed-form nodal-domain count nu for a (family, class, qnums) triple.

    The elliptic-annulus '++' entry 4l(r+1) presumes l >= 1; at l = 0 the
    mode is a stack of r+1 rings and both elliptic '++' formulas are
    replaced by r + 1 (the published table flags l = 0 as needing a
    modified particular solution)."""
    family = Family(family)
    m, n = _require_naturals(qnums)

    if family in (Family.DISK, Family.CIRCULAR_ANNULUS):
        return 2 * m * n if m >= 1 else n
    if family is Family.CIRCULAR_SECTOR:
        if m < 1 or n < 1:
            raise InvalidSpecError("sector count needs m, n >= 1")
        return m * n
    if family in (Family.ELLIPSE, Family.ELLIPTIC_ANNULUS):
        l, r = m, n
        if clazz not in ("++", "+-", "-+", "--"):
            raise InvalidSpecError(f"elliptic class required, got {clazz!r}")
        if clazz == "++" and l == 0:
            return r + 1
        if family is Family.ELLIPSE:
            return {
                "++": 2 * l * (2 * r + 1) + 1,
                "+-": 2 * (2 * l + 1) * (r + 1),
                "-+": (2 * l + 1) * (2 * r + 1) + 1,
                "--": 4 * (l + 1) * (r + 1),
            }[clazz]
        return {
            "++": 4 * l * (r + 1),
            "+-": 2 * (2 * l + 1) * (r + 1),
            "-+": 2 * (2 * l + 1) * (r + 1),
            "--": 4 * (l + 1) * (r + 1),
        }[clazz]
    if family is Family.CONFOCAL_PARABOLA:
        if clazz not in ("even", "odd"):
            raise InvalidSpecError(f"parabola class required, got {clazz!r}")
        if m == 0 or n == 0:
            return 1    # formula-only extension: no nodal-line intersections
        if clazz == "even":
            return 2 * m * n - m - n + 1
        return 2 * m * n
    if family is Family.PARABOLIC_ANNULUS:
        if m == 0 or n == 0:
            return 1    # formula-only: the solver rejects these modes
        return m * n
    raise InvalidSpecError(f"no count formula for family {family}")


def phi_formula(family, clazz, n):
    """Expected constant first difference Phi(n) for the canonical operator
    (first quantum number stepped by the fixed second one, n)."""
    family = Family(family)
    if family in (Family.DISK, Family.CIRCULAR_ANNULUS):
        return 2 * n * n
    if family is Family.CIRCULAR_SECTOR:
        return n * n
    if family is Family.ELLIPSE:
        return {
            "++": 2 * n * (2 * n + 1),
            "+-": 4 * n * (n + 1),
            "-+": 2 * n * (2 * n + 1),
            "--": 4 * n * (n + 1),
        }[clazz]
    if family is Family.ELLIPTIC_ANNULUS:
        return {
            "++": 4 * n * (n + 1),
            "+-": 4 * n * (n + 1),
            "-+": 4 * n * (n + 1),
            "--": 4 * n * (n + 1),
        }[clazz]
    if family is Family.CONFOCAL_PARABOLA:
        return 2 * n * n - n if clazz == "even" else 2 * n * n
    if family is Family.PARABOLIC_ANNULUS:
        return n * n
    raise InvalidSpecError(f"no Phi formula for family {family}")


@dataclass(frozen=True)
class DifferenceRow:
    m: int
    nu: int | None            # None when the count source failed for this row
    error: str | None = None


@dataclass(frozen=True)
class DifferenceTable:
    family: str
    clazz: str | None
    n: int
    residue: int
    rows: tuple                # DifferenceRow, m ascending with stride n
    first_diffs: tuple
    second_diffs: tuple
    phi: int | None            # set when all first differences are equal
    phi2: int | None = None    # set when all second differences are equal

    @property
    def constant(self):
        return self.phi is not None


def difference_table(count_source, family, clazz, n, residue=None,
                     m_start=None, rows=4):
    """Build the residue-class table nu(m), nu(m+n), ... and its differences.

    count_source(family, clazz, qnums) -> int is any of the grid, product,
    or formula counters.  Per-row failures are recorded in the row, not
    raised, so a partial table still surfaces."""
    if rows < 3:
        raise InvalidSpecError("difference tables need at least 3 rows")
    if n < 1:
        raise InvalidSpecError("n must be >= 1")
    if m_start is None:
        if residue is None:
            raise InvalidSpecError("give m_start or residue")
        m_start = residue if residue >= 1 else n
    residue = m_start % n

    out_rows = []
    for i in range(rows):
        m = m_start + i * n
        try:
            nu = int(count_source(family, clazz, (m, n)))
            out_rows.append(DifferenceRow(m, nu))
        except Exception as exc:    # row failure is a finding, not an abort
            out_rows.append(DifferenceRow(m, None, f"{type(exc).__name__}: {exc}"))

    nus = [r.nu for r in out_rows]
    d1 = tuple(b - a if a is not None and b is not None else None
               for a, b in zip(nus, nus[1:]))
    d2 = tuple(b - a if a is not None and b is not None else None
               for a, b in zip(d1, d1[1:]))
    phi = d1[0] if d1 and all(x == d1[0] and x is not None for x in d1) else None
    phi2 = d2[0] if d2 and all(x == d2[0] and x is not None for x in d2) else None
    fam_value = Family(family).value
    return DifferenceTable(fam_value, clazz, int(n), int(residue),
                           tuple(out_rows), d1, d2, phi, phi2)


def infer_phi(count_source, family, clazz, n_list, rows=3, m_max=None):
    """Map n -> Phi(n) from residue-class tables; entries whose classes
    disagree (or whose differences are not constant) map to a finding dict
    instead of an integer."""
    result = {}
    for n in n_list:
        phis = []
        tables = []
        for residue in range(1, n + 1):
            t = difference_table(count_source, family, clazz, n,
                                 m_start=residue, rows=rows)
            tables.append(t)
            phis.append(t.phi)
        if phis and all(p == phis[0] and p is not None for p in phis):
            result[n] = phis[0]
        else:
            result[n] = {
                "finding": "non-constant-difference",
                "per_residue": {t.residue: t.phi for t in tables},
                "second_diffs": {t.residue: t.phi2 for t in tables},
            }
    return result


# ---- published-table expectations (verification targets) ----

# Example difference table: m = 5, 9, 13, 17, 21 at fixed n = 4
TABLE2_M = (5, 9, 13, 17, 21)
TABLE2_N = 4
TABLE2_EXPECTED = {
    "circular-annulus": ((40, 72, 104, 136, 168), 32),
    "ellipse-++": ((91, 163, 235, 307, 379), 72),
    "elliptic-annulus-++": ((100, 180, 260, 340, 420), 80),
    "parabola-even": ((32, 60, 88, 116, 144), 28),
}

# Per-class difference/count table: delta(l) polynomial coefficients for the
# operator that steps r by l at fixed l, and the nu(l, r) formula, as printed.
TABLE1_LEFT = {
    "++": (lambda l: 4 * l * l, lambda l, r: 2 * l * (2 * r + 1) + 1),
    "+-": (lambda l: 4 * l * l + 2 * l, lambda l, r: 2 * (2 * l + 1) * (r + 1)),
    "-+": (lambda l: 4 * l * l + 2 * l, lambda l, r: (2 * l + 1) * (2 * r + 1) + 1),
    "--": (lambda l: 4 * l * l + 4 * l, lambda l, r: 4 * (l + 1) * (r + 1)),
}
TABLE1_RIGHT = {
    "++": (lambda l: 4 * l * l, lambda l, r: 4 * l * (r + 1)),
    "+-": (lambda l: 4 * l * l + 8 * l, lambda l, r: 2 * (2 * l + 1) * (r + 1)),
    "-+": (lambda l: 4 * l * l + 8 * l, lambda l, r: 2 * (2 * l + 1) * (r + 1)),
    "--": (lambda l: 4 * l * l + 4 * l, lambda l, r: 4 * (l + 1) * (r + 1)),
}


def check_table1(count_source, panel="both", lr_max=3, classes=None):
    """Check each published per-class entry against measured counts.

    For every class the two candidate difference operators are evaluated:
      step-r: nu(l, r + l) - nu(l, r)   (the printed Delta_l column)
      step-l: nu(l + r, r) - nu(l, r)   (the example-table direction)
    Returns a list of finding dicts; entries where neither the nu formula
    nor the Delta column matches measurement carry mismatch flags rather
    than any silent correction."""
    panels = []
    if panel in ("left", "both"):
        panels.append(("left", Family.ELLIPSE, TABLE1_LEFT))
    if panel in ("right", "both"):
        panels.append(("right", Family.ELLIPTIC_ANNULUS, TABLE1_RIGHT))

    findings = []
    for panel_name, family, table in panels:
        for clazz, (delta_fn, nu_fn) in table.items():
            if classes is not None and clazz not in classes:
                continue
            for l in range(1, lr_max + 1):
                for r in range(1, lr_max + 1):
                    nu = count_source(family, clazz, (l, r))
                    nu_formula = nu_fn(l, r)
                    step_r = count_source(family, clazz, (l, r + l)) - nu
                    step_l = count_source(family, clazz, (l + r, r)) - nu
                    tab_delta = delta_fn(l)
                    findings.append({
                        "panel": panel_name,
                        "family": family.value,
                        "class": clazz,
                        "l": l, "r": r,
                        "measured_nu": nu,
                        "formula_nu": nu_formula,
                        "nu_matches": nu == nu_formula,
                        "tabulated_delta": tab_delta,
                        "measured_step_r": step_r,
                        "measured_step_l": step_l,
                        "delta_matches_step_r": step_r == tab_delta,
                        "delta_matches_step_l": step_l == tab_delta,
                    })
    return findings


def summarize_table1(findings):
    """Aggregate check_table1 findings per (panel, class): which of the
    printed (nu, Delta) entries measurement supports."""
    summary = {}
    for f in findings:
        key = (f["panel"], f["class"])
        s = summary.setdefault(key, {
            "nu_matches_all": True,
            "delta_matches_step_r_all": True,
            "delta_matches_step_l_all": True,
            "cases": 0,
        })
        s["cases"] += 1
        s["nu_matches_all"] &= f["nu_matches"]
        s["delta_matches_step_r_all"] &= f["delta_matches_step_r"]
        s["delta_matches_step_l_all"] &= f["delta_matches_step_l"]
    for key, s in summary.items():
        s["discrepancy"] = s["nu_matches_all"] and not (
            s["delta_matches_step_r_all"] or s["delta_matches_step_l_all"])
    return summary
