"""Chart and spec invariants: validation, serialization, coordinate maps."""

import math

import numpy as np
import pytest

from nodal_billiards.errors import InvalidSpecError, OutOfChartError
from nodal_billiards.geometry import (
    BilliardSpec,
    Family,
    chart_for,
    physical_boundary,
    spec_from_dict,
)

TWO_PI = 2.0 * math.pi


def _all_specs():
    return [
        BilliardSpec.disk(1.0),
        BilliardSpec.circular_annulus(1.0, 2.0),
        BilliardSpec.circular_sector(1.0, 2.0, math.pi / 6, 2 * math.pi / 3),
        BilliardSpec.ellipse(1.0, 1.0),
        BilliardSpec.elliptic_annulus(1.0, 2.0, 1.0),
        BilliardSpec.confocal_parabola(),
        BilliardSpec.parabolic_annulus(0.5, 1.5, 0.5, 1.5),
    ]


def test_invalid_specs_raise():
    with pytest.raises(InvalidSpecError):
        BilliardSpec.disk(-1.0)
    with pytest.raises(InvalidSpecError):
        BilliardSpec.circular_annulus(2.0, 1.0)
    with pytest.raises(InvalidSpecError):
        BilliardSpec.circular_sector(1.0, 2.0, 1.0, 0.5)
    with pytest.raises(InvalidSpecError):
        BilliardSpec.elliptic_annulus(2.0, 1.0, 1.0)
    with pytest.raises(InvalidSpecError):
        BilliardSpec.parabolic_annulus(0.0, 1.0, 0.5, 1.5)
    with pytest.raises(InvalidSpecError):
        spec_from_dict("klein-bottle", {})
    with pytest.raises(InvalidSpecError):
        spec_from_dict("disk", {})


def test_json_round_trip():
    for spec in _all_specs():
        again = BilliardSpec.from_json(spec.to_json())
        assert again == spec
        assert again.to_json() == spec.to_json()


def test_chart_round_trip():
    rng = np.random.default_rng(11)
    for spec in _all_specs():
        chart = chart_for(spec)
        (ul, uh), (vl, vh) = chart.u_range, chart.v_range
        for _ in range(40):
            u = rng.uniform(ul + 1e-6 * (uh - ul), uh)
            v = rng.uniform(vl, vh)
            if spec.family is Family.ELLIPSE:
                u = max(u, 1e-3)    # the focal segment maps two-to-one
            if spec.family is Family.CONFOCAL_PARABOLA:
                v = max(v, 1e-3)    # the seam maps two-to-one
            x, y = chart.to_physical(u, v)
            u2, v2 = chart.to_chart(float(x), float(y))
            assert u2 == pytest.approx(u, abs=1e-10)
            assert (v2 % TWO_PI) == pytest.approx(v % TWO_PI, abs=1e-9) \
                or abs(abs(v2 - v) - TWO_PI) < 1e-9


def test_chart_contains_and_require():
    chart = chart_for(BilliardSpec.disk(1.0))
    assert chart.contains(0.5, 1.0)
    assert not chart.contains(1.5, 1.0)
    with pytest.raises(OutOfChartError):
        chart.require(1.5, 1.0)


def test_gluing_inventory():
    # periodic wrap for the closed angular charts, focal-segment fold for
    # the ellipse, seam fold for the parabola, nothing for the parabolic
    # annulus (its rectangle meets the axis nowhere)
    def edges(spec):
        return sorted((g.edge, g.other, g.reverse)
                      for g in chart_for(spec).gluings)

    assert edges(BilliardSpec.disk(1.0)) == [("v_lo", "v_hi", False)]
    assert edges(BilliardSpec.circular_annulus(1.0, 2.0)) == [("v_lo", "v_hi", False)]
    assert edges(BilliardSpec.ellipse(1.0, 1.0)) == [
        ("u_lo", "u_lo", True), ("v_lo", "v_hi", False)]
    assert edges(BilliardSpec.elliptic_annulus(1.0, 2.0, 1.0)) == [
        ("v_lo", "v_hi", False)]
    assert edges(BilliardSpec.confocal_parabola()) == [("v_lo", "v_lo", True)]
    assert edges(BilliardSpec.parabolic_annulus(0.5, 1.5, 0.5, 1.5)) == []
    assert edges(BilliardSpec.circular_sector(
        1.0, 2.0, math.pi / 6, 2 * math.pi / 3)) == []


def test_focal_segment_fold():
    # on the ellipse's inner chart edge, (0, v) and (0, 2 pi - v) are the
    # same physical point
    chart = chart_for(BilliardSpec.ellipse(1.0, 1.0))
    for v in (0.3, 1.0, 2.5):
        x1, y1 = chart.to_physical(0.0, v)
        x2, y2 = chart.to_physical(0.0, TWO_PI - v)
        assert x1 == pytest.approx(x2, abs=1e-14)
        assert y1 == pytest.approx(y2, abs=1e-14)


def test_parabolic_seam_fold():
    # tau and -tau on the sigma = 0 edge are the same physical point
    chart = chart_for(BilliardSpec.confocal_parabola())
    for tau in (0.2, 0.7, 1.0):
        assert chart.to_physical(tau, 0.0) == pytest.approx(
            chart.to_physical(-tau, 0.0))


def test_physical_boundary_loops_close():
    for spec in _all_specs():
        loops = physical_boundary(spec)
        expected_loops = 2 if spec.family in (
            Family.CIRCULAR_ANNULUS, Family.ELLIPTIC_ANNULUS) else 1
        assert len(loops) == expected_loops
        for loop in loops:
            assert np.allclose(loop[0], loop[-1], atol=1e-12)
            assert len(loop) > 64
