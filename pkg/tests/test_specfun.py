"""Special-function kernel checks: identities, limits, and cross-route
agreement between independent evaluation strategies."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodal_billiards.errors import DomainError, InsufficientZerosError
from nodal_billiards.specfun import (
    annulus_radial,
    bessel_j,
    bessel_y,
    count_sign_changes,
    find_zeros,
    kummer_m,
    mathieu_char,
    weber_assembly,
    weber_pair_for,
    weber_u,
    weber_v,
)

rng = np.random.default_rng(20260824)


# ---- Bessel ----

def _dj(order, x):
    # analytic derivative via the recurrence; exact to rounding
    if order == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x))


def _dy(order, x):
    if order == 0:
        return -bessel_y(1, x)
    return 0.5 * (bessel_y(order - 1, x) - bessel_y(order + 1, x))


def test_bessel_wronskian_identity():
    # J_n(x) Y_n'(x) - J_n'(x) Y_n(x) = 2 / (pi x)
    for order in range(11):
        x = np.linspace(0.5, 50.0, 97)
        w = bessel_j(order, x) * _dy(order, x) - _dj(order, x) * bessel_y(order, x)
        assert np.allclose(w, 2.0 / (np.pi * x), rtol=1e-10, atol=0)


def test_annulus_radial_vanishes_at_inner_radius():
    for order in (0, 2, 7):
        for k in (1.3, 6.0):
            assert abs(annulus_radial(order, k, 1.0, 1.0)) < 1e-12


@given(order=st.integers(0, 8),
       x=st.floats(0.5, 40.0, allow_nan=False))
@settings(max_examples=60, deadline=None)
def test_bessel_wronskian_property(order, x):
    w = bessel_j(order, x) * _dy(order, x) - _dj(order, x) * bessel_y(order, x)
    assert w == pytest.approx(2.0 / (math.pi * x), rel=1e-10)


# ---- Mathieu ----

def test_mathieu_char_reduces_to_squared_order():
    # c^2 -> 0 turns the angular equation into y'' + lambda y = 0
    for parity in ("even", "odd"):
        start = 0 if parity == "even" else 1
        for p in range(start, 9):
            lam = mathieu_char(p, parity, 1e-12)
            assert lam == pytest.approx(p * p, abs=1e-10)


def test_mathieu_char_scipy_crosscheck():
    # independent oracle: scipy's periodic Mathieu characteristic values.
    # Our potential is written with cos^2(phi), so lambda differs from the
    # cos(2 phi) standard form by the constant c^2 / 2, and scipy's q is
    # c^2 / 4.
    from scipy.special import mathieu_a, mathieu_b
    for q in (0.5, 3.0, 12.0):
        c2 = 4.0 * q
        for p in (0, 1, 2, 5):
            assert mathieu_char(p, "even", c2) == pytest.approx(
                float(mathieu_a(p, q)) + c2 / 2.0, rel=1e-10, abs=1e-10)
        for p in (1, 2, 5):
            assert mathieu_char(p, "odd", c2) == pytest.approx(
                float(mathieu_b(p, q)) + c2 / 2.0, rel=1e-10, abs=1e-10)


# ---- Kummer / Weber ----

def test_kummer_equals_exponential():
    # M(1, 1, z) = e^z
    zs = [0.3, -2.0, 5.0 + 1.0j, 20.0j, -11.0 + 3.0j]
    for z in zs:
        assert kummer_m(1.0, 1.0, z) == pytest.approx(np.exp(z), rel=1e-10)


def test_kummer_rejects_bad_arguments():
    with pytest.raises(DomainError):
        kummer_m(1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        kummer_m(1.0, 1.0, 1e6)


@given(z=st.complex_numbers(max_magnitude=30.0, allow_nan=False,
                            allow_infinity=False))
@settings(max_examples=60, deadline=None)
def test_kummer_exponential_property(z):
    assert kummer_m(1.0, 1.0, z) == pytest.approx(np.exp(z), rel=1e-9,
                                                  abs=1e-12)


def test_weber_realness():
    for a in (-3.0, -0.4, 0.0, 1.7, 6.0):
        v = rng.uniform(0.0, 12.0, size=12)
        for kind in ("v", "u"):
            res = weber_assembly(a, v, kind)
            scale = np.maximum(np.abs(res), 1.0)
            assert np.all(np.abs(res.imag) / scale < 1e-9)


def _weber_v_prime(a, x):
    # analytic derivative through dM/dz = (alpha/b) M(alpha+1, b+1, z)
    al = 0.25 + 0.5j * a
    z = 0.5j * x * x
    pref = np.exp(-0.25j * x * x)
    return (pref * (-0.5j * x * kummer_m(al, 0.5, z)
                    + 2j * x * al * kummer_m(al + 1, 1.5, z))).real


def _weber_u_prime(a, x):
    be = 0.75 + 0.5j * a
    z = 0.5j * x * x
    pref = np.exp(-0.25j * x * x)
    return (pref * (kummer_m(be, 1.5, z) * (1.0 - 0.5j * x * x)
                    + (2.0 / 3.0) * be * 1j * x * x
                    * kummer_m(be + 1, 2.5, z))).real


def test_weber_series_satisfies_ode():
    # y'' + (x^2/4 + a) y = 0 at 20 random (a, x) points.  The second
    # derivative is one finite difference of the analytically evaluated
    # first derivative, so evaluation noise is only amplified by 1/h.
    h = 2e-3
    for _ in range(20):
        a = rng.uniform(-4.0, 4.0)
        x = rng.uniform(0.3, 8.0)
        q = 0.25 * x * x + a
        for fn, fp in ((weber_v, _weber_v_prime), (weber_u, _weber_u_prime)):
            d2 = (-fp(a, x + 2 * h) + 8 * fp(a, x + h)
                  - 8 * fp(a, x - h) + fp(a, x - 2 * h)) / (12.0 * h)
            envelope = max(abs(fn(a, x)),
                           abs(fp(a, x)) / max(abs(q) ** 0.5, 1.0), 1e-2)
            residual = abs(d2 + q * fn(a, x))
            assert residual / (envelope * max(abs(q), 1.0)) < 1e-7


def test_weber_ode_profile_matches_series_route():
    # two independent evaluation strategies, same initial values
    for a in (-2.5, -0.3, 0.9, 4.0):
        pair = weber_pair_for(a, 10.0)
        xs = rng.uniform(0.0, 10.0, size=15)
        env = np.exp(np.abs(a))    # tunnelling growth sets the error scale
        for x in xs:
            assert pair.v(x) == pytest.approx(weber_v(a, x),
                                              rel=1e-9, abs=1e-9 * env)
            assert pair.u(x) == pytest.approx(weber_u(a, x),
                                              rel=1e-9, abs=1e-9 * env)


def test_weber_parity():
    pair = weber_pair_for(1.3, 6.0)
    for x in (0.7, 2.2, 5.1):
        assert pair.v(-x) == pytest.approx(pair.v(x), rel=1e-14)
        assert pair.u(-x) == pytest.approx(-pair.u(x), rel=1e-14)


# ---- zero finding ----

def test_find_zeros_of_sine():
    zl = find_zeros(np.sin, 0.5, 10.0)
    assert np.allclose(zl.zeros, [np.pi, 2 * np.pi, 3 * np.pi], atol=1e-12)


def test_find_zeros_count_request():
    zl = find_zeros(np.sin, 0.5, 200.0, count=5)
    assert len(zl.zeros) == 5
    with pytest.raises(InsufficientZerosError):
        find_zeros(np.sin, 0.5, 10.0, count=9)


def test_count_sign_changes_matches_zero_count():
    f = lambda x: np.sin(3.0 * x) * np.exp(-0.05 * x)
    assert count_sign_changes(f, 0.1, 10.0) == len(find_zeros(f, 0.1, 10.0).zeros)


@given(freq=st.floats(0.5, 6.0), span=st.floats(2.0, 20.0))
@settings(max_examples=40, deadline=None)
def test_find_zeros_sine_property(freq, span):
    zl = find_zeros(lambda x: np.sin(freq * x), 0.25, 0.25 + span)
    expected = [k * math.pi / freq for k in range(1, 1000)
                if 0.25 < k * math.pi / freq < 0.25 + span]
    # zeros too close to the endpoints may legitimately be dropped
    core = [z for z in expected
            if min(z - 0.25, 0.25 + span - z) > 1e-3]
    assert len(zl.zeros) >= len(core)
    for z in core:
        assert np.min(np.abs(np.asarray(zl.zeros) - z)) < 1e-9
