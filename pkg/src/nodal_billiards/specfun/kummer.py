"""Confluent hypergeometric function M(a,b,z) and the real Weber-type
solutions of G'' + (v^2/4 + a) G = 0.

M is evaluated by the Maclaurin series with error-tracked summation.  For
purely imaginary arguments (the only large-|z| regime the package needs) the
series cancels catastrophically: terms peak near e^|z| while the value stays
O(1).  Three tiers keep full accuracy:

  * |z| small   - complex double series with Kahan compensation,
  * |z| medium  - the same series in double-double arithmetic,
  * |z| large   - the exponential-plus-algebraic asymptotic expansion.

Every tier tracks its own error estimate; elements that miss the target
accuracy are escalated (double -> double-double -> high-precision software
arithmetic), so the result is always good to ~1e-11 relative or an
AccuracyLossError is raised.
"""

from fractions import Fraction

import numpy as np
import mpmath as mp
from scipy.special import gamma as _cgamma

from ..errors import AccuracyLossError, DomainError
from ._dd import CDD, DD_EPS, two_prod, dd_add, dd_div, dd_mul

_TOL = 1e-11
_SERIES_CAP = 4000
_SMALL_CUT = 25.0     # below: try plain double series first
_DD_CUT = 47.0        # below: double-double series reaches 1e-11
_Z_CAP = 900.0        # desk-scale cap (covers the Weber range |v| <= 40)


def _require_valid_b(b):
    b = complex(b)
    if abs(b.imag) < 1e-14 and abs(b.real - round(b.real)) < 1e-12 and round(b.real) <= 0:
        raise DomainError(f"b={b} is a non-positive integer")
    return b


# ----------------------------------------------------------------- series ---

def _series_double(a, b, z):
    """Kahan-compensated Maclaurin series.  Returns (value, relerr)."""
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    maxterm = np.ones(z.shape)
    n = 0
    active = np.ones(z.shape, dtype=bool)
    while n < _SERIES_CAP:
        factor = (a + n) / ((b + n) * (n + 1))
        term = term * (factor * z)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        np.maximum(maxterm, np.abs(term), out=maxterm)
        n += 1
        active = np.abs(term) > 1e-18 * np.abs(total)
        if not active.any() and n > np.max(np.abs(z)):
            break
    relerr = maxterm * 8e-16 / np.maximum(np.abs(total), 1e-300)
    return total, relerr


def _cdd_scalar(re, im=0.0):
    fr = Fraction(re) if not isinstance(re, Fraction) else re
    fi = Fraction(im) if not isinstance(im, Fraction) else im
    rh = float(fr)
    rl = float(fr - Fraction(rh))
    ih = float(fi)
    il = float(fi - Fraction(ih))
    return rh, rl, ih, il


def _series_dd(a, b, z):
    """Maclaurin series in complex double-double arithmetic."""
    zdd = CDD.from_complex(z)
    term = CDD.from_complex(np.ones_like(z))
    total = CDD.from_complex(np.ones_like(z))
    maxterm = np.ones(z.shape)
    ar, ai = Fraction(a.real), Fraction(a.imag)
    br, bi = Fraction(b.real), Fraction(b.imag)
    absz = np.max(np.abs(z)) if z.size else 0.0
    n = 0
    while n < _SERIES_CAP:
        # exact rational factor (a+n)/((b+n)(n+1)), then split to double-double
        dr, di = (br + n) * (n + 1), bi * (n + 1)
        d2 = dr * dr + di * di
        fr = ((ar + n) * dr + ai * di) / d2
        fi = (ai * dr - (ar + n) * di) / d2
        fdd = CDD(*(np.full(z.shape, c) for c in _cdd_scalar(fr, fi)))
        term = term.mul(fdd).mul(zdd)
        total = total.add(term)
        tmag = np.sqrt(term.abs2())
        np.maximum(maxterm, tmag, out=maxterm)
        n += 1
        if n > absz and np.all(tmag <= 1e-33 * np.sqrt(total.abs2())):
            break
    value = total.to_complex()
    relerr = maxterm * 4 * DD_EPS / np.maximum(np.abs(value), 1e-300)
    return value, relerr


# ------------------------------------------------------------- asymptotic ---

def _series_asymptotic(a, b, z):
    """Large-|z| expansion (two-exponential form).  Returns (value, relerr)."""
    phase = np.where(z.imag >= 0, np.exp(1j * np.pi * a), np.exp(-1j * np.pi * a))
    e1 = phase * np.exp(-a * np.log(z)) / _cgamma(b - a)
    e2 = np.exp(z + (a - b) * np.log(z)) / _cgamma(a)

    def _tail(alpha, beta, x):
        term = np.ones_like(x)
        total = np.ones_like(x)
        best = np.full(x.shape, np.inf)
        s = 0
        while s < 200:
            term = term * ((alpha + s) * (beta + s)) / ((s + 1) * x)
            mag = np.abs(term)
            grown = mag >= best
            term = np.where(grown, 0.0, term)  # freeze diverged elements
            total = total + term
            best = np.minimum(best, mag)
            s += 1
            if np.all((mag < 1e-17) | grown):
                break
        return total, best

    s1, m1 = _tail(a, a - b + 1, -z)
    s2, m2 = _tail(b - a, 1 - a, z)
    value = _cgamma(b) * (e1 * s1 + e2 * s2)
    absval = np.maximum(np.abs(value), 1e-300)
    relerr = (m1 * np.abs(_cgamma(b) * e1) + m2 * np.abs(_cgamma(b) * e2)) / absval
    return value, relerr


def _mpmath_fallback(a, b, z):
    out = np.empty(z.shape, dtype=complex)
    flat = z.ravel()
    res = out.ravel()
    for i, zi in enumerate(flat):
        with mp.workdps(30 + int(0.46 * abs(zi))):
            res[i] = complex(mp.hyp1f1(mp.mpc(a), mp.mpc(b), mp.mpc(zi)))
    return out


# ----------------------------------------------------------------- public ---

def kummer_m(a, b, z):
    """Kummer's M(a, b, z) for complex a, b and scalar/array z.

    Relative accuracy ~1e-10 for |z| <= 900.  Raises DomainError for
    non-positive-integer b or |z| beyond the desk-scale cap, and
    AccuracyLossError if no tier can reach the target accuracy.
    """
    a = complex(a)
    b = _require_valid_b(b)
    z_in = np.asarray(z, dtype=complex)
    scalar = z_in.ndim == 0
    zf = np.atleast_1d(z_in).astype(complex)
    if not np.all(np.isfinite(zf)):
        raise DomainError("non-finite argument to kummer_m")
    absz = np.abs(zf)
    if np.any(absz > _Z_CAP):
        raise DomainError(f"|z| > {_Z_CAP} is outside the supported desk scale")

    value = np.empty_like(zf)
    err = np.full(zf.shape, np.inf)

    small = absz <= _SMALL_CUT
    if small.any():
        v, e = _series_double(a, b, zf[small])
        value[small], err[small] = v, e

    need_dd = (~small & (absz <= _DD_CUT)) | (small & (err > _TOL))
    if need_dd.any():
        v, e = _series_dd(a, b, zf[need_dd])
        value[need_dd], err[need_dd] = v, e

    big = absz > _DD_CUT
    if big.any():
        v, e = _series_asymptotic(a, b, zf[big])
        value[big], err[big] = v, e

    bad = err > _TOL
    if bad.any():
        value[bad] = _mpmath_fallback(a, b, zf[bad])
        err[bad] = 1e-12

    if np.any(err > 1e-9):
        raise AccuracyLossError("kummer_m error estimate exceeds tolerance")
    return value[0] if scalar else value.reshape(z_in.shape)


def weber_assembly(a, v, kind="v"):
    """Complex assembly behind weber_v / weber_u; its imaginary part is a
    numerical residual that should vanish."""
    a = float(a)
    v_in = np.asarray(v, dtype=float)
    if np.any(np.abs(v_in) > 40.0):
        raise DomainError("|v| > 40 is outside the supported desk scale")
    z = 0.5j * v_in * v_in
    pref = np.exp(-0.25j * v_in * v_in)
    if kind == "v":
        res = pref * kummer_m(0.25 + 0.5j * a, 0.5, z)
    elif kind == "u":
        res = v_in * pref * kummer_m(0.75 + 0.5j * a, 1.5, z)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return res


def weber_v(a, v):
    """Even real solution of G'' + (v^2/4 + a)G = 0 with V(0)=1, V'(0)=0."""
    return weber_assembly(a, v, "v").real


def weber_u(a, v):
    """Odd real solution of G'' + (v^2/4 + a)G = 0 with U(0)=0, U'(0)=1."""
    return weber_assembly(a, v, "u").real
