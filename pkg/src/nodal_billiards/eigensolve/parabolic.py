"""Parabolic-family solver: full confocal-parabola region and the
parabolic annulus.

In parabolic coordinates (tau, sigma) the mode splits as T(tau) S(sigma):
with w = sqrt(2k), both factors are combinations of the even/odd real
solutions of G'' + (v^2/4 +- a) G = 0 evaluated at w tau and w sigma.

Full region: the even class uses the even solution in tau (T'(0) = 0), the
odd class the odd one (T(0) = 0); sigma always uses the even solution since
sigma >= 0 covers the seam once.  Quantisation: w is a common zero of the
m-th tau-zero and n-th sigma-zero conditions, found as the root of the
monotone mismatch g(a) = z_m(a) - z_n(-a).

Annulus: both factors vanish at the inner boundary, and (a, k) solves the
pair of normalised boundary determinants, seeded by a certified nested 1-D
scan and polished with a damped Newton iteration.

The Weber pair is evaluated through its ODE-integrated dense profile
(specfun.weber_pair_for); the series route (weber_v / weber_u) is the
accuracy oracle in the test suite but is too slow for scan loops.
"""

import math

import numpy as np
from scipy.optimize import brentq

from ..errors import InvalidSpecError, SolverError
from ..geometry import chart_for
from ..specfun import weber_pair_for
from .state import Eigenstate, refine_bracket, scan_brackets

_INTERIOR_PAD = 1e-6


def _nth_weber_zero(a, n, kind):
    """n-th positive zero of the even/odd Weber solution.

    Coarse vectorised grid scan (stability-checked by halving) to bracket,
    then a scalar brentq refine of just the requested zero."""
    # phase-based upper estimate, padded; extend on a miss
    hi = math.sqrt(8.0 * math.pi * (n + 1) + 4.0 * abs(a)) \
        + 2.0 * math.sqrt(max(-a, 0.0)) + 3.0
    m = max(64, 16 * (n + 2))
    for _ in range(8):
        prof = weber_pair_for(a, hi)
        fn = prof.v if kind == "even" else prof.u
        grid = np.linspace(1e-9, hi, 2 * m + 1)
        s = np.sign(fn(grid))
        idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
        coarse = int(np.count_nonzero(s[0::2][:-1] * s[0::2][1:] < 0))
        if idx.size >= n and idx.size == coarse:
            i = idx[n - 1]
            return brentq(lambda v: float(fn(v)), grid[i], grid[i + 1],
                          xtol=1e-13, rtol=8.9e-16)
        if idx.size < n:
            hi *= 1.3     # range too short
        else:
            m *= 2        # grid too coarse: halving check failed
    raise SolverError(f"could not locate weber zero n={n}, a={a}")


def _solve_separation(m, n, tau_kind):
    """Separation parameter a and scale w for the full parabolic region."""
    def g(a):
        return _nth_weber_zero(a, m, tau_kind) - _nth_weber_zero(-a, n, "even")

    if tau_kind == "even" and m == n:
        a = 0.0
    else:
        g0 = g(0.0)
        if g0 == 0.0:
            a = 0.0
        else:
            # g decreases in a: positive g needs larger a
            direction = 1.0 if g0 > 0 else -1.0
            prev, d = 0.0, 1.0
            while True:
                cand = direction * d
                if g(cand) * g0 < 0:
                    lo, hi = sorted((prev, cand))
                    break
                prev, d = cand, d * 2.0
                if d > 1e6:
                    raise SolverError("no separation bracket found")
            a = brentq(g, lo, hi, xtol=1e-12, rtol=8.9e-16)
    w = _nth_weber_zero(-a, n, "even")
    return a, w


def assemble_parabolic_full(spec, clazz, qnums, k, a):
    m, n = qnums
    w = math.sqrt(2.0 * k)
    tau_prof = weber_pair_for(a, w)
    sig_prof = weber_pair_for(-a, w)
    tau_fn = tau_prof.v if clazz == "even" else tau_prof.u

    def radial_fn(u):   # T over tau in [-1, 1] (even/odd in the profile)
        return tau_fn(w * np.asarray(u, dtype=float))

    def angular(v):     # S over sigma in [0, 1]
        return sig_prof.v(w * np.asarray(v, dtype=float))

    chart = chart_for(spec)
    amp_t = np.max(np.abs(radial_fn(np.linspace(-1.0, 1.0, 512))))
    amp_s = np.max(np.abs(angular(np.linspace(0.0, 1.0, 512))))
    residual = (abs(float(np.atleast_1d(radial_fn(1.0))[0])) / amp_t
                + abs(float(np.atleast_1d(angular(1.0))[0])) / amp_s)

    return Eigenstate(
        spec=spec, qnums=(int(m), int(n)), symmetry=clazz, k=float(k),
        separation=float(a), radial_coeffs=(), residual=residual,
        chart=chart, radial=radial_fn, angular=angular,
    )


def solve_parabolic_full(spec, clazz, qnums):
    m, n = qnums
    if clazz not in ("even", "odd"):
        raise InvalidSpecError("confocal-parabola class must be 'even' or 'odd'")
    if m < 1 or n < 1 or int(m) != m or int(n) != n:
        raise InvalidSpecError("quantum numbers must be integers >= 1")
    a, w = _solve_separation(m, n, clazz)
    k = 0.5 * w * w
    return assemble_parabolic_full(spec, clazz, qnums, k, a)


# ---- parabolic annulus ----


def _pair_coeffs(prof, v1):
    """Coefficients of the combination c_v V + c_u U vanishing at v1."""
    return prof.u(v1), -prof.v(v1)


def _det_profile(prof, v1, v2):
    """Normalised boundary determinant; v1, v2 arrays paired elementwise."""
    va1, ua1 = prof.v(v1), prof.u(v1)
    va2, ua2 = prof.v(v2), prof.u(v2)
    det = va1 * ua2 - va2 * ua1
    scale = np.sqrt((va1 * va1 + ua1 * ua1) * (va2 * va2 + ua2 * ua2))
    return det / scale


def _det(a, v1, v2):
    prof = weber_pair_for(a, float(np.max(v2)))
    return _det_profile(prof, v1, v2)


def _interior_zeros(a, v1, v2, n=2048):
    prof = weber_pair_for(a, float(v2))
    cv, cu = _pair_coeffs(prof, v1)
    pad = _INTERIOR_PAD * (v2 - v1)
    xs = np.linspace(v1 + pad, v2 - pad, n)
    s = np.sign(cv * prof.v(xs) + cu * prof.u(xs))
    return int(np.count_nonzero(s[:-1] != s[1:]))


def _wkb_phase(k, a, x1, x2):
    """Action integral of sqrt(k^2 x^2 + 2 k a)_+ over [x1, x2]."""
    xs = np.linspace(x1, x2, 129)
    return float(np.trapezoid(np.sqrt(np.maximum(k * k * xs * xs + 2.0 * k * a,
                                             0.0)), xs))


def _wkb_seed(spec, m, n, k0):
    """Approximate (k, a) from the two phase conditions."""
    t1, t2 = spec["tau1"], spec["tau2"]
    s1, s2 = spec["sigma1"], spec["sigma2"]

    def F(x):
        k, a = x
        return np.array([
            _wkb_phase(k, a, t1, t2) - m * math.pi,
            _wkb_phase(k, -a, s1, s2) - n * math.pi,
        ])

    x = np.array([k0, 0.0])
    fx = F(x)
    for _ in range(60):
        if np.max(np.abs(fx)) < 1e-6:
            break
        J = np.empty((2, 2))
        for j in range(2):
            h = 1e-6 * max(1.0, abs(x[j]))
            xp = x.copy()
            xp[j] += h
            J[:, j] = (F(xp) - fx) / h
        try:
            dx = np.linalg.solve(J, -fx)
        except np.linalg.LinAlgError:
            return k0, 0.0
        alpha = 1.0
        while alpha > 1e-3:
            xn = x + alpha * dx
            if xn[0] > 0:
                fn = F(xn)
                if np.max(np.abs(fn)) < np.max(np.abs(fx)):
                    x, fx = xn, fn
                    break
            alpha *= 0.5
        else:
            break
    if not np.isfinite(x).all() or x[0] <= 0:
        return k0, 0.0
    return float(x[0]), float(x[1])


def _scan_brackets_vec(f, lo, hi, step):
    """scan_brackets for a vectorised f, with the same halving stability check."""
    n = max(8, int(math.ceil((hi - lo) / step)))
    for _ in range(6):
        xs = np.linspace(lo, hi, 2 * n + 1)
        ys = f(xs)
        s = np.sign(ys)
        coarse = int(np.count_nonzero(s[0::2][:-1] * s[0::2][1:] < 0))
        idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
        if idx.size == coarse:
            return [(xs[i], xs[i + 1], ys[i], ys[i + 1]) for i in idx]
        n *= 2
    raise SolverError("vectorised bracket scan did not stabilise")


def _tau_k_root(spec, a, m, k0):
    """k-root of the tau boundary determinant carrying m - 1 interior zeros.

    The window comes from the WKB phase condition; each bracket is
    identified by the interior zero count just left of it (that count is
    constant between consecutive roots), so only the right root is refined."""
    t1, t2 = spec["tau1"], spec["tau2"]

    def f(k):
        w = np.sqrt(2.0 * np.asarray(k, dtype=float))
        return _det(a, w * t1, w * t2)

    def f_scalar(k):
        return float(np.atleast_1d(f(k))[0])

    def phase(k):
        return _wkb_phase(k, a, t1, t2)

    # invert phase(k) = m pi for the window centre
    kp = max(k0, 1e-3)
    for _ in range(80):
        if phase(kp) > m * math.pi:
            break
        kp *= 1.5
    lo = kp / 1.5 if phase(kp / 1.5) < m * math.pi else 1e-6
    kp = brentq(lambda k: phase(k) - m * math.pi, lo, kp, xtol=1e-6)

    width = 0.5 * (t2 * t2 - t1 * t1)
    step = math.pi / (8.0 * width)
    windows = [(0.75 * kp, 1.35 * kp), (0.4 * kp, 2.2 * kp),
               (0.05 * kp, 5.0 * kp)]
    for k_lo, k_hi in windows:
        brackets = _scan_brackets_vec(f, k_lo, k_hi, step)
        for br in brackets:
            # just left of the root the count is m - 1; just right it is m
            w = math.sqrt(2.0 * br[0])
            if _interior_zeros(a, w * t1, w * t2, n=512) == m - 1:
                return refine_bracket(f_scalar, br)
    raise SolverError(f"no certified tau root for m={m}, a={a}")


def solve_parabolic_annulus(spec, qnums):
    m, n = qnums
    if m < 1 or n < 1 or int(m) != m or int(n) != n:
        raise InvalidSpecError("quantum numbers must be integers >= 1")
    t1, t2 = spec["tau1"], spec["tau2"]
    s1, s2 = spec["sigma1"], spec["sigma2"]

    # WKB scale: total radial + angular phase ~ (m + n) pi at a = 0
    k0 = 2.0 * math.pi * (m + n) / (t2 * t2 - t1 * t1 + s2 * s2 - s1 * s1)
    k_seed, a_seed = _wkb_seed(spec, m, n, k0)

    tau_k = {}

    def h(a):
        # NaN marks separation values where the tau condition has no
        # certified root (e.g. deep tunnelling); the scan skips them
        try:
            k = _tau_k_root(spec, a, m, k_seed)
        except SolverError:
            return math.nan
        tau_k[a] = k
        w = math.sqrt(2.0 * k)
        return float(_det(-a, w * s1, w * s2))

    def sigma_zeros(a, k):
        w = math.sqrt(2.0 * k)
        return _interior_zeros(-a, w * s1, w * s2)

    # Bracket the n-th sigma condition in a around the WKB seed, widening
    # the window whenever no certified root appears inside it.  Each h
    # evaluation is an entire tau solve, so the scan is a single fixed
    # pass: the sigma zero-count certification (not scan stability)
    # guarantees the right root was taken.
    a_root = None
    half = max(2.0, 0.35 * abs(a_seed) + 0.15 * k0)
    for _ in range(6):
        xs = np.linspace(a_seed - half, a_seed + half, 33)
        ys = np.array([h(x) for x in xs])
        ok = np.isfinite(ys[:-1]) & np.isfinite(ys[1:]) & (ys[:-1] * ys[1:] < 0)
        brackets = [(xs[i], xs[i + 1], ys[i], ys[i + 1])
                    for i in np.nonzero(ok)[0]]
        # try brackets whose endpoint zero counts straddle the target
        # first, then the rest nearest the seed; counts at the endpoints
        # are nearly free because their tau roots are already solved
        def rank(br):
            counts = {sigma_zeros(x, tau_k[x]) for x in (br[0], br[1])
                      if x in tau_k}
            straddles = {n - 1, n} & counts == {n - 1, n} or counts == {n - 1}
            return (0 if straddles else 1,
                    abs(0.5 * (br[0] + br[1]) - a_seed))

        brackets.sort(key=rank)
        for br in brackets:
            cand = refine_bracket(h, br, xtol=1e-9)
            try:
                k_cand = _tau_k_root(spec, cand, m, k_seed)
            except SolverError:
                continue
            if sigma_zeros(cand, k_cand) == n - 1:
                a_root, k_root = cand, k_cand
                break
        if a_root is not None:
            break
        half *= 2.0
    if a_root is None:
        raise SolverError(
            f"no sigma-certified separation constant for qnums ({m}, {n})")

    a_root, k_root = _newton_polish(spec, a_root, k_root)
    return assemble_parabolic_annulus(spec, qnums, k_root, a_root)


def _newton_polish(spec, a, k, tol=1e-12, iters=40):
    t1, t2 = spec["tau1"], spec["tau2"]
    s1, s2 = spec["sigma1"], spec["sigma2"]

    def F(x):
        aa, kk = x
        w = math.sqrt(2.0 * kk)
        return np.array([float(_det(aa, w * t1, w * t2)),
                         float(_det(-aa, w * s1, w * s2))])

    x = np.array([a, k])
    fx = F(x)
    for _ in range(iters):
        if np.max(np.abs(fx)) < tol:
            break
        J = np.empty((2, 2))
        for j in range(2):
            h = 1e-7 * max(1.0, abs(x[j]))
            xp = x.copy()
            xp[j] += h
            J[:, j] = (F(xp) - fx) / h
        try:
            dx = np.linalg.solve(J, -fx)
        except np.linalg.LinAlgError:
            break
        alpha = 1.0
        while alpha > 1e-4:
            xn = x + alpha * dx
            if xn[1] > 0:
                fn = F(xn)
                if np.max(np.abs(fn)) < np.max(np.abs(fx)):
                    x, fx = xn, fn
                    break
            alpha *= 0.5
        else:
            break
    return float(x[0]), float(x[1])


def assemble_parabolic_annulus(spec, qnums, k, a):
    m, n = qnums
    t1, t2 = spec["tau1"], spec["tau2"]
    s1, s2 = spec["sigma1"], spec["sigma2"]
    w = math.sqrt(2.0 * k)
    tau_prof = weber_pair_for(a, w * t2)
    sig_prof = weber_pair_for(-a, w * s2)
    cvt, cut = _pair_coeffs(tau_prof, w * t1)
    cvs, cus = _pair_coeffs(sig_prof, w * s1)

    def radial_fn(u):
        vv = w * np.asarray(u, dtype=float)
        return cvt * tau_prof.v(vv) + cut * tau_prof.u(vv)

    def angular(v):
        vv = w * np.asarray(v, dtype=float)
        return cvs * sig_prof.v(vv) + cus * sig_prof.u(vv)

    chart = chart_for(spec)
    amp_t = np.max(np.abs(radial_fn(np.linspace(t1, t2, 512))))
    amp_s = np.max(np.abs(angular(np.linspace(s1, s2, 512))))
    residual = (abs(float(np.atleast_1d(radial_fn(t2))[0])) / amp_t
                + abs(float(np.atleast_1d(angular(s2))[0])) / amp_s)

    return Eigenstate(
        spec=spec, qnums=(int(m), int(n)), symmetry=None, k=float(k),
        separation=float(a), radial_coeffs=(float(cvt), float(cut),
                                            float(cvs), float(cus)),
        residual=residual,
        chart=chart, radial=radial_fn, angular=angular,
    )
