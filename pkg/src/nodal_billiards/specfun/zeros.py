"""Bracketed zero finding on an interval with adaptive panel refinement.

The scan doubles its panel count (reusing previous evaluations) until the
number of sign changes is stable twice in a row, so nearly tangent zero pairs
are not silently merged.  Each bracket is then refined by bisection; brackets
are processed as a batch so vectorised integrands pay one array call per
bisection step.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientZerosError


@dataclass(frozen=True)
class ZeroList:
    zeros: tuple
    interval: tuple
    count_requested: int | None = None
    brackets: tuple = field(default=(), repr=False)


def _as_vectorized(f, lo, hi):
    probe = np.array([lo + 0.37 * (hi - lo), lo + 0.61 * (hi - lo)])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return f
    except Exception:
        pass
    return lambda xs: np.array([float(f(x)) for x in np.atleast_1d(xs)])


def find_zeros(f, lo, hi, count=None, initial_panels=256, max_panels=2 ** 16,
               xtol=1e-12):
    """First `count` zeros of f in (lo, hi), or all found when count is None.

    Raises InsufficientZerosError when fewer than `count` sign changes exist
    after panel refinement reaches its cap.
    """
    if not hi > lo:
        raise ValueError("find_zeros requires hi > lo")
    fv = _as_vectorized(f, lo, hi)

    xs = np.linspace(lo, hi, initial_panels + 1)
    ys = fv(xs)
    # a sample landing exactly on a zero would hide the sign change; nudge it
    exact = ys == 0.0
    if exact.any():
        xs = xs.copy()
        xs[exact] = np.clip(xs[exact] + (hi - lo) * 1e-9, lo, hi)
        ys = ys.copy()
        ys[exact] = fv(xs[exact])

    stable = 0
    counts = [_count_changes(ys)]
    panels = initial_panels
    while stable < 2 and panels < max_panels:
        mids = 0.5 * (xs[:-1] + xs[1:])
        ymids = fv(mids)
        nxs = np.empty(xs.size + mids.size)
        nys = np.empty_like(nxs)
        nxs[0::2], nxs[1::2] = xs, mids
        nys[0::2], nys[1::2] = ys, ymids
        xs, ys = nxs, nys
        panels *= 2
        counts.append(_count_changes(ys))
        stable = stable + 1 if counts[-1] == counts[-2] else 0

    sign = np.sign(ys)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if count is not None and idx.size < count:
        raise InsufficientZerosError(count, int(idx.size), (lo, hi))
    if count is not None:
        idx = idx[:count]

    a, b = xs[idx].copy(), xs[idx + 1].copy()
    fa = ys[idx].copy()
    brackets = tuple(zip(a.tolist(), b.tolist()))
    # batched bisection: every bracket halves once per function call
    while np.any(b - a > xtol):
        m = 0.5 * (a + b)
        fm = fv(m)
        left = fa * fm <= 0
        b = np.where(left, m, b)
        a = np.where(left, a, m)
        fa = np.where(left, fa, fm)
    roots = 0.5 * (a + b)
    return ZeroList(tuple(roots.tolist()), (float(lo), float(hi)),
                    count, brackets)


def _count_changes(ys):
    s = np.sign(ys)
    return int(np.count_nonzero(s[:-1] * s[1:] < 0))


def count_sign_changes(f, lo, hi, initial=256, max_panels=2 ** 14,
                       periodic=False):
    """Stable sign-change count of f on [lo, hi); doubles resolution until the
    count repeats.  With periodic=True the wrap-around change is included."""
    fv = _as_vectorized(f, lo, hi)
    n = initial
    prev = None
    while n <= max_panels:
        xs = lo + (np.arange(n) + 0.5) * (hi - lo) / n
        s = np.sign(fv(xs))
        if periodic:
            c = int(np.count_nonzero(s != np.roll(s, -1)))
        else:
            c = int(np.count_nonzero(s[:-1] != s[1:]))
        if prev == c:
            return c
        prev = c
        n *= 2
    return prev
