"""Solved eigenstate container and shared root-scan helpers."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..errors import SolverError
from ..geometry import BilliardSpec, Chart

_PROFILE_SAMPLES = 512


@dataclass
class Eigenstate:
    """A solved separable Dirichlet mode psi(u, v) = F(u) * G(v).

    separation holds the family's separation constant: the angular order for
    circular families, the Mathieu lambda for elliptic ones, and the Weber
    parameter a for parabolic ones."""

    spec: BilliardSpec
    qnums: tuple
    symmetry: str | None
    k: float
    separation: float
    radial_coeffs: tuple
    residual: float
    chart: Chart = field(repr=False)
    radial: callable = field(repr=False)    # F over u
    angular: callable = field(repr=False)   # G over v

    def evaluate(self, u, v):
        """psi at a chart point (scalar); raises OutOfChartError outside."""
        self.chart.require(u, v)
        f = np.asarray(self.radial(u), dtype=float).reshape(())
        g = np.asarray(self.angular(v), dtype=float).reshape(())
        return float(f * g)

    def max_amplitude(self):
        (ul, uh), (vl, vh) = self.chart.u_range, self.chart.v_range
        fmax = np.max(np.abs(self.radial(np.linspace(ul, uh, _PROFILE_SAMPLES))))
        gmax = np.max(np.abs(self.angular(np.linspace(vl, vh, _PROFILE_SAMPLES))))
        return fmax * gmax

    def evaluate_physical(self, x, y):
        """psi at a physical point via the inverse chart map (diagnostics)."""
        u, v = self.chart.to_chart(x, y)
        return self.evaluate(u, v)


def scan_brackets(f, lo, hi, step, strict=True):
    """Sign-change brackets of f on [lo, hi] sampled at spacing <= step,
    verified stable under one halving of the spacing.

    With strict=False an unstable scan returns its finest bracket list
    instead of raising; use when every bracket is certified downstream.
    NaN samples never form brackets, so f may mark bad regions with NaN."""
    n = max(8, int(np.ceil((hi - lo) / step)))
    result = None
    for _ in range(6):
        xs = np.linspace(lo, hi, n + 1)
        ys = np.array([f(x) for x in xs])
        s = np.sign(ys)
        idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
        xs2 = np.linspace(lo, hi, 2 * n + 1)
        mids = xs2[1::2]
        ymid = np.array([f(x) for x in mids])
        s2 = np.empty(2 * n + 1)
        s2[0::2], s2[1::2] = s, np.sign(ymid)
        idx2 = np.nonzero(s2[:-1] * s2[1:] < 0)[0]
        result = [(xs[i], xs[i + 1], ys[i], ys[i + 1]) for i in idx]
        if idx2.size == idx.size:
            return result
        n *= 2
    if not strict:
        return result
    raise SolverError("bracket scan did not stabilise")


def refine_bracket(f, bracket, xtol=1e-13):
    a, b, _, _ = bracket
    return brentq(f, a, b, xtol=xtol, rtol=8.9e-16)


def nth_root(f, n, lo, step, span, max_span):
    """n-th sign-change root of f scanning upward from lo."""
    hi = lo + span
    while True:
        brackets = scan_brackets(f, lo, hi, step)
        if len(brackets) >= n:
            return refine_bracket(f, brackets[n - 1]), brackets
        if hi - lo > max_span:
            raise SolverError(
                f"root scan exhausted: found {len(brackets)} roots, wanted {n}")
        hi += span
