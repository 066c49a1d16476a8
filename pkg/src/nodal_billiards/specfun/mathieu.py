"""Mathieu characteristic values, angular functions, and radial integration.

The angular equation G'' + (lam - c^2 cos^2 phi) G = 0 maps onto the standard
Mathieu form with q = c^2/4 and a = lam - c^2/2.  Characteristic values come
from the symmetric tridiagonal Fourier-coefficient eigenproblem, with the
truncation dimension doubled until the eigenvalue settles.  The radial
equation F'' = (lam - c^2 cosh^2 rho) F is integrated directly (DOP853).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from ..errors import ConvergenceError, DomainError

_RTOL = 1e-12
_ATOL = 1e-14


@dataclass(frozen=True)
class MathieuParams:
    lam: float
    c2: float

    def __post_init__(self):
        if not np.isfinite(self.lam) or not np.isfinite(self.c2) or self.c2 < 0:
            raise DomainError("MathieuParams requires finite lam and c2 >= 0")


def _basis(order, parity):
    """(start harmonic, step=2) Fourier basis class for a given order/parity."""
    if order < 0 or int(order) != order:
        raise DomainError("Mathieu order must be a natural number")
    if parity not in ("even", "odd"):
        raise DomainError("parity must be 'even' or 'odd'")
    if parity == "odd" and order == 0:
        raise DomainError("odd Mathieu functions start at order 1")
    if parity == "even":
        start = 0 if order % 2 == 0 else 1
    else:
        start = 1 if order % 2 == 1 else 2
    return start


def _tridiag(order, parity, q, dim):
    """Diagonal and off-diagonal of the truncated Fourier matrix, plus the
    index of the requested order within the ascending eigenvalues."""
    start = _basis(order, parity)
    harmonics = start + 2 * np.arange(dim)
    diag = harmonics.astype(float) ** 2
    off = np.full(dim - 1, q)
    if parity == "even" and start == 0:
        off = off.copy()
        off[0] = np.sqrt(2.0) * q       # symmetrised constant-term coupling
    elif parity == "even" and start == 1:
        diag = diag.copy()
        diag[0] += q
    elif parity == "odd" and start == 1:
        diag = diag.copy()
        diag[0] -= q
    index = (order - start) // 2
    return diag, off, harmonics, index


def _char_at_dim(order, parity, q, dim):
    diag, off, harmonics, index = _tridiag(order, parity, q, dim)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(index, index))
    return w[0], v[:, 0], harmonics


@lru_cache(maxsize=4096)
def _char_converged(order, parity, c2):
    q = c2 / 4.0
    dim = order // 2 + 25
    a_prev, vec, harm = _char_at_dim(order, parity, q, dim)
    for _ in range(8):
        dim *= 2
        a_new, vec, harm = _char_at_dim(order, parity, q, dim)
        scale = max(1.0, 4.0 * np.finfo(float).eps * (harm[-1] ** 2 + 2 * q) / 1e-10)
        if abs(a_new - a_prev) < 1e-10 * scale:
            lam = a_new + c2 / 2.0
            return lam, vec, harm
        a_prev = a_new
    raise ConvergenceError(
        f"Mathieu characteristic value did not converge (order={order}, c2={c2})"
    )


def mathieu_char(order, parity, c2):
    """Characteristic value lam for the requested periodicity class."""
    if c2 < 0:
        raise DomainError("c2 must be >= 0")
    lam, _, _ = _char_converged(int(order), parity, float(c2))
    return lam


class AngularMathieu:
    """Angular Mathieu function, normalised so max|G| = 1 on [0, 2pi)."""

    def __init__(self, order, parity, c2):
        self.order = int(order)
        self.parity = parity
        self.c2 = float(c2)
        self.lam, coeffs, harmonics = _char_converged(self.order, parity, self.c2)
        if parity == "even" and harmonics[0] == 0:
            coeffs = coeffs.copy()
            coeffs[0] /= np.sqrt(2.0)   # undo the symmetrisation of the DC row
        self._coeffs = coeffs
        self._harmonics = harmonics
        self._norm = 1.0
        phi = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
        self._norm = np.max(np.abs(self._raw(phi)))

    def _raw(self, phi):
        phi = np.asarray(phi, dtype=float)
        hp = np.outer(phi, self._harmonics)
        basis = np.cos(hp) if self.parity == "even" else np.sin(hp)
        return basis @ self._coeffs

    def __call__(self, phi):
        return self._raw(phi) / self._norm


def mathieu_angular(order, parity, c2, phi):
    """Pointwise angular Mathieu function (see AngularMathieu)."""
    fn = AngularMathieu(order, parity, c2)
    out = fn(np.atleast_1d(phi))
    return float(out[0]) if np.isscalar(phi) or np.ndim(phi) == 0 else out


def _radial_rhs(c2, lam):
    def rhs(rho, y):
        ch = np.cosh(rho)
        return (y[1], (lam - c2 * ch * ch) * y[0])
    return rhs


def mathieu_radial(params, init, rho, rho0=0.0):
    """Value and derivative of the radial solution at rho, integrating the
    radial Mathieu equation from rho0 with initial data (F, F')."""
    sol = mathieu_radial_profile(params, init, rho0, rho)
    y = sol.sol(rho)
    return float(y[0]), float(y[1])


def mathieu_radial_profile(params, init, rho0, rho1):
    """solve_ivp solution object with dense output on [rho0, rho1]."""
    if rho1 <= rho0:
        raise DomainError("mathieu_radial requires rho1 > rho0")
    sol = solve_ivp(
        _radial_rhs(params.c2, params.lam), (rho0, rho1), list(init),
        method="DOP853", rtol=_RTOL, atol=_ATOL, dense_output=True,
    )
    if not sol.success:
        raise ConvergenceError(f"radial Mathieu integration failed: {sol.message}")
    return sol
