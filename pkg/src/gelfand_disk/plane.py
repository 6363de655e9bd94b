"""The entire-plane problem: radial solutions and their linearised kernel.

On R^2 the problem -Lap u = |x|^a e^u with finite weighted mass has the
radial family U(r) = log(2 (2+a)^2 d / (d + r^(2+a))^2).  The kernel of
the linearisation at d = 1 has dimension 1 for generic alpha and jumps to
3 exactly when alpha is an even integer, where the extra pair
r^k cos(k t)/(1 + r^(2+a)), r^k sin(k t)/(1 + r^(2+a)) appears with
k = alpha/2 + 1.  Mode admissibility reduces, through r -> r^(2/(2+a)), to
whether 4 m^2/(2+a)^2 lies in {0, 1}; a shooting integration of the
transformed equation cross-checks the algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .model import DomainError

#: Total weighted mass of every radial plane solution: int |x|^a e^U = 4 pi (2+a)
#: (by the substitution t = r^(2+a); fixed by the quadrature oracle in tests).
def plane_mass(alpha: float) -> float:
    return 4.0 * math.pi * (2.0 + alpha)


def plane_solution(delta: float, alpha: float, r) -> np.ndarray:
    """U(r) = log(2 (2+a)^2 d / (d + r^(2+a))^2), any delta > 0, alpha > -2."""
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if alpha <= -2:
        raise DomainError(f"alpha must exceed -2, got {alpha}")
    r = np.asarray(r, dtype=float)
    return math.log(2.0 * (2.0 + alpha) ** 2 * delta) \
        - 2.0 * np.log(delta + r ** (2.0 + alpha))


def plane_solution_derivatives(delta: float, alpha: float, r):
    """(U', U'') of the radial plane solution, in closed form."""
    r = np.asarray(r, dtype=float)
    rho = r ** (2.0 + alpha)
    d1 = -2.0 * (2.0 + alpha) * rho / (r * (delta + rho))
    d2 = -2.0 * (2.0 + alpha) * rho * ((1.0 + alpha) * delta - rho) \
        / (r * r * (delta + rho) ** 2)
    return d1, d2


def plane_residual(delta: float, alpha: float, r) -> np.ndarray:
    """-U'' - U'/r - r^a e^U, evaluated with the closed-form derivatives."""
    r = np.asarray(r, dtype=float)
    d1, d2 = plane_solution_derivatives(delta, alpha, r)
    return -d2 - d1 / r - r ** alpha * np.exp(plane_solution(delta, alpha, r))


def linearised_weight(alpha: float, r) -> np.ndarray:
    """W(r) = 2 (2+a)^2 r^a / (1 + r^(2+a))^2, the linearisation potential."""
    r = np.asarray(r, dtype=float)
    return 2.0 * (2.0 + alpha) ** 2 * r ** alpha / (1.0 + r ** (2.0 + alpha)) ** 2


@dataclass(frozen=True)
class KernelElement:
    """One kernel basis element: angular mode, factor, radial profile."""

    mode: int
    angular: str                       # "", "cos" or "sin"
    profile: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PlaneKernel:
    alpha: float
    basis: list[KernelElement]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _radial_kernel_profile(alpha: float):
    def v0(r):
        r = np.asarray(r, dtype=float)
        rho = r ** (2.0 + alpha)
        return (1.0 - rho) / (1.0 + rho)

    return v0


def _angular_kernel_profile(alpha: float, k: int):
    def g(r):
        r = np.asarray(r, dtype=float)
        return r ** k / (1.0 + r ** (2.0 + alpha))

    return g


def even_integer_mode(alpha: float, tol: float = 1e-9) -> int | None:
    """k >= 1 with alpha = 2(k - 1), or None when alpha is not of that form."""
    k = 0.5 * alpha + 1.0
    if abs(k - round(k)) <= tol and round(k) >= 1:
        return int(round(k))
    return None


def kernel_basis(alpha: float) -> PlaneKernel:
    """Basis of the linearised kernel: dimension 1, or 3 at even alpha."""
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    basis = [KernelElement(0, "", _radial_kernel_profile(alpha))]
    k = even_integer_mode(alpha)
    if k is not None:
        g = _angular_kernel_profile(alpha, k)
        basis.append(KernelElement(k, "cos", g))
        basis.append(KernelElement(k, "sin", g))
    return PlaneKernel(alpha, basis)


def kernel_residual(alpha: float, element: KernelElement, r) -> np.ndarray:
    """Mode-m linearised residual -v'' - v'/r + m^2 v/r^2 - W v of a basis element.

    Uses closed-form derivatives (the finite-difference cross-check of the
    derivative formulas lives in the tests; plain differences of the
    profiles lose too many digits near the origin to verify 1e-8
    pointwise).
    """
    r = np.asarray(r, dtype=float)
    rho = r ** (2.0 + alpha)
    a2 = 2.0 + alpha
    if element.mode == 0:
        d1 = -2.0 * a2 * rho / (r * (1.0 + rho) ** 2)
        d2 = -2.0 * a2 * rho * ((1.0 + alpha) - (3.0 + alpha) * rho) \
            / (r * r * (1.0 + rho) ** 3)
        v = element.profile(r)
        return -d2 - d1 / r - linearised_weight(alpha, r) * v
    k = element.mode
    d1 = k * r ** (k - 1) * (1.0 - rho) / (1.0 + rho) ** 2
    d2 = k * r ** (k - 2) * ((k - 1.0) - 6.0 * k * rho + (k + 1.0) * rho ** 2) \
        / (1.0 + rho) ** 3
    g = element.profile(r)
    return -d2 - d1 / r + k * k * g / (r * r) - linearised_weight(alpha, r) * g


def _shoot_growth(s: float, t0: float = -12.0, t1: float = math.log(1e3)) -> tuple[float, float]:
    """Integrate w'' = (s^2 - 2 sech^2 t) w from the regular small-r branch.

    This is the transformed mode equation in the variable t = log r (the
    potential 8 r^2/(1+r^2)^2 / r^2 becomes 2 sech^2 t).  Returns
    (growth_coefficient, w(t1)) where the growth coefficient normalises
    w(t1) against the pure e^(s t) tail; for s = 0 it returns (w'(t1), w(t1)).
    """
    def rhs(t, y):
        sech2 = 1.0 / math.cosh(t) ** 2
        return [y[1], (s * s - 2.0 * sech2) * y[0]]

    c = -2.0 / (s + 1.0)
    e = math.exp(2.0 * t0)
    y0 = [1.0 + c * e, s + c * (s + 2.0) * e]
    sol = solve_ivp(rhs, (t0, t1), y0, method="DOP853", rtol=1e-11, atol=1e-300)
    if not sol.success:
        raise RuntimeError(f"mode shooting failed: {sol.message}")
    w, wp = sol.y[0][-1], sol.y[1][-1]
    if s > 0:
        return w * math.exp(-s * (t1 - t0)), w
    return wp, w


def mode_shoot(alpha: float, m: int, verify_numeric: bool = True,
               match_tol: float = 1e-6) -> bool:
    """Whether the mode-m linearised ODE has a finite-energy solution.

    Algebraic criterion: s = 2m/(2+a) in {0, 1} (tolerance 1e-9).  With
    ``verify_numeric`` the transformed equation is integrated from the
    r -> 0 asymptotics out to r = 1e3 and the growing-tail coefficient is
    required to agree (below ``match_tol`` when admissible, above it
    otherwise); disagreement raises.
    """
    if m < 0 or m != int(m):
        raise DomainError(f"mode must be a nonnegative integer, got {m}")
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    s = 2.0 * m / (2.0 + alpha)
    algebraic = abs(s) <= 1e-9 or abs(s - 1.0) <= 1e-9
    if not verify_numeric:
        return algebraic
    growth, w_end = _shoot_growth(s)
    if s <= 1e-9:
        numeric = abs(growth) <= 1e-4 and abs(w_end) <= 2.0
    else:
        numeric = abs(growth) <= match_tol
    if numeric != algebraic:
        raise RuntimeError(
            f"mode admissibility disagreement at alpha={alpha}, m={m}: "
            f"algebraic={algebraic}, numeric growth={growth:.3e}")
    return algebraic


def plane_negative_modes(alpha: float) -> list[tuple[int, float]]:
    """Modes m with negative least eigenvalue L(m) = m^2 - ((2+a)/2)^2."""
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    half = 0.5 * (2.0 + alpha)
    out = []
    m = 0
    while m < half - 1e-12:
        out.append((m, m * m - half * half))
        m += 1
    return out
