"""Pohozaev identity, nonlinear mass, and the two-sided mass bounds.

Every smooth solution of -Lap u = mu |x|^a e^u on the unit disk satisfies

    2 pi (2+a - s) <= mu int |x|^a e^u <= 2 pi (2+a + s),  s = sqrt((2+a)^2 - 2 mu),

with equality exactly at the two radial solutions.  The identity behind it,

    ((2+a)^3/4) lam int |x|^a e^u - ((2+a)^2/2) pi lam = (1/2) oint (du/dn)^2,

is evaluated here with the boundary flux extracted by one-sided
fourth-order differences near r = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import model
from .fd import fornberg_weights
from .mesh import RadialMesh
from .model import Branch, DomainError


class MassBoundError(RuntimeError):
    """A computed mass violated the two-sided bounds; carries the margin."""

    def __init__(self, message: str, margin: float):
        super().__init__(message)
        self.margin = margin


@dataclass(frozen=True)
class MassReport:
    """Mass with its bounds and the Pohozaev residual of the profile."""

    mass: float
    lower: float
    upper: float
    pohozaev_residual: Optional[float]

    @property
    def margin(self) -> float:
        """Smallest slack to either bound (negative = violation)."""
        return min(self.mass - self.lower, self.upper - self.mass)


def mass_bounds(alpha: float, mu: float) -> tuple[float, float]:
    """The closed two-sided bounds 2 pi (2+a -+ sqrt((2+a)^2 - 2 mu))."""
    disc = (2.0 + alpha) ** 2 - 2.0 * mu
    if disc < 0:
        raise DomainError(f"mu={mu} beyond the fold (2+a)^2/2 at alpha={alpha}")
    s = math.sqrt(disc)
    return 2 * math.pi * (2 + alpha - s), 2 * math.pi * (2 + alpha + s)


def closed_form_mass(alpha: float, mu: float, branch: Branch) -> float:
    """Mass of the closed-form radial solutions: the bounds with equality."""
    lower, upper = mass_bounds(alpha, mu)
    if branch is Branch.MINIMAL:
        return lower
    if branch is Branch.BLOWUP:
        return upper
    return 2 * math.pi * (2 + alpha)   # critical: both coincide


def _gauss_nodes(n: int = 256) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def mass(u: Callable, alpha: float, mu: float,
         quadrature: Optional[RadialMesh] = None) -> float:
    """mu int_B1 |x|^a e^u for a radial profile u(r).

    With a :class:`RadialMesh` the mesh's nodes carry the integrand
    (useful for sampled profiles); otherwise a 256-point Gauss rule on
    [0, 1] is used, which is exact to machine precision for the smooth
    radial integrands here.
    """
    if quadrature is None:
        r, w = _gauss_nodes()
        vals = np.exp(np.asarray(u(r), dtype=float))
        integral = float(np.sum(w * r ** (1.0 + alpha) * vals))
    else:
        r = quadrature.nodes
        vals = np.exp(np.asarray(u(r), dtype=float))
        integral = quadrature.integrate_r(r ** alpha * vals)
    return 2.0 * math.pi * mu * integral


def boundary_flux(u: Callable, spacing: float = 5e-4, npts: int = 5) -> float:
    """du/dn at r = 1 by one-sided differences on the last ``npts`` nodes."""
    r = 1.0 - spacing * np.arange(npts - 1, -1, -1.0)
    w = fornberg_weights(1.0, r, 1)[1]
    return float(w @ np.asarray(u(r), dtype=float))


def pohozaev_residual(u: Callable, alpha: float, lam: float,
                      spacing: float = 5e-4) -> float:
    """Residual of the Pohozaev identity for a radial profile.

    ((2+a)^3/4) lam int |x|^a e^u - ((2+a)^2/2) pi lam - pi u'(1)^2;
    vanishes (to quadrature plus flux-extraction error) on true solutions
    of the lam-normalised problem.
    """
    a2 = 2.0 + alpha
    r, w = _gauss_nodes()
    integral = 2 * math.pi * float(np.sum(w * r ** (1.0 + alpha)
                                          * np.exp(np.asarray(u(r), dtype=float))))
    flux = boundary_flux(u, spacing)
    return (a2 ** 3 / 4.0) * lam * integral - (a2 ** 2 / 2.0) * math.pi * lam \
        - math.pi * flux * flux


def check_mass_bounds(mass_value: float, alpha: float, mu: float,
                      rel_tol: float = 1e-6,
                      pohozaev: Optional[float] = None) -> MassReport:
    """Assert lower - tol <= mass <= upper + tol with tol = rel_tol * upper."""
    lower, upper = mass_bounds(alpha, mu)
    report = MassReport(mass_value, lower, upper, pohozaev)
    tol = rel_tol * upper
    if report.margin < -tol:
        raise MassBoundError(
            f"mass {mass_value:.8g} violates bounds [{lower:.8g}, {upper:.8g}] "
            f"by {-report.margin:.3e} (tol {tol:.3e})", report.margin)
    return report


def bounds_check(u: Callable, alpha: float, mu: float,
                 rel_tol: float = 1e-6) -> MassReport:
    """Mass report for a radial profile, including its Pohozaev residual."""
    m = mass(u, alpha, mu)
    lam = model.lambda_of_mu(mu, alpha)
    res = pohozaev_residual(u, alpha, lam)
    return check_mass_bounds(m, alpha, mu, rel_tol, pohozaev=res)


def boundary_flux_constancy(flux_coeffs: np.ndarray) -> tuple[float, float]:
    """Schwarz-inequality gap of a Fourier boundary flux.

    ``flux_coeffs[j]`` are the cosine coefficients of du/dn on the
    boundary.  Returns (oint (du/dn)^2 ds, (oint du/dn ds)^2 / (2 pi));
    the two agree exactly when the flux is constant (radial solutions) and
    differ by pi sum_{j>=1} c_j^2 otherwise.
    """
    c = np.asarray(flux_coeffs, dtype=float)
    quad = 2 * math.pi * c[0] ** 2 + math.pi * float(np.sum(c[1:] ** 2))
    lin = (2 * math.pi * c[0]) ** 2 / (2 * math.pi)
    return quad, lin
