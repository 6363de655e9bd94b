"""The singular weighted eigenvalue engine.

Computes the least value nu1(lam) of the Rayleigh quotient with the r^-2
denominator weight at the Morse-index-1 autonomous radial solution, by
shift-inverted generalized eigensolves of the P1 forms; provides the
exponential-case closed forms (nu1 = (lam-2)/2 and its eigenfunction), the
Legendre-form verification, annulus truncations with extrapolation, the
explicit test family showing the quotient infimum can vanish without being
attained, and decay-exponent fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse.linalg as spla

from . import model
from .mesh import RadialMesh, assemble_forms, default_mesh
from .model import EXPONENTIAL, DomainError, Nonlinearity


class EigensolverError(RuntimeError):
    """The sparse eigensolver failed to converge."""


class MorseIndexError(RuntimeError):
    """The autonomous solution does not have Morse index 1."""


#: Discrete eigenvalues above this threshold count as "not negative":
#: the quotient infimum can be zero and unattained, so a tiny positive
#: number would be semantically wrong and is reported as None instead.
NEGATIVE_TOL = -1e-8

#: Shift for the shift-invert eigensolve; below the spectrum floor of the
#: exponential family (nu1 > -1 there).
DEFAULT_SHIFT = -1.5


@dataclass(frozen=True)
class WeightedSpectralProblem:
    """The 1D singular eigenproblem: potential, truncation, fixed r^-2 weight."""

    potential: Callable[[np.ndarray], np.ndarray]
    epsilon: float = 0.0     # inner truncation radius; 0 = full disk

    def __post_init__(self):
        if not (0.0 <= self.epsilon <= 0.1):
            raise DomainError(f"epsilon must lie in [0, 0.1], got {self.epsilon}")


@dataclass(frozen=True)
class SpectralResult:
    """Ordered eigenvalues with sup-normalised eigenfunction samples."""

    eigenvalues: np.ndarray       # ascending
    eigenfunctions: np.ndarray    # (n_nodes, count), zero rows at Dirichlet ends
    mesh: RadialMesh
    epsilon: float


def exp_potential(lam: float) -> Callable[[np.ndarray], np.ndarray]:
    """q(r) = f'(lam, v_lam(r)) = 8 d / (d + r^2)^2 on the blow-up branch."""
    _, dminus = model.delta_pm(lam)

    def q(r):
        r = np.asarray(r, dtype=float)
        return 8.0 * dminus / (dminus + r * r) ** 2

    return q


def autonomous_potential(lam: float, nl: Nonlinearity = EXPONENTIAL,
                         profile: Optional[Callable] = None) -> Callable:
    """The linearisation potential q(r) = f'(lam, v_lam(r)).

    For the exponential nonlinearity the closed-form Morse-index-1 profile
    is used; otherwise a profile from the shooting solver must be given.
    """
    if profile is None:
        if nl is not EXPONENTIAL:
            raise DomainError("general nonlinearities need an explicit profile "
                              "(use model.solve_autonomous)")
        return exp_potential(lam)
    return lambda r: nl.fprime(lam, profile(r))


def _solve_pair(A, B, count: int, sigma: float) -> tuple[np.ndarray, np.ndarray]:
    # fixed start vector: ARPACK otherwise randomises it, and byte-identical
    # outputs across repeated runs are part of the CLI contract
    v0 = np.ones(A.shape[0])
    try:
        vals, vecs = spla.eigsh(A, k=count, M=B, sigma=sigma, which="LM", v0=v0)
    except Exception as exc:  # ArpackError and factorisation failures
        raise EigensolverError(f"shift-invert eigensolve failed: {exc}") from exc
    order = np.argsort(vals)
    return vals[order], vecs[:, order]


def _normalise(vec: np.ndarray) -> np.ndarray:
    out = vec / np.abs(vec).max()
    if out[0] < 0 or (out[0] == 0 and out[np.argmax(np.abs(out) > 0)] < 0):
        out = -out
    return out


def spectrum_floor(q: Callable, r0: float = 1e-8) -> float:
    """A provable lower bound for the weighted spectrum: -sup r^2 q(r).

    The potential term obeys int r q eta^2 <= sup(r^2 q) int eta^2 / r, so
    the quotient cannot dip below this; the shift-invert target must sit
    under it or the solver would lock onto interior eigenvalues.
    """
    r = np.geomspace(max(r0, 1e-12), 1.0, 2048)
    return -float(np.max(np.clip(r * r * np.asarray(q(r), dtype=float), 0.0, None)))


def lowest_eigs(lam: float, nl: Nonlinearity = EXPONENTIAL,
                mesh: Optional[RadialMesh] = None, count: int = 2,
                profile: Optional[Callable] = None,
                dirichlet_left: bool = False,
                sigma: Optional[float] = None) -> SpectralResult:
    """Lowest ``count`` discrete eigenpairs of the weighted problem."""
    mesh = mesh if mesh is not None else default_mesh()
    q = autonomous_potential(lam, nl, profile)
    A, B, _ = assemble_forms(mesh, q, dirichlet_left=dirichlet_left)
    if sigma is None:
        sigma = min(DEFAULT_SHIFT, spectrum_floor(q, mesh.nodes[0]) - 0.5)
    vals, vecs = _solve_pair(A, B, count, sigma)
    n = mesh.n
    full = np.zeros((n, count))
    lo = 1 if dirichlet_left else 0
    for j in range(count):
        full[lo:n - 1, j] = vecs[:, j]
        full[:, j] = _normalise(full[:, j])
    return SpectralResult(vals, full, mesh, mesh.nodes[0] if dirichlet_left else 0.0)


def nu1(lam: float, nl: Nonlinearity = EXPONENTIAL,
        mesh: Optional[RadialMesh] = None,
        profile: Optional[Callable] = None) -> Optional[float]:
    """Least weighted eigenvalue, or None when no negative eigenvalue exists.

    Checks the Morse-index-1 precondition a posteriori: exactly one
    negative radial (k = 0) eigenvalue; a second eigenvalue below -1e-3
    raises :class:`MorseIndexError`.
    """
    res = lowest_eigs(lam, nl, mesh, count=2, profile=profile)
    lam1, lam2 = res.eigenvalues[:2]
    if lam2 < -1e-3:
        raise MorseIndexError(
            f"autonomous solution is not Morse index 1: second weighted "
            f"eigenvalue {lam2:.3e} < 0 at lambda={lam}")
    if lam1 >= NEGATIVE_TOL:
        return None
    return float(lam1)


def nu1_closed_form_exp(lam: float) -> float:
    """nu1(lam) = (lam - 2)/2 for the exponential nonlinearity."""
    if not (0.0 < lam <= 2.0):
        raise DomainError(f"closed form needs lambda in (0, 2], got {lam}")
    return (lam - 2.0) / 2.0


def eigenfunction_exp(lam: float, r) -> np.ndarray:
    """Closed-form minimiser of the quotient, sup-normalised up to a constant.

    psi(r) = r^(s/2) (2 (1 - r^4) + (1 - r^2)^2 s) / (lam (1 - r^2)^2 + 8 r^2)
    with s = sqrt(4 - 2 lam); vanishes at r = 0 and r = 1.
    """
    if not (0.0 < lam < 2.0):
        raise DomainError(f"eigenfunction needs lambda in (0, 2), got {lam}")
    r = np.asarray(r, dtype=float)
    s = math.sqrt(4.0 - 2.0 * lam)
    one_m_r2 = 1.0 - r * r
    num = 2.0 * (1.0 - r ** 4) + one_m_r2 ** 2 * s
    den = lam * one_m_r2 ** 2 + 8.0 * r * r
    with np.errstate(invalid="ignore"):
        out = r ** (0.5 * s) * num / den
    return np.where(r == 0.0, 0.0, out)


def legendre_gamma(lam: float) -> float:
    """gamma = (d - 1)/(d + 1) on the blow-up branch; gamma^2 = -nu1(lam)."""
    _, dminus = model.delta_pm(lam)
    return (dminus - 1.0) / (dminus + 1.0)


def legendre_check(lam: float, n_points: int = 1500) -> float:
    """Max residual of the Legendre form of the eigenvalue equation.

    Maps the radial eigenfunction through xi = (d - r^2)/(d + r^2); the
    image R(xi) = ((1 + xi)/(1 - xi))^(gamma/2) (xi - gamma) must satisfy
    (1 - xi^2) R'' - 2 xi R' + nu1/(1 - xi^2) R + 2 R = 0 on (gamma, 1)
    with R(gamma) = 0.  Derivatives are formed by 5-point central
    differences with xi-dependent steps; the sample grid stays away from
    xi = 1 where R has a branch-point derivative blow-up.
    """
    gamma = legendre_gamma(lam)
    nu = nu1_closed_form_exp(lam)
    if abs(gamma * gamma + nu) > 1e-12:
        raise AssertionError("gamma^2 = -nu1 identity violated")

    def R(xi):
        return ((1.0 + xi) / (1.0 - xi)) ** (0.5 * gamma) * (xi - gamma)

    width = 1.0 - gamma
    xi = np.linspace(gamma + 0.05 * width, 1.0 - 0.25 * width, n_points)
    h = 3e-3 * np.minimum(xi - gamma + 0.1, 1.0 - xi)
    from .fd import central_derivatives
    d1, d2 = central_derivatives(R, xi, h)
    res = (1 - xi ** 2) * d2 - 2 * xi * d1 + nu / (1 - xi ** 2) * R(xi) + 2 * R(xi)
    return float(np.abs(res).max())


def annulus_mesh(epsilon: float, n: int = 2048) -> RadialMesh:
    """Log-uniform mesh from epsilon to 1 for annulus eigenproblems."""
    if not (0.0 < epsilon <= 0.1):
        raise DomainError(f"annulus needs epsilon in (0, 0.1], got {epsilon}")
    nodes = np.exp(np.linspace(math.log(epsilon), 0.0, n))
    nodes[-1] = 1.0
    from .fd import power_weighted_quadrature
    w_r = power_weighted_quadrature(nodes, 1.0, left_stub=True)
    w_rinv = power_weighted_quadrature(nodes, -1.0)
    return RadialMesh(nodes, f"annulus({epsilon:g})", w_r, w_rinv)


def annulus_eigs(lam: float, nl: Nonlinearity = EXPONENTIAL,
                 epsilon: float = 1e-4, count: int = 2, n: int = 2048,
                 profile: Optional[Callable] = None) -> SpectralResult:
    """Lowest eigenpairs on the annulus (epsilon, 1) with Dirichlet ends."""
    if count < 1:
        raise DomainError("count must be >= 1")
    mesh = annulus_mesh(epsilon, n)
    res = lowest_eigs(lam, nl, mesh, count=count, profile=profile,
                      dirichlet_left=True)
    return SpectralResult(res.eigenvalues, res.eigenfunctions, mesh, epsilon)


def richardson_log_extrapolate(epsilons, values) -> float:
    """Extrapolate eps -> 0 assuming value ~ v0 + c / log(1/eps).

    Uses the last two samples; motivated by the 1/|log eps| scaling of the
    unattained-infimum test family.
    """
    eps = np.asarray(epsilons, dtype=float)
    val = np.asarray(values, dtype=float)
    if len(eps) < 2:
        raise ValueError("need at least two samples")
    x = 1.0 / np.log(1.0 / eps[-2:])
    v = val[-2:]
    return float((v[1] * x[0] - v[0] * x[1]) / (x[0] - x[1]))


def p1_quotient(epsilon: float) -> float:
    """Rayleigh quotient of the explicit piecewise test family eta_eps.

    eta_eps = 1 - r on [eps, 1], linear ramp from 0 on [eps/2, eps], zero
    inside; all integrals are evaluated in closed form (antiderivatives of
    the piecewise-linear integrands).  q > 0 and q ~ const / log(1/eps),
    demonstrating an infimum 0 that is not attained.
    """
    if not (0.0 < epsilon < 0.5):
        raise DomainError(f"quotient family needs 0 < epsilon < 1/2, got {epsilon}")
    e = epsilon
    num = 1.5 * (1 - e) ** 2 + 0.5 * (1 - e * e)
    den = ((1 - e) ** 2 * (math.log(2.0) - 0.5)
           + math.log(1.0 / e) - 1.5 + 2 * e - 0.5 * e * e)
    return 2 * math.pi * num / (2 * math.pi * den)


#: Limit of p1_quotient(eps) * log(1/eps) as eps -> 0, fixed by the exact
#: piecewise integration above: numerator -> 4 pi, denominator ~ 2 pi log(1/eps).
P1_QUOTIENT_LOG_LIMIT = 2.0


def decay_exponent(r, psi, min_decades: float = 2.0) -> float:
    """Log-log slope of |psi| on small radii; the decay exponent at 0.

    Requires at least ``min_decades`` of radial dynamic range and a
    genuinely decaying sample (an essentially flat psi is rejected rather
    than reported as slope 0).
    """
    r = np.asarray(r, dtype=float)
    psi = np.asarray(psi, dtype=float)
    keep = (r > 0) & (np.abs(psi) > 0)
    r, psi = r[keep], np.abs(psi[keep])
    if len(r) < 4 or math.log10(r.max() / r.min()) < min_decades:
        raise ValueError("insufficient radial dynamic range for a decay fit")
    if psi.max() / psi.min() < 10.0 ** (0.25 * min_decades):
        raise ValueError("samples show no decay; fit rejected")
    slope, _ = np.polyfit(np.log(r), np.log(psi), 1)
    return float(slope)
