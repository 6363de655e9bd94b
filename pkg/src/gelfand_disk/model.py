"""Radial solutions of the weighted problem and its autonomous reduction.

The weighted problem on the unit disk,

    -Lap u = ((2+a)/2)^2 |x|^a f(lam, u),   u > 0 in B1,  u = 0 on the boundary,

shares its radial solutions with the autonomous problem -Lap v = f(lam, v)
through the change of variables u(r) = v(r^((2+a)/2)).  For the exponential
nonlinearity f(lam, s) = lam e^s every radial solution is known in closed
form and is parametrised by a scale delta; this module provides those
closed forms, the branch bookkeeping (minimal / blow-up / critical), the
lam <-> mu load conversions and a shooting solver for general f.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


class DomainError(ValueError):
    """Parameter outside the admissible domain of an operation."""


class ShootingError(RuntimeError):
    """The radial shooting solver could not produce a solution profile."""


class Branch(enum.Enum):
    """Which radial solution of the problem a profile belongs to."""

    MINIMAL = "minimal"    # delta_plus: the stable, minimal solution
    BLOWUP = "blowup"      # delta_minus: Morse index 1, blows up as the load -> 0
    CRITICAL = "critical"  # the single solution at the fold (lam = 2), delta = 1


@dataclass(frozen=True)
class Nonlinearity:
    """A smooth nonlinearity f(lam, s) with its s-derivative.

    ``f`` must be positive for s >= 0 and lam in ``lambda_range``.
    """

    name: str
    f: Callable[[float, np.ndarray], np.ndarray]
    fprime: Callable[[float, np.ndarray], np.ndarray]
    lambda_range: tuple[float, float] = (0.0, 2.0)

    def check_consistency(self, lam: float, s_samples, h: float = 1e-6) -> float:
        """Max mismatch between ``fprime`` and a centred difference of ``f``."""
        s = np.asarray(s_samples, dtype=float)
        fd = (self.f(lam, s + h) - self.f(lam, s - h)) / (2 * h)
        return float(np.max(np.abs(fd - self.fprime(lam, s))))


EXPONENTIAL = Nonlinearity(
    name="exponential",
    f=lambda lam, s: lam * np.exp(s),
    fprime=lambda lam, s: lam * np.exp(s),
    lambda_range=(0.0, 2.0),
)


def mu_of_lambda(lam: float, alpha: float) -> float:
    """Merged load mu = lam ((2+a)/2)^2 of the mu-normalised problem."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return lam * ((2.0 + alpha) / 2.0) ** 2


def lambda_of_mu(mu: float, alpha: float) -> float:
    """Inverse of :func:`mu_of_lambda`."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return mu / ((2.0 + alpha) / 2.0) ** 2


@dataclass(frozen=True)
class ProblemParams:
    """Full parameter point (lam, alpha, mu, nonlinearity) of the problem.

    Exactly one of lam/mu is given at construction; the other is derived so
    that mu = lam ((2+alpha)/2)^2 holds to the last bit.
    """

    lam: float
    alpha: float
    mu: float
    nonlinearity: Nonlinearity = EXPONENTIAL

    @classmethod
    def from_lambda(cls, lam: float, alpha: float,
                    nonlinearity: Nonlinearity = EXPONENTIAL) -> "ProblemParams":
        a, b = nonlinearity.lambda_range
        if not (a < lam <= b):
            raise DomainError(f"lambda={lam} outside ({a}, {b}]")
        return cls(lam, alpha, mu_of_lambda(lam, alpha), nonlinearity)

    @classmethod
    def from_mu(cls, mu: float, alpha: float,
                nonlinearity: Nonlinearity = EXPONENTIAL) -> "ProblemParams":
        lam = lambda_of_mu(mu, alpha)
        return cls.from_lambda(lam, alpha, nonlinearity)


def delta_pm(lam: float) -> tuple[float, float]:
    """Scale parameters (delta_plus, delta_minus) of the two radial solutions.

    delta_pm = (4 - lam +- 2 sqrt(4 - 2 lam)) / lam.  The product
    delta_plus * delta_minus = 1, so the minus root is computed as the
    reciprocal of the plus root, which is free of cancellation as lam -> 0.
    """
    if not (0.0 < lam < 2.0):
        raise DomainError(f"delta_pm requires 0 < lambda < 2, got {lam}; "
                          "at lambda = 2 use the critical branch (delta = 1)")
    dplus = (4.0 - lam + 2.0 * math.sqrt(4.0 - 2.0 * lam)) / lam
    return dplus, 1.0 / dplus


def delta_of_branch(lam: float, branch: Branch) -> float:
    if branch is Branch.CRITICAL:
        if abs(lam - 2.0) > 1e-13:
            raise DomainError("critical branch exists only at lambda = 2")
        return 1.0
    dplus, dminus = delta_pm(lam)
    return dplus if branch is Branch.MINIMAL else dminus


@dataclass(frozen=True)
class RadialSolution:
    """A branch-tagged radial solution profile of the weighted problem."""

    branch: Branch
    delta: float
    params: ProblemParams
    profile: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def __call__(self, r):
        return self.profile(r)


def _exp_profile(lam: float, alpha: float, delta: float):
    log_amp = math.log(8.0 * delta / lam)

    def u(r):
        r = np.asarray(r, dtype=float)
        return log_amp - 2.0 * np.log(delta + r ** (2.0 + alpha))

    return u


def exponential_solution(params: ProblemParams, branch: Branch) -> RadialSolution:
    """Closed-form radial solution u(r) = log(8 d / (lam (d + r^(2+a))^2))."""
    if params.nonlinearity is not EXPONENTIAL:
        raise DomainError("closed forms exist only for the exponential nonlinearity")
    delta = delta_of_branch(params.lam, branch)
    return RadialSolution(branch, delta, params,
                          _exp_profile(params.lam, params.alpha, delta))


def eval_radial(sol: RadialSolution, r) -> np.ndarray:
    """Evaluate a radial solution at radii r in [0, 1]."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > 1):
        raise DomainError("radius outside [0, 1]")
    return sol.profile(r)


def autonomous_profile_exp(lam: float, branch: Branch):
    """Autonomous closed form v(r) = log(8 d / (lam (d + r^2)^2)) on [0, 1]."""
    delta = delta_of_branch(lam, branch)
    return _exp_profile(lam, 0.0, delta), delta


def transform_to_weighted(v: Callable, alpha: float) -> Callable:
    """Map an autonomous radial profile v to u(r) = v(r^((2+a)/2))."""
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    power = (2.0 + alpha) / 2.0

    def u(r):
        r = np.asarray(r, dtype=float)
        return v(r ** power)

    return u


def transform_to_autonomous(u: Callable, alpha: float) -> Callable:
    """Inverse of :func:`transform_to_weighted`: v(r) = u(r^(2/(2+a)))."""
    power = 2.0 / (2.0 + alpha)

    def v(r):
        r = np.asarray(r, dtype=float)
        return u(r ** power)

    return v


def shoot_autonomous(nl: Nonlinearity, lam: float, v0: float,
                     rtol: float = 1e-12, atol: float = 1e-14):
    """Integrate -v'' - v'/r = f(lam, v), v(0) = v0, v'(0) = 0 out to r = 1.

    Returns the scipy solution object with a dense interpolant.  The
    start uses the regular series v = v0 - f(lam, v0) r^2/4 at a small
    radius to step over the coordinate singularity.
    """
    r0 = 1e-8
    f0 = float(nl.f(lam, np.asarray(v0)))
    y0 = [v0 - 0.25 * f0 * r0 * r0, -0.5 * f0 * r0]

    def rhs(r, y):
        return [y[1], -y[1] / r - nl.f(lam, y[0])]

    sol = solve_ivp(rhs, (r0, 1.0), y0, method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise ShootingError(f"integration failed: {sol.message}")
    return sol


def solve_autonomous(nl: Nonlinearity, lam: float,
                     v0_bracket: tuple[float, float],
                     check_positive: bool = True):
    """Radial solution of the autonomous problem by bisection on v(0).

    ``v0_bracket`` must bracket a root of v(1; v0) = 0.  Returns
    ``(profile, v0)`` where ``profile`` is a callable on [0, 1].  Raises
    :class:`ShootingError` when no root is bracketed or (with
    ``check_positive``) when the profile fails u > 0 on [0, 1); profiles
    are never fabricated.
    """
    cache: dict[float, object] = {}

    def boundary(a: float) -> float:
        sol = shoot_autonomous(nl, lam, a)
        cache[a] = sol
        return float(sol.y[0][-1])

    fa, fb = boundary(v0_bracket[0]), boundary(v0_bracket[1])
    if fa * fb > 0:
        raise ShootingError(
            f"v(1; v0) has no sign change on bracket {v0_bracket}: "
            f"({fa:.3e}, {fb:.3e})")
    v0 = brentq(boundary, *v0_bracket, xtol=1e-14, rtol=8.9e-16)
    sol = cache[v0] if v0 in cache else shoot_autonomous(nl, lam, v0)

    def profile(r):
        r = np.asarray(r, dtype=float)
        flat = np.clip(r.reshape(-1), 1e-8, 1.0)   # interpolant wants 1D input
        vals = sol.sol(flat)[0].reshape(r.shape)
        return np.where(r < 1e-8, v0, vals)

    if check_positive:
        rr = np.linspace(0.0, 0.999, 400)
        if np.any(profile(rr) <= 0):
            raise ShootingError("shooting produced a profile violating u > 0")
    return profile, v0
