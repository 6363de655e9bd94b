"""Degeneracy curves, bifurcation loads, and nonradial branch continuation.

The radial solution is degenerate at mode k exactly when
F_k(lam) = nu1(lam) + 4 k^2/(2+a)^2 vanishes; for the exponential
nonlinearity the roots are lam_k = 2 - 8 k^2/(a+2)^2, i.e.
mu_k = (2+a)^2/2 - 2 k^2, and there are j of them with
j = 1 + [a/2] (a/2 + nothing when a/2 is an integer).  From each
(mu_k, u_{mu_k,a}) a branch of nonradial solutions departs along the
transformed closed-form eigenfunction; the branch is followed by
pseudo-arclength predictor/corrector steps through folds, entirely inside
the mode-multiples-of-k cosine cone (membership is structural: the
discretisation carries no other modes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from . import model, spectral
from .disk import FourierDiskOperator
from .model import DomainError


# --------------------------------------------------------------- degeneracy

def F_k(lam: float, alpha: float, k: int, nu1_provider: Callable[[float], float]) -> float:
    """Degeneracy function nu1(lam) + 4 k^2 / (2+a)^2; zero <=> mode-k kernel."""
    if k < 1:
        raise DomainError(f"angular mode k must be >= 1, got {k}")
    return nu1_provider(lam) + 4.0 * k * k / (2.0 + alpha) ** 2


def lambda_k_exp(alpha: float, k: int) -> float:
    """Bifurcation load lam_k = 2 - 8 k^2/(a+2)^2 (<= 0 marks out of range)."""
    if k < 1:
        raise DomainError(f"angular mode k must be >= 1, got {k}")
    return 2.0 - 8.0 * k * k / (alpha + 2.0) ** 2


def mu_k_exp(alpha: float, k: int) -> float:
    """Merged-load bifurcation value mu_k = (2+a)^2/2 - 2 k^2."""
    if k < 1:
        raise DomainError(f"angular mode k must be >= 1, got {k}")
    return (2.0 + alpha) ** 2 / 2.0 - 2.0 * k * k


def count_j(alpha: float, tol: float = 1e-12) -> int:
    """Number of bifurcation loads: 1 + [a/2], or a/2 when a/2 is an integer."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    half = 0.5 * alpha
    if abs(half - round(half)) <= tol:
        return int(round(half))
    return 1 + math.floor(half)


def closed_form_nu1_provider(lam: float) -> float:
    return spectral.nu1_closed_form_exp(lam)


def make_numeric_nu1_provider(nl=model.EXPONENTIAL, mesh=None) -> Callable[[float], float]:
    """nu1(lam) via the discrete eigensolve, memoised on lam."""
    cache: dict[float, float] = {}

    def provider(lam: float) -> float:
        if lam not in cache:
            val = spectral.nu1(lam, nl, mesh)
            if val is None:
                raise spectral.EigensolverError(
                    f"no negative weighted eigenvalue at lambda={lam}")
            cache[lam] = val
        return cache[lam]

    return provider


def detect_degeneracy(lambda_range: tuple[float, float], alpha: float, k: int,
                      nu1_provider: Callable[[float], float],
                      scan_points: int = 33, xtol: float = 1e-12) -> list[float]:
    """Roots of F_k on ``lambda_range`` by bracketing plus bisection.

    Returns the (possibly empty) sorted root list; an empty list is not an
    error, it simply means F_k does not change sign on the range.
    """
    lo, hi = lambda_range
    grid = np.linspace(lo, hi, scan_points)
    vals = np.array([F_k(l, alpha, k, nu1_provider) for l in grid])
    roots = []
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(float(grid[i]))
        elif a * b < 0:
            roots.append(float(brentq(
                lambda l: F_k(l, alpha, k, nu1_provider), grid[i], grid[i + 1],
                xtol=xtol, rtol=8.9e-16)))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return sorted(roots)


@dataclass(frozen=True)
class DegeneracyCurve:
    """Sampled curve gamma_k: pairs (lam, alpha) where mode k degenerates."""

    k: int
    samples: list[tuple[float, float]]


def gamma_k_alpha_of_lambda_exp(lam: float, k: int) -> float:
    """Closed-form curve parametrisation a(lam) = 2 k sqrt(2/(2-lam)) - 2."""
    if not (0.0 < lam < 2.0):
        raise DomainError(f"curve needs lambda in (0, 2), got {lam}")
    return 2.0 * k * math.sqrt(2.0 / (2.0 - lam)) - 2.0


def gamma_k_alpha_of_nu1(nu1_value: float, k: int) -> float:
    """Fixed-lam variant a_k = 2 k / sqrt(-nu1) - 2 (same curve)."""
    if nu1_value >= 0:
        raise DomainError("curve parametrisation needs nu1 < 0")
    return 2.0 * k / math.sqrt(-nu1_value) - 2.0


def trace_gamma_k(k: int, alpha_range, nu1_provider: Callable[[float], float],
                  lambda_range: tuple[float, float] = (0.02, 1.98)) -> DegeneracyCurve:
    """Sample gamma_k by solving F_k = 0 in lam for each alpha on a grid."""
    samples = []
    for alpha in np.asarray(alpha_range, dtype=float):
        if alpha <= 0:
            continue
        roots = detect_degeneracy(lambda_range, alpha, k, nu1_provider)
        for lam in roots:
            samples.append((float(lam), float(alpha)))
    return DegeneracyCurve(k, samples)


def degenerate_eigenfunction_exp(alpha: float, k: int, r) -> np.ndarray:
    """Radial factor of the mode-k kernel field at the bifurcation point.

    r^k (2 (2+a)(1 - r^(2(2+a))) + 4 k (1 - r^(2+a))^2)
        / ((2 (2+a)^2 - 8 k^2)(1 - r^(2+a))^2 + 8 (2+a)^2 r^(2+a)),

    the transformed closed-form quotient minimiser at lam_k; multiplies
    cos(k theta) (and sin for the full kernel, outside the even cone).
    """
    if lambda_k_exp(alpha, k) <= 0:
        raise DomainError(f"mode k={k} does not bifurcate at alpha={alpha}")
    r = np.asarray(r, dtype=float)
    rho = r ** (2.0 + alpha)
    a2 = 2.0 + alpha
    num = 2.0 * a2 * (1.0 - rho ** 2) + 4.0 * k * (1.0 - rho) ** 2
    den = (2.0 * a2 ** 2 - 8.0 * k * k) * (1.0 - rho) ** 2 + 8.0 * a2 ** 2 * rho
    return r ** k * num / den


# -------------------------------------------------------------- continuation

@dataclass(frozen=True)
class BifurcationPoint:
    mu: float
    alpha: float
    k: int

    @classmethod
    def exponential(cls, alpha: float, k: int) -> "BifurcationPoint":
        mu = mu_k_exp(alpha, k)
        if mu <= 0:
            raise DomainError(f"mode k={k} has no bifurcation at alpha={alpha}")
        return cls(mu, alpha, k)


@dataclass(frozen=True)
class Diagnostics:
    max_u: float
    nonradial_amplitude: float
    mass: float
    min_u: float = 0.0

    @property
    def positive(self) -> bool:
        """Whether the state stayed inside the u >= 0 solution class."""
        return self.min_u >= -1e-8


@dataclass(frozen=True)
class BranchState:
    """One accepted point on a branch: loads, coefficients, diagnostics."""

    mu: float
    coeffs: np.ndarray = field(repr=False)
    arclength: float
    diagnostics: Diagnostics
    newton_residual: float
    step: int


@dataclass(frozen=True)
class ContinuationControls:
    ds0: float = 0.05
    ds_min: float = 1e-4
    ds_max: float = 0.2
    newton_tol: float = 1e-10
    max_newton: int = 9
    mu_stop: float = 1e-3        # blow-up is diagnosed, never proven
    u_cap: float = 30.0
    max_steps: int = 600
    amp0: float = 1e-3           # first step off the radial curve
    n_r: int = 160
    n_modes: int = 8


@dataclass
class BranchResult:
    states: list[BranchState]
    termination: str              # mu_stop | u_cap | max_steps | newton_failure | boundary:<face>
    folds: list[int]
    operator: FourierDiskOperator

    def __iter__(self):
        return iter(self.states)


def assemble_disk_residual(state: BranchState, params: BifurcationPoint,
                           operator: Optional[FourierDiskOperator] = None,
                           controls: ContinuationControls = ContinuationControls()) -> np.ndarray:
    """Scaled collocation residual of a branch state (shape = coeffs)."""
    op = operator if operator is not None else FourierDiskOperator(
        params.alpha, params.k, controls.n_r, controls.n_modes)
    return op.residual(state.coeffs, state.mu)


def _dot(c1: np.ndarray, mu1: float, c2: np.ndarray, mu2: float) -> float:
    return float(c1.reshape(-1) @ c2.reshape(-1)) / c1.size + mu1 * mu2


def _diagnostics(op: FourierDiskOperator, coeffs: np.ndarray, mu: float) -> Diagnostics:
    return Diagnostics(max_u=op.max_u(coeffs),
                       nonradial_amplitude=op.nonradial_amplitude(coeffs),
                       mass=op.mass(coeffs, mu),
                       min_u=op.min_u(coeffs))


def _newton_corrector(op: FourierDiskOperator, pred_c, pred_mu, t_c, t_mu,
                      tol, max_iter):
    """Newton on [F(c, mu); t.(X - X_pred)] = 0 via bordered banded solves.

    The arclength constraint keeps the iterate in the hyperplane through
    the predictor orthogonal to the tangent.  Returns
    (coeffs, mu, residual_norm, iterations, converged).
    """
    c = pred_c.copy()
    m = pred_mu
    res = math.inf
    for it in range(1, max_iter + 1):
        F_mu = op.residual_mu_derivative(c)
        # J dc_f = -F ; J dc_mu = -F_mu
        F, (dc_f, dc_mu) = op.newton_step(c, m, extra_rhs=-F_mu)
        g = _dot(t_c, 0.0, c - pred_c, 0.0) + t_mu * (m - pred_mu)
        denom = t_mu + _dot(t_c, 0.0, dc_mu, 0.0)
        dmu = (-g - _dot(t_c, 0.0, dc_f, 0.0)) / denom
        c = c + dc_f + dmu * dc_mu
        m = m + dmu
        res = float(np.abs(op.residual(c, m)).max())
        if res <= tol:
            return c, m, res, it, True
    return c, m, res, max_iter, False


def continue_branch(start: BifurcationPoint, direction: int = 1,
                    steps: Optional[int] = None,
                    controls: Optional[ContinuationControls] = None,
                    operator: Optional[FourierDiskOperator] = None) -> BranchResult:
    """Follow the nonradial branch leaving a bifurcation point.

    The first step pins the mode-k amplitude at ``controls.amp0`` along the
    closed-form kernel direction (branch switching); subsequent steps are
    pseudo-arclength predictor/corrector with secant tangents, adaptive
    step length, and fold detection via the sign of the mu tangent
    component.  Stops at mu <= mu_stop, max_u >= u_cap, step budget, or an
    unrecoverable Newton failure (partial branch returned, termination
    string says which).
    """
    ctl = controls or ContinuationControls()
    if steps is not None:
        ctl = replace(ctl, max_steps=steps)
    op = operator or FourierDiskOperator(start.alpha, start.k,
                                         ctl.n_r, ctl.n_modes)
    lam = model.lambda_of_mu(start.mu, start.alpha)
    params = model.ProblemParams.from_lambda(lam, start.alpha)
    radial = model.exponential_solution(params, model.Branch.BLOWUP)
    c0 = op.embed_radial(radial.profile)

    psi = degenerate_eigenfunction_exp(start.alpha, start.k, op.r)
    tdir = np.zeros_like(c0)
    tdir[1] = direction * psi / np.abs(psi).max()
    tnorm = math.sqrt(_dot(tdir, 0.0, tdir, 0.0))
    t_c = tdir / tnorm
    t_mu = 0.0

    states: list[BranchState] = []
    folds: list[int] = []

    # branch switching: pin the kernel amplitude at amp0
    pred = c0 + ctl.amp0 * tdir
    c, mu, res, _, ok = _newton_corrector(
        op, pred, start.mu, t_c, t_mu, ctl.newton_tol, ctl.max_newton + 4)
    if not ok:
        return BranchResult([], "newton_failure", [], op)
    states.append(BranchState(mu, c, 0.0, _diagnostics(op, c, mu), res, 0))

    prev_c, prev_mu = c0, start.mu
    ds = ctl.ds0
    s_total = 0.0
    termination = "max_steps"
    step = 0
    while step < ctl.max_steps:
        step += 1
        # secant tangent
        dc = states[-1].coeffs - prev_c
        dmu = states[-1].mu - prev_mu
        norm = math.sqrt(_dot(dc, dmu, dc, dmu))
        t_c, t_mu = dc / norm, dmu / norm
        accepted = False
        while not accepted:
            pred_c = states[-1].coeffs + ds * t_c
            pred_mu = states[-1].mu + ds * t_mu
            c, mu, res, iters, ok = _newton_corrector(
                op, pred_c, pred_mu, t_c, t_mu, ctl.newton_tol, ctl.max_newton)
            if ok:
                accepted = True
            elif ds > ctl.ds_min:
                ds = max(0.5 * ds, ctl.ds_min)
            else:
                return BranchResult(states, "newton_failure", folds, op)
        prev_c, prev_mu = states[-1].coeffs, states[-1].mu
        s_total += ds
        states.append(BranchState(mu, c, s_total, _diagnostics(op, c, mu), res, step))
        if len(states) >= 3:
            dmu_prev = states[-2].mu - states[-3].mu
            dmu_new = states[-1].mu - states[-2].mu
            if dmu_prev * dmu_new < 0:
                folds.append(step)
        if iters <= 3:
            ds = min(1.4 * ds, ctl.ds_max)
        elif iters >= ctl.max_newton - 1:
            ds = max(0.6 * ds, ctl.ds_min)
        if mu <= ctl.mu_stop:
            termination = "mu_stop"
            break
        if states[-1].diagnostics.max_u >= ctl.u_cap:
            termination = "u_cap"
            break
        if mu <= 0.0:
            termination = "boundary:mu=0"
            break
        if mu >= (2.0 + start.alpha) ** 2 / 2.0:
            termination = "boundary:mu=fold"
            break
    return BranchResult(states, termination, folds, op)


def branch_diagnostics(state: BranchState,
                       operator: Optional[FourierDiskOperator] = None) -> Diagnostics:
    """(max_u, nonradial amplitude, mass) of a branch state.

    States carry the diagnostics computed at acceptance time; pass the
    operator to recompute them on its grid instead.
    """
    if operator is None:
        return state.diagnostics
    return _diagnostics(operator, state.coeffs, state.mu)
