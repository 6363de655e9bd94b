"""Morse index of the weighted radial solution: closed formula vs counting.

The index is 1 + 2 [ (a+2)/2 sqrt(-nu1) ] when the bracket argument is not
an integer and (a+2) sqrt(-nu1) - 1 when it is.  The independent count
decomposes the linearised operator into angular modes; in autonomous
variables the mode-k least eigenvalue is L(k) = k^2 + (2+a)^2 nu1 / 4, so
one eigensolve (which is alpha-independent) serves every alpha at fixed
lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import model, spectral
from .mesh import RadialMesh, assemble_forms, default_mesh
from .model import EXPONENTIAL, Branch, DomainError, Nonlinearity

#: Exact-integer detection for the formula's piecewise split.
INTEGER_TOL = 1e-9
#: Quarantine band: points this close to the integer case are flagged,
#: since the formula is discontinuous there.
BOUNDARY_BAND = 1e-6


@dataclass(frozen=True)
class MorseReport:
    """Cross-validated Morse index with the per-mode eigenvalue table."""

    m_formula: int
    m_direct: int
    per_mode: list[tuple[int, float, int]]   # (k, least eigenvalue, count)
    boundary_flag: bool
    nu1_numeric: float
    nu1_reference: float


def _formula_argument(alpha: float, nu1_value: float) -> float:
    if nu1_value >= 0:
        raise DomainError(f"Morse formula needs nu1 < 0, got {nu1_value}")
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    return 0.5 * (alpha + 2.0) * math.sqrt(-nu1_value)


def is_boundary_case(alpha: float, nu1_value: float,
                     band: float = BOUNDARY_BAND) -> bool:
    """True when (a+2)/2 sqrt(-nu1) sits within ``band`` of an integer."""
    x = _formula_argument(alpha, nu1_value)
    return abs(x - round(x)) <= band


def morse_index_formula(lam: float, alpha: float, nu1_value: float) -> int:
    """Morse index of the weighted radial solution from nu1.

    ``lam`` is carried for reporting only; the index depends on (alpha,
    nu1).  Exact integers of the argument (tolerance 1e-9) take the
    degenerate-case value (a+2) sqrt(-nu1) - 1.
    """
    x = _formula_argument(alpha, nu1_value)
    if abs(x - round(x)) <= INTEGER_TOL:
        return int(round(2.0 * x)) - 1
    return 1 + 2 * math.floor(x)


def morse_index_exp(lam: float, alpha: float) -> int:
    """The formula specialised to the exponential case, nu1 = (lam-2)/2."""
    return morse_index_formula(lam, alpha, spectral.nu1_closed_form_exp(lam))


def mode_count(k: int) -> int:
    """Angular multiplicity: 1 for the radial mode, 2 for each k >= 1."""
    return 1 if k == 0 else 2


def morse_index_direct(lam: float, alpha: float,
                       nl: Nonlinearity = EXPONENTIAL,
                       mesh: Optional[RadialMesh] = None,
                       k_max: Optional[int] = None,
                       profile=None) -> MorseReport:
    """Morse index by mode-by-mode negative-eigenvalue counting.

    The autonomous eigensolve provides the discrete nu1; the weighted
    mode-k least eigenvalue is L(k) = k^2 + (2+a)^2 nu1 / 4 and each
    negative mode contributes its angular multiplicity.  ``k_max`` must
    cover every contributing mode (default: threshold + 2); an
    insufficient value raises rather than silently truncating.
    """
    nu_num = spectral.nu1(lam, nl, mesh, profile=profile)
    if nu_num is None:
        raise spectral.MorseIndexError(
            "no negative weighted eigenvalue; direct count undefined")
    if nl is EXPONENTIAL:
        nu_ref = spectral.nu1_closed_form_exp(lam)
    else:
        nu_ref = nu_num
    threshold = _formula_argument(alpha, nu_num)
    needed = math.ceil(threshold) + 2
    if k_max is None:
        k_max = needed
    elif k_max < needed:
        raise ValueError(f"k_max={k_max} does not cover the contributing "
                         f"modes (need >= {needed})")
    per_mode: list[tuple[int, float, int]] = []
    m_direct = 0
    for k in range(k_max + 1):
        lam_k = k * k + 0.25 * (2.0 + alpha) ** 2 * nu_num
        neg = lam_k < 0.0
        count = mode_count(k) if neg else 0
        per_mode.append((k, float(lam_k), count))
        m_direct += count
    m_formula = morse_index_formula(lam, alpha, nu_ref)
    return MorseReport(
        m_formula=m_formula,
        m_direct=m_direct,
        per_mode=per_mode,
        boundary_flag=is_boundary_case(alpha, nu_ref),
        nu1_numeric=float(nu_num),
        nu1_reference=float(nu_ref),
    )


def mode_eigenvalue_weighted(lam: float, alpha: float, k: int,
                             mesh: Optional[RadialMesh] = None) -> float:
    """Least mode-k eigenvalue solved directly in the weighted variables.

    Assembles the linearisation around u_{lam,alpha} with potential
    ((2+a)/2)^2 r^a f'(lam, u) plus the angular term k^2 int eta xi / r dr
    and solves the generalized pair against the r^-1 mass.  Cross-checks
    the transform identity L(k) = k^2 + (2+a)^2 nu1/4 on an independent
    discretisation.
    """
    mesh = mesh if mesh is not None else default_mesh()
    params = model.ProblemParams.from_lambda(lam, alpha)
    sol = model.exponential_solution(params, Branch.BLOWUP)
    c = ((2.0 + alpha) / 2.0) ** 2

    def q(r):
        return c * r ** alpha * EXPONENTIAL.fprime(lam, sol.profile(r))

    A, B, _ = assemble_forms(mesh, q)
    A_k = (A + k * k * B).tocsc()
    sigma = min(spectral.DEFAULT_SHIFT, spectral.spectrum_floor(q) - 0.5)
    vals, _ = spectral._solve_pair(A_k, B, 1, sigma)
    return float(vals[0])


def plane_morse(alpha: float) -> int:
    """Morse index of the entire-plane radial solution.

    1 + 2 [ (a+2)/2 ] when (a+2)/2 is not an integer, else 1 + a; the index
    jumps exactly at even integers of alpha.
    """
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    half = 0.5 * (alpha + 2.0)
    if abs(half - round(half)) <= INTEGER_TOL:
        return int(round(alpha)) + 1
    return 1 + 2 * math.floor(half)
