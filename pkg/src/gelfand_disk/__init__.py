"""Numerics for the weighted Gelfand problem on the unit disk.

Radial closed forms and shooting for -Lap u = ((2+a)/2)^2 |x|^a f(lam, u),
the singular weighted Rayleigh-quotient spectrum driving degeneracy and
Morse-index formulas, pseudo-arclength continuation of symmetry-breaking
branches of -Lap u = mu |x|^a e^u, Pohozaev mass bounds, and the
entire-plane linearised kernel.
"""

from . import bifurcation, conservation, disk, fd, mesh, model, morse, plane, spectral
from .bifurcation import (
    BifurcationPoint,
    BranchResult,
    BranchState,
    ContinuationControls,
    DegeneracyCurve,
    F_k,
    assemble_disk_residual,
    branch_diagnostics,
    continue_branch,
    count_j,
    detect_degeneracy,
    lambda_k_exp,
    mu_k_exp,
    trace_gamma_k,
)
from .conservation import (
    MassBoundError,
    MassReport,
    bounds_check,
    check_mass_bounds,
    closed_form_mass,
    mass,
    mass_bounds,
    pohozaev_residual,
)
from .disk import FourierDiskOperator
from .mesh import RadialMesh, assemble_forms, build_mesh, default_mesh
from .model import (
    EXPONENTIAL,
    Branch,
    DomainError,
    Nonlinearity,
    ProblemParams,
    RadialSolution,
    ShootingError,
    delta_pm,
    eval_radial,
    exponential_solution,
    lambda_of_mu,
    mu_of_lambda,
    solve_autonomous,
    transform_to_weighted,
)
from .morse import (
    MorseReport,
    morse_index_direct,
    morse_index_exp,
    morse_index_formula,
    plane_morse,
)
from .plane import (
    PlaneKernel,
    kernel_basis,
    mode_shoot,
    plane_mass,
    plane_negative_modes,
    plane_solution,
)
from .spectral import (
    EigensolverError,
    MorseIndexError,
    SpectralResult,
    WeightedSpectralProblem,
    annulus_eigs,
    decay_exponent,
    eigenfunction_exp,
    legendre_check,
    nu1,
    nu1_closed_form_exp,
    p1_quotient,
)

__version__ = "0.1.0"
