import math

import numpy as np
import pytest
from scipy.integrate import quad

from gelfand_disk import model, spectral
from gelfand_disk.fd import central_derivatives
from gelfand_disk.mesh import assemble_forms
from gelfand_disk.model import DomainError, Nonlinearity


# ------------------------------------------------------------- closed forms

def test_nu1_closed_form_values():
    assert spectral.nu1_closed_form_exp(2.0) == 0.0
    assert spectral.nu1_closed_form_exp(1.0) == -0.5
    assert spectral.nu1_closed_form_exp(0.5) == -0.75
    with pytest.raises(DomainError):
        spectral.nu1_closed_form_exp(2.5)


@pytest.mark.parametrize("lam,expected", [(1.0, -0.5), (1.5, -0.25)])
def test_nu1_numeric_headline(lam, expected, mesh4096):
    assert spectral.nu1(lam, mesh=mesh4096) == pytest.approx(expected, abs=1e-4)


def test_nu1_oracle_grid(mesh4096):
    for lam in (0.25, 0.5, 1.9):
        val = spectral.nu1(lam, mesh=mesh4096)
        assert val == pytest.approx((lam - 2) / 2, abs=1e-4)


def test_nu1_none_when_not_negative(mesh1024):
    # zero linearisation potential: the infimum is 0 and not attained
    flat = Nonlinearity("flat", lambda lam, s: 1.0 + 0.0 * s,
                        lambda lam, s: 0.0 * s, (0.0, 2.0))
    out = spectral.nu1(1.0, flat, mesh1024, profile=lambda r: 0.0 * r)
    assert out is None


def test_nu1_morse_precondition_violation(mesh1024):
    # a large constant potential produces several negative eigenvalues
    deep = Nonlinearity("deep", lambda lam, s: 500.0 + 0.0 * s,
                        lambda lam, s: 500.0 + 0.0 * s, (0.0, 2.0))
    with pytest.raises(spectral.MorseIndexError):
        spectral.nu1(1.0, deep, mesh1024, profile=lambda r: 0.0 * r)


# ------------------------------------------------------------ eigenfunction

def test_eigenfunction_boundary_values():
    for lam in (0.5, 1.0, 1.5):
        assert spectral.eigenfunction_exp(lam, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert spectral.eigenfunction_exp(lam, 0.0) == 0.0
        r = np.linspace(1e-6, 1 - 1e-6, 500)
        assert np.all(spectral.eigenfunction_exp(lam, r) > 0)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
def test_eigenfunction_ode_residual(lam):
    _, dminus = model.delta_pm(lam)
    psi = lambda r: spectral.eigenfunction_exp(lam, r)
    r = np.concatenate([np.geomspace(1e-3, 0.5, 1500),
                        np.linspace(0.5, 1 - 1e-3, 1500)])
    h = 1e-2 * np.minimum(r, 1 - r)
    d1, d2 = central_derivatives(psi, r, h)
    q = 8 * dminus / (dminus + r * r) ** 2
    nu = spectral.nu1_closed_form_exp(lam)
    res = -d2 - d1 / r - q * psi(r) - nu / r ** 2 * psi(r)
    assert np.abs(res).max() < 1e-6


@pytest.mark.parametrize("lam,slope", [(1.0, math.sqrt(0.5)), (1.5, 0.5)])
def test_eigenfunction_decay_exponent(lam, slope):
    r = np.geomspace(1e-6, 1e-3, 80)
    fitted = spectral.decay_exponent(r, spectral.eigenfunction_exp(lam, r))
    assert fitted == pytest.approx(slope, rel=0.01)
    assert slope == pytest.approx(math.sqrt(4 - 2 * lam) / 2)


def test_decay_exponent_rejects_constant():
    r = np.geomspace(1e-6, 1e-2, 50)
    with pytest.raises(ValueError):
        spectral.decay_exponent(r, np.ones_like(r))


def test_decay_exponent_needs_range():
    r = np.geomspace(1e-3, 2e-3, 20)
    with pytest.raises(ValueError):
        spectral.decay_exponent(r, r ** 0.7)


def test_variational_upper_bound(mesh4096):
    # the interpolated closed form is admissible: quotient >= discrete min,
    # and nearly optimal
    lam = 1.0
    A, B, _ = assemble_forms(mesh4096, spectral.exp_potential(lam))
    x = spectral.eigenfunction_exp(lam, mesh4096.nodes[:-1])
    quotient = (x @ (A @ x)) / (x @ (B @ x))
    nu_disc = spectral.lowest_eigs(lam, mesh=mesh4096, count=1).eigenvalues[0]
    assert quotient >= nu_disc - 1e-13
    assert quotient - nu_disc < 1e-5


# ----------------------------------------------------------------- legendre

def test_legendre_gamma_identity():
    for lam in (0.25, 0.5, 1.0, 1.5, 1.9):
        g = spectral.legendre_gamma(lam)
        assert g < 0
        assert g * g == pytest.approx(-spectral.nu1_closed_form_exp(lam), abs=1e-12)
    assert spectral.legendre_gamma(1.0) == pytest.approx(-math.sqrt(0.5), abs=1e-14)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
def test_legendre_equation_residual(lam):
    assert spectral.legendre_check(lam) <= 1e-8


def test_legendre_boundary_zero():
    # the factor (xi - gamma) vanishes at the mapped inner boundary
    lam = 0.7
    g = spectral.legendre_gamma(lam)
    R = ((1 + g) / (1 - g)) ** (g / 2) * (g - g)
    assert R == 0.0


def test_legendre_image_matches_eigenfunction():
    # R(xi(r)) is proportional to psi(r): constant ratio over a radius grid
    lam = 1.2
    _, d = model.delta_pm(lam)
    g = spectral.legendre_gamma(lam)
    r = np.linspace(0.05, 0.95, 60)
    xi = (d - r * r) / (d + r * r)
    R = ((1 + xi) / (1 - xi)) ** (g / 2) * (xi - g)
    ratio = R / spectral.eigenfunction_exp(lam, r)
    assert np.ptp(ratio) / np.abs(ratio).mean() < 1e-12


# ------------------------------------------------------------------ annulus

def test_annulus_monotone_and_convergent():
    lam = 1.0
    vals = []
    for eps in (1e-2, 1e-4, 1e-6):
        res = spectral.annulus_eigs(lam, epsilon=eps, count=2)
        vals.append(res.eigenvalues[0])
        # simple lowest eigenvalue: strict gap to the second
        assert res.eigenvalues[1] - res.eigenvalues[0] > 0
        # first eigenfunction one-signed inside the annulus
        interior = res.eigenfunctions[1:-1, 0]
        assert np.all(interior > 0)
    assert vals[0] >= vals[1] >= vals[2]
    assert vals[2] == pytest.approx(-0.5, abs=1e-3)


def test_annulus_extrapolation(mesh4096):
    lam = 1.0
    eps = [1e-2, 1e-4, 1e-6]
    vals = [spectral.annulus_eigs(lam, epsilon=e).eigenvalues[0] for e in eps]
    extrap = spectral.richardson_log_extrapolate(eps, vals)
    direct = spectral.nu1(lam, mesh=mesh4096)
    assert extrap == pytest.approx(direct, abs=1e-3)


def test_annulus_orthogonality_and_signs():
    res = spectral.annulus_eigs(1.0, epsilon=1e-4, count=3)
    A, B, _ = assemble_forms(res.mesh, spectral.exp_potential(1.0),
                             dirichlet_left=True)
    V = res.eigenfunctions[1:-1, :]
    gram = V.T @ (B @ V)
    off = gram - np.diag(np.diag(gram))
    rel = np.abs(off).max() / np.abs(np.diag(gram)).min()
    assert rel < 1e-8


def test_annulus_epsilon_domain():
    with pytest.raises(DomainError):
        spectral.annulus_eigs(1.0, epsilon=0.5)
    with pytest.raises(DomainError):
        spectral.annulus_eigs(1.0, epsilon=1e-4, count=0)


# ------------------------------------------------- unattained-infimum family

def test_p1_quotient_positive_decreasing():
    qs = [spectral.p1_quotient(e) for e in (1e-2, 1e-3, 1e-4)]
    assert all(q > 0 for q in qs)
    assert qs[0] > qs[1] > qs[2] > 0


def test_p1_quotient_against_quadrature():
    # independent oracle: numeric quadrature of the piecewise test field
    for eps in (1e-2, 1e-3):
        def grad2(r):
            if r < eps / 2:
                return 0.0
            if r < eps:
                return (2 * (1 - eps) / eps) ** 2 * r
            return r

        def eta(r):
            if r < eps / 2:
                return 0.0
            if r < eps:
                return 2 * (1 - eps) / eps * r + eps - 1
            return 1 - r

        num = quad(grad2, 0, 1, points=[eps / 2, eps], limit=200)[0]
        den = quad(lambda r: eta(r) ** 2 / r, eps / 4, 1,
                   points=[eps / 2, eps], limit=200)[0]
        assert spectral.p1_quotient(eps) == pytest.approx(num / den, rel=1e-9)


def test_p1_quotient_log_rate():
    v5 = spectral.p1_quotient(1e-5) * math.log(1e5)
    v6 = spectral.p1_quotient(1e-6) * math.log(1e6)
    assert abs(v6 - v5) / v6 < 0.05          # < 5% drift per decade
    # limit constant from the exact piecewise integration
    v12 = spectral.p1_quotient(1e-12) * math.log(1e12)
    assert v12 == pytest.approx(spectral.P1_QUOTIENT_LOG_LIMIT, rel=0.05)


def test_p1_quotient_domain():
    with pytest.raises(DomainError):
        spectral.p1_quotient(0.7)


# ----------------------------------------------------------------- numerics

def test_discrete_eigenfunction_decay(mesh4096):
    lam = 1.0
    res = spectral.lowest_eigs(lam, mesh=mesh4096, count=1)
    nodes = mesh4096.nodes
    sel = (nodes >= 1e-6) & (nodes <= 1e-3)
    slope = spectral.decay_exponent(nodes[sel], res.eigenfunctions[sel, 0])
    assert slope == pytest.approx(math.sqrt(0.5), rel=0.01)


def test_simplicity_gap_on_grid(mesh1024):
    for lam in np.linspace(0.1, 1.9, 7):
        res = spectral.lowest_eigs(lam, mesh=mesh1024, count=2)
        lam1, lam2 = res.eigenvalues
        assert lam2 >= -1e-3                      # only one negative eigenvalue
        assert lam2 - lam1 >= 0.05 - 1e-3         # gap at least |nu1|
        assert np.all(res.eigenfunctions[:-1, 0] > 0)   # positivity


def test_weighted_spectral_problem_container():
    prob = spectral.WeightedSpectralProblem(spectral.exp_potential(1.0),
                                            epsilon=1e-4)
    assert prob.epsilon == 1e-4
    with pytest.raises(DomainError):
        spectral.WeightedSpectralProblem(spectral.exp_potential(1.0),
                                         epsilon=0.5)


def test_nu1_general_nonlinearity_shooting_pipeline(mesh1024):
    # f(lam, s) = 2 lam e^s is the exponential problem at load 2 lam, so
    # nu1 must equal (2 lam - 2)/2 = lam - 1: an end-to-end oracle for the
    # shooting -> potential -> eigensolve path
    from gelfand_disk import model

    doubled = Nonlinearity("doubled-exponential",
                           lambda lam, s: 2.0 * lam * np.exp(s),
                           lambda lam, s: 2.0 * lam * np.exp(s),
                           lambda_range=(0.0, 1.0))
    lam = 0.6
    _, delta = model.delta_pm(2 * lam)
    v0_exact = np.log(8 / (2 * lam * delta))
    profile, _ = model.solve_autonomous(doubled, lam,
                                        (v0_exact - 0.5, v0_exact + 0.5))
    val = spectral.nu1(lam, doubled, mesh1024, profile=profile)
    assert val == pytest.approx(lam - 1.0, abs=2e-4)


def test_nu1_thread_safe(mesh1024):
    # pure functions over immutable meshes: parallel sweeps match sequential
    from concurrent.futures import ThreadPoolExecutor

    lams = [0.3, 0.7, 1.1, 1.5, 1.8]
    sequential = [spectral.nu1(l, mesh=mesh1024) for l in lams]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(lambda l: spectral.nu1(l, mesh=mesh1024), lams))
    assert parallel == sequential
