import math

import numpy as np
import pytest

from gelfand_disk import bifurcation as bif, conservation as cons, model, spectral
from gelfand_disk.disk import FourierDiskOperator
from gelfand_disk.model import Branch, DomainError


# ------------------------------------------------------- degeneracy algebra

def test_F_k_root_example():
    val = bif.F_k(1.5, 2.0, 1, bif.closed_form_nu1_provider)
    assert val == pytest.approx(0.0, abs=1e-15)


def test_F_k_increasing_in_lambda():
    lams = np.linspace(0.1, 1.9, 30)
    vals = [bif.F_k(l, 3.0, 2, bif.closed_form_nu1_provider) for l in lams]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_F_k_large_k_positive():
    assert bif.F_k(0.1, 2.0, 50, bif.closed_form_nu1_provider) > 100


def test_lambda_k_values():
    assert bif.lambda_k_exp(2.0, 1) == pytest.approx(1.5)
    assert bif.lambda_k_exp(4.0, 2) == pytest.approx(10.0 / 9.0)
    assert bif.lambda_k_exp(2.0, 2) == pytest.approx(0.0, abs=1e-15)  # out of range


def test_mu_k_and_count():
    assert bif.mu_k_exp(2.0, 1) == pytest.approx(6.0)
    assert bif.count_j(2.0) == 1
    assert bif.count_j(5.0) == 3
    assert bif.mu_k_exp(5.0, 3) == pytest.approx(6.5)
    with pytest.raises(DomainError):
        bif.count_j(0.0)


def test_j_count_parity_table():
    expected = {1: 1, 2: 1, 3: 2, 4: 2, 5: 3, 6: 3, 7: 4, 8: 4, 9: 5, 10: 5}
    for alpha, j in expected.items():
        assert bif.count_j(float(alpha)) == j, alpha
        # mu_k positive exactly for k <= j
        for k in range(1, j + 1):
            assert bif.mu_k_exp(float(alpha), k) > 0
        assert bif.mu_k_exp(float(alpha), j + 1) <= 0


def test_mu_lambda_consistency():
    for alpha in (2.0, 4.0, 5.0, 8.0):
        for k in range(1, bif.count_j(alpha) + 1):
            lam_k = bif.lambda_k_exp(alpha, k)
            assert bif.mu_k_exp(alpha, k) \
                == pytest.approx(model.mu_of_lambda(lam_k, alpha), rel=1e-14)


def test_detect_degeneracy_closed_form():
    roots = bif.detect_degeneracy((0.1, 1.9), 2.0, 1, bif.closed_form_nu1_provider)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(1.5, abs=1e-8)
    assert abs(bif.F_k(roots[0], 2.0, 1, bif.closed_form_nu1_provider)) <= 1e-8


def test_detect_degeneracy_no_root():
    # F_3 = (lam-2)/2 + 9/4 >= 1.3 on the range: no sign change
    roots = bif.detect_degeneracy((0.1, 1.9), 2.0, 3, bif.closed_form_nu1_provider)
    assert roots == []


def test_detect_degeneracy_numeric_provider(mesh1024):
    provider = bif.make_numeric_nu1_provider(mesh=mesh1024)
    roots = bif.detect_degeneracy((1.3, 1.7), 2.0, 1, provider, scan_points=5)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(1.5, abs=1e-3)


def test_trace_gamma_closed_form():
    curve = bif.trace_gamma_k(1, [2.0, 4.0, 9.0], bif.closed_form_nu1_provider)
    assert curve.k == 1
    for lam, alpha in curve.samples:
        assert alpha == pytest.approx(bif.gamma_k_alpha_of_lambda_exp(lam, 1),
                                      rel=1e-8)
    lams = [lam for lam, _ in curve.samples]
    alphas = [a for _, a in curve.samples]
    assert all(b > a for a, b in zip(lams, lams[1:]))   # alpha up => lambda up
    assert (1.5, 2.0) == pytest.approx(curve.samples[0])


def test_gamma_k_two_parametrisations_agree():
    for lam in (0.5, 1.0, 1.5):
        nu = spectral.nu1_closed_form_exp(lam)
        assert bif.gamma_k_alpha_of_lambda_exp(lam, 2) \
            == pytest.approx(bif.gamma_k_alpha_of_nu1(nu, 2), rel=1e-14)


def test_gamma_k_alpha_grows_to_infinity():
    alphas = [bif.gamma_k_alpha_of_lambda_exp(l, 1) for l in (1.9, 1.99, 1.999)]
    assert alphas[0] < alphas[1] < alphas[2]


def test_exchange_of_stability_across_lambda_k():
    # mode-k least eigenvalue L(k) = k^2 + (2+a)^2 nu1/4 flips sign at lam_k
    alpha, k = 4.0, 2
    lam_k = bif.lambda_k_exp(alpha, k)
    for lam, sign in ((lam_k - 0.1, -1), (lam_k + 0.1, +1)):
        L = k * k + 0.25 * (2 + alpha) ** 2 * spectral.nu1_closed_form_exp(lam)
        assert math.copysign(1, L) == sign


def test_degenerate_eigenfunction_solves_linearisation():
    # -phi'' - phi'/r + k^2 phi/r^2 = mu_k r^a e^u phi at the bifurcation point
    from gelfand_disk.fd import central_derivatives
    for alpha, k in ((2.0, 1), (5.0, 2)):
        mu_k = bif.mu_k_exp(alpha, k)
        params = model.ProblemParams.from_mu(mu_k, alpha)
        u = model.exponential_solution(params, Branch.BLOWUP).profile
        phi = lambda r: bif.degenerate_eigenfunction_exp(alpha, k, r)
        r = np.linspace(0.05, 0.95, 400)
        d1, d2 = central_derivatives(phi, r, 1e-3)
        res = -d2 - d1 / r + k * k * phi(r) / r ** 2 \
            - mu_k * r ** alpha * np.exp(u(r)) * phi(r)
        assert np.abs(res).max() < 1e-7


def test_degenerate_eigenfunction_is_transformed_minimiser():
    alpha, k = 2.0, 1
    lam_k = bif.lambda_k_exp(alpha, k)
    r = np.linspace(0.05, 0.95, 50)
    phi = bif.degenerate_eigenfunction_exp(alpha, k, r)
    psi = spectral.eigenfunction_exp(lam_k, r ** ((2 + alpha) / 2))
    ratio = phi / psi
    assert np.ptp(ratio) / np.abs(ratio).mean() < 1e-12


def test_degenerate_eigenfunction_domain():
    with pytest.raises(DomainError):
        bif.degenerate_eigenfunction_exp(2.0, 2, np.array([0.5]))


# ------------------------------------------------------------ disk operator

def test_embedded_radial_residual():
    op = FourierDiskOperator(2.0, 1, n_r=1024, n_modes=8)
    params = model.ProblemParams.from_mu(6.0, 2.0)
    radial = model.exponential_solution(params, Branch.BLOWUP)
    coeffs = op.embed_radial(radial.profile)
    assert np.abs(op.residual(coeffs, 6.0)).max() <= 1e-8


def test_zero_state_zero_load():
    op = FourierDiskOperator(2.0, 1, n_r=64, n_modes=4)
    coeffs = np.zeros((5, 64))
    assert np.abs(op.residual(coeffs, 0.0)).max() == 0.0


def test_residual_shape_mismatch():
    op = FourierDiskOperator(2.0, 1, n_r=64, n_modes=4)
    with pytest.raises(ValueError):
        op.residual(np.zeros((3, 64)), 1.0)


def _banded_to_dense(band, ab):
    l, u = band
    N = ab.shape[1]
    J = np.zeros((N, N))
    for i in range(N):
        for j in range(max(0, i - l), min(N, i + u + 1)):
            J[i, j] = ab[u + i - j, j]
    return J


def test_jacobian_matches_finite_differences():
    op = FourierDiskOperator(2.0, 1, n_r=96, n_modes=6)
    mu = 4.0
    params = model.ProblemParams.from_mu(mu, 2.0)
    coeffs = op.embed_radial(model.exponential_solution(params, Branch.BLOWUP).profile)
    coeffs[1] = 0.8 * bif.degenerate_eigenfunction_exp(2.0, 1, op.r)
    coeffs[2] = 0.2 * op.r ** 2 * np.sin(np.pi * op.r)
    rng = np.random.default_rng(0)
    d = rng.standard_normal(coeffs.shape)
    d /= np.abs(d).max()
    J = _banded_to_dense(*op.jacobian_banded(coeffs, mu))
    Jd = (J @ d.T.reshape(-1)).reshape(op.n, op.M + 1).T
    scale = np.abs(Jd).max()
    errs = {}
    for h in (1e-2, 1e-3, 1e-4, 1e-5):
        fd = (op.residual(coeffs + h * d, mu) - op.residual(coeffs - h * d, mu)) / (2 * h)
        errs[h] = np.abs(fd - Jd).max()
    # truncation-dominated range shows the O(h^2) slope
    slope = math.log(errs[1e-2] / errs[1e-3]) / math.log(10.0)
    assert 1.9 <= slope <= 2.1
    # agreement at the small steps (roundoff floor included)
    for h in (1e-3, 1e-4, 1e-5):
        assert errs[h] <= 1e-9 * scale


def test_mass_of_embedded_blowup():
    op = FourierDiskOperator(2.0, 1, n_r=256, n_modes=8)
    params = model.ProblemParams.from_mu(6.0, 2.0)
    coeffs = op.embed_radial(model.exponential_solution(params, Branch.BLOWUP).profile)
    assert op.mass(coeffs, 6.0) == pytest.approx(12 * math.pi, rel=1e-6)


def test_mode0_state_has_zero_amplitude():
    op = FourierDiskOperator(2.0, 1, n_r=64, n_modes=4)
    params = model.ProblemParams.from_mu(6.0, 2.0)
    coeffs = op.embed_radial(model.exponential_solution(params, Branch.BLOWUP).profile)
    assert op.nonradial_amplitude(coeffs) == 0.0


# ------------------------------------------------------------- continuation

def test_branch_departs_with_mode_k_amplitude(branch_k1_alpha2):
    first = branch_k1_alpha2.states[0]
    assert first.diagnostics.nonradial_amplitude > 0
    assert first.mu == pytest.approx(6.0, abs=0.05)


def test_branch_newton_residuals(branch_k1_alpha2):
    assert all(s.newton_residual <= 1e-10 for s in branch_k1_alpha2.states)


def test_branch_reaches_low_mu(branch_k1_alpha2):
    assert branch_k1_alpha2.termination == "mu_stop"
    assert branch_k1_alpha2.states[-1].mu <= 0.6
    tail = [s.diagnostics.max_u for s in branch_k1_alpha2.states[-11:]]
    assert all(b > a for a, b in zip(tail, tail[1:]))


def test_branch_symmetry(branch_k1_alpha2):
    # v(r, theta) = v(r, theta + 2 pi / k) at collocation radii
    run = branch_k1_alpha2
    op = run.operator
    state = run.states[-1]
    k = op.k
    thetas = np.linspace(0.0, 2 * math.pi, 13)
    modes = op.modes
    for theta0 in (0.0, 0.7):
        u1 = sum(state.coeffs[j][:, None] * np.cos(m * (thetas + theta0))
                 for j, m in enumerate(modes))
        u2 = sum(state.coeffs[j][:, None] * np.cos(m * (thetas + theta0 + 2 * math.pi / k))
                 for j, m in enumerate(modes))
        assert np.abs(np.asarray(u1) - np.asarray(u2)).max() <= 1e-12


def test_branch_positivity_and_mass_bounds(branch_k1_alpha2):
    for s in branch_k1_alpha2.states:
        d = s.diagnostics
        assert d.positive
        report = cons.check_mass_bounds(d.mass, 2.0, s.mu)
        # strictly inside the bounds; the margin opens up with the amplitude
        assert report.margin > 0
        if d.nonradial_amplitude > 0.5:
            assert report.margin > 1e-3 * report.upper


def test_branch_residual_via_module_function(branch_k1_alpha2):
    run = branch_k1_alpha2
    start = bif.BifurcationPoint.exponential(2.0, 1)
    res = bif.assemble_disk_residual(run.states[3], start, operator=run.operator)
    assert np.abs(res).max() <= 1e-10


def test_branch_diagnostics_function(branch_k1_alpha2):
    run = branch_k1_alpha2
    d = bif.branch_diagnostics(run.states[-1], run.operator)
    assert d.max_u == run.states[-1].diagnostics.max_u


def test_branches_separated_by_symmetry_class():
    # at alpha=5 the k=2 branch keeps the half-turn symmetry, k=1 does not
    states = {}
    for k in (1, 2):
        start = bif.BifurcationPoint.exponential(5.0, k)
        ctl = bif.ContinuationControls(mu_stop=0.9 * start.mu, max_steps=6,
                                       n_r=128, n_modes=6)
        run = bif.continue_branch(start, controls=ctl)
        assert run.states
        states[k] = (run.operator, run.states[-1])
    thetas = np.linspace(0.0, 2 * math.pi, 29)

    def half_turn_gap(op, state):
        modes = op.modes
        u1 = sum(state.coeffs[j][:, None] * np.cos(m * thetas)
                 for j, m in enumerate(modes))
        u2 = sum(state.coeffs[j][:, None] * np.cos(m * (thetas + math.pi))
                 for j, m in enumerate(modes))
        return np.abs(np.asarray(u1) - np.asarray(u2)).max()

    assert half_turn_gap(*states[2]) <= 1e-12
    assert half_turn_gap(*states[1]) > 1e-3


def test_start_point_validation():
    with pytest.raises(DomainError):
        bif.BifurcationPoint.exponential(2.0, 2)   # mu_2 <= 0 at alpha=2


def test_branch_flux_schwarz_strictness(branch_k1_alpha2):
    # boundary flux of a nonradial state is nonconstant: strict inequality
    run = branch_k1_alpha2
    op = run.operator
    first, last = run.states[0], run.states[-1]
    for state, gap in ((first, 1e-10), (last, 1e-3)):
        coeffs = op.boundary_flux_coeffs(state.coeffs)
        quad, lin = cons.boundary_flux_constancy(coeffs)
        assert quad > lin + gap * abs(quad)


def test_branch_even_in_theta(branch_k1_alpha2):
    # the cone lives in the even subspace: v(r, theta) = v(r, -theta)
    run = branch_k1_alpha2
    op = run.operator
    state = run.states[-1]
    thetas = np.linspace(0.1, 3.0, 7)
    up = sum(state.coeffs[j][:, None] * np.cos(m * thetas)
             for j, m in enumerate(op.modes))
    dn = sum(state.coeffs[j][:, None] * np.cos(m * (-thetas))
             for j, m in enumerate(op.modes))
    assert np.abs(np.asarray(up) - np.asarray(dn)).max() == 0.0


def test_branch_u_cap_termination():
    start = bif.BifurcationPoint.exponential(2.0, 1)
    ctl = bif.ContinuationControls(mu_stop=1e-4, u_cap=5.0, max_steps=200,
                                   n_r=96, n_modes=6)
    run = bif.continue_branch(start, controls=ctl)
    assert run.termination == "u_cap"
    assert run.states[-1].diagnostics.max_u >= 5.0


def test_branch_direction_mirror():
    # the two departure directions are rotations of each other: identical
    # diagnostics, odd harmonics negated
    runs = {}
    for direction in (+1, -1):
        start = bif.BifurcationPoint.exponential(2.0, 1)
        ctl = bif.ContinuationControls(mu_stop=5.0, max_steps=12,
                                       n_r=96, n_modes=6)
        runs[direction] = bif.continue_branch(start, direction, controls=ctl)
    a, b = runs[+1].states[-1], runs[-1].states[-1]
    assert a.mu == pytest.approx(b.mu, abs=1e-8)
    assert a.diagnostics.max_u == pytest.approx(b.diagnostics.max_u, abs=1e-8)
    assert np.allclose(a.coeffs[1], -b.coeffs[1], atol=1e-8)
    assert np.allclose(a.coeffs[2], b.coeffs[2], atol=1e-8)


def test_branch_diagnostics_without_operator(branch_k1_alpha2):
    state = branch_k1_alpha2.states[-1]
    assert bif.branch_diagnostics(state) is state.diagnostics


def test_morse_jump_two_at_every_bifurcation_point():
    # crossing any lambda_k changes the radial Morse index by exactly 2
    from gelfand_disk import morse
    for alpha in (2.0, 4.0, 5.0, 8.0):
        for k in range(1, bif.count_j(alpha) + 1):
            lam_k = bif.lambda_k_exp(alpha, k)
            h = 1e-5
            below = morse.morse_index_exp(lam_k - h, alpha)
            above = morse.morse_index_exp(lam_k + h, alpha)
            assert below - above == 2, (alpha, k)


def test_gamma_k_alpha_increases_with_lambda():
    # along gamma_k the relation 2 - lam = 8 k^2/(2+a)^2 couples the
    # parameters monotonically: larger alpha forces lambda toward 2
    lams = np.linspace(0.2, 1.8, 15)
    alphas = [bif.gamma_k_alpha_of_lambda_exp(l, 1) for l in lams]
    assert all(b > a for a, b in zip(alphas, alphas[1:]))
    for l, a in zip(lams, alphas):
        assert abs(bif.F_k(l, a, 1, bif.closed_form_nu1_provider)) <= 1e-12


def test_continuation_control_defaults():
    # the documented defaults: initial step 0.05 adapted within
    # [1e-4, 0.2], amplitude 1e-3 off the radial curve, termination at
    # max_u >= 30 or mu <= 1e-3, Newton tolerance 1e-10
    ctl = bif.ContinuationControls()
    assert (ctl.ds0, ctl.ds_min, ctl.ds_max) == (0.05, 1e-4, 0.2)
    assert ctl.amp0 == 1e-3
    assert ctl.u_cap == 30.0
    assert ctl.mu_stop == 1e-3
    assert ctl.newton_tol == 1e-10
    assert ctl.n_modes == 8
