import pytest

from gelfand_disk import bifurcation, mesh as mesh_mod


@pytest.fixture(scope="session")
def mesh4096():
    return mesh_mod.default_mesh(4096)


@pytest.fixture(scope="session")
def mesh1024():
    return mesh_mod.build_mesh(1024, "composite")


@pytest.fixture(scope="session")
def branch_k1_alpha2():
    """Shared k=1, alpha=2 branch run from mu_1 = 6 down past mu = 0.6."""
    start = bifurcation.BifurcationPoint.exponential(2.0, 1)
    ctl = bifurcation.ContinuationControls(mu_stop=0.55, max_steps=400)
    run = bifurcation.continue_branch(start, controls=ctl)
    assert run.states, "branch continuation produced no states"
    return run
