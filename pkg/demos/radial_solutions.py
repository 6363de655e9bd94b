"""The two radial solution branches and their closed forms.

For every load lambda in (0, 2) the problem has exactly two radial
solutions, a minimal one and one that blows up at the origin as the load
tends to zero; at lambda = 2 they merge into a single critical solution.
This script prints the branch data for a few loads, checks the boundary
identity 8 d = lam (d+1)^2 that pins the scale parameter, and plots the
profiles.
"""

import pathlib

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from gelfand_disk import Branch, ProblemParams, conservation, delta_pm, exponential_solution

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

alpha = 2.0
print(f"alpha = {alpha}: radial branches of the weighted problem\n")
print(f"{'lambda':>8} {'mu':>6} {'branch':>8} {'delta':>12} {'u(0)':>9} "
      f"{'mass':>10} {'identity':>10}")
for lam in (0.25, 1.0, 1.75):
    params = ProblemParams.from_lambda(lam, alpha)
    for branch in (Branch.MINIMAL, Branch.BLOWUP):
        sol = exponential_solution(params, branch)
        identity = abs(8 * sol.delta - lam * (sol.delta + 1) ** 2)
        mass = conservation.mass(sol.profile, alpha, params.mu)
        print(f"{lam:8.2f} {params.mu:6.2f} {branch.value:>8} {sol.delta:12.6f} "
              f"{sol.profile(0.0):9.4f} {mass:10.5f} {identity:10.1e}")

print("\nAs lambda -> 0 the blow-up branch concentrates: delta_minus(0.01) ="
      f" {delta_pm(0.01)[1]:.3e}")
print("At lambda = 2 both branches meet at delta = 1 (critical solution).")

fig, ax = plt.subplots(figsize=(6, 4))
r = np.linspace(0, 1, 300)
for lam, color in ((0.25, "C0"), (1.0, "C1"), (1.75, "C2")):
    params = ProblemParams.from_lambda(lam, alpha)
    for branch, ls in ((Branch.MINIMAL, "--"), (Branch.BLOWUP, "-")):
        sol = exponential_solution(params, branch)
        ax.plot(r, sol.profile(r), ls, color=color,
                label=f"lambda={lam} {branch.value}")
ax.set_xlabel("r")
ax.set_ylabel("u(r)")
ax.legend(fontsize=8)
ax.set_title(f"radial solutions, alpha={alpha}")
fig.tight_layout()
fig.savefig(OUT / "radial_branches.svg")
print(f"\nwrote {OUT / 'radial_branches.svg'}")
