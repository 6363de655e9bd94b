"""The singular weighted eigenvalue nu1(lambda) and its closed form.

The least value of the Rayleigh quotient with denominator weight r^-2,
taken at the Morse-index-1 radial solution, equals (lambda-2)/2 for the
exponential nonlinearity.  The discrete minimiser reproduces it to a few
parts in a million; the annulus truncations converge monotonically from
above; and the explicit cutoff family shows how the quotient infimum can
be zero without a minimiser (it decays like 1/log(1/eps)).
"""

import pathlib

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from gelfand_disk import annulus_eigs, build_mesh, eigenfunction_exp, nu1, p1_quotient, spectral

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

mesh = build_mesh(4096, "composite")
print("nu1(lambda) by Rayleigh-quotient minimisation (n = 4096)\n")
print(f"{'lambda':>8} {'numeric':>14} {'(lambda-2)/2':>14} {'error':>10}")
lams = np.linspace(0.1, 1.9, 10)
errs = []
for lam in lams:
    v = nu1(lam, mesh=mesh)
    errs.append(abs(v - (lam - 2) / 2))
    print(f"{lam:8.2f} {v:14.8f} {(lam - 2) / 2:14.8f} {errs[-1]:10.2e}")
print(f"\nmax error {max(errs):.2e}")

print("\nannulus truncation at lambda = 1 (Dirichlet at both ends):")
for eps in (1e-2, 1e-4, 1e-6):
    res = annulus_eigs(1.0, epsilon=eps, count=2)
    print(f"  eps={eps:8.0e}: L1={res.eigenvalues[0]:+.7f} "
          f"L2={res.eigenvalues[1]:+.5f}")
print("  L1 decreases toward nu1(1) = -0.5 as the inner radius shrinks.")

print("\ncutoff family quotient (infimum 0, never attained):")
for eps in (1e-2, 1e-4, 1e-6):
    q = p1_quotient(eps)
    print(f"  eps={eps:8.0e}: q={q:.6f}  q*log(1/eps)={q * np.log(1 / eps):.4f}")
print(f"  q*log(1/eps) tends to {spectral.P1_QUOTIENT_LOG_LIMIT}.")

fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
r = np.linspace(0, 1, 400)
for lam in (0.5, 1.0, 1.5):
    axes[0].plot(r, eigenfunction_exp(lam, r), label=f"lambda={lam}")
axes[0].set_xlabel("r")
axes[0].set_title("quotient minimisers")
axes[0].legend(fontsize=8)
rr = np.geomspace(1e-6, 1e-1, 200)
for lam in (0.5, 1.0, 1.5):
    axes[1].loglog(rr, eigenfunction_exp(lam, rr),
                   label=f"slope {np.sqrt(4 - 2 * lam) / 2:.3f}")
axes[1].set_xlabel("r")
axes[1].set_title("decay exponents at the origin")
axes[1].legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "spectral_oracle.svg")
print(f"\nwrote {OUT / 'spectral_oracle.svg'}")
