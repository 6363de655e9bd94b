"""Entire-plane radial solutions and the kernel-dimension dichotomy.

The linearisation at the plane solution always contains the dilation
field (1 - r^(2+a))/(1 + r^(2+a)); two extra angular fields appear
exactly when alpha is an even integer, which is also where the plane
Morse index jumps.  A shooting integration of the transformed mode
equation confirms the algebraic admissibility rule 4 m^2/(2+a)^2 in {0, 1}.
"""

import numpy as np

from gelfand_disk import kernel_basis, mode_shoot, morse, plane

print("kernel dimension and Morse index across alpha:\n")
print(f"{'alpha':>6} {'dim':>4} {'modes':>8} {'morse':>6} {'neg modes':>20}")
for alpha in (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0):
    kb = kernel_basis(alpha)
    negs = plane.plane_negative_modes(alpha)
    print(f"{alpha:6.1f} {kb.dimension:4d} "
          f"{' '.join(str(el.mode) for el in kb.basis):>8} "
          f"{morse.plane_morse(alpha):6d} "
          f"{str([m for m, _ in negs]):>20}")

print("\nmode admissibility by shooting (alpha = 2):")
for m in range(4):
    s = 2 * m / 4.0
    verdict = mode_shoot(2.0, m)
    print(f"  m={m}: 2m/(2+a) = {s:.2f} -> {'admissible' if verdict else 'not admissible'}")

print("\nresidual of the radial solution over eight decades of r:")
r = np.geomspace(1e-3, 1e3, 200)
for alpha in (0.5, 2.0, 4.0):
    res = np.abs(plane.plane_residual(1.0, alpha, r)).max()
    print(f"  alpha={alpha}: max residual {res:.2e}")

print(f"\ntotal weighted mass 4 pi (2+alpha): "
      f"{', '.join(f'{plane.plane_mass(a):.4f}' for a in (0.0, 2.0, 4.0))}")
