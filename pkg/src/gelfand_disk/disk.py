"""Fourier-cosine x radial collocation of -Lap u = mu |x|^a e^u on the disk.

Fields live in the symmetry cone of mode k: cosine harmonics at multiples
of k only (this encodes both evenness in theta and 2 pi / k periodicity,
and removes the rotational zero mode that would break Newton).  Radially
the unknowns are the harmonic coefficients on a uniform interior grid with
the Dirichlet value at r = 1 eliminated and parity reflection across the
origin; derivative stencils are 7-point (Fornberg weights), so the
discrete operator is high order and the collocation residual of the
closed-form radial solutions sits near the rounding floor.

The collocation equations are premultiplied by r^2:

    F_j(r_i) = -r^2 c_j'' - r c_j' + m^2 c_j - mu r^(2+a) [e^u]_j,  m = j k,

which removes the singular 1/r^2 coefficients and keeps the residual
rounding floor well under the 1e-10 Newton tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded

from .fd import fornberg_weights, power_weighted_quadrature


@dataclass(frozen=True)
class DiskGrid:
    """Static description of the collocation grid."""

    alpha: float
    k: int
    n_r: int
    n_modes: int          # highest harmonic index j; modes are j*k, j=0..n_modes
    n_theta: int


class FourierDiskOperator:
    """Residual, Jacobian and diagnostics of the disk problem in cone k."""

    def __init__(self, alpha: float, k: int, n_r: int = 160,
                 n_modes: int = 8, n_theta: Optional[int] = None,
                 stencil: int = 7):
        if k < 1:
            raise ValueError(f"angular mode k must be >= 1, got {k}")
        if stencil % 2 != 1 or stencil < 5:
            raise ValueError("stencil width must be odd and >= 5")
        self.alpha = float(alpha)
        self.k = int(k)
        self.M = int(n_modes)
        self.n = int(n_r)
        self.n_theta = int(n_theta) if n_theta else max(4 * (self.M + 1), 32)
        self.grid = DiskGrid(self.alpha, self.k, self.n, self.M, self.n_theta)

        self.r = np.arange(1, self.n + 1) / (self.n + 1.0)
        # angular collocation in phi = k * theta at cosine midpoints
        l = np.arange(self.n_theta)
        self.phi = math.pi * (2 * l + 1) / (2 * self.n_theta)
        j = np.arange(self.M + 1)
        self.synth = np.cos(np.outer(self.phi, j))                 # (Nt, M+1)
        scale = (2.0 - (j == 0)) / self.n_theta
        self.proj = scale[:, None] * np.cos(np.outer(j, self.phi))  # (M+1, Nt)

        self._build_stencils(stencil)
        self._build_quadrature()

    # ------------------------------------------------------------------ grid
    def _build_stencils(self, stencil: int) -> None:
        n, hw = self.n, stencil // 2
        ext = np.concatenate([-self.r[hw - 1::-1], self.r, [1.0]])
        rows, cols_even, vals_even, vals_odd = [], [], [], []
        for i in range(n):
            lo = min(max(i, 0), len(ext) - stencil)
            window = np.arange(lo, lo + stencil)
            w = fornberg_weights(self.r[i], ext[window], 2)
            # scaled operator row: -r^2 d2 - r d1
            coef = -self.r[i] ** 2 * w[2] - self.r[i] * w[1]
            for s, jx in enumerate(window):
                if jx < hw:            # reflected node -r[hw-1-jx]
                    rows.append(i)
                    cols_even.append(hw - 1 - jx)
                    vals_even.append(coef[s])
                    vals_odd.append(-coef[s])
                elif jx < hw + n:
                    rows.append(i)
                    cols_even.append(jx - hw)
                    vals_even.append(coef[s])
                    vals_odd.append(coef[s])
                # else: boundary node r = 1, Dirichlet value 0, dropped
        rows = np.asarray(rows)
        cols = np.asarray(cols_even)
        shape = (n, n)
        self._L_even = sp.csr_matrix((vals_even, (rows, cols)), shape=shape)
        self._L_odd = sp.csr_matrix((vals_odd, (rows, cols)), shape=shape)
        self._L_even.sum_duplicates()
        self._L_odd.sum_duplicates()
        # bandwidths of the radial stencils (in node index units)
        lower = int(np.max(rows - cols))
        upper = int(np.max(cols - rows))
        self._band_radial = (max(lower, 0), max(upper, 0))
        # boundary derivative weights at r = 1 from the last 5 nodes + boundary
        tail = np.concatenate([self.r[-5:], [1.0]])
        self._flux_w = fornberg_weights(1.0, tail, 1)[1][:-1]  # boundary value is 0

    def _build_quadrature(self) -> None:
        # radial quadrature against r^(1+a) dr, boundary node appended
        nodes = np.concatenate([self.r, [1.0]])
        self._nodes_ext = nodes
        self._w_mass = power_weighted_quadrature(nodes, 1.0 + self.alpha,
                                                 left_stub=True)
        self._w_r = power_weighted_quadrature(nodes, 1.0, left_stub=True)
        self._w_rinv = power_weighted_quadrature(nodes, -1.0)

    def mode_operator(self, m: int) -> sp.csr_matrix:
        """-r^2 d2 - r d1 + m^2 on the interior grid (parity-folded)."""
        base = self._L_even if m % 2 == 0 else self._L_odd
        return base + (m * m) * sp.identity(self.n, format="csr")

    @property
    def modes(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.k

    # ------------------------------------------------------- field evaluation
    def values(self, coeffs: np.ndarray) -> np.ndarray:
        """Collocation values u(r_i, phi_l); shape (n_r, n_theta)."""
        return coeffs.T @ self.synth.T

    def project(self, values: np.ndarray) -> np.ndarray:
        """Cosine coefficients of values(r_i, phi_l); shape (M+1, n_r)."""
        return self.proj @ values.T

    def boundary_flux_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        """Cosine coefficients (in phi) of du/dn on the boundary circle."""
        return coeffs[:, -5:] @ self._flux_w

    # ----------------------------------------------------- residual, Jacobian
    def residual(self, coeffs: np.ndarray, mu: float) -> np.ndarray:
        """Scaled collocation residual; same shape as ``coeffs``."""
        if coeffs.shape != (self.M + 1, self.n):
            raise ValueError(f"coeffs must have shape {(self.M + 1, self.n)}, "
                             f"got {coeffs.shape}")
        E = np.exp(self.values(coeffs))
        Ej = self.project(E)
        w = mu * self.r ** (2.0 + self.alpha)
        out = np.empty_like(coeffs)
        for jj, m in enumerate(self.modes):
            out[jj] = self.mode_operator(m) @ coeffs[jj]
        out -= w[None, :] * Ej
        return out

    def residual_mu_derivative(self, coeffs: np.ndarray) -> np.ndarray:
        E = np.exp(self.values(coeffs))
        return -(self.r ** (2.0 + self.alpha))[None, :] * self.project(E)

    def coupling_blocks(self, coeffs: np.ndarray, mu: float) -> np.ndarray:
        """G[j, j', i] = d [mu r^(2+a) e^u]_j (r_i) / d c_j'(r_i)."""
        E = np.exp(self.values(coeffs))                     # (n, Nt)
        W = (mu * self.r ** (2.0 + self.alpha))[:, None] * E
        return np.einsum("jl,il,lp->jpi", self.proj, W, self.synth)

    def jacobian_banded(self, coeffs: np.ndarray, mu: float):
        """LAPACK band storage of the Jacobian, radius-major ordering.

        Unknown p = i (M+1) + j.  Returns ``(l, u), ab`` for
        scipy.linalg.solve_banded.
        """
        M1 = self.M + 1
        N = M1 * self.n
        lo, up = self._band_radial
        l_band = lo * M1 + self.M
        u_band = up * M1 + self.M
        ab = np.zeros((l_band + u_band + 1, N))
        for jj, m in enumerate(self.modes):
            L = self.mode_operator(m).tocoo()
            p = L.row * M1 + jj
            q = L.col * M1 + jj
            np.add.at(ab, (u_band + p - q, q), L.data)
        G = self.coupling_blocks(coeffs, mu)                # (M+1, M+1, n)
        i = np.arange(self.n)
        for jj in range(M1):
            for jj2 in range(M1):
                q = i * M1 + jj2
                ab[u_band + jj - jj2, q] -= G[jj, jj2]
        return (l_band, u_band), ab

    def newton_step(self, coeffs: np.ndarray, mu: float,
                    extra_rhs: Optional[np.ndarray] = None):
        """Solve J dx = -F (and J y = extra_rhs) in one banded factorisation."""
        F = self.residual(coeffs, mu)
        band, ab = self.jacobian_banded(coeffs, mu)
        rhs = [-F.T.reshape(-1)]
        if extra_rhs is not None:
            rhs.append(extra_rhs.T.reshape(-1))
        sol = solve_banded(band, ab, np.stack(rhs, axis=1))
        outs = [sol[:, 0].reshape(self.n, self.M + 1).T]
        if extra_rhs is not None:
            outs.append(sol[:, 1].reshape(self.n, self.M + 1).T)
        return F, outs

    # ------------------------------------------------------------ diagnostics
    def max_u(self, coeffs: np.ndarray) -> float:
        return float(self.values(coeffs).max())

    def min_u(self, coeffs: np.ndarray) -> float:
        return float(self.values(coeffs).min())

    def nonradial_amplitude(self, coeffs: np.ndarray) -> float:
        """Dirichlet energy norm of the m >= 1 part of the field.

        sqrt( sum_{j>=1} pi int ((c_j')^2 + (j k)^2 c_j^2 / r^2) r dr ).
        """
        total = 0.0
        nodes = self._nodes_ext
        for jj in range(1, self.M + 1):
            m = jj * self.k
            c = np.concatenate([coeffs[jj], [0.0]])
            dc = np.gradient(c, nodes)
            total += math.pi * float(self._w_r @ dc ** 2
                                     + m * m * (self._w_rinv @ c ** 2))
        return math.sqrt(total)

    def mass(self, coeffs: np.ndarray, mu: float) -> float:
        """mu int_B1 |x|^a e^u by radial cubic quadrature x angular midpoints."""
        E = np.exp(self.values(coeffs))
        ang_mean = E.mean(axis=1)
        ang_mean = np.concatenate([ang_mean, [1.0]])     # e^0 on the boundary
        return 2.0 * math.pi * mu * float(self._w_mass @ ang_mean)

    def embed_radial(self, profile) -> np.ndarray:
        """Mode-0-only coefficient array from a radial profile callable."""
        coeffs = np.zeros((self.M + 1, self.n))
        coeffs[0] = profile(self.r)
        return coeffs
