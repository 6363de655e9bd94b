"""Graded radial meshes and P1 forms for the singular Rayleigh quotient.

The quotient

    [ int r (eta')^2 dr - int r q eta^2 dr ] / int eta^2 / r dr

is discretised with conforming piecewise-linear elements on a mesh of
(0, 1].  The left endpoint is a small interior node rather than r = 0 (the
admissible fields vanish at the origin, and the r^-1 weight is not
integrable there); integration runs over [nodes[0], 1] only.  The r^-1
mass matrix is integrated exactly, not lumped: the eigenvalue targets do
not survive lumping of the singular weight.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

import numpy as np
import scipy.sparse as sp

from .fd import power_weighted_quadrature


@dataclass(frozen=True)
class RadialMesh:
    """Nodes in (0, 1] plus quadrature weights for r dr and r^-1 dr.

    ``w_r`` integrates smooth samples against r dr over [0, 1] (the stub
    [0, nodes[0]] is accounted for analytically, freezing the integrand at
    the first node).  ``w_rinv`` integrates against r^-1 dr over
    [nodes[0], 1] only.
    """

    nodes: np.ndarray
    grading: str
    w_r: np.ndarray
    w_rinv: np.ndarray

    @property
    def n(self) -> int:
        return len(self.nodes)

    def integrate_r(self, values) -> float:
        return float(self.w_r @ np.asarray(values, dtype=float))

    def integrate_rinv(self, values) -> float:
        return float(self.w_rinv @ np.asarray(values, dtype=float))


def _composite_nodes(n: int, r0: float, mid: float,
                     boundary_power: float) -> np.ndarray:
    # node share of the geometric section chosen so the spacing is
    # continuous at the seam (keeps the cubic quadrature weights positive)
    geo_extent = mid * math.log(mid / r0)
    outer_extent = (1.0 - mid) * boundary_power
    n_g = int(round(n * geo_extent / (geo_extent + outer_extent)))
    n_g = min(max(n_g, 8), n - 8)
    n_u = n - n_g
    geo = np.exp(np.linspace(np.log(r0), np.log(mid), n_g + 1))[:-1]
    t = np.linspace(0.0, 1.0, n_u)
    outer = 1.0 - (1.0 - mid) * (1.0 - t) ** boundary_power
    return np.concatenate([geo, outer])


def build_mesh(n: int, grading: str = "composite", *, ratio: float = 0.99,
               r0: float = 1e-12, mid: float = 0.3,
               boundary_power: float = 1.2) -> RadialMesh:
    """Radial mesh of ``n`` nodes ending exactly at r = 1.

    grading:
      - ``"uniform"``: nodes i/n, i = 1..n.
      - ``"geometric"``: nodes ratio^(n-1-i); ``ratio`` in (0, 1).
      - ``"composite"`` (default): geometric clustering from ``r0`` up to
        ``mid`` on half the nodes (resolving the r^-2 weight at the
        origin), then a mildly boundary-graded section up to 1.
    """
    if n < 16:
        raise ValueError(f"mesh needs n >= 16, got n={n}")
    if grading == "uniform":
        nodes = np.arange(1, n + 1) / n
    elif grading == "geometric":
        if not (0.0 < ratio < 1.0):
            raise ValueError(f"geometric ratio must be in (0, 1), got {ratio}")
        nodes = ratio ** np.arange(n - 1, -1, -1.0)
    elif grading == "composite":
        if not (0.0 < r0 < mid < 1.0):
            raise ValueError("composite grading needs 0 < r0 < mid < 1")
        nodes = _composite_nodes(n, r0, mid, boundary_power)
    else:
        raise ValueError(f"unknown grading {grading!r}")
    nodes = np.asarray(nodes, dtype=float)
    nodes[-1] = 1.0
    if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
        raise ValueError("grading produced a non-increasing node set")
    w_r = power_weighted_quadrature(nodes, 1.0, left_stub=True)
    w_rinv = power_weighted_quadrature(nodes, -1.0, left_stub=False)
    return RadialMesh(nodes, grading, w_r, w_rinv)


@lru_cache(maxsize=8)
def default_mesh(n: int = 4096) -> RadialMesh:
    """The composite mesh used for eigenvalue work (cached; immutable)."""
    return build_mesh(n, "composite")


def refine(mesh: RadialMesh) -> RadialMesh:
    """Nested refinement: insert interval midpoints (keeps nodes[0])."""
    nodes = mesh.nodes
    mids = 0.5 * (nodes[:-1] + nodes[1:])
    new = np.sort(np.concatenate([nodes, mids]))
    w_r = power_weighted_quadrature(new, 1.0, left_stub=True)
    w_rinv = power_weighted_quadrature(new, -1.0, left_stub=False)
    return RadialMesh(new, mesh.grading + "+refined", w_r, w_rinv)


class Forms(NamedTuple):
    """Assembled symmetric bilinear forms of the discrete quotient."""

    A: sp.csc_matrix         # int r eta' xi' - int r q eta xi
    B_rinv: Optional[sp.csc_matrix]  # int eta xi / r
    B_r: sp.csc_matrix       # int eta xi r


def _jk(t: np.ndarray, k: int) -> np.ndarray:
    """J_k(t) = int_0^1 x^k / (1 + t x) dx, stable for all t >= 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = np.abs(t) < 0.5
    ts = t[small]
    acc = np.zeros_like(ts)
    term = np.ones_like(ts)
    m = 0
    while True:
        acc += term / (k + m + 1)
        term = term * (-ts)
        m += 1
        if m > 80 or (term.size and np.all(np.abs(term) < 1e-19)) or not term.size:
            break
    out[small] = acc
    tb = t[~small]
    with np.errstate(divide="ignore", invalid="ignore"):
        L = np.log1p(tb)
        if k == 0:
            out[~small] = L / tb
        elif k == 1:
            out[~small] = (tb - L) / tb ** 2
        else:
            out[~small] = (tb ** 2 / 2 - tb + L) / tb ** 3
    return out


def assemble_forms(mesh: RadialMesh, potential: Optional[Callable] = None,
                   include_singular_weight: bool = True,
                   dirichlet_left: bool = False,
                   reduce: bool = True) -> Forms:
    """P1 forms of the quotient on ``mesh`` with eta(1) = 0 eliminated.

    ``potential`` is q(r) (bounded on (0, 1]); None means q = 0.  The
    potential integrals use 4-point Gauss per element; the r^-1 mass uses
    exact elementwise integration.  With ``dirichlet_left`` the first node
    is also eliminated (annulus problem); with ``reduce=False`` the full
    node-by-node matrices are returned with no boundary condition.
    """
    nodes = mesh.nodes
    n = len(nodes)
    a, b = nodes[:-1], nodes[1:]
    h = b - a

    kloc = (a + b) / (2.0 * h)
    # mass against r dr: exact for the P1 products
    m00 = h * (a / 3 + h / 12)
    m01 = h * (a / 6 + h / 12)
    m11 = h * (a / 3 + h / 4)
    # potential term, 4-point Gauss per element
    if potential is not None:
        xg, wg = np.polynomial.legendre.leggauss(4)
        xg = 0.5 * (xg + 1.0)
        wg = 0.5 * wg
        rg = a[:, None] + h[:, None] * xg[None, :]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            qg = np.asarray(potential(rg), dtype=float)
        if not np.all(np.isfinite(qg)):
            raise ValueError("potential must be bounded on (0, 1]")
        base = h[:, None] * wg[None, :] * rg * qg
        p00 = (base * (1 - xg) ** 2).sum(axis=1)
        p01 = (base * xg * (1 - xg)).sum(axis=1)
        p11 = (base * xg ** 2).sum(axis=1)
    else:
        p00 = p01 = p11 = np.zeros_like(h)

    def tridiag(d00, d01, d11):
        diag = np.zeros(n)
        diag[:-1] += d00
        diag[1:] += d11
        return diag, np.asarray(d01, dtype=float)

    dA, oA = tridiag(kloc - p00, -kloc - p01, kloc - p11)
    dBr, oBr = tridiag(m00, m01, m11)

    if include_singular_weight:
        t = h / a
        j0, j1, j2 = _jk(t, 0), _jk(t, 1), _jk(t, 2)
        w = h / a
        dBs, oBs = tridiag(w * (j0 - 2 * j1 + j2), w * (j1 - j2), w * j2)
    else:
        dBs = oBs = None

    def pack(diag, off, lo, hi):
        return sp.diags([off[lo:hi - 1], diag[lo:hi], off[lo:hi - 1]],
                        [-1, 0, 1], format="csc")

    if reduce:
        lo, hi = (1 if dirichlet_left else 0), n - 1
    else:
        lo, hi = 0, n
    A = pack(dA, oA, lo, hi)
    B_r = pack(dBr, oBr, lo, hi)
    B_rinv = pack(dBs, oBs, lo, hi) if include_singular_weight else None
    return Forms(A, B_rinv, B_r)
