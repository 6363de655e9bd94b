"""Finite-difference weights and quadrature rules on irregular radial grids.

Small numerical kernels shared by the mesh, spectral and disk modules:
Fornberg differentiation weights on arbitrary nodes, fixed 5-point central
derivatives with per-point step control, and piecewise-cubic quadrature
weights against power-law measures r^beta dr.
"""

from __future__ import annotations

import numpy as np


def fornberg_weights(x0: float, x: np.ndarray, max_order: int = 2) -> np.ndarray:
    """Differentiation weights at ``x0`` on the nodes ``x``.

    Returns an array ``w`` of shape ``(max_order + 1, len(x))`` such that
    ``w[k] @ f(x)`` approximates the k-th derivative of ``f`` at ``x0``
    (exactly, for polynomials of degree < len(x)).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if max_order >= n:
        raise ValueError("need more nodes than the requested derivative order")
    c = np.zeros((max_order + 1, n))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def central_derivatives(f, x, h, npoints: int = 7):
    """First and second derivatives of a callable by central differences.

    ``h`` may be a scalar or a per-point array.  ``npoints`` selects the
    5-point (O(h^4)) or 7-point (O(h^6)) rule; the wider rule keeps the
    truncation error controlled next to algebraic singularities when ``h``
    is scaled with the distance to them.  Returns ``(d1, d2)`` at ``x``.
    """
    x = np.asarray(x, dtype=float)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    if npoints == 5:
        fm2, fm1, f0, fp1, fp2 = (f(x - 2 * h), f(x - h), f(x),
                                  f(x + h), f(x + 2 * h))
        d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
        d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
        return d1, d2
    if npoints == 7:
        fm3, fm2, fm1 = f(x - 3 * h), f(x - 2 * h), f(x - h)
        f0 = f(x)
        fp1, fp2, fp3 = f(x + h), f(x + 2 * h), f(x + 3 * h)
        d1 = (-fm3 + 9 * fm2 - 45 * fm1 + 45 * fp1 - 9 * fp2 + fp3) / (60 * h)
        d2 = (2 * fm3 - 27 * fm2 + 270 * fm1 - 490 * f0
              + 270 * fp1 - 27 * fp2 + 2 * fp3) / (180 * h * h)
        return d1, d2
    raise ValueError("npoints must be 5 or 7")


def power_weighted_quadrature(nodes: np.ndarray, beta: float,
                              left_stub: bool = False,
                              ngauss: int = 8) -> np.ndarray:
    """Weights ``w`` with ``w @ g(nodes)`` ~ integral of g(r) r^beta dr.

    The rule integrates the piecewise-cubic interpolant of ``g`` through
    neighbouring nodes against the weight r^beta over
    ``[nodes[0], nodes[-1]]`` (exact for cubic ``g`` up to the Gauss error
    of r^beta itself, which is negligible on the graded meshes used here).

    With ``left_stub=True`` the segment ``[0, nodes[0]]`` is accounted for
    by freezing ``g`` at its leftmost sample, adding
    ``nodes[0]**(beta+1) / (beta+1)`` to ``w[0]``; requires ``beta > -1``.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    if n < 4:
        raise ValueError("need at least 4 nodes for cubic quadrature")
    if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
        raise ValueError("nodes must be strictly increasing and positive")
    xg, wg = np.polynomial.legendre.leggauss(ngauss)

    a = nodes[:-1]
    b = nodes[1:]
    # support stencil for each interval: 4 consecutive nodes, clamped
    start = np.clip(np.arange(n - 1) - 1, 0, n - 4)
    sup = start[:, None] + np.arange(4)[None, :]          # (n-1, 4)
    xs = nodes[sup]                                       # support abscissae
    rg = 0.5 * (b - a)[:, None] * xg[None, :] + 0.5 * (a + b)[:, None]
    wgs = 0.5 * (b - a)[:, None] * wg[None, :] * rg ** beta

    w = np.zeros(n)
    # Lagrange basis on the 4 support nodes, evaluated at the Gauss points
    for q in range(4):
        num = np.ones_like(rg)
        den = np.ones(n - 1)
        for s in range(4):
            if s == q:
                continue
            num *= rg - xs[:, s][:, None]
            den *= xs[:, q] - xs[:, s]
        np.add.at(w, sup[:, q], (wgs * num).sum(axis=1) / den)
    if left_stub:
        if beta <= -1:
            raise ValueError("left stub requires beta > -1")
        w[0] += nodes[0] ** (beta + 1) / (beta + 1)
    return w
