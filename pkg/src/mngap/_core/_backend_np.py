"""Pure-numpy implementation of the cumulative-quadrature kernels.

This is the fallback backend; the compiled Cython module ``_core_cy``
implements the same functions with identical cell formulas.
"""

import numpy as np

BACKEND_NAME = "python"


def cum_trapezoid(x, f):
    """Cumulative composite-trapezoid integral of samples ``f`` over ``x``."""
    out = np.empty_like(f)
    out[0] = 0.0
    np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(x), out=out[1:])
    return out


def _parabola_piece(x0, x1, x2, f0, f1, f2, a, b):
    # Integral over [a, b] of the parabola through the three nodes, written
    # in Newton form with node-local coordinates: every term is O(cell width),
    # so no large-magnitude cancellation on wide-span grids.
    d1 = (f1 - f0) / (x1 - x0)
    d2 = ((f2 - f1) / (x2 - x1) - d1) / (x2 - x0)
    s1 = a - x0
    s2 = b - x0
    t1 = a - x1
    t2 = b - x1
    i1 = 0.5 * (s2 * s2 - s1 * s1)
    i2 = (t2 * t2 * t2 - t1 * t1 * t1) / 3.0 + 0.5 * (x1 - x0) * (t2 * t2 - t1 * t1)
    return f0 * (b - a) + d1 * i1 + d2 * i2


def cum_parabolic(x, f):
    """Cumulative integral using averaged overlapping parabolas.

    Each interior cell [x_i, x_{i+1}] gets the mean of the integrals of the
    two parabolas fitted through (i-1, i, i+1) and (i, i+1, i+2); boundary
    cells use the single available parabola.  Exact on quadratics; fourth
    order on smoothly graded grids.
    """
    n = x.shape[0]
    x0, x1, x2 = x[:-2], x[1:-1], x[2:]
    f0, f1, f2 = f[:-2], f[1:-1], f[2:]
    # parabola (i-1, i, i+1) over its right cell, and over its left cell
    right_sub = _parabola_piece(x0, x1, x2, f0, f1, f2, x1, x2)
    left_sub = _parabola_piece(x0, x1, x2, f0, f1, f2, x0, x1)
    cells = np.empty(n - 1)
    cells[0] = left_sub[0]
    cells[-1] = right_sub[-1]
    cells[1:-1] = 0.5 * (right_sub[:-1] + left_sub[1:])
    out = np.empty_like(f)
    out[0] = 0.0
    np.cumsum(cells, out=out[1:])
    return out


def operator_core(x, g, parabolic=True):
    """Split evaluation of the gap-equation integral at every node.

    Returns ``s`` with ``s_i = (1/x_i) * int_{x_0}^{x_i} y g(y) dy
    + int_{x_i}^{x_{n-1}} g(y) dy``; the integral kernel 1/(2 max(x, y))
    reduces to exactly this form when the evaluation point is a node.
    """
    cum = cum_parabolic if parabolic else cum_trapezoid
    lower = cum(x, x * g)
    upper = cum(x, g)
    return lower / x + (upper[-1] - upper)
