"""Deterministic quadrature on grids: trapezoid integrals, the prefix-sum
scheme behind the one-pass operator evaluation, and the certified bound on
the discarded tail of the infinite-domain operator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import ArgumentError, DomainError
from .model import Grid, GridFn, ModelParams

__all__ = [
    "integrate",
    "PrefixIntegrals",
    "prefix_integrals",
    "tail_bound_B",
    "truncation_radius",
]

#: cumulative rules the prefix scheme understands
_RULES = {"trapezoid": _core.cum_trapezoid, "parabolic": _core.cum_parabolic}


def integrate(f: GridFn, lo: float, hi: float) -> float:
    """Composite-trapezoid integral of ``f`` over [lo, hi].

    Limits may fall between nodes; the integrand is interpolated linearly
    inside the containing cell, so the rule stays exact for piecewise-linear
    integrands regardless of where the limits sit.
    """
    x = f.grid.nodes
    v = f.values
    if lo > hi:
        raise DomainError(f"need lo <= hi, got {lo} > {hi}")
    if lo < x[0] or hi > x[-1]:
        raise DomainError(f"limits [{lo}, {hi}] outside grid span [{x[0]}, {x[-1]}]")
    v_lo = float(np.interp(lo, x, v))
    v_hi = float(np.interp(hi, x, v))
    first = int(np.searchsorted(x, lo, side="right"))
    last = int(np.searchsorted(x, hi, side="left")) - 1
    if first > last:
        return 0.5 * (v_lo + v_hi) * (hi - lo)
    total = 0.5 * (v_lo + v[first]) * (x[first] - lo)
    total += float(np.trapezoid(v[first : last + 1], x[first : last + 1]))
    total += 0.5 * (v[last] + v_hi) * (hi - x[last])
    return total


@dataclass(frozen=True, eq=False)
class PrefixIntegrals:
    """Cumulative integrals feeding the split form of the operators.

    ``left[i]`` approximates the integral of y*g(y) from the first node to
    node i, ``right[i]`` the integral of g from node i to the last node.
    """

    grid: Grid
    left: np.ndarray
    right: np.ndarray
    rule: str

    def __post_init__(self):
        self.left.flags.writeable = False
        self.right.flags.writeable = False


def prefix_integrals(g: GridFn, rule: str = "trapezoid") -> PrefixIntegrals:
    """Both cumulative arrays in one O(n) pass.

    With the default rule, node-aligned evaluations of :func:`integrate`
    reproduce these arrays to rounding error, since both walk the same
    trapezoid cells.
    """
    if rule not in _RULES:
        raise ArgumentError(f"unknown rule {rule!r}; use one of {sorted(_RULES)}")
    cum = _RULES[rule]
    x = g.grid.nodes
    left = cum(x, x * g.values)
    up = cum(x, g.values)
    right = up[-1] - up
    return PrefixIntegrals(g.grid, left, right, rule)


def tail_bound_B(psi_sup: float, x: float, big_r: float, params: ModelParams) -> float:
    """Certified bound ``lam * psi_sup * sqrt((x + eps) / R)`` on the tail
    discarded when the infinite-domain operator is truncated at R.

    The discarded tail at evaluation point x is

        (lam/2) sqrt(x+eps) * I,
        I = int_R^inf [1/(y+x+|y-x|)] [y/sqrt(y+eps)]
                      [psi(y) / (y + psi(y)^2/(y+eps))] dy.

    Chain of bounds, valid for y >= R >= x >= eps and psi >= 0 with
    sup psi <= psi_sup:

      1. 1/(y+x+|y-x|) = 1/(2y)                      (y >= x),
      2. psi(y) / (y + psi(y)^2/(y+eps)) <= psi(y)/y  (drop the square term),
      3. y/sqrt(y+eps) <= y/sqrt(y),

    so the integrand is at most psi_sup / (2 y^(3/2)), and
    int_R^inf y^(-3/2) dy = 2/sqrt(R) gives

        tail <= (lam/2) * psi_sup * sqrt((x+eps)/R).

    The returned value keeps an extra factor 2 of headroom over that
    sharpest constant.
    """
    if psi_sup < 0:
        raise ArgumentError(f"psi_sup must be >= 0, got {psi_sup}")
    if big_r < x:
        raise ArgumentError(f"truncation radius {big_r} below evaluation point {x}")
    if x < params.eps:
        raise ArgumentError(f"evaluation point {x} below eps={params.eps}")
    return params.lam * psi_sup * math.sqrt((x + params.eps) / big_r)


def truncation_radius(psi_sup: float, x_max: float, tol: float, params: ModelParams) -> float:
    """Smallest truncation radius R with tail_bound_B(psi_sup, x_max, R) <= tol/2.

    Never returns less than 2*x_max, so evaluation points up to x_max stay
    below half the radius.
    """
    if tol <= 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    if psi_sup < 0:
        raise ArgumentError(f"psi_sup must be >= 0, got {psi_sup}")
    need = (2.0 * params.lam * psi_sup / tol) ** 2 * (x_max + params.eps)
    return max(need, 2.0 * x_max)
