"""The three nonlinear integral operators of the gap equation.

All three share one pointwise nonlinearity t -> t/(y + t^2) and one split
evaluation core; the infinite-domain variant folds its substitution
t = psi/sqrt(y+eps) into the integrand algebraically and carries a
truncation certificate derived from :func:`mngap.quadrature.tail_bound_B`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _core
from .errors import ArgumentError, DomainError, TruncationError
from .model import Grid, GridFn, ModelParams, make_grid
from .quadrature import truncation_radius

__all__ = [
    "OPERATOR_RULE",
    "nonlinearity",
    "apply_A",
    "apply_A_const_oracle",
    "TruncationCertificate",
    "BApplyResult",
    "apply_B",
    "apply_C",
    "certified_prefix_count",
    "grid_for_B",
]

# Averaged-parabola cells: the grid-convergence acceptance tolerances need
# better than plain-trapezoid accuracy at n ~ 4096 on wide log grids.
OPERATOR_RULE = "parabolic"
_PARABOLIC = OPERATOR_RULE == "parabolic"


def nonlinearity(t, y):
    """The only nonlinear element, t / (y + t^2), shared by all operators."""
    return t / (y + t * t)


def _b_integrand_factor(psi: np.ndarray, y: np.ndarray, eps: float) -> np.ndarray:
    # nonlinearity(psi/sqrt(y+eps), y) with the substitution folded in:
    # psi*sqrt(y+eps) / (y*(y+eps) + psi^2).  All terms positive, no
    # cancellation, and safe for y up to ~1e150.
    return psi * np.sqrt(y + eps) / (y * (y + eps) + psi * psi)


def _require_span(fn: GridFn, lo: float, hi: float, what: str) -> None:
    if fn.grid.lo != lo or fn.grid.hi != hi:
        raise ArgumentError(
            f"{what} grid spans [{fn.grid.lo}, {fn.grid.hi}], "
            f"expected [{lo}, {hi}]"
        )


def _require_nonnegative(fn: GridFn, what: str) -> None:
    if np.any(fn.values < 0):
        raise DomainError(f"{what} must be nonnegative everywhere")


def apply_A(u: GridFn, params: ModelParams) -> GridFn:
    """One application of the finite-cutoff operator, evaluated at every node.

    Uses the split form (lam/4) [ (1/x) int_eps^x y g + int_x^Lambda g ]
    with g = u/(y+u^2); the kernel kink at y = x always falls on a node
    because evaluation points and samples share the grid.
    """
    if not params.uv_finite:
        raise ArgumentError("operator A needs a finite ultraviolet cutoff")
    _require_span(u, params.eps, params.big_lambda, "input")
    _require_nonnegative(u, "input to operator A")
    x = u.grid.nodes
    g = nonlinearity(u.values, x)
    core = _core.operator_core(x, g, _PARABOLIC)
    return GridFn(u.grid, 0.25 * params.lam * core)


def apply_A_const_oracle(c: float, x, params: ModelParams):
    """Closed form of the operator applied to the constant function c.

    Antiderivatives: int y c/(y+c^2) dy = c [y - c^2 ln(y+c^2)] and
    int c/(y+c^2) dy = c ln(y+c^2); differentiating either recovers the
    integrand, so

      A c (x) = (lam c / 4) [ (x-eps)/x - (c^2/x) ln((x+c^2)/(eps+c^2))
                              + ln((Lambda+c^2)/(x+c^2)) ].
    """
    if c < 0:
        raise ArgumentError(f"constant must be >= 0, got {c}")
    if not params.uv_finite:
        raise ArgumentError("oracle needs a finite ultraviolet cutoff")
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs < params.eps) or np.any(xs > params.big_lambda):
        raise ArgumentError(f"x outside [{params.eps}, {params.big_lambda}]")
    if c == 0:
        out = np.zeros_like(xs)
        return float(out) if np.isscalar(x) else out
    c2 = c * c
    eps = params.eps
    out = (params.lam * c / 4.0) * (
        (xs - eps) / xs
        - (c2 / xs) * np.log((xs + c2) / (eps + c2))
        + np.log((params.big_lambda + c2) / (xs + c2))
    )
    return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class TruncationCertificate:
    """Record of the tail bound attached to one infinite-domain application."""

    y_max: float
    psi_sup: float
    tol: float
    certified_up_to: float
    n_certified: int
    max_tail_bound: float


class BApplyResult(NamedTuple):
    fn: GridFn
    certificate: TruncationCertificate


def certified_prefix_count(grid: Grid, psi_sup: float, tol: float, params: ModelParams) -> int:
    """Number of leading nodes where the truncation certificate holds.

    A node is certified when tail_bound_B(psi_sup, x, y_max) <= tol; nodes
    beyond y_max/2 are never certified so the sqrt(x+eps) prefactor cannot
    push the certificate past tol between nodes.
    """
    x = grid.nodes
    y_max = x[-1]
    tails = params.lam * psi_sup * np.sqrt((x + params.eps) / y_max)
    ok = (tails <= tol) & (x <= 0.5 * y_max)
    if not ok[0]:
        return 0
    bad = np.nonzero(~ok)[0]
    return int(bad[0]) if bad.size else x.size


def _min_admissible_y_max(psi_sup: float, x_top: float, tol: float, params: ModelParams) -> float:
    if psi_sup == 0:
        return 2.0 * x_top
    need = (params.lam * psi_sup / tol) ** 2 * (x_top + params.eps)
    return max(need, 2.0 * x_top)


def apply_B(psi: GridFn, params: ModelParams, tol: float, x_max: float | None = None) -> BApplyResult:
    """One application of the infinite-domain operator, truncated at the grid top.

    The returned samples cover the whole grid; the certificate records the
    span [eps, certified_up_to] on which the discarded tail is provably
    below ``tol`` for inputs bounded by the sampled sup.  Passing ``x_max``
    demands certification up to there and raises :class:`TruncationError`
    (carrying the minimum admissible grid top) when the grid is too short.
    Values beyond the certified span underestimate the true operator and
    should be treated as indicative only.
    """
    if tol <= 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    if psi.grid.lo != params.eps:
        raise ArgumentError(
            f"input grid starts at {psi.grid.lo}, expected eps={params.eps}"
        )
    _require_nonnegative(psi, "input to operator B")
    x = psi.grid.nodes
    y_max = psi.grid.hi
    sup = float(np.max(psi.values))
    n_cert = certified_prefix_count(psi.grid, sup, tol, params)
    if x_max is not None:
        required = int(np.searchsorted(x, x_max, side="right"))
        if required == 0:
            raise ArgumentError(f"x_max={x_max} below the first node {x[0]}")
        if n_cert < required:
            x_top = float(x[required - 1])
            raise TruncationError(
                f"grid top {y_max:.6g} cannot certify tol={tol:g} up to "
                f"x={x_top:.6g} for sup={sup:.6g}",
                min_y_max=_min_admissible_y_max(sup, x_top, tol, params),
            )
    elif n_cert == 0:
        raise TruncationError(
            f"grid top {y_max:.6g} cannot certify tol={tol:g} even at eps "
            f"for sup={sup:.6g}",
            min_y_max=_min_admissible_y_max(sup, float(x[0]), tol, params),
        )
    g = _b_integrand_factor(psi.values, x, params.eps)
    core = _core.operator_core(x, g, _PARABOLIC)
    values = 0.25 * params.lam * np.sqrt(x + params.eps) * core
    cert_x = float(x[n_cert - 1])
    max_tail = params.lam * sup * math.sqrt((cert_x + params.eps) / y_max)
    cert = TruncationCertificate(
        y_max=y_max,
        psi_sup=sup,
        tol=tol,
        certified_up_to=cert_x,
        n_certified=n_cert,
        max_tail_bound=max_tail,
    )
    return BApplyResult(GridFn(psi.grid, values), cert)


def apply_C(psi: GridFn, params: ModelParams) -> GridFn:
    """Finite-cutoff variant of the infinite-domain operator; no truncation."""
    if not params.uv_finite:
        raise ArgumentError("operator C needs a finite ultraviolet cutoff")
    _require_span(psi, params.eps, params.big_lambda, "input")
    _require_nonnegative(psi, "input to operator C")
    x = psi.grid.nodes
    g = _b_integrand_factor(psi.values, x, params.eps)
    core = _core.operator_core(x, g, _PARABOLIC)
    return GridFn(psi.grid, 0.25 * params.lam * np.sqrt(x + params.eps) * core)


def grid_for_B(params: ModelParams, psi_sup: float, x_max: float, tol: float, n: int) -> Grid:
    """Log grid [eps, Y] whose top certifies tol/2 at x_max for inputs <= psi_sup."""
    y_max = truncation_radius(psi_sup, x_max, tol, params)
    return make_grid(params.eps, y_max, n, "log")
