"""Fixed-point iteration: damped Picard on the finite-cutoff operator, and
plain contraction iteration driving the transformed function to zero."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .model import GridFn, ModelParams, check_cutoff, make_grid, upper_bound_V, w_on_grid
from .operators import apply_A, apply_B, apply_C, certified_prefix_count

__all__ = ["SolveConfig", "SolveReport", "solve_A", "solve_B_to_zero", "solve_C_to_zero"]

REGIME_BROKEN = "proven-broken"
REGIME_SYMMETRIC = "proven-symmetric"
REGIME_UNPROVEN = "unproven"

#: iterates may exceed the invariant band by this much before being flagged
BAND_ANOMALY_SLACK = 1e-6


@dataclass(frozen=True)
class SolveConfig:
    tol: float = 1e-10
    max_iter: int = 500
    damping: float = 1.0
    grid_n: int = 2048
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise ArgumentError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ArgumentError(f"max_iter must be >= 1, got {self.max_iter}")
        if not (0 < self.damping <= 1):
            raise ArgumentError(f"damping must be in (0, 1], got {self.damping}")
        if self.grid_n < 3:
            raise ArgumentError(f"grid_n must be >= 3, got {self.grid_n}")


@dataclass
class SolveReport:
    """Iteration trace and verdict of one solve."""

    converged: bool
    iterations: int
    residuals: np.ndarray
    final: GridFn
    empirical_ratio: float
    regime: str
    norms: np.ndarray | None = None
    left_band: bool = False
    band_excess: float = 0.0
    anomaly: bool = False
    certified_up_to: float | None = None
    notes: list = field(default_factory=list)

    def summary_dict(self) -> dict:
        out = {
            "converged": self.converged,
            "iterations": self.iterations,
            "residuals": [float(r) for r in self.residuals],
            "empirical_ratio": self.empirical_ratio,
            "regime": self.regime,
            "left_band": self.left_band,
            "band_excess": self.band_excess,
            "anomaly": self.anomaly,
            "notes": list(self.notes),
            "final_sup": self.final.sup_norm(),
        }
        if self.norms is not None:
            out["norms"] = [float(v) for v in self.norms]
        if self.certified_up_to is not None:
            out["certified_up_to"] = self.certified_up_to
        return out


def _max_ratio(seq: np.ndarray) -> float:
    if seq.size < 2:
        return math.nan
    prev = seq[:-1]
    nxt = seq[1:]
    mask = prev > 0
    if not np.any(mask):
        return math.nan
    return float(np.max(nxt[mask] / prev[mask]))


def solve_A(params: ModelParams, cfg: SolveConfig, u0: GridFn | None = None) -> SolveReport:
    """Damped Picard iteration u <- (1-a) u + a A u, started from the floor w.

    Convergence of the iteration is an empirical observation, not a guarantee;
    non-convergence is reported, not raised.  In the proven regime
    (lam > 2 with the cutoff condition satisfied) iterates escaping the
    invariant band [w, lam sqrt(Lambda)/4] by more than ``BAND_ANOMALY_SLACK``
    are flagged as an anomaly.
    """
    regime = REGIME_UNPROVEN
    if params.lam > 2 and params.uv_finite and check_cutoff(params).ok:
        regime = REGIME_BROKEN
    grid = u0.grid if u0 is not None else make_grid(params.eps, params.big_lambda, cfg.grid_n, "log")
    u = u0 if u0 is not None else w_on_grid(grid, params)
    w = w_on_grid(grid, params).values
    upper = upper_bound_V(params)

    def excess_of(vals: np.ndarray) -> float:
        return max(float(np.max(w - vals)), float(np.max(vals - upper)), 0.0)

    residuals = []
    band_excess = excess_of(u.values)
    converged = False
    alpha = cfg.damping
    cur = u.values
    for _ in range(cfg.max_iter):
        au = apply_A(GridFn(grid, cur), params).values
        nxt = cur + alpha * (au - cur)
        res = float(np.max(np.abs(nxt - cur)))
        residuals.append(res)
        band_excess = max(band_excess, excess_of(nxt))
        cur = nxt
        if res <= cfg.tol:
            converged = True
            break

    res_arr = np.asarray(residuals)
    report = SolveReport(
        converged=converged,
        iterations=len(residuals),
        residuals=res_arr,
        final=GridFn(grid, cur),
        empirical_ratio=_max_ratio(res_arr),
        regime=regime,
        left_band=band_excess > 0.0,
        band_excess=band_excess,
        anomaly=(regime == REGIME_BROKEN and band_excess > BAND_ANOMALY_SLACK),
    )
    if not converged:
        report.notes.append(f"no convergence within {cfg.max_iter} iterations")
    return report


def _contraction_loop(step, psi0: GridFn, cfg: SolveConfig, span: int, regime: str, notes: list) -> SolveReport:
    sl = slice(0, span)
    cur = psi0
    norms = [float(np.max(cur.values[sl]))]
    residuals = []
    converged = norms[0] <= cfg.tol
    while not converged and len(residuals) < cfg.max_iter:
        nxt = step(cur)
        residuals.append(float(np.max(np.abs(nxt.values[sl] - cur.values[sl]))))
        norms.append(float(np.max(nxt.values[sl])))
        cur = nxt
        converged = norms[-1] <= cfg.tol
    report = SolveReport(
        converged=converged,
        iterations=len(residuals),
        residuals=np.asarray(residuals),
        final=cur,
        empirical_ratio=_max_ratio(np.asarray(norms)),
        regime=regime,
        norms=np.asarray(norms),
        notes=notes,
    )
    if not converged:
        report.notes.append(f"no convergence within {cfg.max_iter} iterations")
    return report


def solve_B_to_zero(params: ModelParams, psi0: GridFn, cfg: SolveConfig) -> SolveReport:
    """Iterate the infinite-domain operator; norms are taken over the span
    certified for the starting sup.

    In the contraction regime the sampled sup never grows, so the
    certificate demanded at the start holds at every step.  Outside it
    (lam >= 1, exploratory) iterates may grow and shrink the certified
    span; that is recorded in the notes instead of aborting the run.
    """
    notes = []
    regime = REGIME_SYMMETRIC if 0 < params.lam < 1 else REGIME_UNPROVEN
    exploratory = params.lam >= 1
    if exploratory:
        notes.append(f"lam={params.lam} outside the contraction regime; exploratory run")
    x = psi0.grid.nodes
    sup0 = float(np.max(psi0.values))
    span = certified_prefix_count(psi0.grid, sup0, cfg.tol, params)
    if span == 0:
        # surface the same certificate error apply_B would raise
        apply_B(psi0, params, cfg.tol)
    x_report = float(x[span - 1])

    def step(fn: GridFn) -> GridFn:
        if not exploratory:
            return apply_B(fn, params, cfg.tol, x_max=x_report).fn
        result = apply_B(fn, params, cfg.tol)
        if result.certificate.certified_up_to < x_report and not any(
                n.startswith("certified span shrank") for n in notes):
            notes.append(
                f"certified span shrank below x={x_report:.6g} "
                f"(iterate sup grew to {result.certificate.psi_sup:.6g})")
        return result.fn

    report = _contraction_loop(step, psi0, cfg, span, regime, notes)
    report.certified_up_to = x_report
    return report


def solve_C_to_zero(params: ModelParams, psi0: GridFn, cfg: SolveConfig) -> SolveReport:
    """Iterate the finite-cutoff variant on [eps, Lambda]; no truncation slack."""
    notes = []
    regime = REGIME_SYMMETRIC if 0 < params.lam < 1 else REGIME_UNPROVEN
    if params.lam >= 1:
        notes.append(f"lam={params.lam} outside the contraction regime; exploratory run")

    def step(fn: GridFn) -> GridFn:
        return apply_C(fn, params)

    return _contraction_loop(step, psi0, cfg, psi0.grid.n, regime, notes)
