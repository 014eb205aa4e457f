"""Coupling sweeps and mesh-refinement studies.

A sweep labels each coupling with the regime the theory pins down
(broken above 2 under the cutoff condition, symmetric below 1, unproven
in between) and records what the solvers actually find; the two must
never contradict each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .model import GridFn, ModelParams, cutoff_max_ratio, make_grid, w_on_grid
from .solver import (
    REGIME_BROKEN,
    REGIME_SYMMETRIC,
    REGIME_UNPROVEN,
    SolveConfig,
    solve_A,
    solve_C_to_zero,
)

__all__ = ["PhaseRecord", "classify_regime", "sweep", "refinement_study", "RefinementStudy"]

#: sup-norms above 10 * tol count as a genuinely nonzero fixed point
BROKEN_FACTOR = 10.0


@dataclass
class PhaseRecord:
    lam: float
    ratio: float
    regime: str
    fixed_norm: float
    broken: bool
    iterations: int
    converged: bool
    extras: dict = field(default_factory=dict)

    def to_row(self) -> dict:
        out = {
            "lambda": self.lam,
            "ratio": self.ratio,
            "regime": self.regime,
            "fixed_norm": self.fixed_norm,
            "broken": self.broken,
            "iterations": self.iterations,
            "converged": self.converged,
        }
        out.update(self.extras)
        return out


def classify_regime(lam: float, ratio: float) -> str:
    """Pure labeling rule from (coupling, eps/Lambda)."""
    if 0 < lam < 1:
        return REGIME_SYMMETRIC
    if lam > 2 and ratio <= cutoff_max_ratio(lam):
        return REGIME_BROKEN
    return REGIME_UNPROVEN


def _params_for(lam: float, ratio: float) -> ModelParams:
    # cutoffs are dimensionless; fix eps = 1 and let the ratio set Lambda
    return ModelParams(lam=lam, eps=1.0, big_lambda=1.0 / ratio)


def sweep(lambdas, ratio: float, cfg: SolveConfig) -> list[PhaseRecord]:
    """One solve per coupling at fixed eps/Lambda, labeled by regime.

    Proven-broken rows run the fixed-point iteration from the floor;
    proven-symmetric rows run the transformed finite-cutoff iteration from
    the constant 1.  Unproven rows run both, plus a second fixed-point
    start from half the floor to expose possible multi-stability; all
    outcomes land in ``extras``.
    """
    if not 0 < ratio < 1:
        raise ArgumentError(f"ratio must be in (0, 1), got {ratio}")
    lambdas = list(lambdas)
    if any(l <= 0 for l in lambdas):
        raise ArgumentError("all couplings must be positive")
    records = []
    for lam in lambdas:
        regime = classify_regime(lam, ratio)
        params = _params_for(lam, ratio)
        if regime == REGIME_SYMMETRIC:
            grid = make_grid(params.eps, params.big_lambda, cfg.grid_n, "log")
            rep = solve_C_to_zero(params, GridFn.constant(grid, 1.0), cfg)
            rec = PhaseRecord(lam, ratio, regime, rep.final.sup_norm(),
                              rep.final.sup_norm() > BROKEN_FACTOR * cfg.tol,
                              rep.iterations, rep.converged)
        else:
            rep = solve_A(params, cfg)
            rec = PhaseRecord(lam, ratio, regime, rep.final.sup_norm(),
                              rep.final.sup_norm() > BROKEN_FACTOR * cfg.tol,
                              rep.iterations, rep.converged)
            if regime == REGIME_UNPROVEN:
                grid = rep.final.grid
                half = w_on_grid(grid, params)
                rep_half = solve_A(params, cfg, u0=half.with_values(0.5 * half.values))
                rep_c = solve_C_to_zero(params, GridFn.constant(grid, 1.0), cfg)
                rec.extras.update({
                    "a_half_start_norm": rep_half.final.sup_norm(),
                    "a_half_start_converged": rep_half.converged,
                    "c_final_norm": rep_c.final.sup_norm(),
                    "c_converged": rep_c.converged,
                })
        records.append(rec)
    return records


@dataclass
class RefinementStudy:
    node_counts: list
    converged: list
    sup_diffs: list      # sup |u_{n_k} - u_{n_{k+1}}|, length len(node_counts)-1
    orders: list         # Richardson estimates, length len(node_counts)-2

    def flagged(self) -> bool:
        return not all(self.converged)


def refinement_study(params: ModelParams, node_counts, cfg: SolveConfig) -> RefinementStudy:
    """Fixed points at increasing resolution, successive sup-differences
    (finer solution transferred to the coarser grid linearly), and the
    Richardson order implied by consecutive difference pairs."""
    node_counts = list(node_counts)
    if len(node_counts) < 3:
        raise ArgumentError("need at least 3 node counts")
    if any(b <= a for a, b in zip(node_counts, node_counts[1:])):
        raise ArgumentError("node counts must be strictly increasing")
    solutions = []
    converged = []
    for n in node_counts:
        rep = solve_A(params, SolveConfig(tol=cfg.tol, max_iter=cfg.max_iter,
                                          damping=cfg.damping, grid_n=n, seed=cfg.seed))
        solutions.append(rep.final)
        converged.append(rep.converged)
    diffs = []
    for coarse, fine in zip(solutions, solutions[1:]):
        transferred = np.interp(coarse.grid.nodes, fine.grid.nodes, fine.values)
        diffs.append(float(np.max(np.abs(coarse.values - transferred))))
    orders = []
    for (n0, n1), (d0, d1) in zip(zip(node_counts, node_counts[1:]), zip(diffs, diffs[1:])):
        h_ratio = (n1 - 1) / (n0 - 1)
        orders.append(math.log(d0 / d1) / math.log(h_ratio) if d1 > 0 else math.inf)
    return RefinementStudy(node_counts, converged, diffs, orders)
