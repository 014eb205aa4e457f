"""Model parameters, closed-form bounds, and grid construction.

The gap equation for the quark mass function u(x) lives on the
momentum-squared interval [eps, Lambda] with a dimensionless coupling
``lam``.  Cutoffs are treated as dimensionless numbers throughout; no
unit system is attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DomainError, RegimeError

__all__ = [
    "ModelParams",
    "Grid",
    "GridFn",
    "CutoffReport",
    "eval_w",
    "w_on_grid",
    "upper_bound_V",
    "cutoff_max_ratio",
    "check_cutoff",
    "kernel",
    "make_grid",
]

# lam and the gauge coupling a are redundant via lam = 3 a^2 / (4 pi^2);
# lam is authoritative, a is optional metadata.
_GAUGE_REL_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Coupling ``lam`` and infrared/ultraviolet cutoffs ``eps``, ``big_lambda``.

    ``big_lambda`` may be ``math.inf`` for the operator that integrates to
    infinity; it must be finite for the operators on [eps, Lambda].
    """

    lam: float
    eps: float
    big_lambda: float
    gauge_coupling: float | None = None

    def __post_init__(self):
        if not (self.lam > 0):
            raise ArgumentError(f"lam must be positive, got {self.lam}")
        if not (self.eps > 0) or not math.isfinite(self.eps):
            raise ArgumentError(f"eps must be positive and finite, got {self.eps}")
        if not (self.big_lambda > self.eps):
            raise ArgumentError(
                f"big_lambda must exceed eps, got {self.big_lambda} <= {self.eps}"
            )
        if self.gauge_coupling is not None:
            a = self.gauge_coupling
            if not (a >= 0):
                raise ArgumentError(f"gauge_coupling must be >= 0, got {a}")
            lam_from_a = 3.0 * a * a / (4.0 * math.pi**2)
            if abs(lam_from_a - self.lam) > _GAUGE_REL_TOL * abs(self.lam):
                raise ArgumentError(
                    f"gauge_coupling {a} implies lam={lam_from_a!r}, "
                    f"inconsistent with lam={self.lam!r}"
                )

    @classmethod
    def from_gauge_coupling(cls, a: float, eps: float, big_lambda: float) -> "ModelParams":
        return cls(3.0 * a * a / (4.0 * math.pi**2), eps, big_lambda, gauge_coupling=a)

    @property
    def uv_finite(self) -> bool:
        return math.isfinite(self.big_lambda)

    @property
    def ratio(self) -> float:
        """eps / big_lambda (0.0 when the ultraviolet cutoff is infinite)."""
        return self.eps / self.big_lambda if self.uv_finite else 0.0

    def to_mapping(self) -> dict:
        out = {"lambda": self.lam, "eps": self.eps, "big_lambda": self.big_lambda}
        if self.gauge_coupling is not None:
            out["gauge_coupling"] = self.gauge_coupling
        return out

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ModelParams":
        """Build from a flat key-value section; big_lambda accepts "inf"."""
        try:
            lam = float(mapping["lambda"])
            eps = float(mapping["eps"])
            big = float(mapping["big_lambda"])
        except KeyError as exc:
            raise ArgumentError(f"missing config key: {exc.args[0]}") from None
        except (TypeError, ValueError) as exc:
            raise ArgumentError(f"bad config value: {exc}") from None
        gauge = mapping.get("gauge_coupling")
        return cls(lam, eps, big, None if gauge is None else float(gauge))


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing quadrature abscissae with exact endpoints."""

    nodes: np.ndarray
    kind: str = "log"

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=np.float64)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ArgumentError("grid needs at least 3 one-dimensional nodes")
        if not np.all(np.isfinite(nodes)):
            raise ArgumentError("grid nodes must be finite")
        if not np.all(np.diff(nodes) > 0):
            raise ArgumentError("grid nodes must be strictly increasing")
        if self.kind not in ("log", "linear"):
            raise ArgumentError(f"unknown grid kind {self.kind!r}")
        nodes.flags.writeable = False

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def lo(self) -> float:
        return float(self.nodes[0])

    @property
    def hi(self) -> float:
        return float(self.nodes[-1])


@dataclass(frozen=True, eq=False)
class GridFn:
    """A real function known by its samples on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.shape != self.grid.nodes.shape:
            raise ArgumentError(
                f"values length {values.size} != grid length {self.grid.n}"
            )
        if not np.all(np.isfinite(values)):
            raise ArgumentError("grid function values must be finite")
        values.flags.writeable = False

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "GridFn":
        return cls(grid, np.full(grid.n, float(c)))

    def with_values(self, values: np.ndarray) -> "GridFn":
        return GridFn(self.grid, values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class CutoffReport:
    ok: bool
    margin: float
    max_ratio: float


def eval_w(x, params: ModelParams):
    """Lower envelope w(x) = (4 eps / lam) sqrt(eps / (Lambda x)).

    Strictly positive and strictly decreasing on [eps, Lambda].
    """
    if not params.uv_finite:
        raise DomainError("w requires a finite ultraviolet cutoff")
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs < params.eps) or np.any(xs > params.big_lambda):
        raise DomainError(
            f"x must lie in [{params.eps}, {params.big_lambda}]"
        )
    out = (4.0 * params.eps / params.lam) * np.sqrt(
        params.eps / (params.big_lambda * xs)
    )
    return float(out) if np.isscalar(x) else out


def w_on_grid(grid: Grid, params: ModelParams) -> GridFn:
    return GridFn(grid, eval_w(grid.nodes, params))


def upper_bound_V(params: ModelParams) -> float:
    """Ceiling lam sqrt(Lambda) / 4 of the invariant band."""
    if not params.uv_finite:
        raise DomainError("the band ceiling requires a finite ultraviolet cutoff")
    return params.lam * math.sqrt(params.big_lambda) / 4.0


def cutoff_max_ratio(lam: float) -> float:
    """Largest admissible eps/Lambda for the strong-coupling results.

    Equals min(1/16, ((sqrt(lam^2 + 128 (lam-2)) - lam) / 64)^2); defined
    only for lam > 2.
    """
    if not lam > 2.0:
        raise RegimeError(f"cutoff condition needs lam > 2, got {lam}")
    second = ((math.sqrt(lam * lam + 128.0 * (lam - 2.0)) - lam) / 64.0) ** 2
    return min(1.0 / 16.0, second)


def check_cutoff(params: ModelParams) -> CutoffReport:
    """Non-strict test of eps/Lambda against :func:`cutoff_max_ratio`."""
    if not params.uv_finite:
        raise DomainError("cutoff check requires a finite ultraviolet cutoff")
    bound = cutoff_max_ratio(params.lam)
    margin = bound - params.ratio
    return CutoffReport(ok=params.ratio <= bound, margin=margin, max_ratio=bound)


def kernel(x, y):
    """Integral kernel 1/(y + x + |y - x|), i.e. 1/(2 max(x, y))."""
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("kernel arguments must be positive")
    out = 0.5 / np.maximum(xs, ys)
    return float(out) if (np.isscalar(x) and np.isscalar(y)) else out


def make_grid(lo: float, hi: float, n: int, kind: str = "log") -> Grid:
    """Log-spaced (geometric) or linear grid with exact endpoints."""
    if not (0 < lo < hi) or not math.isfinite(hi):
        raise ArgumentError(f"need 0 < lo < hi finite, got lo={lo}, hi={hi}")
    if n < 3:
        raise ArgumentError(f"need n >= 3 nodes, got {n}")
    if kind == "log":
        nodes = np.geomspace(lo, hi, n)
    elif kind == "linear":
        nodes = np.linspace(lo, hi, n)
    else:
        raise ArgumentError(f"unknown grid kind {kind!r}")
    nodes[0] = lo
    nodes[-1] = hi
    return Grid(nodes, kind)
