"""The 2-inner product on a weighted L2 space over an interval.

For functions ``f, g, h`` and a positive weight ``rho`` on ``[lo, hi]``

    (f, g | h)_rho = 1/2 iint rho(s) rho(t) det[f; h](s, t) det[g; h](s, t) ds dt
                   = int rho f g * int rho h^2 - int rho f h * int rho g h,

where ``det[f; h](s, t) = f(s) h(t) - f(t) h(s)``. Both forms are computed on
the same composite Gauss-Legendre rule, so they agree to rounding. The
determinant inequalities are obtained by sampling the functions on the
quadrature nodes and handing the vectors to :mod:`twoinner.reverses` with
the node weights ``w_i rho(x_i)`` as the base inner product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from ..errors import PreconditionError
from ..linalg import DEFAULT_TOL, REAL, WeightedInnerSpace
from ..reverses import BoundsPair, Form, InequalityReport, cond_quadratic, evaluate
from ..two_inner import TwoInnerSpace
from .expr import EvaluationError, Expr, Num, evaluate as eval_expr, to_text
from .quadrature import QuadratureDomain

DEFAULT_GRID = 257


@dataclass(frozen=True)
class WeightedL2:
    rho: Expr
    domain: QuadratureDomain
    rho_values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vals = eval_expr(self.rho, self.domain.nodes)
        if np.any(vals <= 0):
            i = int(np.argmax(vals <= 0))
            raise PreconditionError(
                f"weight {to_text(self.rho)!r} must be positive; it is {vals[i]!r} at x = {self.domain.nodes[i]!r}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "rho_values", vals)

    @property
    def nodes(self) -> np.ndarray:
        return self.domain.nodes

    @property
    def node_weights(self) -> np.ndarray:
        """Quadrature weights multiplied by the weight function."""
        return self.domain.weights * self.rho_values

    def sample(self, expr: Expr) -> np.ndarray:
        return eval_expr(expr, self.domain.nodes)

    def inner_space(self) -> WeightedInnerSpace:
        return WeightedInnerSpace(self.node_weights, REAL)


def integrate(expr: Expr, w: WeightedL2) -> float:
    """``int rho * expr`` over the domain."""
    return math.fsum(w.node_weights * w.sample(expr))


def _integral_of_product(u: np.ndarray, v: np.ndarray, w: WeightedL2) -> float:
    return math.fsum(w.node_weights * u * v)


def tip_gram(f: Expr, g: Expr, h: Expr, w: WeightedL2) -> float:
    """Single-integral (2x2 determinant) form of ``(f, g | h)_rho``."""
    fv, gv, hv = w.sample(f), w.sample(g), w.sample(h)
    fg = _integral_of_product(fv, gv, w)
    fh = _integral_of_product(fv, hv, w)
    gh = _integral_of_product(gv, hv, w)
    hh = _integral_of_product(hv, hv, w)
    return fg * hh - fh * gh


def tip_double(f: Expr, g: Expr, h: Expr, w: WeightedL2) -> float:
    """Double-integral form of ``(f, g | h)_rho``."""
    fv, gv, hv = w.sample(f), w.sample(g), w.sample(h)
    c = w.node_weights
    det_fh = np.outer(fv, hv) - np.outer(hv, fv)
    det_gh = np.outer(gv, hv) - np.outer(hv, gv)
    terms = np.outer(c, c) * det_fh * det_gh
    return 0.5 * math.fsum(terms.ravel())


def tnorm_double(f: Expr, h: Expr, w: WeightedL2) -> float:
    """``||f | h||_rho`` from the double-integral form."""
    return math.sqrt(max(tip_double(f, f, h, w), 0.0))


# --------------------------------------------------------------------------- synchronicity


@dataclass(frozen=True)
class SyncReport:
    synchronous: bool
    worst_pair: tuple[float, float, float]
    pairs_checked: int
    grid_size: int

    @property
    def verdict(self) -> str:
        return "synchronous" if self.synchronous else "not_synchronous"

    @property
    def note(self) -> str:
        return f"evidence at {self.grid_size}^2 grid pairs, not a proof"


def check_synchronous(q: Expr, p: Expr, w: WeightedL2, grid_size: int = DEFAULT_GRID, tol: float = DEFAULT_TOL) -> SyncReport:
    """Sample ``(q(s) - q(t)) (p(s) - p(t)) >= 0`` on a uniform grid."""
    if grid_size < 2:
        raise PreconditionError(f"grid_size must be >= 2, got {grid_size}")
    grid = np.linspace(w.domain.lo, w.domain.hi, grid_size)
    qv, pv = eval_expr(q, grid), eval_expr(p, grid)
    prod = np.subtract.outer(qv, qv) * np.subtract.outer(pv, pv)
    iu = np.triu_indices(grid_size, k=1)
    flat = prod[iu]
    k = int(np.argmin(flat))
    worst = float(flat[k])
    scale = max(1.0, float(np.ptp(qv)) * float(np.ptp(pv)))
    i, j = int(iu[0][k]), int(iu[1][k])
    return SyncReport(worst >= -tol * scale, (float(grid[i]), float(grid[j]), worst), flat.size, grid_size)


# --------------------------------------------------------------------------- propositions


class Prop(str, Enum):
    P41 = "4.1"
    P42 = "4.2"
    P43 = "4.3"
    P44 = "4.4"

    @property
    def form(self) -> Form:
        return _PROP_FORM[self]


_PROP_FORM = {Prop.P41: Form.THM21, Prop.P42: Form.THM22, Prop.P43: Form.THM31, Prop.P44: Form.TRI_311}


def synchronicity_pair(f: Expr, g: Expr, h: Expr, m: float, M: float) -> tuple[Expr, Expr]:
    """``(M g/h - f/h, f/h - m g/h)``, whose synchronicity implies the hypothesis."""
    return Num(M) * (g / h) - f / h, f / h - Num(m) * (g / h)


def evaluate_prop(
    n: Prop | str,
    f: Expr,
    g: Expr,
    h: Expr,
    w: WeightedL2,
    m: float,
    M: float,
    grid_size: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """Evaluate one determinant inequality on the quadrature discretization.

    ``f, g, h`` play the roles of ``x, y, z``, and ``(m, M)`` those of
    ``(a, A)``. The hypothesis is checked twice: exactly, through
    ``(M g - f, f - m g | h)_rho >= 0`` (this decides the verdict), and by
    sampling the synchronicity of the pair from :func:`synchronicity_pair`,
    which is sufficient but not necessary and is only reported.
    """
    n = Prop(n)
    if not (math.isfinite(m) and math.isfinite(M)) or not M > m > 0:
        raise PreconditionError(f"need M > m > 0, got m={m!r}, M={M!r}")
    hv = w.sample(h)
    if np.any(hv == 0):
        i = int(np.argmax(hv == 0))
        raise PreconditionError(f"h vanishes at quadrature node x = {w.nodes[i]!r}")
    q, p = synchronicity_pair(f, g, h, m, M)
    try:
        sync = check_synchronous(q, p, w, grid_size, tol)
    except EvaluationError as exc:
        raise PreconditionError(f"synchronicity pair undefined: {exc}") from exc

    s = TwoInnerSpace(w.inner_space(), tol)
    x, y, z = s.vector(w.sample(f)), s.vector(w.sample(g)), s.vector(hv)
    b = BoundsPair(float(m), float(M))
    report = evaluate(s, n.form, x, y, z, b, tol)
    diagnostics = {
        "prop": n.value,
        "hypothesis_quadratic": cond_quadratic(s, x, y, z, b),
        "synchronous": sync.verdict,
        "sync_worst_pair": list(sync.worst_pair),
        "sync_pairs_checked": sync.pairs_checked,
        "sync_note": sync.note,
        "nodes": w.domain.size,
    }
    return replace(report, diagnostics={**report.diagnostics, **diagnostics})

