"""Reverse CBS inequalities in 2-inner product spaces.

Every bound chain is evaluated member by member. A chain ``c0 <= c1 <= ...``
is stored with the consecutive differences as slacks, so a negative slack
pinpoints the link that failed. The localization hypothesis

    Re (A y - x, x - a y | z) >= 0

is always evaluated and reported; an input that misses it is labelled
``hypothesis_unmet`` rather than rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import PreconditionError
from .linalg import Scalar
from .two_inner import TwoInnerSpace, cbs_gap, tip, tip_sq, tnorm


class Form(str, Enum):
    GAP_114 = "gap114"
    MULT_115 = "mult115"
    ADD_116 = "add116"
    THM21 = "thm21"
    THM22 = "thm22"
    THM31 = "thm31"
    TRI_311 = "tri311"
    ADD_313 = "add313"
    ADD_314 = "add314"
    BND_315 = "bnd315"


class Verdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    HYPOTHESIS_UNMET = "hypothesis_unmet"


# Guard used for sgn((a + A) / 2) and for deciding A != -a.
SUM_EPS = 1e-12


@dataclass(frozen=True)
class BoundsPair:
    """The scalars ``a``, ``A`` of the localization hypothesis."""

    a: Scalar
    A: Scalar

    @property
    def center(self) -> Scalar:
        return (self.a + self.A) / 2

    @property
    def spread(self) -> float:
        """``|A - a|``."""
        return abs(self.A - self.a)

    @property
    def re_prod(self) -> float:
        """``Re(conj(a) A)``."""
        return (complex(self.a).conjugate() * complex(self.A)).real

    @property
    def is_real_positive(self) -> bool:
        a, A = complex(self.a), complex(self.A)
        return a.imag == 0 and A.imag == 0 and A.real > a.real > 0

    @property
    def sum_nonzero(self) -> bool:
        return abs(self.a + self.A) > SUM_EPS * max(abs(self.a), abs(self.A), 1.0)

    @property
    def re_prod_positive(self) -> bool:
        return self.re_prod > 0

    def flags(self) -> dict[str, bool]:
        return {
            "is_real_positive": self.is_real_positive,
            "sum_nonzero": self.sum_nonzero,
            "re_prod_positive": self.re_prod_positive,
        }


@dataclass(frozen=True)
class InequalityReport:
    form: Form
    condition_value: float
    chain: tuple[tuple[str, float], ...]
    slacks: tuple[float, ...]
    verdict: Verdict
    tol: float
    scale: float
    condition_scale: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.chain]

    @property
    def labels(self) -> list[str]:
        return [k for k, _ in self.chain]

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def min_slack(self) -> float:
        return min(self.slacks)


def make_report(
    form: Form,
    condition_value: float,
    chain: list[tuple[str, float]],
    tol: float,
    scale: float,
    condition_scale: float,
    diagnostics: dict | None = None,
) -> InequalityReport:
    chain = [(label, float(v)) for label, v in chain]
    slacks = tuple(chain[i + 1][1] - chain[i][1] for i in range(len(chain) - 1))
    scale = max(scale, max(abs(v) for _, v in chain))
    if not math.isfinite(condition_value) or condition_value < -tol * condition_scale:
        verdict = Verdict.HYPOTHESIS_UNMET
    elif all(math.isfinite(v) for _, v in chain) and all(sl >= -tol * scale for sl in slacks):
        verdict = Verdict.HOLDS
    else:
        verdict = Verdict.VIOLATED
    return InequalityReport(
        form, float(condition_value), tuple(chain), slacks, verdict, tol, scale,
        condition_scale, dict(diagnostics or {}),
    )


# --------------------------------------------------------------------------- hypotheses


def coerce_bounds(s: TwoInnerSpace, b: BoundsPair) -> BoundsPair:
    """Return ``b`` with both scalars in the field of ``s`` (ModeError otherwise)."""
    return BoundsPair(s.scalar(b.a), s.scalar(b.A))


def cond_quadratic(s: TwoInnerSpace, x, y, z, b: BoundsPair) -> float:
    """``Re (A y - x, x - a y | z)``; nonnegative iff the hypothesis holds."""
    b = coerce_bounds(s, b)
    return complex(tip(s, b.A * y - x, x - b.a * y, z)).real


def cond_ball(s: TwoInnerSpace, x, y, z, b: BoundsPair) -> float:
    """``1/2 |A - a| ||y|z|| - ||x - (a+A)/2 y | z||``; the ball form of the hypothesis."""
    b = coerce_bounds(s, b)
    return 0.5 * b.spread * tnorm(s, y, z) - tnorm(s, x - b.center * y, z)


def condition_scale(s: TwoInnerSpace, x, y, z, b: BoundsPair) -> float:
    k = max(abs(b.a), abs(b.A))
    return max(1.0, tip_sq(s, x, z), k * k * tip_sq(s, y, z))


# --------------------------------------------------------------------------- identities


def identity_26(s: TwoInnerSpace, x, y, z, lam: Scalar) -> tuple[float, float]:
    """Both sides of the lambda-shift identity for the CBS gap."""
    y2 = tip_sq(s, y, z)
    t = tip(s, x, y, z)
    lhs = tip_sq(s, x, z) * y2 - abs(t) ** 2
    rhs = tip_sq(s, x - lam * y, z) * y2 - abs(lam * y2 - t) ** 2
    return lhs, rhs


def identity_29(s: TwoInnerSpace, x, y, z, b: BoundsPair) -> tuple[float, float]:
    """Both sides of the identity splitting the CBS gap along the hypothesis."""
    b = coerce_bounds(s, b)
    y2 = tip_sq(s, y, z)
    t = complex(tip(s, x, y, z))
    a, A = complex(b.a), complex(b.A)
    lhs = cbs_gap(s, x, y, z)
    rhs = ((A * y2 - t) * (t.conjugate() - a.conjugate() * y2)).real - y2 * cond_quadratic(s, x, y, z, b)
    return lhs, rhs


# --------------------------------------------------------------------------- evaluation

_REQUIRES = {
    Form.MULT_115: "re_prod_positive",
    Form.ADD_116: "re_prod_positive",
    Form.ADD_313: "re_prod_positive",
    Form.THM31: "sum_nonzero",
    Form.TRI_311: "is_real_positive",
    Form.ADD_314: "is_real_positive",
    Form.BND_315: "is_real_positive",
}


def required_flag(form: Form) -> str | None:
    return _REQUIRES.get(Form(form))


def check_preconditions(form: Form, b: BoundsPair) -> None:
    flag = required_flag(form)
    if flag is not None and not getattr(b, flag):
        raise PreconditionError(f"{Form(form).name} requires {flag} (a={b.a!r}, A={b.A!r})")


def _norm_product_defect(gap: float, xy: float, T: float) -> float:
    """``||x|| ||y|| - |(x,y|z)|`` computed as ``gap / (||x|| ||y|| + |(x,y|z)|)``."""
    den = xy + T
    return gap / den if den > 0 else 0.0


def _sum_minus_root(A: complex, a: complex, root: float) -> float:
    """``|A + a| - 2 sqrt(Re(conj(a) A))`` as ``|A - a|^2 / (|A + a| + 2 sqrt(...))``."""
    return abs(A - a) ** 2 / (abs(A + a) + 2 * root)


def sgn(alpha: Scalar) -> Scalar:
    return alpha / abs(alpha)


def evaluate(
    s: TwoInnerSpace,
    form: Form | str,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    b: BoundsPair,
    tol: float | None = None,
) -> InequalityReport:
    """Evaluate one bound chain term by term."""
    form = Form(form)
    tol = s.tol if tol is None else tol
    b = coerce_bounds(s, b)
    check_preconditions(form, b)

    x2, y2 = tip_sq(s, x, z), tip_sq(s, y, z)
    X, Y = math.sqrt(x2), math.sqrt(y2)
    t = complex(tip(s, x, y, z))
    T = abs(t)
    gap = cbs_gap(s, x, y, z)
    defect = _norm_product_defect(gap, X * Y, T)
    cond = cond_quadratic(s, x, y, z, b)
    cscale = condition_scale(s, x, y, z, b)
    a, A = complex(b.a), complex(b.A)
    c = (a + A) / 2
    d2 = abs(A - a) ** 2
    k2 = max(abs(a), abs(A)) ** 2
    deg4 = max(1.0, x2 * y2, k2 * y2 * y2)
    deg2 = max(1.0, X * Y, math.sqrt(k2) * y2)

    if form is Form.GAP_114:
        chain = [("zero", 0.0), ("cbs_gap", gap), ("quarter_spread_y4", 0.25 * d2 * y2 * y2)]
        scale = deg4
    elif form is Form.THM21:
        full = 0.25 * d2 * y2 * y2
        chain = [
            ("zero", 0.0),
            ("cbs_gap", gap),
            ("refined_bound", full - abs(c * y2 - t) ** 2),
            ("quarter_spread_y4", full),
        ]
        scale = deg4
    elif form is Form.THM22:
        full = 0.25 * d2 * y2 * y2
        chain = [
            ("zero", 0.0),
            ("cbs_gap", gap),
            ("refined_bound", full - cond * y2),
            ("quarter_spread_y4", full),
        ]
        scale = deg4
    elif form is Form.MULT_115:
        root = math.sqrt(b.re_prod)
        chain = [
            ("norm_product", X * Y),
            ("re_weighted_tip", 0.5 * ((A + a).conjugate() * t).real / root),
            ("abs_weighted_tip", 0.5 * abs(A + a) / root * T),
        ]
        scale = deg2
    elif form is Form.ADD_116:
        chain = [("zero", 0.0), ("cbs_gap", gap), ("ratio_bound", 0.25 * d2 / b.re_prod * T * T)]
        scale = deg4
    elif form is Form.THM31:
        # The sgn factor enters conjugated: the hypothesis expands to
        # ||x||^2 + |c|^2 ||y||^2 <= ... + 2 Re[conj(c) (x, y | z)].
        chain = [
            ("zero", 0.0),
            ("norm_product_minus_abs_tip", defect),
            ("norm_product_minus_re_sgn_tip", X * Y - (sgn(c).conjugate() * t).real),
            ("spread_over_sum_bound", 0.25 * d2 / abs(A + a) * y2),
        ]
        scale = deg2
    elif form is Form.TRI_311:
        m, M = a.real, A.real
        xy = tnorm(s, x + y, z)
        chain = [
            ("zero", 0.0),
            ("triangle_defect", X + Y - xy),
            ("triangle_bound", 0.5 * (M - m) / math.sqrt(M + m) * Y),
        ]
        scale = max(1.0, X, Y)
    elif form is Form.ADD_313:
        root = math.sqrt(b.re_prod)
        chain = [
            ("zero", 0.0),
            ("norm_product_minus_abs_tip", defect),
            ("additive_bound", 0.5 * _sum_minus_root(A, a, root) / root * T),
        ]
        scale = deg2
    elif form is Form.ADD_314:
        m, M = a.real, A.real
        chain = [
            ("zero", 0.0),
            ("norm_product_minus_abs_tip", defect),
            ("additive_bound", 0.5 * (M - m) ** 2 / (math.sqrt(M) + math.sqrt(m)) ** 2 / math.sqrt(M * m) * T),
        ]
        scale = deg2
    elif form is Form.BND_315:
        m, M = a.real, A.real
        chain = [
            ("zero", 0.0),
            ("norm_product_minus_abs_tip", defect),
            ("spread_over_sum_bound", 0.25 * (M - m) ** 2 / (M + m) * y2),
        ]
        scale = deg2
    else:  # pragma: no cover - Form is exhaustive
        raise PreconditionError(f"unknown form {form!r}")

    return make_report(form, cond, chain, tol, scale, cscale)


def implied_constant(s: TwoInnerSpace, form: Form | str, x, y, z, b: BoundsPair) -> float:
    """Smallest constant that would make the form's bound hold for this input.

    The bound is taken with its leading numeric constant stripped, e.g. for
    ``THM21`` the value is ``(gap + |c ||y||^2 - (x,y|z)|^2) / (|A-a|^2 ||y||^4)``,
    which the theorem caps at 1/4. Returns ``nan`` when the denominator vanishes.
    """
    form = Form(form)
    b = coerce_bounds(s, b)
    x2, y2 = tip_sq(s, x, z), tip_sq(s, y, z)
    X, Y = math.sqrt(x2), math.sqrt(y2)
    t = complex(tip(s, x, y, z))
    T = abs(t)
    gap = cbs_gap(s, x, y, z)
    defect = _norm_product_defect(gap, X * Y, T)
    a, A = complex(b.a), complex(b.A)
    d2 = abs(A - a) ** 2

    def ratio(num: float, den: float) -> float:
        return num / den if den > 0 and math.isfinite(den) else math.nan

    if form is Form.GAP_114:
        return ratio(gap, d2 * y2 * y2)
    if form is Form.THM21:
        # gap + |c ||y||^2 - t|^2 = ||x - c y||^2 ||y||^2
        return ratio(tip_sq(s, x - b.center * y, z), d2 * y2)
    if form is Form.THM22:
        # gap + ||y||^2 Re(Ay - x, x - ay | z), rearranged without cancellation
        return ratio(((A * y2 - t) * (t.conjugate() - a.conjugate() * y2)).real, d2 * y2 * y2)
    if form is Form.MULT_115:
        return ratio(X * Y * math.sqrt(b.re_prod), ((A + a).conjugate() * t).real)
    if form is Form.ADD_116:
        return ratio(gap * b.re_prod, d2 * T * T)
    if form in (Form.THM31, Form.BND_315):
        return ratio((defect) * abs(A + a), d2 * y2)
    if form in (Form.ADD_313, Form.ADD_314):
        root = math.sqrt(b.re_prod)
        return ratio(defect * root, _sum_minus_root(A, a, root) * T)
    if form is Form.TRI_311:
        m, M = a.real, A.real
        return ratio((X + Y - tnorm(s, x + y, z)) * math.sqrt(M + m), (M - m) * Y)
    raise PreconditionError(f"unknown form {form!r}")  # pragma: no cover


TARGET_CONSTANT = {
    Form.GAP_114: 0.25,
    Form.THM21: 0.25,
    Form.THM22: 0.25,
    Form.MULT_115: 0.5,
    Form.ADD_116: 0.25,
    Form.THM31: 0.25,
    Form.BND_315: 0.25,
    Form.ADD_313: 0.5,
    Form.ADD_314: 0.5,
    Form.TRI_311: 0.5,
}
