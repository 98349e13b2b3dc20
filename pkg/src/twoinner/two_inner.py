"""The Gram-determinant 2-inner product and its 2-norm.

For a base inner product ``<.,.>`` the standard 2-inner product is

    (x, y | z) = <x, y><z, z> - <x, z><z, y>,

the 2x2 Gram determinant. It is evaluated here as ``<z, z> <P x, P y>`` with
``P`` the orthogonal projection onto the complement of ``z``. The two
expressions are algebraically identical; the projected one never produces a
negative ``(x, x | z)`` and keeps the rounding error proportional to the size
of the inputs even when ``x`` is almost parallel to ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConsistencyError, ModeError, PreconditionError
from .linalg import (
    DEFAULT_TOL,
    Scalar,
    WeightedInnerSpace,
    inner,
    norm,
    random_scalar,
    random_vector,
)

# Threshold on the relative projection residual used to decide linear dependence.
DEPENDENCE_TOL = 1e-8


@dataclass(frozen=True)
class TwoInnerSpace:
    base: WeightedInnerSpace
    tol: float = DEFAULT_TOL

    @classmethod
    def unit(cls, dim: int, mode: str = "real", tol: float = DEFAULT_TOL) -> "TwoInnerSpace":
        return cls(WeightedInnerSpace.unit(dim, mode), tol)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def mode(self) -> str:
        return self.base.mode

    @property
    def is_complex(self) -> bool:
        return self.base.is_complex

    def vector(self, entries) -> np.ndarray:
        return self.base.vector(entries)

    def scalar(self, value: Scalar) -> Scalar:
        return self.base.scalar(value)


def _project_out(space: WeightedInnerSpace, x: np.ndarray, z: np.ndarray, zz: float) -> np.ndarray:
    return x - (inner(space, x, z) / zz) * z


def tip(s: TwoInnerSpace, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> Scalar:
    """``(x, y | z)``: linear in ``x``, conjugate-linear in ``y``."""
    b = s.base
    zz = norm(b, z) ** 2
    if zz == 0.0:
        inner(b, x, y)  # dimension checks
        return 0j if s.is_complex else 0.0
    xp = _project_out(b, x, z, zz)
    yp = xp if y is x else _project_out(b, y, z, zz)
    return zz * inner(b, xp, yp)


def tip_sq(s: TwoInnerSpace, x: np.ndarray, z: np.ndarray) -> float:
    """``(x, x | z)`` as a real number (always >= 0 in the projected evaluation)."""
    b = s.base
    zz = norm(b, z) ** 2
    if zz == 0.0:
        norm(b, x)
        return 0.0
    return zz * norm(b, _project_out(b, x, z, zz)) ** 2


def tnorm(s: TwoInnerSpace, x: np.ndarray, z: np.ndarray) -> float:
    """The 2-norm ``||x | z|| = sqrt((x, x | z))``."""
    v = tip_sq(s, x, z)
    if v < 0.0:
        scale = (norm(s.base, x) * norm(s.base, z)) ** 2
        if v < -s.tol * max(scale, 1.0):
            raise ConsistencyError(f"(x, x | z) = {v!r} is negative beyond tolerance")
        return 0.0
    return math.sqrt(v)


def polarize_real(s: TwoInnerSpace, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> float:
    """Recover ``(x, y | z)`` from 2-norms in the real case."""
    if s.is_complex:
        raise ModeError("polarize_real requires a real space; use polarize_complex")
    return 0.25 * (tip_sq(s, z, x + y) - tip_sq(s, z, x - y))


def polarize_complex(s: TwoInnerSpace, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> complex:
    """Recover ``(x, y | z)`` from 2-norms in the complex case."""
    if not s.is_complex:
        raise ModeError("polarize_complex requires a complex space; use polarize_real")
    re = 0.25 * (tip_sq(s, z, x + y) - tip_sq(s, z, x - y))
    im = 0.25 * (tip_sq(s, z, x + 1j * y) - tip_sq(s, z, x - 1j * y))
    return complex(re, im)


def cbs_gap(s: TwoInnerSpace, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> float:
    """``||x|z||^2 ||y|z||^2 - |(x, y | z)|^2``, nonnegative by the CBS inequality.

    Evaluated as ``||x - l y | z||^2 ||y|z||^2`` with ``l = (x,y|z) / ||y|z||^2``,
    which equals the difference above exactly but does not cancel when the
    gap is small compared with ``||x|z||^2 ||y|z||^2``.
    """
    y2 = tip_sq(s, y, z)
    if y2 == 0.0:
        tip_sq(s, x, z)
        return 0.0
    lam = tip(s, x, y, z) / y2
    return tip_sq(s, x - lam * y, z) * y2


def linearly_dependent(
    s: TwoInnerSpace, *vectors: np.ndarray, threshold: float = DEPENDENCE_TOL
) -> bool:
    """Numerical linear dependence of a small family of vectors.

    Each vector is tested against the span of the ones before it; the family is
    dependent as soon as some vector has a projection residual at most
    ``threshold`` times its own norm.
    """
    b = s.base
    sw = np.sqrt(b.weights)
    basis: list[np.ndarray] = []
    for v in vectors:
        nv = norm(b, v)
        if nv == 0.0:
            return True
        r = sw * v / nv
        for q in basis:
            r = r - np.vdot(q, r) * q
        rn = float(np.linalg.norm(r))
        if rn <= threshold:
            return True
        # second pass for stability of the orthonormal basis
        q = r / rn
        for p in basis:
            q = q - np.vdot(p, q) * p
        basis.append(q / np.linalg.norm(q))
    return False


# --------------------------------------------------------------------------- axiom audit

Form = Callable[[np.ndarray, np.ndarray, np.ndarray], Scalar]

AXIOMS = (
    "2I1", "2I2", "2I3", "2I4", "2I5",
    "2N1", "2N2", "2N3", "2N4",
    "1.1", "1.4", "1.6", "1.7", "1.8",
)


@dataclass
class AxiomResult:
    name: str
    worst_residual: float = 0.0
    trial: int = -1
    witness: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return self.worst_residual <= self.tol

    def update(self, residual: float, trial: int, witness: dict) -> None:
        # strict '>' keeps the lowest trial index on ties
        if residual > self.worst_residual or (math.isnan(residual) and not math.isnan(self.worst_residual)):
            self.worst_residual = residual
            self.trial = trial
            self.witness = witness


@dataclass
class AxiomReport:
    dim: int
    mode: str
    trials: int
    seed: int
    results: dict[str, AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    @property
    def worst_residual(self) -> float:
        return max(r.worst_residual for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.passed]


def audit_axioms(
    s: TwoInnerSpace,
    trials: int,
    seed: int = 42,
    form: Form | None = None,
    tol: float | None = None,
) -> AxiomReport:
    """Check the 2-inner product axioms on random inputs.

    Every residual is relative: it is divided by the product of base norms of
    the arguments at the degree at which they enter the identity. ``form``
    substitutes another three-argument form for :func:`tip`, which lets tests
    verify that the audit catches a broken form.
    """
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")
    tol = s.tol if tol is None else tol
    f: Form = form if form is not None else (lambda x, y, z: tip(s, x, y, z))
    b = s.base
    rng = np.random.default_rng(seed)
    res = {name: AxiomResult(name, tol=tol) for name in AXIOMS}

    def n2(x, z):
        v = complex(f(x, x, z)).real
        return math.sqrt(v) if v > 0 else 0.0

    def neg_part(x, z):
        v = complex(f(x, x, z))
        return max(-v.real, 0.0) + abs(v.imag)

    for k in range(trials):
        x, x2, y, z = (random_vector(rng, b) for _ in range(4))
        alpha = random_scalar(rng, b)
        ralpha = float(rng.standard_normal())
        nx, nx2, ny, nz = (norm(b, v) for v in (x, x2, y, z))
        aa = abs(alpha)
        wit = {"x": x, "y": y, "z": z, "x2": x2, "alpha": alpha}
        fxy = f(x, y, z)

        dep = alpha * z
        r = max(neg_part(x, z) / (nx * nz) ** 2, abs(f(dep, dep, z)) / (aa * nz * nz) ** 2)
        res["2I1"].update(r, k, wit)
        res["2I2"].update(abs(f(x, x, z) - f(z, z, x)) / (nx * nz) ** 2, k, wit)
        res["2I3"].update(abs(f(y, x, z) - np.conj(fxy)) / (nx * ny * nz * nz), k, wit)
        res["2I4"].update(abs(f(alpha * x, y, z) - alpha * fxy) / (aa * nx * ny * nz * nz), k, wit)
        res["2I5"].update(
            abs(f(x + x2, y, z) - fxy - f(x2, y, z)) / ((nx + nx2) * ny * nz * nz), k, wit
        )

        r = max(math.sqrt(neg_part(x, z)) / (nx * nz), n2(dep, z) / (aa * nz * nz))
        res["2N1"].update(r, k, wit)
        res["2N2"].update(abs(n2(z, x) - n2(x, z)) / (nx * nz), k, wit)
        res["2N3"].update(abs(n2(alpha * x, z) - aa * n2(x, z)) / (aa * nx * nz), k, wit)
        res["2N4"].update(
            max(n2(x + x2, z) - n2(x, z) - n2(x2, z), 0.0) / ((nx + nx2) * nz), k, wit
        )

        res["1.1"].update(abs(f(x, alpha * y, z) - np.conj(alpha) * fxy) / (aa * nx * ny * nz * nz), k, wit)
        res["1.4"].update(
            abs(f(x, y, ralpha * z) - ralpha**2 * fxy) / (ralpha**2 * nx * ny * nz * nz),
            k, {**wit, "alpha": ralpha},
        )
        res["1.6"].update(abs(f(x, y, alpha * z) - aa**2 * fxy) / (aa**2 * nx * ny * nz * nz), k, wit)
        fxx = complex(f(x, x, z)).real
        fyy = complex(f(y, y, z)).real
        lhs = fyy * (fxx * fyy - abs(fxy) ** 2)
        res["1.7"].update(max(-lhs, 0.0) / (nx**2 * ny**4 * nz**6), k, wit)
        res["1.8"].update(max(abs(f(z, y, z)), abs(f(y, z, z))) / (ny * nz**3), k, wit)

    return AxiomReport(s.dim, s.mode, trials, seed, res)
