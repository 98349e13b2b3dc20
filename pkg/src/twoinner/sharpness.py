"""Extremal inputs for the sharp constants, and a random search that estimates them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .linalg import random_vector
from .reverses import TARGET_CONSTANT, BoundsPair, Form, coerce_bounds, cond_quadratic, implied_constant
from .sampling import random_instance
from .two_inner import TwoInnerSpace, cbs_gap, tip, tnorm

MAX_REDRAWS = 16
DEGENERATE = 1e-10
EPSILON_GRID = (1e-6, 1e-4, 1e-2, 0.1, 0.5)


@dataclass(frozen=True)
class ExtremalWitness:
    """An admissible input and the ratio it attains.

    ``m`` is the direction that moves ``x`` away from ``((a+A)/2) y``: the unit
    vector of the construction for built witnesses, the raw offset for
    witnesses found by search.
    """

    form: Form
    x: np.ndarray
    y: np.ndarray
    m: np.ndarray
    z: np.ndarray
    bounds: BoundsPair
    achieved_ratio: float
    target_constant: float


@dataclass(frozen=True)
class ConstantEstimate:
    form: Form
    estimate: float
    target_constant: float
    trials: int
    seed: int
    best_witness: ExtremalWitness
    source: str  # "random", "refined" or "witness"


def _require_dim(s: TwoInnerSpace) -> None:
    if s.dim < 3:
        raise PreconditionError(f"sharpness constructions need dim >= 3, got {s.dim}")


def orthonormal_pair(
    s: TwoInnerSpace, z: np.ndarray, seed: int = 0, candidates: tuple | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """``y, m`` with ``||y|z|| = ||m|z|| = 1`` and ``(y, m | z) = 0``.

    Gram-Schmidt in the semi-inner product ``(., . | z)`` applied to two random
    draws, or to ``candidates`` when given.
    """
    _require_dim(s)
    if float(np.linalg.norm(z)) == 0.0:
        raise PreconditionError("z must be nonzero")
    rng = np.random.default_rng(seed)
    nz = float(np.linalg.norm(z))
    for attempt in range(MAX_REDRAWS):
        if candidates is not None and attempt == 0:
            u, v = (s.vector(c) for c in candidates)
        else:
            u, v = random_vector(rng, s.base), random_vector(rng, s.base)
        nu = tnorm(s, u, z)
        if nu <= DEGENERATE * float(np.linalg.norm(u)) * nz:
            continue
        y = u / nu
        w = v - tip(s, v, y, z) * y
        nw = tnorm(s, w, z)
        if nw <= DEGENERATE * float(np.linalg.norm(v)) * nz:
            continue
        return s.vector(y), s.vector(w / nw)
    raise PreconditionError(f"could not find independent directions after {MAX_REDRAWS} draws")


def extremal_thm21(s: TwoInnerSpace, z: np.ndarray, b: BoundsPair, seed: int = 0) -> ExtremalWitness:
    """``x = (a+A)/2 y + (A-a)/2 m``, which puts x on the hypothesis sphere and
    attains the constant 1/4 of the refined gap bound."""
    _require_dim(s)
    b = coerce_bounds(s, b)
    if b.a == b.A:
        raise PreconditionError("extremal_thm21 needs a != A")
    y, m = orthonormal_pair(s, z, seed)
    x = s.vector(b.center * y + ((b.A - b.a) / 2) * m)
    y2 = tnorm(s, y, z) ** 2
    gap = cbs_gap(s, x, y, z)
    ratio = gap / (b.spread**2 * y2 * y2)
    return ExtremalWitness(Form.THM21, x, y, m, z, b, ratio, TARGET_CONSTANT[Form.THM21])


def epsilon_family_thm31(s: TwoInnerSpace, z: np.ndarray, eps: float, seed: int = 0) -> ExtremalWitness:
    """Witness with ``A = 1 + sqrt(eps)``, ``a = 1 - sqrt(eps)``.

    Its ratio ``(||x|| ||y|| - |(x,y|z)|) |A+a| / (|A-a|^2 ||y||^2)`` equals
    ``1 / (2 (sqrt(1 + eps) + 1))`` and tends to 1/4 as ``eps -> 0+``.
    """
    _require_dim(s)
    if not 0.0 < eps < 1.0:
        raise PreconditionError(f"eps must lie in (0, 1), got {eps!r}")
    r = math.sqrt(eps)
    b = coerce_bounds(s, BoundsPair(1.0 - r, 1.0 + r))
    y, e = orthonormal_pair(s, z, seed)
    x = s.vector(y + r * e)
    X, Y = tnorm(s, x, z), tnorm(s, y, z)
    T = abs(tip(s, x, y, z))
    # ||x|| ||y|| - |t| without cancellation: (X^2 Y^2 - T^2) / (X Y + T)
    gap = cbs_gap(s, x, y, z)
    ratio = (gap / (X * Y + T)) * abs(b.A + b.a) / (b.spread**2 * Y * Y)
    return ExtremalWitness(Form.THM31, x, y, e, z, b, ratio, TARGET_CONSTANT[Form.THM31])


def _known_witnesses(s: TwoInnerSpace, form: Form, rng: np.random.Generator, seed: int) -> list[ExtremalWitness]:
    z = s.vector(random_vector(rng, s.base))
    if form in (Form.THM21, Form.THM22, Form.GAP_114):
        b = BoundsPair(0.0, 2.0) if not s.is_complex else BoundsPair(1.0, 1 + 2j)
        w = extremal_thm21(s, z, b, seed)
        ratio = implied_constant(s, form, w.x, w.y, w.z, w.bounds)
        return [ExtremalWitness(form, w.x, w.y, w.m, w.z, w.bounds, ratio, TARGET_CONSTANT[form])]
    if form in (Form.THM31, Form.BND_315):
        w = epsilon_family_thm31(s, z, 1e-6, seed)
        return [ExtremalWitness(form, w.x, w.y, w.m, w.z, w.bounds, w.achieved_ratio, TARGET_CONSTANT[form])]
    return []


def _refine(
    s: TwoInnerSpace, form: Form, x: np.ndarray, y: np.ndarray, z: np.ndarray, b: BoundsPair, steps: int = 32
) -> tuple[np.ndarray, float]:
    """Coordinate-wise hill climb on ``x``, projected back into the hypothesis ball."""
    radius = 0.5 * b.spread * tnorm(s, y, z)
    center = b.center * y

    def project(v):
        d = tnorm(s, v - center, z)
        if d > radius and d > 0:
            v = center + (v - center) * (radius / d)
        return s.vector(v)

    best = implied_constant(s, form, x, y, z, b)
    step = 0.1 * max(float(np.linalg.norm(x - center)), 1e-3)
    for k in range(steps):
        i = k % s.dim
        improved = False
        for sign in (1.0, -1.0):
            cand = np.array(x)
            cand[i] += sign * step
            cand = project(cand)
            if cond_quadratic(s, cand, y, z, b) < -s.tol * max(1.0, radius * radius):
                continue
            r = implied_constant(s, form, cand, y, z, b)
            if r > best:
                x, best, improved = cand, r, True
                break
        if not improved:
            step *= 0.5
    return x, best


def estimate_constant(s: TwoInnerSpace, form: Form | str, trials: int, seed: int = 42) -> ConstantEstimate:
    """Largest implied constant over random admissible inputs and known witnesses."""
    form = Form(form)
    _require_dim(s)
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    target = TARGET_CONSTANT[form]

    best_ratio, best_inst = -math.inf, None
    for k in range(trials):
        inst = random_instance(rng, s, form)
        r = implied_constant(s, form, inst.x, inst.y, inst.z, inst.bounds)
        if math.isfinite(r) and r > best_ratio:
            best_ratio, best_inst = r, inst

    candidates: list[tuple[float, str, ExtremalWitness]] = []
    if best_inst is not None:
        x, refined = _refine(s, form, best_inst.x, best_inst.y, best_inst.z, best_inst.bounds)
        src = "refined" if refined > best_ratio else "random"
        ratio = max(refined, best_ratio)
        if refined <= best_ratio:
            x = best_inst.x
        offset = s.vector(x - best_inst.bounds.center * best_inst.y)
        w = ExtremalWitness(form, x, best_inst.y, offset, best_inst.z, best_inst.bounds, ratio, target)
        candidates.append((ratio, src, w))
    for w in _known_witnesses(s, form, rng, seed):
        candidates.append((w.achieved_ratio, "witness", w))
    if not candidates:
        raise PreconditionError(f"no admissible input produced a finite ratio for {form.name}")
    # ties go to the earliest candidate
    ratio, src, witness = max(candidates, key=lambda c: c[0])
    return ConstantEstimate(form, ratio, target, trials, seed, witness, src)


def epsilon_ratios(s: TwoInnerSpace, z: np.ndarray, grid=EPSILON_GRID, seed: int = 0) -> list[tuple[float, float]]:
    return [(eps, epsilon_family_thm31(s, z, eps, seed).achieved_ratio) for eps in grid]
