"""Random inputs that satisfy the localization hypothesis by construction.

``a`` and ``A`` are drawn as ``center -/+ radius * u`` with ``|u| = 1`` and the
radius log-uniform on ``[1e-2, 1e2]``. ``x`` is then placed inside the ball of
center ``center * y`` and radius ``radius * ||y|z||`` (a quarter of the draws
land exactly on the sphere), plus an arbitrary multiple of ``z`` which leaves
every 2-norm unchanged.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .linalg import random_vector
from .reverses import BoundsPair, Form, required_flag
from .two_inner import TwoInnerSpace, tnorm


@dataclass(frozen=True)
class Instance:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    bounds: BoundsPair


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(10.0 ** rng.uniform(math.log10(lo), math.log10(hi)))


def random_bounds(rng: np.random.Generator, s: TwoInnerSpace, kind: str | None) -> BoundsPair:
    """Draw ``(a, A)`` with the flag ``kind`` (a :class:`BoundsPair` property) true.

    ``kind=None`` draws an unrestricted pair with ``a != -A``.
    """
    r = _log_uniform(rng, 1e-2, 1e2)
    if kind == "is_real_positive":
        c = r * (1.0 + _log_uniform(rng, 1e-2, 1e1))
        return BoundsPair(c - r, c + r)
    if s.is_complex:
        u = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        phase = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    else:
        u = 1.0 if rng.random() < 0.5 else -1.0
        phase = 1.0 if rng.random() < 0.5 else -1.0
    if kind == "re_prod_positive":
        # Re(conj(a) A) = |c|^2 - r^2 for a, A = c -/+ r u
        c = phase * r * (1.0 + _log_uniform(rng, 1e-2, 1e1))
    else:
        c = phase * _log_uniform(rng, 1e-2, 1e2)
    return BoundsPair(s.scalar(c - r * u), s.scalar(c + r * u))


def inside_ball(
    rng: np.random.Generator,
    s: TwoInnerSpace,
    y: np.ndarray,
    z: np.ndarray,
    b: BoundsPair,
    boundary: bool | None = None,
) -> np.ndarray:
    """A point ``x`` with ``||x - c y | z|| <= |A - a| ||y|z|| / 2``."""
    if boundary is None:
        boundary = rng.random() < 0.25
    frac = 1.0 if boundary else float(rng.random()) ** (1.0 / 3.0)
    radius = 0.5 * b.spread * tnorm(s, y, z)
    for _ in range(16):
        w = random_vector(rng, s.base)
        nw = tnorm(s, w, z)
        if nw > 1e-10 * float(np.linalg.norm(w)) * float(np.linalg.norm(z)):
            break
    x = b.center * y + (frac * radius / nw) * w + float(rng.standard_normal()) * z
    return s.vector(x)


def random_instance(rng: np.random.Generator, s: TwoInnerSpace, form: Form | str | None = None) -> Instance:
    """A hypothesis-satisfying input admissible for ``form``."""
    kind = required_flag(form) if form is not None else None
    b = random_bounds(rng, s, kind)
    y = s.vector(random_vector(rng, s.base))
    z = s.vector(random_vector(rng, s.base))
    x = inside_ball(rng, s, y, z, b)
    return Instance(x, y, z, b)


def unconstrained_instance(rng: np.random.Generator, s: TwoInnerSpace) -> Instance:
    """Independent draws with no hypothesis enforced (for equivalence checks)."""
    b = random_bounds(rng, s, None)
    x, y, z = (s.vector(random_vector(rng, s.base)) for _ in range(3))
    # rescale x so that roughly half of the draws fall inside the ball
    scale = abs(b.center) + 0.5 * b.spread
    return Instance(s.vector(x * scale * float(rng.uniform(0.2, 2.0))), y, z, b)
