"""Finite-dimensional weighted inner product spaces over R or C.

Vectors are plain 1-D NumPy arrays (``float64`` in real mode, ``complex128``
in complex mode). Scalars are Python ``float``/``complex``. A space fixes its
field once; real-mode vectors are rejected if they carry an imaginary part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ModeError, PreconditionError

REAL = "real"
COMPLEX = "complex"
MODES = (REAL, COMPLEX)

# Relative comparison tolerance used by every inequality check.
DEFAULT_TOL = 1e-9

Scalar = complex | float


@dataclass(frozen=True)
class WeightedInnerSpace:
    """``K^n`` with the inner product ``<x, y> = sum_i w_i x_i conj(y_i)``."""

    weights: np.ndarray
    mode: str = REAL
    _w: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ModeError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        w = np.array(self.weights, dtype=float).ravel()
        if w.size < 2:
            raise PreconditionError(f"dimension must be at least 2, got {w.size}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise PreconditionError("every weight must be a finite positive number")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "_w", w)

    @classmethod
    def unit(cls, dim: int, mode: str = REAL) -> "WeightedInnerSpace":
        return cls(np.ones(dim), mode)

    @property
    def dim(self) -> int:
        return self._w.size

    @property
    def is_complex(self) -> bool:
        return self.mode == COMPLEX

    @property
    def dtype(self) -> type:
        return np.complex128 if self.is_complex else np.float64

    def vector(self, entries: Sequence[Scalar] | np.ndarray) -> np.ndarray:
        """Validate ``entries`` and return them as a read-only vector of this space."""
        arr = np.asarray(entries)
        if arr.ndim != 1:
            raise PreconditionError(f"a vector must be one-dimensional, got shape {arr.shape}")
        if arr.size != self.dim:
            raise DimensionError(self.dim, arr.size)
        if np.iscomplexobj(arr):
            if not self.is_complex:
                if np.any(arr.imag != 0):
                    raise ModeError("complex entries are not allowed in a real space")
                arr = arr.real
        out = np.array(arr, dtype=self.dtype)
        if not np.all(np.isfinite(out)):
            raise PreconditionError("vector entries must be finite")
        out.setflags(write=False)
        return out

    def scalar(self, value: Scalar) -> Scalar:
        """Coerce a scalar into the field of the space."""
        if self.is_complex:
            return complex(value)
        if isinstance(value, complex) or np.iscomplexobj(value):
            if complex(value).imag != 0:
                raise ModeError("complex scalar used in a real space")
            return float(complex(value).real)
        return float(value)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=self.dtype)

    def basis(self, i: int) -> np.ndarray:
        e = self.zeros()
        e[i] = 1
        return e


def _check(space: WeightedInnerSpace, v: np.ndarray) -> None:
    if v.shape != (space.dim,):
        raise DimensionError(space.dim, v.size if v.ndim == 1 else -1)


def inner(space: WeightedInnerSpace, x: np.ndarray, y: np.ndarray) -> Scalar:
    """Weighted inner product, linear in ``x`` and conjugate-linear in ``y``."""
    _check(space, x)
    _check(space, y)
    if space.is_complex:
        return complex(np.dot(space._w * x, np.conj(y)))
    return float(np.dot(space._w * x, y))


def norm(space: WeightedInnerSpace, x: np.ndarray) -> float:
    _check(space, x)
    if space.is_complex:
        sq = float(np.dot(space._w, x.real * x.real + x.imag * x.imag))
    else:
        sq = float(np.dot(space._w, x * x))
    return math.sqrt(sq)


def random_vector(rng: np.random.Generator, space: WeightedInnerSpace) -> np.ndarray:
    """Standard-normal entries; both parts are drawn in complex mode."""
    if space.is_complex:
        return rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return rng.standard_normal(space.dim)


def random_scalar(rng: np.random.Generator, space: WeightedInnerSpace) -> Scalar:
    if space.is_complex:
        return complex(rng.standard_normal(), rng.standard_normal())
    return float(rng.standard_normal())
