"""Composite Gauss-Legendre rules on an interval."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionError

DEFAULT_PANELS = 32
DEFAULT_NODES = 8


@dataclass(frozen=True)
class QuadratureDomain:
    lo: float
    hi: float
    panels: int = DEFAULT_PANELS
    nodes_per_panel: int = DEFAULT_NODES
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise PreconditionError(f"need finite lo < hi, got [{self.lo}, {self.hi}]")
        if self.panels < 1:
            raise PreconditionError(f"panels must be >= 1, got {self.panels}")
        if not 4 <= self.nodes_per_panel <= 16:
            raise PreconditionError(f"nodes_per_panel must be in 4..16, got {self.nodes_per_panel}")
        ref_x, ref_w = np.polynomial.legendre.leggauss(self.nodes_per_panel)
        edges = np.linspace(self.lo, self.hi, self.panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mid[:, None] + half[:, None] * ref_x[None, :]).ravel()
        weights = (half[:, None] * ref_w[None, :]).ravel()
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size

    def apply(self, values: np.ndarray) -> float:
        """``sum_i w_i v_i`` with correctly rounded summation."""
        return math.fsum(self.weights * values)
