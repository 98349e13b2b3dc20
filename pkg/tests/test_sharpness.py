import math

import numpy as np
import pytest
from oracles import epsilon_ratio

from twoinner.errors import PreconditionError
from twoinner.linalg import COMPLEX
from twoinner.reverses import BoundsPair, Form, cond_quadratic, implied_constant
from twoinner.sharpness import (
    EPSILON_GRID,
    epsilon_family_thm31,
    epsilon_ratios,
    estimate_constant,
    extremal_thm21,
    orthonormal_pair,
)
from twoinner.two_inner import TwoInnerSpace, cbs_gap, tip, tnorm

R3 = TwoInnerSpace.unit(3)
E3 = R3.vector([0.0, 0.0, 1.0])


def test_orthonormal_pair_postconditions():
    y, m = orthonormal_pair(R3, E3, seed=4)
    assert tnorm(R3, y, E3) == pytest.approx(1.0, abs=1e-12)
    assert tnorm(R3, m, E3) == pytest.approx(1.0, abs=1e-12)
    assert abs(tip(R3, y, m, E3)) <= 1e-10


def test_orthonormal_pair_keeps_orthonormal_candidates():
    y, m = orthonormal_pair(R3, E3, candidates=([1, 0, 0], [0, 1, 0]))
    assert y.tolist() == [1.0, 0.0, 0.0] and m.tolist() == [0.0, 1.0, 0.0]


def test_orthonormal_pair_errors():
    with pytest.raises(PreconditionError):
        orthonormal_pair(TwoInnerSpace.unit(2), np.array([0.0, 1.0]))
    with pytest.raises(PreconditionError):
        orthonormal_pair(R3, R3.base.zeros())


def test_extremal_thm21_real():
    w = extremal_thm21(R3, E3, BoundsPair(0.0, 2.0), seed=1)
    assert cbs_gap(R3, w.x, w.y, E3) == pytest.approx(1.0, rel=1e-12)
    assert w.achieved_ratio == pytest.approx(0.25, abs=1e-12)
    assert cond_quadratic(R3, w.x, w.y, E3, w.bounds) == pytest.approx(0.0, abs=1e-12)


def test_extremal_thm21_complex():
    c = TwoInnerSpace.unit(3, COMPLEX)
    w = extremal_thm21(c, c.vector([0, 0, 1]), BoundsPair(1.0, 1 + 2j), seed=2)
    assert abs(w.achieved_ratio - 0.25) <= 1e-9


def test_extremal_thm21_rejects_equal_bounds():
    with pytest.raises(PreconditionError):
        extremal_thm21(R3, E3, BoundsPair(1.0, 1.0))


@pytest.mark.parametrize("eps", [*EPSILON_GRID, 1 - 1e-9])
def test_epsilon_family_matches_closed_form(eps):
    w = epsilon_family_thm31(R3, E3, eps, seed=0)
    assert w.achieved_ratio == pytest.approx(epsilon_ratio(eps), abs=1e-12)
    # the witness lies in the hypothesis ball
    assert cond_quadratic(R3, w.x, w.y, E3, w.bounds) >= -1e-12


def test_epsilon_family_values_and_domain():
    assert epsilon_family_thm31(R3, E3, 1 - 1e-9).achieved_ratio == pytest.approx(0.207107, abs=1e-6)
    assert epsilon_family_thm31(R3, E3, 0.01).achieved_ratio == pytest.approx(0.249378, abs=1e-6)
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(PreconditionError):
            epsilon_family_thm31(R3, E3, bad)


def test_epsilon_ratios_increase_as_eps_shrinks():
    ratios = [r for _, r in epsilon_ratios(R3, E3, sorted(EPSILON_GRID, reverse=True))]
    assert ratios == sorted(ratios)


def test_estimate_thm21_reaches_quarter():
    est = estimate_constant(TwoInnerSpace.unit(4), Form.THM21, trials=500, seed=3)
    assert abs(est.estimate - 0.25) <= 1e-9


def test_estimate_thm31_close_to_quarter():
    est = estimate_constant(TwoInnerSpace.unit(4), Form.THM31, trials=500, seed=3)
    assert 0.2499 <= est.estimate <= 0.25 + 1e-9


def test_single_trial_returns_a_candidate_ratio():
    s = TwoInnerSpace.unit(3)
    est = estimate_constant(s, Form.THM21, trials=1, seed=0)
    w = est.best_witness
    assert est.estimate == pytest.approx(implied_constant(s, Form.THM21, w.x, w.y, w.z, w.bounds), rel=1e-12)


@pytest.mark.parametrize("form", list(Form))
def test_estimates_never_exceed_targets(form):
    est = estimate_constant(TwoInnerSpace.unit(3), form, trials=200, seed=8)
    assert est.estimate <= est.target_constant + 1e-9
    assert math.isfinite(est.estimate)


def test_estimate_rejects_small_dim_and_zero_trials():
    with pytest.raises(PreconditionError):
        estimate_constant(TwoInnerSpace.unit(2), Form.THM21, 10)
    with pytest.raises(PreconditionError):
        estimate_constant(R3, Form.THM21, 0)
