import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twoinner.errors import ModeError, PreconditionError
from twoinner.linalg import COMPLEX, REAL, WeightedInnerSpace, inner, random_vector
from twoinner.two_inner import (
    AXIOMS,
    TwoInnerSpace,
    audit_axioms,
    cbs_gap,
    linearly_dependent,
    polarize_complex,
    polarize_real,
    tip,
    tip_sq,
    tnorm,
)

R3 = TwoInnerSpace.unit(3)
e1, e2, e3 = (R3.vector(np.eye(3)[i]) for i in range(3))


def gram(s, x, y, z):
    """Textbook Gram determinant, the reference for the projected evaluation."""
    b = s.base
    return inner(b, x, y) * inner(b, z, z) - inner(b, x, z) * inner(b, z, y)


def test_tip_fixtures():
    assert tip(R3, e1, e2, e3) == 0
    assert tip(R3, e1 + e2, e2, e3) == 1
    y = R3.vector([0.3, -2.0, 1.5])
    assert tip(R3, e3, y, e3) == 0 and tip(R3, y, e3, e3) == 0


def test_tnorm_fixtures():
    assert tnorm(R3, e3, e3) == 0
    assert tnorm(R3, e1 + e2, e3) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_zero_z_gives_zero():
    assert tip(R3, e1, e2, R3.base.zeros()) == 0
    assert tnorm(R3, e1, R3.base.zeros()) == 0


def test_polarization():
    x = e1 + e2
    assert polarize_real(R3, x, x, e3) == pytest.approx(tnorm(R3, x, e3) ** 2)
    assert polarize_real(R3, x, e2, e3) == pytest.approx(1.0)
    assert polarize_real(R3, e1, e2, e3) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ModeError):
        polarize_real(TwoInnerSpace.unit(3, COMPLEX), e1, e2, e3)
    with pytest.raises(ModeError):
        polarize_complex(R3, e1, e2, e3)


def test_polarize_complex_matches_tip():
    c = TwoInnerSpace.unit(4, COMPLEX)
    rng = np.random.default_rng(3)
    x, y, z = (c.vector(random_vector(rng, c.base)) for _ in range(3))
    assert polarize_complex(c, x, 1j * x, z) == pytest.approx(-1j * tnorm(c, x, z) ** 2, rel=1e-12)
    t = tip(c, x, y, z)
    assert abs(polarize_complex(c, x, y, z) - t) <= 1e-12 * abs(t)


def test_cbs_gap_fixtures():
    assert cbs_gap(R3, e2, e2, e3) == 0
    assert cbs_gap(R3, e1 + e2, e2, e3) == pytest.approx(1.0, rel=1e-15)
    y = R3.vector([0.2, 1.0, -0.7])
    assert cbs_gap(R3, 2 * y + 3 * e3, y, e3) <= 1e-12


def test_projected_form_is_never_negative():
    # nearly parallel x and z: the textbook formula cancels catastrophically
    z = R3.vector([1.0, 1e-9, 0.0])
    x = R3.vector([1.0, 0.0, 0.0])
    assert tip_sq(R3, x, z) >= 0
    assert tip_sq(R3, x, z) == pytest.approx(1e-18, rel=1e-6)


def test_linear_dependence():
    assert linearly_dependent(R3, e1, e2, e1 + 2 * e2)
    assert not linearly_dependent(R3, e1, e2, e3)
    assert linearly_dependent(R3, e1, R3.base.zeros())


def test_audit_passes_for_the_standard_form():
    for mode in (REAL, COMPLEX):
        rep = audit_axioms(TwoInnerSpace.unit(4, mode), 200, seed=5)
        assert rep.passed, rep.failed()
        assert set(rep.results) == set(AXIOMS)
        assert rep.worst_residual <= 1e-12


def test_audit_detects_sign_flip():
    s = TwoInnerSpace.unit(3)
    rep = audit_axioms(s, 20, seed=1, form=lambda x, y, z: -tip(s, x, y, z))
    assert not rep.passed
    assert "2I1" in rep.failed()
    assert rep.results["2I1"].worst_residual > 0.1


def test_audit_is_deterministic_and_rejects_zero_trials():
    s = TwoInnerSpace.unit(3, COMPLEX)
    a, b = audit_axioms(s, 50, seed=9), audit_axioms(s, 50, seed=9)
    assert {k: (r.worst_residual, r.trial) for k, r in a.results.items()} == {
        k: (r.worst_residual, r.trial) for k, r in b.results.items()
    }
    with pytest.raises(PreconditionError):
        audit_axioms(s, 0)


spaces = st.tuples(st.integers(2, 8), st.sampled_from([REAL, COMPLEX]), st.integers(0, 2**32 - 1))


@settings(max_examples=150, deadline=None)
@given(spaces)
def test_tip_matches_gram_determinant(params):
    dim, mode, seed = params
    rng = np.random.default_rng(seed)
    s = TwoInnerSpace(WeightedInnerSpace(rng.uniform(0.2, 5.0, dim), mode))
    x, y, z = (s.vector(random_vector(rng, s.base)) for _ in range(3))
    scale = math.prod(float(np.linalg.norm(v)) for v in (x, y, z, z)) * 25
    assert abs(tip(s, x, y, z) - gram(s, x, y, z)) <= 1e-12 * scale


@settings(max_examples=150, deadline=None)
@given(spaces)
def test_cbs_and_symmetries(params):
    dim, mode, seed = params
    rng = np.random.default_rng(seed)
    s = TwoInnerSpace.unit(dim, mode)
    x, y, z = (s.vector(random_vector(rng, s.base)) for _ in range(3))
    X, Y = tnorm(s, x, z), tnorm(s, y, z)
    assert abs(tip(s, x, y, z)) <= X * Y * (1 + 1e-12) + 1e-300
    assert cbs_gap(s, x, y, z) >= 0
    # symmetry of the 2-norm in its two arguments
    assert tnorm(s, z, x) == pytest.approx(X, rel=1e-10)
    # invariance under adding multiples of z
    assert tnorm(s, x + 2.5 * z, z) == pytest.approx(X, rel=1e-10)
    if dim == 2:
        # in two dimensions any three vectors are dependent
        assert cbs_gap(s, x, y, z) <= 1e-10 * (X * Y) ** 2
