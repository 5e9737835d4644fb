import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropamoeba.polyhedral import member_TR, sphere_trace
from tropamoeba.polynomials import LaurentPoly
from tropamoeba.teichmueller import (
    COMMUTATOR,
    DEFAULT_FAMILY,
    RAY_EXPECTED,
    RAY_PRESETS,
    WORD_A,
    WORD_AB,
    WORD_B,
    Character,
    Sl2Pair,
    Word,
    boundary_ray_limit,
    char_of_pair,
    length_of_trace,
    markov_residual,
    markov_tropical_cone,
    markov_tropical_split,
    projection_compatibility_check,
    random_sl2,
    realize_pair,
    teich_solve_z,
    trace_of_word,
    trace_polynomial,
)

words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12).map(lambda l: Word(tuple(l)))


def test_word_reduction_and_parse():
    assert Word((1, -1, 2)).letters == (2,)
    assert Word.parse("ABab") == COMMUTATOR
    assert Word.parse("A B A^-1 B^-1") == COMMUTATOR
    assert str(Word.parse("AaB")) == "B"
    assert str(Word(())) == "1"
    assert COMMUTATOR.inverse() * COMMUTATOR == Word(())
    with pytest.raises(ValueError):
        Word.parse("AC")
    with pytest.raises(ValueError):
        Word((3,))


def test_char_of_pair_examples():
    I = np.eye(2)
    assert char_of_pair(Sl2Pair(I, I)) == Character(2.0, 2.0, 2.0)
    p = Sl2Pair([[2, 1], [1, 1]], [[1, 1], [1, 2]])
    assert char_of_pair(p) == Character(3.0, 3.0, 6.0)
    lam = 1.7
    D = np.diag([lam, 1 / lam])
    c = char_of_pair(Sl2Pair(D, D))
    assert c.z == pytest.approx(lam**2 + lam**-2)
    with pytest.raises(ValueError):
        Sl2Pair(2 * I, I)


def test_trace_examples():
    c = Character(3.0, 3.0, 6.0)
    assert trace_of_word(WORD_AB, c) == 6
    assert trace_of_word(Word.parse("Ab"), c) == 3
    assert trace_of_word(COMMUTATOR, c) == -2
    assert trace_of_word(Word(()), c) == 2
    with pytest.raises(RecursionError):
        trace_of_word(Word((1,) * 65), c)


def test_commutator_polynomial():
    expected = LaurentPoly.from_expr("X**2 + Y**2 + Z**2 - X*Y*Z - 2", ["X", "Y", "Z"])
    assert trace_polynomial(COMMUTATOR) == expected
    assert trace_polynomial(Word.parse("Ab")) == LaurentPoly.from_expr("X*Y - Z", ["X", "Y", "Z"])


def test_markov_and_solver_examples():
    assert markov_residual((3, 3, 6)) == 0
    assert markov_residual((3, 3, 3)) == 0
    assert markov_residual((2, 2, 2)) == 4
    assert teich_solve_z(3, 3) == 6
    assert teich_solve_z(3, 4) == pytest.approx(6 + math.sqrt(11))
    assert teich_solve_z(100, 100) == pytest.approx(100**2 - 2, rel=1e-7)
    with pytest.raises(ValueError):
        teich_solve_z(1, 1)


def test_length_of_trace():
    assert length_of_trace(2) == 0
    assert length_of_trace(2 * math.cosh(1)) == pytest.approx(2)
    assert length_of_trace(-3) == pytest.approx(2 * math.acosh(1.5))
    with pytest.raises(ValueError):
        length_of_trace(1.5)


def test_realize_pair():
    for c in [(3, 3, 6), (3, 4, teich_solve_z(3, 4)), (0.5, 0.3, 0.1), (1.0, 1.0, 1.0)]:
        got = char_of_pair(realize_pair(c))
        assert np.allclose([complex(v) for v in got.as_tuple()], c, atol=1e-9)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), words)
def test_trace_matches_matrix(seed, w):
    rng = np.random.default_rng(seed)
    p = Sl2Pair(random_sl2(rng), random_sl2(rng))
    tr = np.trace(p.matrix(w))
    assert abs(trace_of_word(w, char_of_pair(p)) - tr) <= 1e-8 * (1 + abs(tr))


@settings(max_examples=100, deadline=None)
@given(st.floats(3, 50), st.floats(3, 50), st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=8))
def test_traces_never_vanish_on_component(x, y, letters):
    c = Character(x, y, teich_solve_z(x, y))
    w = Word(tuple(letters))
    if not len(w):
        return
    assert abs(trace_of_word(w, c)) >= 2 - 1e-9 * max(1.0, x * y)
    assert trace_of_word(COMMUTATOR, c) == pytest.approx(-2, abs=1e-7 * (x * y) ** 2)


def test_markov_cone_structure():
    C = markov_tropical_cone()
    T = sphere_trace(C)
    assert T.is_circle and len(T.arcs) == 3 and len(T.vertices) == 3


@pytest.mark.parametrize("name", ["diag", "y3", "x3"])
def test_boundary_rays(name):
    R = boundary_ray_limit(RAY_PRESETS[name])
    assert R.report.converged
    assert np.allclose(R.limit.coords, RAY_EXPECTED[name], atol=1e-3)
    assert R.on_cone
    Pp, Pm = markov_tropical_split()
    assert member_TR(Pp, Pm, R.limit.coords, tol=1e-3)


def test_bounded_ray_is_reported():
    R = boundary_ray_limit(RAY_PRESETS["bounded"])
    assert R.report.status == "not_escaping" and R.limit is None and R.on_cone is None


def test_projection_compatibility():
    big = [WORD_A, WORD_B, WORD_AB, Word.parse("Ab")]
    rows = projection_compatibility_check(big, list(DEFAULT_FAMILY), {"diag": RAY_PRESETS["diag"]})
    assert rows[0].consistent
    rows = projection_compatibility_check(list(DEFAULT_FAMILY), list(DEFAULT_FAMILY), {"y3": RAY_PRESETS["y3"]})
    assert rows[0].consistent and rows[0].distance <= 1e-9
    rows = projection_compatibility_check(list(DEFAULT_FAMILY), [WORD_A], {"x3": RAY_PRESETS["x3"]})
    assert not rows[0].consistent and "vanishes" in rows[0].reason
    with pytest.raises(ValueError):
        projection_compatibility_check([WORD_A], [WORD_B], {})
