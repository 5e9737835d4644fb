import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropamoeba.polyhedral import (
    PolyComplex,
    cell_nearest,
    cells_T,
    cells_TR,
    check_face_intersections,
    complex_dim,
    complex_distance,
    cone_rays,
    intersect_T,
    is_cone,
    member_T,
    member_TR,
    sphere_trace,
)
from tropamoeba.polynomials import LaurentPoly, OrthantSign, TropPoly, eval_trop, monomial_values, sign_split, tropicalize_trivial


def markov_split():
    f = LaurentPoly.from_expr("X**2 + Y**2 + Z**2 - X*Y*Z", ["X", "Y", "Z"])
    fp, fm = sign_split(f, OrthantSign.positive(3))
    return tropicalize_trivial(fp), tropicalize_trivial(fm)


LINE = TropPoly(2, {(0, 0): 0, (1, 0): 0, (0, 1): 0})


def test_member_T_examples():
    assert member_T(LINE, (0, 0))
    assert member_T(LINE, (F(-1), F(0)))
    assert not member_T(LINE, (F(-1), F(-1)))
    assert not member_T(LINE, (1, 0))
    assert member_T(LINE, (1, 1))
    # float coefficients use the default tolerance
    P = TropPoly(1, {(0,): 0.1, (1,): 0.0})
    assert member_T(P, (0.1 + 1e-12,))
    assert not member_T(P, (0.2,))


def test_member_TR_and_disjointness():
    Pp, Pm = markov_split()
    assert member_TR(Pp, Pm, (1, 1, 2))
    assert not member_TR(Pp, Pm, (1, 1, 1))
    with pytest.raises(ValueError):
        member_TR(LINE, LINE, (0, 0))


def test_intersect_T():
    pred = intersect_T([LINE, TropPoly(2, {(0, 0): 0, (1, 0): 0})])
    assert pred((0, -5)) and not pred((-1, -1))
    with pytest.raises(ValueError):
        intersect_T([])


def test_tropical_line_cells():
    C = cells_T(LINE)
    assert len(C.cells) == 3 and is_cone(C) and complex_dim(C) == 1
    assert sorted(r for c in C.cells for r in cone_rays(c)) == [(-1, 0), (0, -1), (1, 1)]
    assert check_face_intersections(C) == []


def test_markov_cone_is_circle():
    C = cells_TR(*markov_split())
    assert len(C.cells) == 3 and is_cone(C) and complex_dim(C) == 2
    T = sphere_trace(C)
    assert T.is_circle and len(T.arcs) == 3
    assert T.vertices == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert check_face_intersections(C) == []


def test_markov_trivial_tropicalization():
    f = LaurentPoly.from_expr("X**2 + Y**2 + Z**2 - X*Y*Z", ["X", "Y", "Z"])
    C = cells_T(tropicalize_trivial(f))
    assert len(C.cells) == 6 and all(c.dim() == 2 for c in C.cells)


def test_valued_curve_not_a_cone():
    P = TropPoly(1, {(0,): -3, (1,): -1, (2,): 0})
    C = cells_T(P)
    assert not is_cone(C)
    pts = sorted(c.witness for c in C.cells)
    assert pts == [(F(-2),), (F(-1),)]


def test_half_lines():
    C = cells_TR(TropPoly(2, {(1, 0): 0, (0, 1): 0}), TropPoly(2, {(0, 0): 0}))
    assert len(C.cells) == 2 and complex_dim(C) == 1
    d = complex_distance(C, np.array([[1.0, 1.0], [-3.0, -3.0]]))
    assert d == pytest.approx([np.sqrt(2), 3.0])


def test_empty_complex_dim():
    with pytest.raises(ValueError):
        complex_dim(PolyComplex((), 2))


def test_cell_nearest_against_brute_force():
    C = cells_T(LINE)
    rng = np.random.default_rng(3)
    pts = rng.uniform(-3, 3, size=(50, 2))
    d = complex_distance(C, pts)
    # brute force: dense samples on the three rays
    t = np.linspace(0, 10, 200001)[:, None]
    ray_pts = np.vstack([t * np.array([-1, 0]), t * np.array([0, -1]), t * np.array([1, 1])])
    from scipy.spatial import cKDTree

    bf = cKDTree(ray_pts).query(pts)[0]
    assert np.all(d <= bf + 1e-12)
    assert np.allclose(d, bf, atol=1e-4)


def trop_polys(nvars=2):
    return st.dictionaries(
        st.tuples(*[st.integers(-2, 2)] * nvars), st.integers(-2, 2), min_size=2, max_size=5
    ).map(lambda d: TropPoly(nvars, {w: F(a) for w, a in d.items()}))


half_grid = st.tuples(*[st.integers(-6, 6).map(lambda k: F(k, 2))] * 2)


@settings(max_examples=40, deadline=None)
@given(trop_polys(), st.lists(half_grid, min_size=10, max_size=25))
def test_membership_matches_enumeration(P, pts):
    C = cells_T(P)
    for x in pts:
        assert member_T(P, x) == C.contains(x)
    for c in C.cells:
        assert member_T(P, c.witness)


def _locally_linear(P, x, eps=F(1, 10**6)):
    dirs = {tuple(a - b for a, b in zip(u, v)) for u, v in itertools.permutations(P.terms, 2)}
    for u in dirs:
        up = tuple(xi + eps * ui for xi, ui in zip(x, u))
        dn = tuple(xi - eps * ui for xi, ui in zip(x, u))
        if eval_trop(P, up)[0] + eval_trop(P, dn)[0] != 2 * eval_trop(P, x)[0]:
            return False
    return True


@settings(max_examples=60, deadline=None)
@given(trop_polys(), half_grid)
def test_membership_is_nonlinearity(P, x):
    assert member_T(P, x) == (not _locally_linear(P, x))


@settings(max_examples=60, deadline=None)
@given(trop_polys(), half_grid)
def test_nonarchimedean_containment(P, x):
    if not member_T(P, x):
        return
    vals = monomial_values(P, x)
    for w, v in vals.items():
        assert v <= max(u for k, u in vals.items() if k != w)


@settings(max_examples=30, deadline=None)
@given(trop_polys())
def test_cells_tr_subset_of_both(P):
    # T_R of a split lies in T of the union
    items = sorted(P.terms.items())
    k = len(items) // 2
    if k == 0:
        return
    Pp = TropPoly(2, dict(items[:k]))
    Pm = TropPoly(2, dict(items[k:]))
    C = cells_TR(Pp, Pm)
    for c in C.cells:
        assert member_TR(Pp, Pm, c.witness)
        assert member_T(P, c.witness)


def test_cell_nearest_point_is_in_cell():
    C = cells_TR(*markov_split())
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(20, 3)) * 3
    for cell in C.cells:
        d, x = cell_nearest(cell, pts)
        for xi in x:
            assert cell.contains_approx(xi, 1e-8)
