import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropamoeba import data_path
from tropamoeba.dequant_amoeba import (
    DeformationSample,
    LogPoint,
    SpherePoint,
    aberth_roots,
    archimedean_slack,
    deform_family,
    hausdorff_to_tropical,
    ideal_point_limit,
    log_map,
    sample_amoeba,
    sample_orthant_curve,
    sample_plane_curve_amoeba,
    sphere_project,
)
from tropamoeba.polyhedral import cells_TR, complex_distance, cone_rays
from tropamoeba.polynomials import LaurentPoly, OrthantSign, load_poly, sign_split, tropicalize_trivial

XY = ["X", "Y"]
BOX = [(-4.0, 1.0), (-4.0, 1.0)]


def line_limit():
    f = LaurentPoly.from_expr("X + Y - 1", XY)
    fp, fm = sign_split(f, OrthantSign.positive(2))
    return f, cells_TR(tropicalize_trivial(fp), tropicalize_trivial(fm))


def _dist_to_half_lines(P):
    # closed form for {(t, 0): t <= 0} and {(0, t): t <= 0}
    u, v = P[:, 0], P[:, 1]
    d1 = np.where(u <= 0, np.abs(v), np.hypot(u, v))
    d2 = np.where(v <= 0, np.abs(u), np.hypot(u, v))
    return np.minimum(d1, d2)


def oracle_hausdorff(h, n=4001, m=401):
    """Dense two-sided Hausdorff distance for x + y = 1 against the two half-lines, in BOX."""
    u = np.linspace(-4.0, -1e-12, n)
    v = h * np.log1p(-np.exp(u / h))
    curve = np.vstack([np.c_[u, v], np.c_[v, u]])
    curve = curve[((curve >= -4) & (curve <= 1)).all(axis=1)]
    t = np.linspace(-4.0, 0.0, m)
    lim = np.vstack([np.c_[t, np.zeros_like(t)], np.c_[np.zeros_like(t), t]])
    d_curve = _dist_to_half_lines(curve).max()
    d_lim = max(
        np.sqrt(((chunk[:, None, :] - curve[None, :, :]) ** 2).sum(axis=2)).min(axis=1).max()
        for chunk in np.array_split(lim, 8)
    )
    return max(d_curve, d_lim)


def test_log_and_sphere():
    assert log_map((math.e, 1.0)).coords == (1.0, 0.0)
    assert log_map((-math.e**2, 1j), h=0.5).coords == (1.0, 0.0)
    with pytest.raises(ValueError):
        log_map((0.0, 1.0))
    p = sphere_project((3.0, 4.0))
    assert p.coords == pytest.approx((0.6, 0.8))
    with pytest.raises(ValueError):
        sphere_project((0.0, 0.0))
    with pytest.raises(ValueError):
        SpherePoint((1.0, 1.0))
    with pytest.raises(ValueError):
        LogPoint((math.inf,))


@settings(max_examples=200)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=5).filter(lambda v: any(abs(x) > 1e-100 for x in v)))
def test_sphere_norm(v):
    p = sphere_project(v)
    assert abs(math.sqrt(sum(c * c for c in p.coords)) - 1.0) <= 1e-12


def test_aberth_against_numpy():
    rng = np.random.default_rng(5)
    C = rng.normal(size=(200, 7)) + 1j * rng.normal(size=(200, 7))
    roots, ok = aberth_roots(C, rng)
    assert ok.all()
    for c, r in zip(C, roots):
        ref = np.roots(c[::-1])
        assert np.allclose(np.sort_complex(r), np.sort_complex(ref), rtol=1e-8, atol=1e-10)


def test_aberth_degree_one_and_double_root():
    roots, ok = aberth_roots(np.array([[2.0, -4.0]]))
    assert ok[0] and roots[0, 0] == pytest.approx(0.5)
    roots, ok = aberth_roots(np.array([[1.0, -2.0, 1.0]]))
    assert np.allclose(roots[0], 1.0, atol=1e-6)


def test_amoeba_line_inequalities():
    f = LaurentPoly.from_expr("X + Y + 1", XY)
    S = sample_plane_curve_amoeba(f)
    assert len(S.points) >= 10_000 and S.n_failed == 0
    assert archimedean_slack(f, S.points).min() >= -1e-6
    assert len(S.log_points()) == len(S.points)


@pytest.mark.parametrize("name", ["line.json", "conic.json", "cubic.json"])
def test_shipped_curves_satisfy_triangle_inequalities(name):
    f = load_poly(data_path(name))
    S = sample_amoeba(f, grid=(120, 48), seed=1)
    assert len(S.points) > 0 and S.failure_rate == 0
    assert archimedean_slack(f, S.points).min() >= -1e-6


def test_amoeba_is_deterministic_and_sorted():
    f = load_poly(data_path("conic.json"))
    a = sample_amoeba(f, grid=(40, 16), seed=7).points
    b = sample_amoeba(f, grid=(40, 16), seed=7).points
    assert np.array_equal(a, b)
    assert np.array_equal(a, a[np.lexsort(a.T[::-1])])


def test_amoeba_degenerate_inputs():
    mono = LaurentPoly(2, {(1, 2): 3})
    S = sample_amoeba(mono)
    assert len(S.points) == 0
    with pytest.raises(ValueError):
        sample_plane_curve_amoeba(LaurentPoly.from_expr("X + 1", XY))
    with pytest.raises(ValueError):
        sample_amoeba(LaurentPoly(2, {}))


def test_three_variable_and_univariate_amoeba():
    f = LaurentPoly.from_expr("X + Y + Z + 1", ["X", "Y", "Z"])
    S = sample_amoeba(f, grid=(20, 10), seed=2)
    assert S.points.shape[1] == 3
    assert archimedean_slack(f, S.points).min() >= -1e-6
    g = LaurentPoly.from_expr("X**2 - 4", ["X"])
    S1 = sample_amoeba(g)
    assert S1.points.ravel() == pytest.approx([math.log(2)] * 2)


def test_orthant_samples_lie_on_curve():
    f = LaurentPoly.from_expr("X + Y - 1", XY)
    pos = sample_orthant_curve(f, OrthantSign.positive(2), (-10, 1), 501)
    assert len(pos) > 0 and (pos > 0).all()
    assert np.allclose(pos.sum(axis=1), 1.0, atol=1e-12)
    empty = sample_orthant_curve(LaurentPoly.from_expr("X + Y + 1", XY), OrthantSign.positive(2), (-5, 5), 101)
    assert len(empty) == 0
    neg = sample_orthant_curve(LaurentPoly.from_expr("X + Y + 1", XY), OrthantSign.parse("--"), (-5, 5), 101)
    assert len(neg) > 0 and np.allclose(neg.sum(axis=1), 1.0)


@settings(max_examples=50)
@given(st.floats(0.01, 5), st.floats(0.1, 10))
def test_cone_scaling(h, lam):
    pts = np.array([[0.3, 0.7], [1e-5, 1 - 1e-5], [0.5, 0.5]])
    a = deform_family(pts, lam * h).points
    b = lam * deform_family(pts, h).points
    assert np.allclose(a, b, rtol=1e-12, atol=1e-300)


def test_deform_errors():
    with pytest.raises(ValueError):
        deform_family(np.array([[0.0, 1.0]]), 0.5)
    with pytest.raises(ValueError):
        deform_family(np.array([[1.0, 1.0]]), 0.0)
    with pytest.raises(ValueError):
        DeformationSample(0.0, np.zeros((1, 2)))


def test_hausdorff_oracle_constant():
    # the pre-build oracle: d_H = sqrt(2) ln 2 * h, linear in h
    for h in (1.0, 0.5, 0.1):
        assert oracle_hausdorff(h) == pytest.approx(math.sqrt(2) * math.log(2) * h, rel=2e-3)


def test_hausdorff_matches_oracle_and_bound():
    f, C = line_limit()
    prev = math.inf
    for h in (1.0, 0.5, 0.1, 0.01):
        pos = sample_orthant_curve(f, OrthantSign.positive(2), (-4.0 / h - 1, 1.0 / h + 1), 4001)
        d = hausdorff_to_tropical(deform_family(pos, h), C, BOX)
        assert d <= 2 * h * math.log(3)
        assert d == pytest.approx(oracle_hausdorff(h), abs=0.01 * h + 2e-4)
        assert d <= prev + 1e-12
        prev = d


def test_hausdorff_errors():
    _, C = line_limit()
    far = DeformationSample(1.0, np.array([[50.0, 50.0]]))
    with pytest.raises(ValueError):
        hausdorff_to_tropical(far, C, BOX)
    with pytest.raises(ValueError):
        hausdorff_to_tropical(far, C, [(0, math.inf), (0, 1)])
    S = DeformationSample(1.0, np.array([[0.5, 0.5]]))
    with pytest.raises(ValueError):
        hausdorff_to_tropical(S, C, [(0.5, 1.0), (0.5, 1.0)])


def test_containment_of_deformation_limit():
    # small-h samples sit within grid tolerance of the real tropical limit
    f, C = line_limit()
    h = 0.01
    pos = sample_orthant_curve(f, OrthantSign.positive(2), (-4.0 / h, 0.0), 2001)
    D = deform_family(pos, h)
    assert complex_distance(C, D.points).max() <= h * math.log(2) + 1e-9


n = np.arange(1, 41, dtype=float)


def test_ideal_point_examples():
    r = ideal_point_limit(np.c_[n, 2 * n], from_logs=True)
    assert r.converged and r.limit.coords == pytest.approx((1 / math.sqrt(5), 2 / math.sqrt(5)), abs=1e-12)
    r = ideal_point_limit(np.c_[np.exp(n[:20]), np.exp(2 * n[:20])])
    assert r.converged
    r = ideal_point_limit(np.c_[n, n + np.log(n)], from_logs=True)
    assert r.converged and r.limit.coords == pytest.approx((1 / math.sqrt(2),) * 2, abs=1e-3)


def test_ideal_point_reports():
    r = ideal_point_limit(np.c_[np.sin(n), np.cos(n)], from_logs=True)
    assert r.status == "not_escaping" and "not an ideal-point sequence" in r.message
    r = ideal_point_limit(np.c_[n * np.cos(n), n * np.sin(n)], from_logs=True)
    assert r.status == "divergent"
    with pytest.raises(ValueError):
        ideal_point_limit(np.ones((5, 2)))
    with pytest.raises(ValueError):
        ideal_point_limit(-np.ones((10, 2)))


def test_boundary_of_line_is_two_points():
    # ideal points of x + y = 1 on the positive branch match the sphere trace of its real tropicalization
    _, C = line_limit()
    k = np.arange(1, 41, dtype=float)
    limits = set()
    for seq in (np.c_[np.exp(-k), -np.expm1(-k)], np.c_[-np.expm1(-k), np.exp(-k)]):
        r = ideal_point_limit(seq)
        assert r.converged
        limits.add(tuple(round(c, 6) for c in r.limit.coords))
    assert limits == {(-1.0, 0.0), (0.0, -1.0)}
    rays = {tuple(v) for cell in C.cells for v in cone_rays(cell)}
    assert rays == {(-1, 0), (0, -1)}
