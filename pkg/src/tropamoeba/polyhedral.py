"""Tropical hypersurfaces ``T(P)`` and real tropical hypersurfaces ``T_R(P, Q)``.

Cells are stored by constraint systems over the rationals. Every stored cell
carries an exact LP witness in its relative interior, and inequalities that
vanish identically on the cell are moved into its equality list, so the
equality rank always gives the true cell dimension.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exact_lp import AffineForm, eval_affine, implicit_equalities, lp_solve, nullspace, rank
from .polynomials import Exponent, TropPoly, eval_trop, monomial_values


@dataclass(frozen=True)
class PolyCell:
    equalities: tuple[AffineForm, ...]
    inequalities: tuple[AffineForm, ...]
    label: tuple
    witness: tuple[Fraction, ...] = field(compare=False, default=())

    @property
    def nvars(self) -> int:
        forms = self.equalities + self.inequalities
        return len(forms[0][0]) if forms else len(self.witness)

    def contains(self, x: Sequence) -> bool:
        xs = [Fraction(v) for v in x]
        return all(eval_affine(e, xs) == 0 for e in self.equalities) and all(
            eval_affine(g, xs) >= 0 for g in self.inequalities
        )

    def contains_approx(self, x: Sequence[float], tol: float) -> bool:
        return all(abs(_eval_float(e, x)) <= tol for e in self.equalities) and all(
            _eval_float(g, x) >= -tol for g in self.inequalities
        )

    def dim(self) -> int:
        n = self.nvars
        return n - rank([list(c) for c, _ in self.equalities]) if self.equalities else n

    def is_homogeneous(self) -> bool:
        return all(d == 0 for _, d in self.equalities + self.inequalities)

    def to_json(self) -> dict:
        def enc(forms):
            return [{"c": [str(v) for v in c], "d": str(d)} for c, d in forms]

        return {
            "equalities": enc(self.equalities),
            "inequalities": enc(self.inequalities),
            "label": _label_json(self.label),
            "witness": [str(v) for v in self.witness],
        }


@dataclass(frozen=True)
class PolyComplex:
    cells: tuple[PolyCell, ...]
    nvars: int

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def contains(self, x: Sequence) -> bool:
        return any(c.contains(x) for c in self.cells)

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "cells": [c.to_json() for c in self.cells]}


def _label_json(label):
    if label and isinstance(label[0], tuple) and label[0] and isinstance(label[0][0], tuple):
        return [[list(w) for w in part] for part in label]
    return [list(w) for w in label]


def _eval_float(form: AffineForm, x: Sequence[float]) -> float:
    c, d = form
    return float(d) + sum(float(ci) * float(xi) for ci, xi in zip(c, x))


def _is_exact_point(x: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


def default_tie_tol(m: float) -> float:
    return 1e-9 * (1.0 + abs(float(m)))


# --- membership ------------------------------------------------------------


def member_T(P: TropPoly, x: Sequence, tol: float | None = None) -> bool:
    """At least two monomials of ``P`` attain the maximum at ``x``.

    Exact when ``P`` has rational coefficients and ``x`` is rational and no
    ``tol`` is given; otherwise ties are declared within ``tol`` (default
    ``1e-9 * (1 + |max|)``).
    """
    if tol is None and P.is_exact and _is_exact_point(x):
        _, arg = eval_trop(P, x)
        return len(arg) >= 2
    vals = [float(v) for v in monomial_values(P, x).values()]
    if len(vals) < 2:
        return False
    vals.sort(reverse=True)
    eps = default_tie_tol(vals[0]) if tol is None else tol
    return vals[0] - vals[1] <= eps


def _check_disjoint(Pplus: TropPoly, Pminus: TropPoly) -> None:
    if Pplus.nvars != Pminus.nvars:
        raise ValueError("variable count mismatch")
    common = set(Pplus.terms) & set(Pminus.terms)
    if common:
        raise ValueError(f"supports must be disjoint, both contain {sorted(common)}")


def member_TR(Pplus: TropPoly, Pminus: TropPoly, x: Sequence, tol: float | None = None) -> bool:
    """``Pplus(x) == Pminus(x)`` (exactly, or within ``tol``)."""
    _check_disjoint(Pplus, Pminus)
    if tol is None and Pplus.is_exact and Pminus.is_exact and _is_exact_point(x):
        return eval_trop(Pplus, x)[0] == eval_trop(Pminus, x)[0]
    a = float(eval_trop(Pplus, x)[0])
    b = float(eval_trop(Pminus, x)[0])
    eps = default_tie_tol(max(abs(a), abs(b))) if tol is None else tol
    return abs(a - b) <= eps


def intersect_T(generators: Sequence[TropPoly], tol: float | None = None) -> Callable[[Sequence], bool]:
    """Membership predicate for the intersection of ``T(g)`` over an explicit list.

    This is an intersection of the given hypersurfaces only; for a generator
    list that is not a tropical basis it can be strictly larger than ``T(I)``.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    if len({g.nvars for g in gens}) != 1:
        raise ValueError("generators live in different ambient dimensions")

    def predicate(x: Sequence) -> bool:
        return all(member_T(g, x, tol) for g in gens)

    return predicate


# --- enumeration -----------------------------------------------------------


def _diff_form(wa: Exponent, aa: Fraction, wb: Exponent, ab: Fraction) -> AffineForm:
    """``(aa + <x,wa>) - (ab + <x,wb>)``."""
    return tuple(Fraction(p - q) for p, q in zip(wa, wb)), Fraction(aa) - Fraction(ab)


def _build_cell(n, eqs, ineqs, tags, label_of) -> PolyCell | None:
    got = implicit_equalities(n, eqs, [g for g in ineqs])
    if got is None:
        return None
    tight, witness = got
    tight_set = set(tight)
    eq_all = list(eqs) + [ineqs[k] for k in tight]
    rest = [ineqs[k] for k in range(len(ineqs)) if k not in tight_set]
    label = label_of([tags[k] for k in tight])
    return PolyCell(tuple(eq_all), tuple(rest), label, tuple(witness))


def _keep_minimal(cells: dict, subset: Callable) -> list[PolyCell]:
    labels = list(cells)
    keep = []
    for L in labels:
        if not any(M != L and subset(M, L) for M in labels):
            keep.append(cells[L])
    keep.sort(key=lambda c: repr(c.label))
    return keep


def cells_T(P: TropPoly) -> PolyComplex:
    """Maximal cells of ``T(P)``, one per distinct tie set of a support pair."""
    P = P.exact()
    n = P.nvars
    items = list(P.terms.items())
    if not items:
        raise ValueError("empty support")
    found: dict[frozenset, PolyCell] = {}
    for (i, (wi, ai)), (j, (wj, aj)) in itertools.combinations(enumerate(items), 2):
        eq = _diff_form(wi, ai, wj, aj)
        ineqs, tags = [], []
        for k, (wk, ak) in enumerate(items):
            if k not in (i, j):
                ineqs.append(_diff_form(wi, ai, wk, ak))
                tags.append(wk)

        def label_of(tight, wi=wi, wj=wj):
            return frozenset([wi, wj, *tight])

        cell = _build_cell(n, [eq], ineqs, tags, label_of)
        if cell is None or cell.label in found:
            continue
        found[cell.label] = cell
    keep = _keep_minimal(found, lambda M, L: M < L)
    cells = tuple(
        PolyCell(c.equalities, c.inequalities, tuple(sorted(c.label)), c.witness) for c in keep
    )
    return PolyComplex(cells, n)


def cells_TR(Pplus: TropPoly, Pminus: TropPoly) -> PolyComplex:
    """Maximal cells of ``T_R(Pplus, Pminus)`` indexed by maximizing pairs."""
    _check_disjoint(Pplus, Pminus)
    Pp, Pm = Pplus.exact(), Pminus.exact()
    n = Pp.nvars
    plus, minus = list(Pp.terms.items()), list(Pm.terms.items())
    found: dict[tuple, PolyCell] = {}
    for (i, (wi, ai)), (j, (wj, aj)) in itertools.product(enumerate(plus), enumerate(minus)):
        eq = _diff_form(wi, ai, wj, aj)
        ineqs, tags = [], []
        for k, (wk, ak) in enumerate(plus):
            if k != i:
                ineqs.append(_diff_form(wi, ai, wk, ak))
                tags.append(("+", wk))
        for k, (wk, ak) in enumerate(minus):
            if k != j:
                ineqs.append(_diff_form(wj, aj, wk, ak))
                tags.append(("-", wk))

        def label_of(tight, wi=wi, wj=wj):
            lp = frozenset([wi] + [w for s, w in tight if s == "+"])
            lm = frozenset([wj] + [w for s, w in tight if s == "-"])
            return (lp, lm)

        cell = _build_cell(n, [eq], ineqs, tags, label_of)
        if cell is None or cell.label in found:
            continue
        found[cell.label] = cell
    keep = _keep_minimal(found, lambda M, L: M[0] <= L[0] and M[1] <= L[1])
    cells = tuple(
        PolyCell(
            c.equalities,
            c.inequalities,
            (tuple(sorted(c.label[0])), tuple(sorted(c.label[1]))),
            c.witness,
        )
        for c in keep
    )
    return PolyComplex(cells, n)


# --- structure -------------------------------------------------------------


def is_cone(C: PolyComplex) -> bool:
    return all(c.is_homogeneous() for c in C.cells)


def complex_dim(C: PolyComplex) -> int:
    if not C.cells:
        raise ValueError("dimension of an empty complex is undefined")
    return max(c.dim() for c in C.cells)


def _intersection_system(a: PolyCell, b: PolyCell):
    return list(a.equalities) + list(b.equalities), list(a.inequalities) + list(b.inequalities)


def _is_face_of(n: int, F_eqs, F_ineqs, cell: PolyCell) -> bool:
    """Is the polyhedron ``F`` (nonempty, inside ``cell``) a face of ``cell``?

    ``F`` is a face iff it equals ``cell`` with the inequalities of ``cell``
    that vanish on all of ``F`` turned into equalities.
    """
    face_eqs = list(cell.equalities) + [g for g in cell.inequalities if _vanishes_on(n, g, F_eqs, F_ineqs)]
    face_ineqs = [g for g in cell.inequalities if g not in face_eqs]
    # the face must be contained in F
    for g in F_ineqs:
        res = lp_solve(n, face_eqs, face_ineqs, objective=(tuple(-v for v in g[0]), -g[1]))
        if res.status == "unbounded" or res.value > 0:
            return False
    for e in F_eqs:
        for sign in (1, -1):
            res = lp_solve(n, face_eqs, face_ineqs, objective=(tuple(sign * v for v in e[0]), sign * e[1]))
            if res.status == "unbounded" or res.value != 0:
                return False
    return True


def _vanishes_on(n, g, eqs, ineqs) -> bool:
    hi = lp_solve(n, eqs, ineqs, objective=g)
    return hi.status == "optimal" and hi.value == 0


def check_face_intersections(C: PolyComplex) -> list[tuple[int, int]]:
    """Pairs of cells whose intersection is not a common face (empty list = complex)."""
    bad = []
    n = C.nvars
    for (ia, a), (ib, b) in itertools.combinations(enumerate(C.cells), 2):
        eqs, ineqs = _intersection_system(a, b)
        if not lp_solve(n, eqs, ineqs).feasible:
            continue
        if not (_is_face_of(n, eqs, ineqs, a) and _is_face_of(n, eqs, ineqs, b)):
            bad.append((ia, ib))
    return bad


def _primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


def cone_rays(cell: PolyCell) -> list[tuple[int, ...]]:
    """Extreme rays (primitive integer vectors) of a pointed homogeneous cell."""
    if not cell.is_homogeneous():
        raise ValueError("rays are only defined here for homogeneous cells")
    n = cell.nvars
    d = cell.dim()
    E = [list(c) for c, _ in cell.equalities]
    G = [list(c) for c, _ in cell.inequalities]
    rays = set()
    for S in itertools.combinations(range(len(G)), max(d - 1, 0)):
        rows = E + [G[k] for k in S]
        ns = nullspace(rows, n)
        if len(ns) != 1:
            continue
        v = ns[0]
        fwd = all(sum(g_i * v_i for g_i, v_i in zip(g, v)) >= 0 for g in G)
        back = all(sum(g_i * v_i for g_i, v_i in zip(g, v)) <= 0 for g in G)
        if fwd and back:
            raise ValueError("cell contains a line; it is not pointed")
        if fwd:
            rays.add(_primitive(v))
        elif back:
            rays.add(_primitive([-x for x in v]))
    return sorted(rays)


@dataclass
class SphereTrace:
    arcs: list[tuple[tuple[int, ...], tuple[int, ...]]]
    vertices: list[tuple[int, ...]]
    is_circle: bool


def sphere_trace(C: PolyComplex) -> SphereTrace:
    """Combinatorial trace on the unit sphere of a complex of pointed 2-dim cones.

    Each maximal cone gives an arc joining its two extreme rays; the trace is
    a topological circle iff this graph is one cycle.
    """
    if not is_cone(C):
        raise ValueError("sphere trace needs a cone")
    arcs = []
    for cell in C.cells:
        if cell.dim() != 2:
            raise ValueError("sphere trace is implemented for 2-dimensional cones")
        r = cone_rays(cell)
        if len(r) != 2:
            raise ValueError(f"2-dim pointed cone should have 2 rays, found {r}")
        arcs.append((r[0], r[1]))
    verts = sorted({v for a in arcs for v in a})
    deg = {v: 0 for v in verts}
    adj: dict = {v: set() for v in verts}
    for a, b in arcs:
        deg[a] += 1
        deg[b] += 1
        adj[a].add(b)
        adj[b].add(a)
    connected = False
    if verts:
        seen, stack = {verts[0]}, [verts[0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        connected = len(seen) == len(verts)
    circle = bool(arcs) and connected and all(k == 2 for k in deg.values()) and len(arcs) == len(verts)
    return SphereTrace(arcs, verts, circle)


# --- float geometry for distance estimates ---------------------------------


def _cell_arrays(cell: PolyCell):
    n = cell.nvars
    E = np.array([[float(v) for v in c] for c, _ in cell.equalities], dtype=float).reshape(-1, n)
    e = np.array([float(d) for _, d in cell.equalities], dtype=float)
    G = np.array([[float(v) for v in c] for c, _ in cell.inequalities], dtype=float).reshape(-1, n)
    g = np.array([float(d) for _, d in cell.inequalities], dtype=float)
    return E, e, G, g


def cell_nearest(cell: PolyCell, points: np.ndarray, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Euclidean distance from each row of ``points`` to ``cell`` and the nearest points.

    The nearest point lies on the face cut out by its active inequalities,
    so it is the projection onto one of the affine spans obtained by turning
    a subset of inequalities into equalities; all such subsets are tried and
    the closest feasible projection is kept.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[1]
    E, e, G, g = _cell_arrays(cell)
    best_d = np.full(len(pts), np.inf)
    best_x = np.full_like(pts, np.nan)
    free = n - (np.linalg.matrix_rank(E) if len(E) else 0)
    for size in range(0, min(free, len(G)) + 1):
        for S in itertools.combinations(range(len(G)), size):
            A = np.vstack([E, G[list(S)]]) if size else E
            b = np.concatenate([e, g[list(S)]]) if size else e
            if len(A):
                pinv = np.linalg.pinv(A)
                x0 = -pinv @ b
                if np.linalg.norm(A @ x0 + b) > 1e-9 * (1 + np.linalg.norm(b)):
                    continue
                proj = pts - (pts - x0) @ (pinv @ A).T
            else:
                proj = pts.copy()
            ok = np.ones(len(pts), dtype=bool)
            if len(G):
                ok = ((proj @ G.T + g) >= -tol * (1 + np.abs(proj).max(axis=1, keepdims=True))).all(axis=1)
            d = np.linalg.norm(pts - proj, axis=1)
            upd = ok & (d < best_d)
            best_d[upd] = d[upd]
            best_x[upd] = proj[upd]
    return best_d, best_x


def complex_distance(C: PolyComplex, points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if not C.cells:
        raise ValueError("distance to an empty complex")
    return np.min([cell_nearest(c, pts)[0] for c in C.cells], axis=0)
