"""Exact rational linear algebra and a small dense simplex method.

Affine forms are pairs ``(c, d)`` standing for ``<c, x> + d``. Everything
runs over :class:`fractions.Fraction`; problem sizes here are tiny (at most
16 variables and a few dozen constraints), so a dense tableau with Bland's
rule is plenty and never cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

AffineForm = tuple[tuple[Fraction, ...], Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def affine(c: Sequence, d=0) -> AffineForm:
    return tuple(Fraction(v) for v in c), Fraction(d)


def eval_affine(form: AffineForm, x: Sequence) -> Fraction:
    c, d = form
    return sum((ci * xi for ci, xi in zip(c, x) if ci), d)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : rows @ v = 0}``."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for fj in free:
        v = [ZERO] * ncols
        v[fj] = ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[fj]
        basis.append(v)
    return basis


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    inv = ONE / T[r][c]
    T[r] = [v * inv for v in T[r]]
    row = T[r]
    for i in range(len(T)):
        if i != r:
            f = T[i][c]
            if f != 0:
                T[i] = [a - f * b for a, b in zip(T[i], row)]
    basis[r] = c


def _run_simplex(T, basis, cost, allowed) -> str:
    """Maximize ``cost . y`` from a canonical tableau; returns status."""
    ncols = len(T[0]) - 1
    while True:
        cb = [cost[b] for b in basis]
        enter = None
        for j in allowed:
            if j in basis:
                continue
            red = cost[j] - sum((cb[i] * T[i][j] for i in range(len(T)) if T[i][j] != 0), ZERO)
            if red > 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        best = None
        for i in range(len(T)):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][ncols] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], enter)


def lp_solve(
    nvars: int,
    equalities: Sequence[AffineForm] = (),
    inequalities: Sequence[AffineForm] = (),
    objective: AffineForm | None = None,
) -> LPResult:
    """Maximize ``objective`` over ``{x : eq(x) = 0, ineq(x) >= 0}``, x free.

    Without an objective this is a pure feasibility test that still returns a
    witness point.
    """
    n = nvars
    rows: list[tuple[list[Fraction], Fraction]] = []
    n_slack = len(inequalities)
    nstruct = 2 * n + n_slack
    for c, d in equalities:
        coef = [Fraction(v) for v in c] + [-Fraction(v) for v in c] + [ZERO] * n_slack
        rows.append((coef, -Fraction(d)))
    for k, (c, d) in enumerate(inequalities):
        coef = [Fraction(v) for v in c] + [-Fraction(v) for v in c] + [ZERO] * n_slack
        coef[2 * n + k] = -ONE
        rows.append((coef, -Fraction(d)))
    for coef, rhs in rows:
        if len(coef) != nstruct:
            raise ValueError("affine form length does not match nvars")

    m = len(rows)
    if m == 0:
        x0 = [ZERO] * n
        if objective is None:
            return LPResult("optimal", x0, ZERO)
        if any(v != 0 for v in objective[0]):
            return LPResult("unbounded", x0, None)
        return LPResult("optimal", x0, Fraction(objective[1]))

    ncols = nstruct + m
    T = []
    for i, (coef, rhs) in enumerate(rows):
        if rhs < 0:
            coef = [-v for v in coef]
            rhs = -rhs
        art = [ZERO] * m
        art[i] = ONE
        T.append(coef + art + [rhs])
    basis = [nstruct + i for i in range(m)]

    cost1 = [ZERO] * nstruct + [-ONE] * m
    _run_simplex(T, basis, cost1, range(ncols))
    if sum((T[i][ncols] for i in range(m) if basis[i] >= nstruct), ZERO) > 0:
        return LPResult("infeasible")

    # drive zero-level artificials out of the basis, drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= nstruct:
            col = next((j for j in range(nstruct) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T = [row[:nstruct] + [row[ncols]] for row in T]

    def point() -> list[Fraction]:
        y = [ZERO] * nstruct
        for r, b in enumerate(basis):
            y[b] = T[r][nstruct]
        return [y[j] - y[n + j] for j in range(n)]

    if objective is None:
        return LPResult("optimal", point() if T else [ZERO] * n, ZERO)
    oc, od = objective
    cost2 = [Fraction(v) for v in oc] + [-Fraction(v) for v in oc] + [ZERO] * n_slack
    if not T:
        if any(v != 0 for v in cost2):
            return LPResult("unbounded", [ZERO] * n, None)
        return LPResult("optimal", [ZERO] * n, Fraction(od))
    status = _run_simplex(T, basis, cost2, range(nstruct))
    x = point()
    if status == "unbounded":
        return LPResult("unbounded", x, None)
    return LPResult("optimal", x, eval_affine(objective, x))


def implicit_equalities(
    nvars: int, equalities: Sequence[AffineForm], inequalities: Sequence[AffineForm]
) -> tuple[list[int], list[Fraction]] | None:
    """Indices of inequalities that vanish on the whole polyhedron.

    Returns ``None`` when the polyhedron is empty, else ``(indices, witness)``
    with ``witness`` a relative-interior point (all non-implicit inequalities
    strictly positive there).
    """
    res = lp_solve(nvars, equalities, inequalities)
    if not res.feasible:
        return None
    points = [res.x]
    loose = {k for k, g in enumerate(inequalities) if eval_affine(g, res.x) > 0}
    tight = []
    for k, g in enumerate(inequalities):
        if k in loose:
            continue
        capped = list(inequalities) + [(tuple(-v for v in g[0]), ONE - g[1])]
        opt = lp_solve(nvars, equalities, capped, objective=g)
        if opt.value > 0:
            points.append(opt.x)
            loose.update(j for j, gj in enumerate(inequalities) if eval_affine(gj, opt.x) > 0)
        else:
            tight.append(k)
    # the barycenter of the witnesses is strictly inside every loose inequality
    w = [sum((p[j] for p in points), ZERO) / len(points) for j in range(nvars)]
    return tight, w
