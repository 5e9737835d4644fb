"""Archimedean amoebas, the dequantizing deformation and limits at infinity.

Archimedean points come from solving the last variable with a vectorized
Aberth iteration. Real orthant pieces are sampled by solving one coordinate
from a log-spaced grid on the other. Points at infinity are estimated from
sphere projections of escaping Log sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .polyhedral import PolyComplex, cell_nearest, complex_distance
from .polynomials import LaurentPoly, OrthantSign
from .tropical_core import DequantParam, _require_positive_h

MAX_ITER = 256
REL_TOL = 1e-12


@dataclass(frozen=True)
class LogPoint:
    coords: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        if not all(math.isfinite(v) for v in c):
            raise ValueError("Log point coordinates must be finite")
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class SpherePoint:
    coords: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        if abs(math.sqrt(math.fsum(v * v for v in c)) - 1.0) > 1e-12:
            raise ValueError("sphere point must have unit norm")
        object.__setattr__(self, "coords", c)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def distance(self, other: Sequence[float]) -> float:
        return float(np.linalg.norm(np.asarray(self.coords) - np.asarray(other, dtype=float)))


@dataclass
class DeformationSample:
    h: DequantParam
    points: np.ndarray

    def __post_init__(self):
        if not isinstance(self.h, DequantParam):
            self.h = DequantParam(float(self.h))
        if self.h.h <= 0:
            raise ValueError("deformation samples need h > 0")
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))


# --- elementary maps -------------------------------------------------------


def log_map(x: Sequence, h=1.0) -> LogPoint:
    hv = _require_positive_h(h)
    if any(abs(v) == 0 for v in x):
        raise ValueError("Log is undefined at points with a zero coordinate")
    return LogPoint(tuple(hv * math.log(abs(v)) for v in x))


def sphere_project(x: Sequence[float]) -> SpherePoint:
    v = np.asarray(x, dtype=float)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise ValueError("cannot project the zero vector to the sphere")
    u = v / nrm
    # renormalize once more so the unit-norm invariant holds to rounding
    u = u / math.sqrt(math.fsum(float(t) * float(t) for t in u))
    return SpherePoint(tuple(float(t) for t in u))


# --- simultaneous root finder ---------------------------------------------


def aberth_roots(
    coeffs: np.ndarray,
    rng: np.random.Generator | None = None,
    max_iter: int = MAX_ITER,
    tol: float = REL_TOL,
) -> tuple[np.ndarray, np.ndarray]:
    """All roots of a batch of polynomials by Aberth-Ehrlich iteration.

    ``coeffs`` has shape ``(B, d+1)`` in ascending degree with nonzero leading
    column. Returns ``(roots (B, d), converged (B,))``. Starting points sit on
    a circle of radius ``|c0/cd|^(1/d)`` with a random rotation per row.
    """
    C = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    B, dp1 = C.shape
    d = dp1 - 1
    if d < 1:
        raise ValueError("degree must be at least 1")
    rng = np.random.default_rng(0) if rng is None else rng
    C = C / C[:, -1:]
    radius = np.abs(C[:, 0]) ** (1.0 / d)
    radius = np.where((radius > 0) & np.isfinite(radius), radius, 1.0)
    theta = rng.uniform(0, 2 * np.pi, size=(B, 1))
    k = np.arange(d)[None, :]
    z = radius[:, None] * np.exp(1j * (theta + 2 * np.pi * k / d + 0.4))
    dC = C[:, 1:] * np.arange(1, dp1)[None, :]
    done = np.zeros(B, dtype=bool)
    for _ in range(max_iter):
        act = ~done
        if not act.any():
            break
        za = z[act]
        p = _horner(C[act], za)
        dpv = _horner(dC[act], za)
        with np.errstate(all="ignore"):
            newton = p / dpv
            if d > 1:
                diff = za[:, :, None] - za[:, None, :]
                idx = np.arange(d)
                diff[:, idx, idx] = np.inf
                S = (1.0 / diff).sum(axis=2)
                step = newton / (1.0 - newton * S)
            else:
                step = newton
        step = np.where(p == 0, 0.0, step)
        bad = ~np.isfinite(step)
        step = np.where(bad, 0.0, step)
        za = za - step
        z[act] = za
        conv = (np.abs(step) <= tol * np.maximum(np.abs(za), 1e-300)).all(axis=1) & ~bad.any(axis=1)
        idx_act = np.flatnonzero(act)
        done[idx_act[conv]] = True
    return z, done


def _horner(C: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.broadcast_to(C[:, -1:], z.shape).astype(complex)
    for j in range(C.shape[1] - 2, -1, -1):
        out = out * z + C[:, j : j + 1]
    return out


def _coeff_matrix(f: LaurentPoly, free: np.ndarray, solve: int) -> tuple[np.ndarray, int]:
    """Coefficients in ``X_solve`` (ascending, shifted to start at the lowest degree)."""
    degs = [w[solve] for w in f.terms]
    lo, hi = min(degs), max(degs)
    B = free.shape[0]
    M = np.zeros((B, hi - lo + 1), dtype=complex)
    others = [j for j in range(f.nvars) if j != solve]
    for w, a in f.terms.items():
        mon = np.full(B, complex(float(a)))
        for col, j in enumerate(others):
            if w[j]:
                mon = mon * free[:, col] ** w[j]
        M[:, w[solve] - lo] += mon
    return M, lo


def solve_last_variable(
    f: LaurentPoly, free: np.ndarray, rng: np.random.Generator, solve: int | None = None
) -> tuple[list[np.ndarray], np.ndarray]:
    """Nonzero roots in ``X_solve`` with the other coordinates set to rows of ``free``.

    Returns per-row root arrays and a per-row converged flag. Roots at zero
    (vanishing low coefficients) are dropped since Log is undefined there.
    """
    solve = f.nvars - 1 if solve is None else solve
    M, _ = _coeff_matrix(f, np.atleast_2d(free).reshape(len(free), -1), solve)
    B = M.shape[0]
    nz = M != 0
    lo = np.where(nz.any(axis=1), nz.argmax(axis=1), -1)
    hi = np.where(nz.any(axis=1), M.shape[1] - 1 - nz[:, ::-1].argmax(axis=1), -1)
    roots: list[np.ndarray] = [np.empty(0, dtype=complex)] * B
    ok = np.ones(B, dtype=bool)
    patterns: dict[tuple[int, int], list[int]] = {}
    for i in range(B):
        if lo[i] < 0:
            ok[i] = False  # identically zero fibre, not a finite root set
            continue
        patterns.setdefault((int(lo[i]), int(hi[i])), []).append(i)
    for (l, h), rows in patterns.items():
        if h == l:
            continue  # only the zero root
        sub = M[rows, l : h + 1]
        z, conv = aberth_roots(sub, rng)
        for r, zr, c in zip(rows, z, conv):
            roots[r] = zr
            ok[r] = bool(c)
    return roots, ok


# --- archimedean sampling --------------------------------------------------


@dataclass
class AmoebaSample:
    points: np.ndarray  # (N, nvars) Log coordinates, canonically sorted
    n_samples: int
    n_failed: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def failure_rate(self) -> float:
        return self.n_failed / self.n_samples if self.n_samples else 0.0

    def log_points(self) -> list[LogPoint]:
        return [LogPoint(tuple(p)) for p in self.points]


def _canonical(points: np.ndarray) -> np.ndarray:
    if len(points) == 0:
        return points
    order = np.lexsort(points.T[::-1])
    return points[order]


def sample_amoeba(
    f: LaurentPoly,
    grid: tuple[int, int] = (200, 64),
    log_radius: tuple[float, float] = (-5.0, 5.0),
    seed: int = 0,
) -> AmoebaSample:
    """Sample ``Log(V(f) in (C*)^n)`` by solving for the last variable.

    For two variables the free coordinate runs over a regular ``N x M`` grid in
    ``(log|x|, arg x)``; with more variables ``N*M`` seeded random polar
    samples are drawn for the free coordinates.
    """
    rng = np.random.default_rng(seed)
    n = f.nvars
    if f.is_zero():
        raise ValueError("zero polynomial")
    if len(f.terms) < 2:
        return AmoebaSample(np.empty((0, n)), 0, 0, {"reason": "single monomial has no torus zeros"})
    solve = n - 1
    if len({w[solve] for w in f.terms}) < 2:
        raise ValueError("polynomial does not involve the solved variable")
    N, M = grid
    if n == 1:
        roots, ok = solve_last_variable(f, np.zeros((1, 0)), rng)
        pts = np.log(np.abs(roots[0]))[:, None] if ok[0] else np.empty((0, 1))
        return AmoebaSample(_canonical(pts), 1, int(not ok[0]))
    if n == 2:
        r = np.linspace(log_radius[0], log_radius[1], N)
        a = 2 * np.pi * np.arange(M) / M
        R, A = np.meshgrid(r, a, indexing="ij")
        logr = R.reshape(-1, 1)
        arg = A.reshape(-1, 1)
    else:
        logr = rng.uniform(log_radius[0], log_radius[1], size=(N * M, n - 1))
        arg = rng.uniform(0, 2 * np.pi, size=(N * M, n - 1))
    free = np.exp(logr) * np.exp(1j * arg)
    roots, ok = solve_last_variable(f, free, rng)
    rows = []
    zero_dropped = 0
    for i, (zr, good) in enumerate(zip(roots, ok)):
        if not good:
            continue
        for y in zr:
            if y == 0 or not np.isfinite(y):
                zero_dropped += 1
                continue
            rows.append(np.concatenate([logr[i], [math.log(abs(y))]]))
    pts = np.array(rows, dtype=float).reshape(-1, n)
    return AmoebaSample(
        _canonical(pts),
        len(free),
        int((~ok).sum()),
        {"zero_roots_dropped": zero_dropped},
    )


def sample_plane_curve_amoeba(f: LaurentPoly, grid=(200, 64), log_radius=(-5.0, 5.0), seed=0) -> AmoebaSample:
    if f.nvars != 2:
        raise ValueError("plane curve sampler needs a 2-variable polynomial")
    if len({w[0] for w in f.terms}) < 2 or len({w[1] for w in f.terms}) < 2:
        raise ValueError("polynomial must depend on both variables")
    return sample_amoeba(f, grid, log_radius, seed)


def archimedean_slack(f: LaurentPoly, points: np.ndarray) -> np.ndarray:
    """Per point, ``min_w [ logsumexp_{u != w}(ln|a_u| + <y,u>) - (ln|a_w| + <y,w>) ]``.

    Nonnegative slack is exactly the triangle-inequality constraint that every
    amoeba point satisfies.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    W = np.array(list(f.terms), dtype=float)
    la = np.array([math.log(abs(float(a))) for a in f.terms.values()])
    V = pts @ W.T + la[None, :]
    K = V.shape[1]
    if K < 2:
        return np.full(len(pts), -np.inf)
    out = np.full(len(pts), np.inf)
    for k in range(K):
        rest = np.delete(V, k, axis=1)
        m = rest.max(axis=1)
        lse = m + np.log(np.exp(rest - m[:, None]).sum(axis=1))
        out = np.minimum(out, lse - V[:, k])
    return out


# --- real orthant pieces and the deformation -------------------------------


def sample_orthant_curve(
    f: LaurentPoly,
    s: OrthantSign,
    log_range: tuple[float, float],
    n: int = 2001,
    seed: int = 0,
    imag_tol: float = 1e-9,
) -> np.ndarray:
    """Absolute values of points of ``V(f)`` in orthant ``s`` (2 variables).

    Each coordinate in turn runs over a log-spaced grid of ``n`` values with
    the orthant's sign, and the other is solved; sweeping both keeps the
    branches asymptotic to either axis resolved in floating point.
    """
    if f.nvars != 2:
        raise ValueError("orthant sampling is implemented for plane curves")
    rng = np.random.default_rng(seed)
    u = np.linspace(log_range[0], log_range[1], n)
    out = []
    for solve in (1, 0):
        free_idx = 1 - solve
        free = (s.s[free_idx] * np.exp(u)).astype(complex).reshape(-1, 1)
        roots, ok = solve_last_variable(f, free, rng, solve=solve)
        for i, (zr, good) in enumerate(zip(roots, ok)):
            if not good:
                continue
            for y in zr:
                if abs(y.imag) <= imag_tol * (1 + abs(y.real)) and y.real * s.s[solve] > 0:
                    pt = [0.0, 0.0]
                    pt[free_idx] = float(np.exp(u[i]))
                    pt[solve] = abs(float(y.real))
                    out.append(pt)
    pts = np.array(out, dtype=float).reshape(-1, 2)
    return _canonical(pts)


def deform_family(samples: np.ndarray, h) -> DeformationSample:
    """``D_h`` applied coordinatewise to positive samples."""
    hp = h if isinstance(h, DequantParam) else DequantParam(float(h))
    hv = _require_positive_h(hp)
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    if pts.size and not (pts > 0).all():
        raise ValueError("deformation needs strictly positive coordinates")
    return DeformationSample(hp, hv * np.log(pts) if pts.size else pts)


def _box_mask(points: np.ndarray, box: np.ndarray, tol: float = 0.0) -> np.ndarray:
    return ((points >= box[:, 0] - tol) & (points <= box[:, 1] + tol)).all(axis=1)


def complex_grid_points(C: PolyComplex, box, resolution: int = 201) -> np.ndarray:
    """Points of ``C`` inside ``box``: a regular box grid projected onto each cell."""
    B = np.asarray(box, dtype=float)
    n = B.shape[0]
    axes = [np.linspace(lo, hi, resolution) for lo, hi in B]
    G = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    pts = []
    for cell in C.cells:
        _, proj = cell_nearest(cell, G)
        good = np.isfinite(proj).all(axis=1)
        proj = proj[good]
        proj = proj[_box_mask(proj, B, 1e-12)]
        if len(proj):
            pts.append(np.unique(np.round(proj, 12), axis=0))
    if not pts:
        return np.empty((0, n))
    return np.vstack(pts)


def hausdorff_to_tropical(
    S: DeformationSample, C: PolyComplex, box, resolution: int = 201
) -> float:
    """Symmetric Hausdorff estimate between ``S`` and ``C``, both clipped to ``box``."""
    B = np.asarray(box, dtype=float)
    if B.ndim != 2 or B.shape[1] != 2 or not np.all(np.isfinite(B)):
        raise ValueError("box must be a bounded list of (lo, hi) pairs")
    pts = S.points[_box_mask(S.points, B)]
    if len(pts) == 0:
        raise ValueError("no sample points inside the box")
    cpts = complex_grid_points(C, B, resolution)
    if len(cpts) == 0:
        raise ValueError("the complex does not meet the box")
    d_sample_to_c = float(complex_distance(C, pts).max())
    d_c_to_sample = float(cKDTree(pts).query(cpts)[0].max())
    return max(d_sample_to_c, d_c_to_sample)


# --- points at infinity ----------------------------------------------------


@dataclass
class IdealPointReport:
    status: str  # "converged" | "divergent" | "not_escaping"
    limit: SpherePoint | None
    tail: float
    last_projection: SpherePoint | None
    log_norm: float
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def _fit_direction(L: np.ndarray) -> np.ndarray:
    s = np.linalg.norm(L, axis=1)
    X = np.column_stack([s, np.log(s), np.ones_like(s)])
    coef, *_ = np.linalg.lstsq(X, L, rcond=None)
    a = coef[0]
    nrm = np.linalg.norm(a)
    return a / nrm if nrm > 0 else a


def ideal_point_limit(
    sequence: Sequence[Sequence[float]],
    from_logs: bool = False,
    escape_threshold: float = 10.0,
    tol: float = 1e-3,
) -> IdealPointReport:
    """Estimate the sphere limit of ``Log(x_n)`` for a sequence escaping to infinity.

    Each coordinate of the tail is fitted as ``a*s + b*ln(s) + c`` against
    ``s = |Log x_n|``, so that power-law factors (a ``ln s`` drift) and bounded
    coordinates fall out, and ``a/|a|`` is the limit. The Cauchy-tail
    estimate compares fits on the last half and last quarter of the terms;
    beyond ``tol`` the sequence is reported divergent.
    """
    arr = np.asarray(sequence, dtype=float)
    if arr.ndim != 2 or len(arr) < 8:
        raise ValueError("need at least 8 terms of a vector sequence")
    if from_logs:
        L = arr
    else:
        if not (arr > 0).all():
            raise ValueError("terms must be positive vectors (pass from_logs=True for log data)")
        L = np.log(arr)
    norms = np.linalg.norm(L, axis=1)
    nq = max(len(L) // 4, 4)
    nh = max(len(L) // 2, 2 * nq)
    tail_norms = norms[-nh:]
    last = sphere_project(L[-1]) if norms[-1] > 0 else None
    if norms[-1] < escape_threshold or tail_norms[-1] <= tail_norms[0]:
        return IdealPointReport(
            "not_escaping", None, math.inf, last, float(norms[-1]), "not an ideal-point sequence: Log norms stay bounded"
        )
    d_half = _fit_direction(L[-nh:])
    d_quarter = _fit_direction(L[-nq:])
    tail = float(np.linalg.norm(d_half - d_quarter))
    limit = sphere_project(d_quarter)
    if tail > tol:
        return IdealPointReport(
            "divergent", limit, tail, last, float(norms[-1]), f"sphere projections not Cauchy (tail {tail:.3g} > {tol:g})"
        )
    return IdealPointReport("converged", limit, tail, last, float(norms[-1]))
