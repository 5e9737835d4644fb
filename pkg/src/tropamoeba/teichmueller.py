"""SL2 characters of the free group on A, B and the punctured-torus boundary.

Traces are computed by reducing words in the basis {I, A, B, AB} of the
algebra generated by two SL2 matrices. The coefficients live in any ring
containing x = tr A, y = tr B, z = tr AB, so the same code yields numeric
traces (floats) and exact trace polynomials (``LaurentPoly``).

Rules used, from Cayley-Hamilton and tr(UV) + tr(UV^-1) = tr U tr V:

    A^2 = xA - I            B^2 = yB - I
    BA  = yA + xB + (z - xy)I - AB
    ABA = -yI + zA + B      ABB = yAB - A
    A^-1 = xI - A           B^-1 = yI - B
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dequant_amoeba import IdealPointReport, SpherePoint, ideal_point_limit
from .polyhedral import PolyComplex, cells_TR, member_TR
from .polynomials import LaurentPoly, OrthantSign, sign_split, tropicalize_trivial

MAX_WORD_LENGTH = 64
DET_TOL = 1e-10

# letters: 1 = A, -1 = A^-1, 2 = B, -2 = B^-1
_LETTER_NAMES = {1: "A", -1: "a", 2: "B", -2: "b"}


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        red: list[int] = []
        for c in self.letters:
            c = int(c)
            if c not in _LETTER_NAMES:
                raise ValueError(f"bad letter code {c}")
            if red and red[-1] == -c:
                red.pop()
            else:
                red.append(c)
        object.__setattr__(self, "letters", tuple(red))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Accepts ``"ABab"`` (lowercase = inverse) or ``"A B A^-1 B^-1"``."""
        letters = []
        for tok in re.finditer(r"\s*([ABab])(\^-1|\^\{-1\}|\^1)?\s*", text):
            sym, exp = tok.group(1), tok.group(2)
            code = 1 if sym.upper() == "A" else 2
            if sym.islower():
                code = -code
            if exp and "-1" in exp:
                code = -code
            letters.append(code)
        if re.sub(r"[\sABab]|\^-1|\^\{-1\}|\^1", "", text):
            raise ValueError(f"cannot parse word {text!r}")
        return cls(tuple(letters))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-c for c in reversed(self.letters)))

    def __str__(self):
        return "".join(_LETTER_NAMES[c] for c in self.letters) or "1"


WORD_A = Word((1,))
WORD_B = Word((2,))
WORD_AB = Word((1, 2))
COMMUTATOR = Word((1, 2, -1, -2))


@dataclass(frozen=True)
class Character:
    x: float
    y: float
    z: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass
class Sl2Pair:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        self.A = np.asarray(self.A)
        self.B = np.asarray(self.B)
        for name, M in (("A", self.A), ("B", self.B)):
            if M.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2")
            det = np.linalg.det(M)
            if abs(det - 1.0) > DET_TOL * max(1.0, float(np.abs(M).max()) ** 2):
                raise ValueError(f"det {name} = {det}, expected 1")

    def matrix(self, w: Word) -> np.ndarray:
        gens = {1: self.A, -1: _sl2_inverse(self.A), 2: self.B, -2: _sl2_inverse(self.B)}
        M = np.eye(2, dtype=np.result_type(self.A, self.B))
        for c in w.letters:
            M = M @ gens[c]
        return M


def _sl2_inverse(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])


def char_of_pair(p: Sl2Pair) -> Character:
    return Character(*(_real(np.trace(M)) for M in (p.A, p.B, p.A @ p.B)))


def _real(v):
    v = complex(v)
    return v.real if abs(v.imag) <= 1e-12 * (1 + abs(v.real)) else v


# --- trace engine ----------------------------------------------------------


def _mul_A(e, x, y, z):
    a, b, c, d = e
    # aA + b(xA - I) + c(yA + xB + (z - xy)I - AB) + d(-yI + zA + B)
    return (
        -b + c * (z - x * y) - d * y,
        a + b * x + c * y + d * z,
        c * x + d,
        -c,
    )


def _mul_B(e, x, y, z):
    a, b, c, d = e
    # aB + bAB + c(yB - I) + d(yAB - A)
    return (-c, -d, a + c * y, b + d * y)


def _reduce(w: Word, x, y, z, one, zero):
    if len(w) > MAX_WORD_LENGTH:
        raise RecursionError(f"word longer than {MAX_WORD_LENGTH} letters")
    e = (one, zero, zero, zero)
    for c in w.letters:
        if c == 1:
            e = _mul_A(e, x, y, z)
        elif c == 2:
            e = _mul_B(e, x, y, z)
        else:
            g, s = (_mul_A, x) if c == -1 else (_mul_B, y)
            m = g(e, x, y, z)
            e = tuple(s * ei - mi for ei, mi in zip(e, m))
    return e


def _trace_of_element(e, x, y, z):
    a, b, c, d = e
    return a + a + b * x + c * y + d * z


def trace_of_word(w: Word, c: Character | Sequence[float]):
    x, y, z = c.as_tuple() if isinstance(c, Character) else tuple(c)
    return _trace_of_element(_reduce(w, x, y, z, 1.0, 0.0), x, y, z)


def trace_polynomial(w: Word) -> LaurentPoly:
    """The polynomial in (x, y, z) whose value is ``tr rho(w)``."""
    X = LaurentPoly(3, {(1, 0, 0): 1})
    Y = LaurentPoly(3, {(0, 1, 0): 1})
    Z = LaurentPoly(3, {(0, 0, 1): 1})
    one = LaurentPoly(3, {(0, 0, 0): 1})
    zero = LaurentPoly(3, {})
    return _trace_of_element(_reduce(w, X, Y, Z, one, zero), X, Y, Z)


def markov_residual(c: Character | Sequence[float]):
    x, y, z = c.as_tuple() if isinstance(c, Character) else tuple(c)
    return x * x + y * y + z * z - x * y * z


def markov_polynomial() -> LaurentPoly:
    return LaurentPoly.from_expr("X**2 + Y**2 + Z**2 - X*Y*Z", ["X", "Y", "Z"])


def teich_solve_z(x: float, y: float) -> float:
    """Larger root in z of the Markov relation, given x and y."""
    disc = x * x * y * y - 4 * x * x - 4 * y * y
    if disc < 0:
        raise ValueError(f"no real z: discriminant {disc} < 0")
    return (x * y + math.sqrt(disc)) / 2


def length_of_trace(t: float) -> float:
    if not abs(t) >= 2:
        raise ValueError(f"|t| = {abs(t)} < 2 has no geodesic length")
    return 2.0 * math.acosh(abs(t) / 2.0)


def realize_pair(c: Character | Sequence[float]) -> Sl2Pair:
    """An ``Sl2Pair`` with character ``c``; real when possible, else complex.

    ``A = [[x, 1], [-1, 0]]`` and ``B = [[p, q], [r, y - p]]`` with
    ``r = q + z - xp`` and ``det B = 1``, a quadratic in ``q``. A real ``p``
    with nonnegative discriminant is searched first.
    """
    x, y, z = c.as_tuple() if isinstance(c, Character) else tuple(c)
    A = np.array([[x, 1.0], [-1.0, 0.0]])

    def disc(p):
        return (z - x * p) ** 2 - 4 * (1 - p * (y - p))

    for p in (0.0, y / 2, 1.0, -1.0, *np.linspace(-10, 10, 41)):
        if disc(p) >= 0:
            q = (-(z - x * p) + math.sqrt(disc(p))) / 2
            break
    else:
        p = 0.0
        q = (-(z - x * p) + np.sqrt(complex(disc(p)))) / 2
        A = A.astype(complex)
    r = q + z - x * p
    B = np.array([[p, q], [r, y - p]])
    return Sl2Pair(A, B)


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    M = rng.normal(scale=scale, size=(2, 2))
    d = np.linalg.det(M)
    if d < 0:
        M[0] = -M[0]
        d = -d
    return M / math.sqrt(d)


# --- boundary of the Teichmueller component --------------------------------


def markov_tropical_split():
    """``(max(2u1, 2u2, 2u3), u1 + u2 + u3)`` from the positive-orthant split."""
    fp, fm = sign_split(markov_polynomial(), OrthantSign.positive(3))
    return tropicalize_trivial(fp), tropicalize_trivial(fm)


def markov_tropical_cone() -> PolyComplex:
    return cells_TR(*markov_tropical_split())


Path = Callable[[float], Character]


def ray_diag(w: float) -> Character:
    return Character(w, w, teich_solve_z(w, w))


def ray_y3(w: float) -> Character:
    return Character(w, 3.0, teich_solve_z(w, 3.0))


def ray_x3(w: float) -> Character:
    return Character(3.0, w, teich_solve_z(3.0, w))


def ray_bounded(w: float) -> Character:
    # stays in a compact region: not an ideal-point sequence
    t = 3.0 + 1.0 / w
    return Character(t, t, teich_solve_z(t, t))


RAY_PRESETS: dict[str, Path] = {"diag": ray_diag, "y3": ray_y3, "x3": ray_x3, "bounded": ray_bounded}
RAY_EXPECTED = {
    "diag": tuple(v / math.sqrt(6) for v in (1, 1, 2)),
    "y3": tuple(v / math.sqrt(2) for v in (1, 0, 1)),
    "x3": tuple(v / math.sqrt(2) for v in (0, 1, 1)),
}
DEFAULT_FAMILY = (WORD_A, WORD_B, WORD_AB)


def default_params(n: int = 40, lo: float = 10.0, hi: float = 1e6) -> np.ndarray:
    return np.geomspace(lo, hi, n)


@dataclass
class RayLimit:
    report: IdealPointReport
    params: np.ndarray
    characters: list[Character]
    log_traces: np.ndarray
    on_cone: bool | None = None
    cone_gap: float | None = None
    family: tuple[Word, ...] = field(default=DEFAULT_FAMILY)

    @property
    def limit(self) -> SpherePoint | None:
        return self.report.limit


def _cone_coordinates(family: Sequence[Word]) -> list[int] | None:
    try:
        return [list(family).index(w) for w in DEFAULT_FAMILY]
    except ValueError:
        return None


def boundary_ray_limit(
    path: Path,
    trace_family: Sequence[Word] = DEFAULT_FAMILY,
    params: Sequence[float] | None = None,
    tol: float = 1e-3,
) -> RayLimit:
    """Sphere limit of ``(log|I_w(c(t))|)_w`` along ``path`` and its cone verdict.

    The verdict checks the ``(A, B, AB)`` coordinates of the limit against
    ``max(2u1, 2u2, 2u3) = u1 + u2 + u3`` at tolerance ``tol``.
    """
    ts = default_params() if params is None else np.asarray(params, dtype=float)
    family = tuple(trace_family)
    chars = [path(float(t)) for t in ts]
    L = np.array([[math.log(abs(trace_of_word(w, c))) for w in family] for c in chars])
    report = ideal_point_limit(L, from_logs=True, tol=tol)
    out = RayLimit(report, ts, chars, L, family=family)
    idx = _cone_coordinates(family)
    if report.limit is not None and idx is not None:
        p = [report.limit.coords[i] for i in idx]
        Pp, Pm = markov_tropical_split()
        gap = abs(float(Pp(p)) - float(Pm(p)))
        out.cone_gap = gap
        out.on_cone = member_TR(Pp, Pm, p, tol=tol)
    return out


@dataclass
class CompatibilityRow:
    ray: str
    consistent: bool
    projection_norm: float
    distance: float
    reason: str = ""


def projection_compatibility_check(
    family_big: Sequence[Word],
    family_small: Sequence[Word],
    rays: dict[str, Path],
    params: Sequence[float] | None = None,
    tol: float = 1e-3,
) -> list[CompatibilityRow]:
    """Compare the coordinate projection of big-family limits with small-family limits."""
    big, small = list(family_big), list(family_small)
    try:
        idx = [big.index(w) for w in small]
    except ValueError as exc:
        raise ValueError("small family must be a sublist of the big family") from exc
    rows = []
    for name, path in rays.items():
        lb = boundary_ray_limit(path, big, params, tol).report
        ls = boundary_ray_limit(path, small, params, tol).report
        if lb.limit is None:
            rows.append(CompatibilityRow(name, False, math.nan, math.nan, f"big family: {lb.status}"))
            continue
        proj = np.array([lb.limit.coords[i] for i in idx])
        pn = float(np.linalg.norm(proj))
        if pn <= tol:
            rows.append(CompatibilityRow(name, False, pn, math.nan, "projection vanishes on this ray"))
            continue
        if ls.limit is None:
            rows.append(CompatibilityRow(name, False, pn, math.nan, f"small family: {ls.status}"))
            continue
        dist = float(np.linalg.norm(proj / pn - np.asarray(ls.limit.coords)))
        ok = dist <= tol
        rows.append(CompatibilityRow(name, ok, pn, dist, "" if ok else "projected limits differ"))
    return rows
