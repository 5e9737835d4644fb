"""Lexicographically ordered groups Z^r, rank reduction and monomial valuations.

Height convention: coordinate 0 is the most significant. The convex
subgroup ``Lambda_j`` consists of the elements whose first ``r - j``
coordinates vanish, so the height of a nonzero element is ``r`` minus its
number of leading zeros. The embedding of ``Lambda_j / Lambda_{j-1}`` into
R reads the ``(r - j)``-th coordinate.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .polynomials import LaurentPoly

INF = math.inf


@functools.total_ordering
@dataclass(frozen=True)
class LexGroupElement:
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if not coords:
            raise ValueError("rank must be at least 1")
        object.__setattr__(self, "coords", coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "LexGroupElement") -> None:
        if self.rank != other.rank:
            raise ValueError("elements of different rank")

    def __lt__(self, other: "LexGroupElement") -> bool:
        self._check(other)
        return self.coords < other.coords

    def __add__(self, other: "LexGroupElement") -> "LexGroupElement":
        self._check(other)
        return LexGroupElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LexGroupElement":
        return LexGroupElement(tuple(-a for a in self.coords))

    def __sub__(self, other: "LexGroupElement") -> "LexGroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "LexGroupElement":
        return LexGroupElement(tuple(k * a for a in self.coords))

    def sign(self) -> int:
        for c in self.coords:
            if c:
                return 1 if c > 0 else -1
        return 0

    def leading(self) -> int:
        """Coordinate read by the real embedding of this element's height."""
        for c in self.coords:
            if c:
                return c
        raise ValueError("zero element has no leading coordinate")


def height(lam: LexGroupElement) -> int:
    if lam.is_zero():
        raise ValueError("height of the zero element is undefined")
    lead_zeros = next(i for i, c in enumerate(lam.coords) if c)
    return lam.rank - lead_zeros


def group_divide(lam: LexGroupElement, mu: LexGroupElement):
    """``lam / mu`` in R extended by +-inf.

    Equal heights give the ratio of leading coordinates (a Fraction); a lower
    height for ``lam`` gives 0; a higher height gives ``sign(lam)*sign(mu)*inf``.
    """
    lam._check(mu)
    if mu.is_zero():
        raise ZeroDivisionError("division by the zero element")
    if lam.is_zero():
        return Fraction(0)
    hl, hm = height(lam), height(mu)
    if hl == hm:
        return Fraction(lam.leading(), mu.leading())
    if hl < hm:
        return Fraction(0)
    return lam.sign() * mu.sign() * INF


def rank_reduce(
    values: Mapping[object, LexGroupElement], s: int, ref: LexGroupElement | None = None
) -> dict[object, object]:
    """Rank-one shadow ``g -> v(g) / ref`` of finite-rank valuation data.

    ``ref`` is a positive element of height ``s`` (default: the unit vector
    on the coordinate read at height ``s``). Values of lower height go to 0.
    """
    vals = dict(values)
    if not vals:
        raise ValueError("no generator values")
    r = next(iter(vals.values())).rank
    if not 1 <= s <= r:
        raise ValueError(f"height {s} out of range for rank {r}")
    if ref is None:
        coords = [0] * r
        coords[r - s] = 1
        ref = LexGroupElement(tuple(coords))
    if ref.is_zero() or height(ref) != s or ref.sign() < 0:
        raise ValueError("reference element must be positive of height s")
    heights = [height(v) for v in vals.values() if not v.is_zero()]
    if heights and max(heights) > s:
        raise ValueError("s must be the maximal height among the generator values")
    if not heights or max(heights) < s:
        raise ValueError("degenerate: no generator value reaches height s")
    return {g: group_divide(v, ref) for g, v in vals.items()}


@dataclass(frozen=True)
class MonomialValuation:
    """``v(f) = min over the support of -<xi, w>``."""

    xi: tuple

    def __post_init__(self):
        xi = tuple(self.xi)
        for c in xi:
            if isinstance(c, float) and not math.isfinite(c):
                raise ValueError("weight entries must be finite")
        object.__setattr__(self, "xi", xi)

    def __call__(self, f: LaurentPoly):
        return monval_apply(self, f)


def _pairing(xi: Sequence, w: Sequence[int]):
    return sum((a * b for a, b in zip(xi, w) if b), 0)


def monval_values(v: MonomialValuation, f: LaurentPoly) -> dict:
    if len(v.xi) != f.nvars:
        raise ValueError("weight length does not match the polynomial")
    return {w: -_pairing(v.xi, w) for w in f.terms}


def monval_apply(v: MonomialValuation, f: LaurentPoly):
    if f.is_zero():
        return INF
    return min(monval_values(v, f).values())


def z_map(v: MonomialValuation, nvars: int | None = None) -> tuple:
    """``(-v(X_1), ..., -v(X_n))``, which for a monomial valuation is ``xi``."""
    n = len(v.xi) if nvars is None else nvars
    out = []
    for j in range(n):
        w = [0] * n
        w[j] = 1
        out.append(-monval_apply(v, LaurentPoly(n, {tuple(w): 1})))
    return tuple(out)


def min_attained_twice(v: MonomialValuation, f: LaurentPoly) -> bool:
    vals = list(monval_values(v, f).values())
    if len(vals) < 2:
        return False
    m = min(vals)
    return sum(1 for x in vals if x == m) >= 2


def descend_valuation(v: MonomialValuation, ideal_gens: Iterable[LaurentPoly]) -> bool:
    """Necessary condition for ``v`` to descend to ``Laurent ring / (gens)``.

    Every generator must have its minimal monomial value attained at least
    twice, otherwise ``v(g)`` would be finite for an element sent to +inf.
    """
    return all(min_attained_twice(v, g) for g in ideal_gens)
