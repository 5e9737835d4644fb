"""Truncated Puiseux series over Q and Newton-polygon root valuations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .polynomials import TropPoly, eval_trop, tropicalize_valued

DEFAULT_TRUNC = 24


class PrecisionError(ArithmeticError):
    """Raised when a result would depend on terms lost to truncation."""


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class PuiseuxSeries:
    """Series ``sum c_k t^(k/ram)``, known below ``t^(trunc/ram)``.

    ``trunc=None`` marks an exact finite series (a Laurent polynomial in
    ``t^(1/ram)``); operations that cannot stay finite, such as inversion of
    a non-monomial, fall back to ``DEFAULT_TRUNC`` units of precision.
    """

    terms: Mapping[int, Fraction]
    ram: int = 1
    trunc: int | None = None

    def __post_init__(self):
        if self.ram < 1:
            raise ValueError("ramification index must be positive")
        clean = {}
        for k, c in dict(self.terms).items():
            c = Fraction(c)
            k = int(k)
            if c != 0 and (self.trunc is None or k < self.trunc):
                clean[k] = c
        ram, trunc = self.ram, self.trunc
        g = ram
        for k in clean:
            g = math.gcd(g, k)
        if trunc is not None:
            g = math.gcd(g, trunc)
        if g > 1:
            clean = {k // g: c for k, c in clean.items()}
            ram //= g
            trunc = None if trunc is None else trunc // g
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "ram", ram)
        object.__setattr__(self, "trunc", trunc)

    # construction -----------------------------------------------------

    @classmethod
    def monomial(cls, coeff, exponent=0) -> "PuiseuxSeries":
        e = Fraction(exponent)
        return cls({e.numerator: Fraction(coeff)}, e.denominator)

    @classmethod
    def zero(cls) -> "PuiseuxSeries":
        return cls({})

    @classmethod
    def parse(cls, text: str, param: str = "t") -> "PuiseuxSeries":
        """Read a literal such as ``"t^3 - 2*t^(1/2) + 1"``."""
        import sympy

        expr = _sympify(text)
        t = sympy.Symbol(param)
        out = cls.zero()
        for term in sympy.Add.make_args(sympy.expand(expr)):
            c, q = term.as_coeff_exponent(t)
            if c.free_symbols or not c.is_rational or not q.is_rational:
                raise ValueError(f"cannot read {term} as a rational multiple of a power of {param}")
            out = out + cls.monomial(Fraction(int(c.p), int(c.q)), Fraction(int(q.p), int(q.q)))
        return out

    # inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exact(self) -> bool:
        return self.trunc is None

    def val(self):
        """Lowest exponent, or ``math.inf`` for the zero series."""
        if not self.terms:
            return math.inf
        return Fraction(next(iter(self.terms)), self.ram)

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            raise ValueError("zero series has no leading coefficient")
        return next(iter(self.terms.values()))

    def precision(self):
        """Exponent below which all terms are known (``math.inf`` if exact)."""
        return math.inf if self.trunc is None else Fraction(self.trunc, self.ram)

    def coefficient(self, exponent) -> Fraction:
        e = Fraction(exponent)
        if e >= self.precision():
            raise PrecisionError(f"coefficient of t^{e} is beyond the truncation order")
        k = e * self.ram
        if k.denominator != 1:
            return Fraction(0)
        return self.terms.get(int(k), Fraction(0))

    def _at_ram(self, ram: int) -> tuple[dict[int, Fraction], int | None]:
        f = ram // self.ram
        return {k * f: c for k, c in self.terms.items()}, None if self.trunc is None else self.trunc * f

    # arithmetic -------------------------------------------------------

    def __add__(self, other) -> "PuiseuxSeries":
        other = _coerce(other)
        R = _lcm(self.ram, other.ram)
        a, ta = self._at_ram(R)
        b, tb = other._at_ram(R)
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, Fraction(0)) + c
        trunc = _min_trunc(ta, tb)
        res = PuiseuxSeries(out, R, trunc)
        if res.is_zero() and trunc is not None:
            raise PrecisionError("sum cancels every known term")
        return res

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries({k: -c for k, c in self.terms.items()}, self.ram, self.trunc)

    def __sub__(self, other) -> "PuiseuxSeries":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "PuiseuxSeries":
        return _coerce(other) - self

    def __mul__(self, other) -> "PuiseuxSeries":
        other = _coerce(other)
        if self.is_zero() and self.exact or other.is_zero() and other.exact:
            return PuiseuxSeries.zero()
        R = _lcm(self.ram, other.ram)
        a, ta = self._at_ram(R)
        b, tb = other._at_ram(R)
        # known precision: t^(va) * O(t^tb) and t^(vb) * O(t^ta)
        va = min(a) if a else None
        vb = min(b) if b else None
        cands = []
        if tb is not None and va is not None:
            cands.append(va + tb)
        if ta is not None and vb is not None:
            cands.append(vb + ta)
        if (ta is not None and not a) or (tb is not None and not b):
            raise PrecisionError("product with a series known only to be O(t^k)")
        trunc = min(cands) if cands else None
        out: dict[int, Fraction] = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = k1 + k2
                if trunc is None or k < trunc:
                    out[k] = out.get(k, Fraction(0)) + c1 * c2
        return PuiseuxSeries(out, R, trunc)

    __rmul__ = __mul__

    def inverse(self, trunc: int = DEFAULT_TRUNC) -> "PuiseuxSeries":
        """Multiplicative inverse by geometric-series expansion.

        For an exact non-monomial input, ``trunc`` is the number of
        ``1/ram`` units of relative precision kept.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero series")
        R = self.ram
        v = next(iter(self.terms))
        c0 = self.terms[v]
        # self = c0 t^v (1 + u), u has positive exponents
        u = {k - v: c / c0 for k, c in self.terms.items() if k != v}
        if not u:
            if self.trunc is None:
                return PuiseuxSeries({-v: 1 / c0}, R)
            rel = self.trunc - v
        else:
            rel = trunc if self.trunc is None else self.trunc - v
        if rel <= 0:
            raise PrecisionError("no relative precision left to invert")
        # 1/(1+u) = sum (-u)^m, u of order >= 1 unit, so rel terms suffice
        acc = {0: Fraction(1)}
        power = {0: Fraction(1)}
        for _ in range(rel):
            nxt: dict[int, Fraction] = {}
            for k1, c1 in power.items():
                for k2, c2 in u.items():
                    k = k1 + k2
                    if k < rel:
                        nxt[k] = nxt.get(k, Fraction(0)) - c1 * c2
            power = {k: c for k, c in nxt.items() if c != 0}
            if not power:
                break
            for k, c in power.items():
                acc[k] = acc.get(k, Fraction(0)) + c
        return PuiseuxSeries({k - v: c / c0 for k, c in acc.items()}, R, rel - v)

    def __truediv__(self, other) -> "PuiseuxSeries":
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other) -> "PuiseuxSeries":
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "PuiseuxSeries":
        if n < 0:
            return self.inverse() ** (-n)
        out = PuiseuxSeries.monomial(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0" if self.trunc is None else f"O(t^{Fraction(self.trunc, self.ram)})"
        parts = []
        for k, c in self.terms.items():
            e = Fraction(k, self.ram)
            if e == 0:
                parts.append(str(c))
            else:
                mono = "t" if e == 1 else (f"t^{e}" if e.denominator == 1 and e > 0 else f"t^({e})")
                parts.append(mono if c == 1 else ("-" + mono if c == -1 else f"{c}*{mono}"))
        s = " + ".join(parts).replace("+ -", "- ")
        if self.trunc is not None:
            s += f" + O(t^{Fraction(self.trunc, self.ram)})"
        return s


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _coerce(x) -> PuiseuxSeries:
    if isinstance(x, PuiseuxSeries):
        return x
    return PuiseuxSeries.monomial(Fraction(x))


def _sympify(text: str):
    from sympy.parsing.sympy_parser import (
        convert_xor,
        implicit_multiplication_application,
        parse_expr,
        standard_transformations,
    )

    tr = standard_transformations + (convert_xor, implicit_multiplication_application)
    try:
        return parse_expr(text, transformations=tr)
    except Exception as exc:  # sympy raises a variety of parse errors
        raise ValueError(f"cannot parse {text!r}: {exc}") from None


def val(a: PuiseuxSeries):
    return a.val()


def ps_add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a + b


def ps_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a * b


def ps_inv(a: PuiseuxSeries, trunc: int = DEFAULT_TRUNC) -> PuiseuxSeries:
    return a.inverse(trunc)


def parse_series_poly(text: str, var: str = "Y", param: str = "t") -> list[PuiseuxSeries]:
    """Coefficients (by degree in ``var``) of e.g. ``"Y^2 - t*Y + t^3"``."""
    import sympy

    expr = sympy.expand(_sympify(text))
    y = sympy.Symbol(var)
    t = sympy.Symbol(param)
    extra = expr.free_symbols - {y, t}
    if extra:
        raise ValueError(f"unexpected symbols {sorted(map(str, extra))}")
    coeffs: dict[int, PuiseuxSeries] = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        rest, k = term.as_coeff_exponent(y)
        if not (k.is_integer and k >= 0):
            raise ValueError(f"{term}: exponent of {var} must be a nonnegative integer")
        c, q = rest.as_coeff_exponent(t)
        if c.free_symbols or not c.is_rational or not q.is_rational:
            raise ValueError(f"cannot read coefficient of {term}")
        s = PuiseuxSeries.monomial(Fraction(int(c.p), int(c.q)), Fraction(int(q.p), int(q.q)))
        coeffs[int(k)] = coeffs[int(k)] + s if int(k) in coeffs else s
    if not coeffs:
        return []
    deg = max(coeffs)
    return [coeffs.get(i, PuiseuxSeries.zero()) for i in range(deg + 1)]


# --- Newton polygon --------------------------------------------------------


@dataclass(frozen=True)
class NewtonRoots:
    """Root valuations read off the lower Newton polygon.

    ``valuations`` is sorted and repeats each value by its multiplicity;
    ``zero_roots`` counts roots at 0 (valuation +inf).
    """

    valuations: tuple[Fraction, ...]
    zero_roots: int
    edges: tuple[tuple[tuple[int, Fraction], tuple[int, Fraction]], ...]

    def grouped(self) -> list[tuple[Fraction, int]]:
        out: dict[Fraction, int] = {}
        for v in self.valuations:
            out[v] = out.get(v, 0) + 1
        return sorted(out.items())


def _lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it is strictly below the chord hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon_roots(coeffs: Sequence[PuiseuxSeries]) -> NewtonRoots:
    """Valuations of the roots of ``sum coeffs[i] * Y^i`` over the Puiseux field."""
    pts = [(i, Fraction(a.val())) for i, a in enumerate(coeffs) if not a.is_zero()]
    if not pts:
        raise ValueError("zero polynomial")
    if pts[-1][0] == 0:
        raise ValueError("constant polynomial has no roots")
    zero_roots = pts[0][0]
    hull = _lower_hull(pts)
    vals: list[Fraction] = []
    edges = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = (y2 - y1) / (x2 - x1)
        vals.extend([-slope] * (x2 - x1))
        edges.append(((x1, y1), (x2, y2)))
    return NewtonRoots(tuple(sorted(vals)), zero_roots, tuple(edges))


def nonarch_amoeba_point(root_val) -> Fraction:
    if root_val == math.inf:
        raise ValueError("a root at 0 has no amoeba point")
    return -Fraction(root_val)


def tropical_roots(P: TropPoly) -> list[tuple[Fraction, int]]:
    """Tie points of a univariate tropical polynomial with multiplicities.

    Enumerates every pairwise tie; a tie point is a root when the maximum is
    attained at least twice there, with multiplicity the width
    ``max(argmax) - min(argmax)`` of the maximizing exponent range.
    """
    if P.nvars != 1:
        raise ValueError("univariate polynomial expected")
    P = P.exact()
    items = sorted((w[0], a) for w, a in P.terms.items())
    cands = set()
    for i, (di, ai) in enumerate(items):
        for dj, aj in items[i + 1 :]:
            cands.add((ai - aj) / (dj - di))
    roots = []
    for y in sorted(cands):
        _, arg = eval_trop(P, (y,))
        if len(arg) >= 2:
            degs = [w[0] for w in arg]
            roots.append((y, max(degs) - min(degs)))
    return roots


def kapranov_check(coeffs: Sequence[PuiseuxSeries]) -> tuple[bool, list, list]:
    """Compare ``-(root valuations)`` with the roots of the tropicalization as multisets."""
    nr = newton_polygon_roots(coeffs)
    from_polygon: dict[Fraction, int] = {}
    for v in nr.valuations:
        y = nonarch_amoeba_point(v)
        from_polygon[y] = from_polygon.get(y, 0) + 1
    lhs = sorted(from_polygon.items())
    rhs = tropical_roots(tropicalize_valued(list(coeffs)))
    return lhs == rhs, lhs, rhs
