"""Exact Laurent polynomials, tropical polynomials and the maps between them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Sequence

from .tropical_core import _require_positive_h

MAX_VARS = 16

Exponent = tuple[int, ...]


def _as_rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, float):
        return Fraction(c)
    raise TypeError(f"cannot read {c!r} as a rational coefficient")


def _check_exponents(terms: Mapping, nvars: int) -> None:
    if not 1 <= nvars <= MAX_VARS:
        raise ValueError(f"nvars must be in [1, {MAX_VARS}], got {nvars}")
    for w in terms:
        if len(w) != nvars:
            raise ValueError(f"exponent {w} does not have length {nvars}")


def _fmt_monomial(w: Exponent, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, w):
        if e == 1:
            parts.append(name)
        elif e != 0:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def default_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["X", "Y", "Z"][:nvars]
    return [f"X{i + 1}" for i in range(nvars)]


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples (negative entries allowed) to nonzero
    :class:`~fractions.Fraction` coefficients; zero coefficients are dropped
    on construction.
    """

    nvars: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in dict(self.terms).items():
            w = tuple(int(e) for e in w)
            c = _as_rational(c)
            if c != 0:
                clean[w] = clean.get(w, Fraction(0)) + c
                if clean[w] == 0:
                    del clean[w]
        _check_exponents(clean, self.nvars)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_expr(cls, expr: str, variables: Sequence[str] | None = None) -> "LaurentPoly":
        """Parse e.g. ``"x^2 + y^2 + z^2 - x*y*z"`` (``^`` or ``**`` for powers)."""
        import sympy
        from sympy.parsing.sympy_parser import (
            convert_xor,
            implicit_multiplication_application,
            parse_expr,
            standard_transformations,
        )

        tr = standard_transformations + (convert_xor, implicit_multiplication_application)
        e = sympy.expand(parse_expr(expr, transformations=tr))
        if variables is None:
            syms = sorted(e.free_symbols, key=lambda s: s.name)
        else:
            syms = [sympy.Symbol(v) for v in variables]
        if not syms:
            raise ValueError("expression has no variables")
        terms: dict[Exponent, Fraction] = {}
        for term in sympy.Add.make_args(e):
            coeff = term
            exps = []
            for s in syms:
                c, k = coeff.as_coeff_exponent(s)
                if not k.is_integer:
                    raise ValueError(f"non-integer exponent {k} of {s} in {term}")
                exps.append(int(k))
                coeff = c
            if coeff.free_symbols or not coeff.is_rational:
                raise ValueError(f"coefficient {coeff} of {term} is not rational")
            w = tuple(exps)
            terms[w] = terms.get(w, Fraction(0)) + Fraction(int(coeff.p), int(coeff.q))
        return cls(len(syms), terms)

    @property
    def support(self) -> list[Exponent]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, x):
        return eval_laurent(self, x)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return LaurentPoly(self.nvars, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out: dict[Exponent, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                out[w] = out.get(w, Fraction(0)) + c1 * c2
        return LaurentPoly(self.nvars, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = default_names(self.nvars)
        out = []
        for w, c in self.terms.items():
            mono = _fmt_monomial(w, names)
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [{"coeff": str(c), "exp": list(w)} for w, c in self.terms.items()],
        }


@dataclass(frozen=True)
class TropPoly:
    """Tropical polynomial ``max_w (a_w + <x, w>)`` with finite support.

    Coefficients keep whatever numeric type they were given; pass
    :class:`~fractions.Fraction` values when exact membership tests are needed.
    """

    nvars: int
    terms: Mapping[Exponent, float | Fraction]

    def __post_init__(self):
        clean = {tuple(int(e) for e in w): c for w, c in dict(self.terms).items()}
        if not clean:
            raise ValueError("tropical polynomial needs a nonempty support")
        for c in clean.values():
            if isinstance(c, float) and not math.isfinite(c):
                raise ValueError("tropical coefficients must be finite")
        _check_exponents(clean, self.nvars)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @property
    def support(self) -> list[Exponent]:
        return list(self.terms)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.terms.values())

    def exact(self) -> "TropPoly":
        """Copy with coefficients converted to Fractions (floats convert exactly)."""
        return TropPoly(self.nvars, {w: _as_rational(c) for w, c in self.terms.items()})

    def __call__(self, x):
        return eval_trop(self, x)[0]

    def __str__(self) -> str:
        names = default_names(self.nvars)
        parts = []
        for w, c in self.terms.items():
            mono = _fmt_monomial(w, names).replace("*", "+")
            if not mono:
                parts.append(f"({c})")
            elif c == 0:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " (+) ".join(parts)

    def to_json(self) -> dict:
        def enc(c):
            return float(c) if isinstance(c, float) else str(c)

        return {
            "nvars": self.nvars,
            "tropical": True,
            "terms": [{"coeff": enc(c), "exp": list(w)} for w, c in self.terms.items()],
        }


@dataclass(frozen=True)
class OrthantSign:
    s: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        if not s or any(v not in (-1, 1) for v in s):
            raise ValueError(f"orthant sign entries must be +-1, got {self.s!r}")
        object.__setattr__(self, "s", s)

    @classmethod
    def parse(cls, text: str) -> "OrthantSign":
        """``"+-+"`` style flags."""
        table = {"+": 1, "-": -1}
        try:
            return cls(tuple(table[ch] for ch in text.strip()))
        except KeyError:
            raise ValueError(f"orthant flag must consist of '+'/'-', got {text!r}") from None

    @classmethod
    def positive(cls, n: int) -> "OrthantSign":
        return cls((1,) * n)

    def contains(self, x: Sequence) -> bool:
        return all(xi * si > 0 for xi, si in zip(x, self.s))

    def __len__(self):
        return len(self.s)

    def __str__(self):
        return "".join("+" if v > 0 else "-" for v in self.s)


def eval_laurent(f: LaurentPoly, x: Sequence):
    if len(x) != f.nvars:
        raise ValueError(f"point has {len(x)} coordinates, polynomial has {f.nvars} variables")
    if any(xi == 0 for xi in x):
        for w in f.terms:
            if any(e < 0 and xi == 0 for e, xi in zip(w, x)):
                raise ZeroDivisionError("zero coordinate under a negative exponent")
    total = 0
    for w, c in f.terms.items():
        term = c
        for xi, e in zip(x, w):
            if e:
                term = term * xi**e
        total = total + term
    return total


def _dot(x: Sequence, w: Exponent):
    return sum((xi * e for xi, e in zip(x, w) if e), 0)


def monomial_values(P: TropPoly, x: Sequence) -> dict[Exponent, object]:
    if len(x) != P.nvars:
        raise ValueError(f"point has {len(x)} coordinates, polynomial has {P.nvars} variables")
    return {w: a + _dot(x, w) for w, a in P.terms.items()}


def eval_trop(P: TropPoly, x: Sequence, tol: float = 0.0):
    """Return ``(P(x), argmax)`` where argmax lists exponents attaining the max.

    With ``tol > 0`` every exponent within ``tol`` of the maximum counts.
    """
    vals = monomial_values(P, x)
    m = max(vals.values())
    arg = [w for w, v in vals.items() if m - v <= tol]
    return m, arg


def eval_deq(P: TropPoly, h, x: Sequence) -> float:
    """``P_h(x) = h*ln(sum_w exp((a_w + <x,w>)/h))``, factoring out the maximum."""
    hv = _require_positive_h(h)
    vals = [float(v) for v in monomial_values(P, x).values()]
    m = max(vals)
    return m + hv * math.log(math.fsum(math.exp((v - m) / hv) for v in vals))


def monomial_sign(c: Fraction, w: Exponent, s: OrthantSign) -> int:
    sign = 1 if c > 0 else -1
    for e, sj in zip(w, s.s):
        if e % 2 and sj < 0:
            sign = -sign
    return sign


def sign_split(f: LaurentPoly, s: OrthantSign) -> tuple[LaurentPoly, LaurentPoly]:
    """Split ``f = f_plus - f_minus`` by the sign each monomial takes on orthant ``s``.

    Both parts carry coefficients of the same sign as their monomial values on
    the orthant, i.e. ``f_plus(x), f_minus(x) > 0`` termwise there.
    """
    if len(s) != f.nvars:
        raise ValueError("orthant dimension does not match the polynomial")
    plus, minus = {}, {}
    for w, c in f.terms.items():
        if monomial_sign(c, w, s) > 0:
            plus[w] = c
        else:
            minus[w] = -c
    return LaurentPoly(f.nvars, plus), LaurentPoly(f.nvars, minus)


def tropicalize_trivial(f: LaurentPoly) -> TropPoly:
    """``f_0``: support of ``f`` with every coefficient 0."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no tropicalization")
    return TropPoly(f.nvars, {w: Fraction(0) for w in f.terms})


def tropicalize_valued(coeffs, nvars: int | None = None) -> TropPoly:
    """Coefficient ``-val(a_w)`` on every term with a nonzero valued coefficient.

    ``coeffs`` is either a mapping ``exponent -> series`` or, for a univariate
    polynomial, a sequence indexed by degree. Series only need a ``val()``
    method returning a rational or ``math.inf``.
    """
    if isinstance(coeffs, Mapping):
        items = [(tuple(w), a) for w, a in coeffs.items()]
    else:
        items = [((i,), a) for i, a in enumerate(coeffs)]
    if nvars is None:
        if not items:
            raise ValueError("empty polynomial")
        nvars = len(items[0][0])
    terms = {}
    for w, a in items:
        v = a.val()
        if v == math.inf:
            continue
        terms[w] = -Fraction(v)
    if not terms:
        raise ValueError("all coefficients vanish")
    return TropPoly(nvars, terms)


def dequantize_positive(f: LaurentPoly, h) -> TropPoly:
    """The S_h image ``oplus_h D_h(a_w) * X^w`` of a positive-coefficient polynomial."""
    hv = _require_positive_h(h)
    if any(c <= 0 for c in f.terms.values()):
        raise ValueError("dequantization needs strictly positive coefficients")
    return TropPoly(f.nvars, {w: hv * math.log(c) for w, c in f.terms.items()})


# --- JSON exchange ---------------------------------------------------------


class PolyFormatError(ValueError):
    pass


def poly_from_json(data) -> LaurentPoly | TropPoly:
    """Decode ``{"nvars": n, "terms": [{"coeff": "p/q", "exp": [...]}, ...]}``.

    String coefficients give a :class:`LaurentPoly`; numeric coefficients (or
    ``"tropical": true``) give a :class:`TropPoly`.
    """
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise PolyFormatError(f"invalid JSON: {exc}") from None
    try:
        nvars = int(data["nvars"])
        raw = data["terms"]
        terms = [(tuple(int(e) for e in t["exp"]), t["coeff"]) for t in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise PolyFormatError(f"malformed polynomial record: {exc!r}") from None
    tropical = bool(data.get("tropical", False)) or any(
        isinstance(c, (int, float)) and not isinstance(c, bool) for _, c in terms
    )
    try:
        if tropical:
            out = {}
            for w, c in terms:
                out[w] = _as_rational(c) if isinstance(c, str) else float(c)
            return TropPoly(nvars, out)
        acc: dict[Exponent, Fraction] = {}
        for w, c in terms:
            acc[w] = acc.get(w, Fraction(0)) + _as_rational(c)
        return LaurentPoly(nvars, acc)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise PolyFormatError(str(exc)) from None


def poly_to_json(p: LaurentPoly | TropPoly) -> dict:
    return p.to_json()


def load_poly(path) -> LaurentPoly | TropPoly:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return poly_from_json(text)
