"""Tropical semifield (max, +) and the dequantized semifields S_h.

For h > 0 the map ``D_h(x) = h*ln(x)`` is an isomorphism from the positive
reals (+, *) onto (R, oplus_h, +), where ``a oplus_h b = h*ln(e^(a/h) + e^(b/h))``.
At h = 0 the family degenerates to max-plus arithmetic. ``h == 0`` is only
ever used as a tag selecting :func:`trop_add`; nothing divides by it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

LN2 = math.log(2.0)


@dataclass(frozen=True)
class DequantParam:
    """Dequantization scale; ``h == 0`` denotes the tropical limit."""

    h: float

    def __post_init__(self):
        if not (self.h >= 0.0) or math.isinf(self.h):
            raise ValueError(f"dequantization scale must be finite and >= 0, got {self.h!r}")

    @property
    def tropical(self) -> bool:
        return self.h == 0.0

    def __float__(self) -> float:
        return float(self.h)


def _scale(h) -> float:
    return float(h.h) if isinstance(h, DequantParam) else float(h)


def _require_positive_h(h) -> float:
    hv = _scale(h)
    if not hv > 0.0:
        raise ValueError(f"operation needs h > 0, got {hv!r}")
    return hv


def trop_add(a: float, b: float) -> float:
    return max(a, b)


def trop_mul(a: float, b: float) -> float:
    return a + b


def deq_value(h, x: float) -> float:
    """``D_h(x) = h*ln(x)``."""
    hv = _require_positive_h(h)
    if not x > 0:
        raise ValueError(f"D_h is defined on positive reals only, got {x!r}")
    return hv * math.log(x)


def deq_inverse(h, y: float) -> float:
    hv = _require_positive_h(h)
    return math.exp(y / hv)


def deq_add(h, a: float, b: float) -> float:
    """Dequantized addition, in the overflow-free form ``max + h*log1p(exp(-|a-b|/h))``."""
    hv = _require_positive_h(h)
    m = a if a >= b else b
    return m + hv * math.log1p(math.exp(-abs(a - b) / hv))


def deq_mul(h, a: float, b: float) -> float:
    # multiplication is ordinary addition for every h
    return a + b


def semifield_add(h, a: float, b: float) -> float:
    """Addition in S_h, with ``h == 0`` selecting max."""
    if _scale(h) == 0.0:
        return trop_add(a, b)
    return deq_add(h, a, b)


def deq_sum(h, values: Iterable[float]) -> float:
    """Fold of :func:`semifield_add` over ``values`` (log-sum-exp for h > 0)."""
    vals = list(values)
    if not vals:
        raise ValueError("empty semifield sum has no neutral element in R")
    hv = _scale(h)
    m = max(vals)
    if hv == 0.0:
        return m
    return m + hv * math.log(math.fsum(math.exp((v - m) / hv) for v in vals))
