"""Double-hierarchy linguistic scale and the unit-interval transform.

A scale has 2*tau+1 first-hierarchy terms s_t and 2*zeta+1 second-hierarchy
modifiers o_k. A coordinate pair (t, k) maps to the unit interval through

    gamma = (k + (tau + t) * zeta) / (2 * zeta * tau)

which is strictly increasing in both coordinates. The inverse uses the
canonical floor branch, so every gamma in [0, 1] has exactly one
representative; gamma = 1 resolves to (tau, 0) because the floor branch
would otherwise leave the second coordinate at its upper edge.

Internally everything downstream computes on unit values; (t, k) is a
presentation form. Subscripts are continuous (virtual terms between the
printed labels are meaningful).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import RangeError, TermOverflowError

#: tolerance used when checking coordinates against scale bounds
_EDGE = 1e-12


@dataclass(frozen=True)
class LinguisticScale:
    """Symmetric double-hierarchy scale with tau and zeta granularity."""

    tau: int
    zeta: int
    first_labels: tuple[str, ...] | None = None
    second_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not (isinstance(self.tau, int) and self.tau >= 1):
            raise RangeError(f"tau must be an integer >= 1, got {self.tau!r}")
        if not (isinstance(self.zeta, int) and self.zeta >= 1):
            raise RangeError(f"zeta must be an integer >= 1, got {self.zeta!r}")
        if self.first_labels is not None and len(self.first_labels) != 2 * self.tau + 1:
            raise RangeError(
                f"first_labels needs {2 * self.tau + 1} entries, got {len(self.first_labels)}"
            )
        if self.second_labels is not None and len(self.second_labels) != 2 * self.zeta + 1:
            raise RangeError(
                f"second_labels needs {2 * self.zeta + 1} entries, got {len(self.second_labels)}"
            )


@dataclass(frozen=True)
class TermCoord:
    """A (t, k) coordinate on some scale; subscripts may be fractional."""

    t: float
    k: float

    def __iter__(self):
        yield self.t
        yield self.k


def _check_coord(scale: LinguisticScale, term: TermCoord) -> None:
    if not math.isfinite(term.t) or abs(term.t) > scale.tau + _EDGE:
        raise RangeError(f"first-hierarchy subscript t={term.t} outside [-{scale.tau}, {scale.tau}]")
    if not math.isfinite(term.k) or abs(term.k) > scale.zeta + _EDGE:
        raise RangeError(f"second-hierarchy subscript k={term.k} outside [-{scale.zeta}, {scale.zeta}]")


def to_unit(scale: LinguisticScale, term: TermCoord) -> float:
    """Map a coordinate pair to its unit value gamma in [0, 1]."""
    _check_coord(scale, term)
    return (term.k + (scale.tau + term.t) * scale.zeta) / (2.0 * scale.zeta * scale.tau)


def from_unit(scale: LinguisticScale, gamma: float) -> TermCoord:
    """Inverse transform, canonical branch.

    t = floor(2*tau*gamma - tau), k = zeta * (2*tau*gamma - tau - t),
    except gamma = 1 which maps to (tau, 0).
    """
    if not math.isfinite(gamma) or gamma < -_EDGE or gamma > 1.0 + _EDGE:
        raise RangeError(f"unit value gamma={gamma} outside [0, 1]")
    if gamma >= 1.0:
        return TermCoord(float(scale.tau), 0.0)
    x = 2.0 * scale.tau * gamma - scale.tau
    t = math.floor(x)
    return TermCoord(float(t), scale.zeta * (x - t))


def term_add(scale: LinguisticScale, a: TermCoord, b: TermCoord) -> TermCoord:
    """Componentwise addition; leaving the scale raises, nothing clamps."""
    _check_coord(scale, a)
    _check_coord(scale, b)
    t = a.t + b.t
    k = a.k + b.k
    if abs(t) > scale.tau + _EDGE:
        raise TermOverflowError(f"t1 + t2 = {t} overflows [-{scale.tau}, {scale.tau}]")
    if abs(k) > scale.zeta + _EDGE:
        raise TermOverflowError(f"k1 + k2 = {k} overflows [-{scale.zeta}, {scale.zeta}]")
    return TermCoord(t, k)


def term_scale(scale: LinguisticScale, lam: float, a: TermCoord) -> TermCoord:
    """Scalar multiple (lam * t, k) with lam in [0, 1].

    The second coordinate is deliberately left untouched: the source rule
    scales only the first hierarchy, so e.g. lam = 0 keeps k as-is.
    """
    if not (0.0 <= lam <= 1.0):
        raise RangeError(f"lambda={lam} outside [0, 1]")
    _check_coord(scale, a)
    return TermCoord(lam * a.t, a.k)


_TERM_RE = re.compile(r"^s(-?\d+(?:\.\d+)?)\(o(-?\d+(?:\.\d+)?)\)$")


def format_term(term: TermCoord) -> str:
    """Render a coordinate as the literal ``s<t>(o<k>)``."""
    return f"s{term.t:g}(o{term.k:g})"


def parse_term(text: str) -> TermCoord:
    """Parse a ``s<t>(o<k>)`` literal; signed decimal subscripts allowed."""
    m = _TERM_RE.match(text.strip())
    if not m:
        raise RangeError(f"not a term literal: {text!r}")
    return TermCoord(float(m.group(1)), float(m.group(2)))
