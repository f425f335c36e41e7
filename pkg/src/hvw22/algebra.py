"""Exact scalars, central charges, modes and the brackets of W(2,2) and H.

Two algebras are modelled:

* ``W22``: basis ``L(n), W(n)`` plus central ``C_L, C_W``;
* ``HV``: the twisted Heisenberg-Virasoro algebra at level zero, basis
  ``L(n), I(n)`` plus central ``C_L, C_LI, C_I`` with ``C_I`` acting by 0.

Central elements are never modes. Every module in scope has a fixed central
character, so a bracket returns its central part already evaluated against a
:class:`CentralCharges` instance.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import NamedTuple

import gmpy2

Rational = type(gmpy2.mpq())

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def rational(value) -> Rational:
    """Coerce ``value`` to an exact rational.

    Accepts ints, rationals (``mpq`` or ``fractions.Fraction``) and strings of
    the form ``"a"`` or ``"a/b"``. Floats and decimal strings are refused so
    that no inexact value can leak into a typicality test.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return gmpy2.mpq(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise ValueError(f"malformed rational {value!r}; expected 'a' or 'a/b'")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return gmpy2.mpq(int(num), int(den) if den else 1)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return gmpy2.mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q) -> str:
    """Serialize as ``"a/b"`` (or ``"a"`` for integers); re-parses with :func:`rational`."""
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


class AlgebraKind(enum.Enum):
    W22 = "w22"
    HV = "hv"


class Family(enum.Enum):
    VIR = "L"
    W = "W"
    I = "I"

    def __repr__(self) -> str:
        return self.value


class Mode(NamedTuple):
    family: Family
    index: int

    def __str__(self) -> str:
        return f"{self.family.value}({self.index})"

    __repr__ = __str__


def L(n: int) -> Mode:
    return Mode(Family.VIR, n)


def W(n: int) -> Mode:
    return Mode(Family.W, n)


def I(n: int) -> Mode:  # noqa: E743
    return Mode(Family.I, n)


def extra_family(kind: AlgebraKind) -> Family:
    """The non-Virasoro generator family of ``kind``."""
    return Family.W if kind is AlgebraKind.W22 else Family.I


@dataclass(frozen=True)
class CentralCharges:
    c_L: Rational
    c_LI: Rational
    c_W: Rational
    c_I: Rational = ZERO

    def __post_init__(self):
        if self.c_LI == 0:
            raise ValueError("c_LI must be nonzero")
        if self.c_W != -24 * self.c_LI**2:
            raise ValueError("c_W must equal -24 c_LI^2")
        if self.c_I != 0:
            raise ValueError("only level zero (c_I = 0) is supported")


def make_charges(c_L, c_LI) -> CentralCharges:
    """Build central charges with ``c_W = -24 c_LI^2`` and ``c_I = 0``.

    >>> make_charges(1, 1).c_W
    mpq(-24,1)
    """
    c_L, c_LI = rational(c_L), rational(c_LI)
    if c_LI == 0:
        raise ValueError("c_LI must be nonzero")
    return CentralCharges(c_L=c_L, c_LI=c_LI, c_W=-24 * c_LI**2)


class BracketResult(NamedTuple):
    linear: tuple[tuple[Rational, Mode], ...]
    central: Rational

    @property
    def is_zero(self) -> bool:
        return not self.linear and self.central == 0


_ZERO_BRACKET = BracketResult((), ZERO)


def _result(coef, mode: Mode, central) -> BracketResult:
    linear = ((gmpy2.mpq(coef), mode),) if coef != 0 else ()
    return BracketResult(linear, gmpy2.mpq(central))


def bracket_w22(a: Mode, b: Mode, cc: CentralCharges) -> BracketResult:
    """``[a, b]`` in W(2,2) with central elements evaluated on ``cc``."""
    fa, n = a
    fb, m = b
    if Family.I in (fa, fb):
        raise ValueError(f"I-mode in a W(2,2) bracket: [{a}, {b}]")
    delta = n == -m
    if fa is Family.VIR and fb is Family.VIR:
        return _result(n - m, L(n + m), cc.c_L * (n**3 - n) / 12 if delta else 0)
    if fa is Family.W and fb is Family.W:
        return _ZERO_BRACKET
    # one L and one W; [W(n), L(m)] = -[L(m), W(n)] has the same shape
    return _result(n - m, W(n + m), cc.c_W * (n**3 - n) / 12 if delta else 0)


def bracket_hv(a: Mode, b: Mode, cc: CentralCharges) -> BracketResult:
    """``[a, b]`` in H at level zero with central elements evaluated on ``cc``."""
    fa, n = a
    fb, m = b
    if Family.W in (fa, fb):
        raise ValueError(f"W-mode in a Heisenberg-Virasoro bracket: [{a}, {b}]")
    delta = n == -m
    if fa is Family.VIR and fb is Family.VIR:
        return _result(n - m, L(n + m), cc.c_L * (n**3 - n) / 12 if delta else 0)
    if fa is Family.I and fb is Family.I:
        # n delta_{n,-m} C_I with C_I = 0
        return _ZERO_BRACKET
    if fa is Family.VIR:
        return _result(-m, I(n + m), -(n * n + n) * cc.c_LI if delta else 0)
    # [I(n), L(m)] = -[L(m), I(n)]
    return _result(n, I(n + m), (m * m + m) * cc.c_LI if delta else 0)


def bracket(kind: AlgebraKind, a: Mode, b: Mode, cc: CentralCharges) -> BracketResult:
    if kind is AlgebraKind.W22:
        return bracket_w22(a, b, cc)
    return bracket_hv(a, b, cc)
