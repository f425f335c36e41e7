"""PBW monomials over named base vectors and the normal-ordering engine.

A canonical monomial is ``X(-a_1) ... X(-a_s) L(-b_1) ... L(-b_t) v`` where
``X`` is the non-Virasoro family of the algebra (``W`` or ``I``), every index
is negative, ``a_1 >= ... >= a_s`` and ``b_1 >= ... >= b_t``. Indices are
stored as negative integers, so each part is an ascending tuple.

The module action is computed by applying one mode at a time to a normal-form
vector (:func:`apply_mode`), with per-spec memoization. :func:`rewrite_word`
is an independent global rewriter on whole words, used as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

import gmpy2

from .algebra import (
    ZERO,
    AlgebraKind,
    CentralCharges,
    Family,
    Mode,
    Rational,
    bracket,
    extra_family,
    format_rational,
    rational,
)


class PBWMonomial(NamedTuple):
    x: tuple[int, ...]
    l: tuple[int, ...]
    base: str

    @property
    def level(self) -> int:
        return -sum(self.x) - sum(self.l)

    def sort_key(self):
        """Canonical total order: Virasoro content, then X part, L part, base."""
        return (-sum(self.l), self.x, self.l, self.base)

    def word(self, xfam: Family) -> list[Mode]:
        return [Mode(xfam, i) for i in self.x] + [Mode(Family.VIR, i) for i in self.l]

    def key(self, xfam: Family) -> str:
        return format_word(self.word(xfam)) + "." + self.base


def _fmt_factors(modes: Sequence[Mode]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(modes):
        j = i
        while j < len(modes) and modes[j] == modes[i]:
            j += 1
        s = str(modes[i])
        out.append(s if j - i == 1 else f"{s}^{j - i}")
        i = j
    return out


def format_word(modes: Sequence[Mode]) -> str:
    return " ".join(_fmt_factors(modes))


def _merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


class ModuleVector:
    """Finite linear combination of :class:`PBWMonomial` with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[PBWMonomial, Rational] | None = None):
        self.terms: dict[PBWMonomial, Rational] = {}
        if terms:
            for m, c in terms.items():
                c = rational(c)
                if c:
                    self.terms[m] = c

    @classmethod
    def _raw(cls, terms: dict) -> "ModuleVector":
        v = cls.__new__(cls)
        v.terms = terms
        return v

    @classmethod
    def basis_vector(cls, mono: PBWMonomial, coef=1) -> "ModuleVector":
        return cls({mono: coef})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[PBWMonomial, Rational]]:
        return iter(self.terms.items())

    def __getitem__(self, mono: PBWMonomial) -> Rational:
        return self.terms.get(mono, ZERO)

    def __eq__(self, other) -> bool:
        if isinstance(other, ModuleVector):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def iadd(self, other: "ModuleVector", coef=1) -> "ModuleVector":
        t = self.terms
        for m, c in other.terms.items():
            s = t.get(m, 0) + coef * c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return self

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        return ModuleVector._raw(dict(self.terms)).iadd(other)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return ModuleVector._raw(dict(self.terms)).iadd(other, -1)

    def __neg__(self) -> "ModuleVector":
        return ModuleVector._raw({m: -c for m, c in self.terms.items()})

    def __mul__(self, a) -> "ModuleVector":
        a = rational(a)
        if a == 0:
            return ModuleVector()
        return ModuleVector._raw({m: a * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def levels(self) -> set[int]:
        return {m.level for m in self.terms}

    def component(self, level: int) -> "ModuleVector":
        return ModuleVector._raw({m: c for m, c in self.terms.items() if m.level == level})

    def monomials(self) -> list[PBWMonomial]:
        return sorted(self.terms, key=PBWMonomial.sort_key)

    def leading(self) -> PBWMonomial:
        return max(self.terms, key=PBWMonomial.sort_key)

    def normalized(self) -> "ModuleVector":
        """Scale so the leading monomial has coefficient 1."""
        if not self.terms:
            return self
        return self * (1 / self.terms[self.leading()])

    def format(self, xfam: Family) -> str:
        return format_vector(self, xfam)

    def __repr__(self) -> str:
        if not self.terms:
            return "ModuleVector(0)"
        return "ModuleVector(" + ", ".join(
            f"{format_rational(c)}*{m.key(Family.I)}" for m, c in sorted(self.terms.items(), key=lambda t: t[0].sort_key())
        ) + ")"


def format_vector(v: ModuleVector, xfam: Family) -> str:
    """Render like ``(L(-1) + 2 I(-1)) hw``; leading monomial first, grouped by base."""
    if not v:
        return "0"
    groups: dict[str, list[tuple[PBWMonomial, Rational]]] = {}
    for m in sorted(v.terms, key=PBWMonomial.sort_key, reverse=True):
        groups.setdefault(m.base, []).append((m, v.terms[m]))
    parts = []
    for base in sorted(groups):
        terms = groups[base]
        pieces = []
        for k, (m, c) in enumerate(terms):
            w = format_word(m.word(xfam))
            mag = abs(c)
            if w:
                body = w if mag == 1 else f"{format_rational(mag)} {w}"
            else:
                body = format_rational(mag)
            if k == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        inner = "".join(pieces)
        if len(terms) == 1:
            parts.append(f"{inner} {base}")
        else:
            parts.append(f"({inner}) {base}")
    return " + ".join(parts)


# A base action maps a nonnegative mode and a base tag to {base: coefficient}.
BaseAction = Callable[[Mode, str], Mapping[str, Rational]]


@dataclass(eq=False)
class ModuleSpec:
    """A highest-weight-type module: free over the negative part on base vectors.

    ``zero_modes[(family, base)]`` gives the action of a zero mode on a base
    vector as ``{base: coefficient}``; positive modes annihilate base vectors;
    ``weights[base]`` is the ``L(0)`` eigenvalue of the base vector (used only
    for bookkeeping, the ``L(0)`` action itself comes from ``zero_modes``).
    """

    kind: AlgebraKind
    charges: CentralCharges
    bases: tuple[str, ...]
    weights: dict[str, Rational]
    zero_modes: dict[tuple[Family, str], dict[str, Rational]]
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        fams = (Family.VIR, extra_family(self.kind))
        for b in self.bases:
            for f in fams:
                if (f, b) not in self.zero_modes:
                    raise ValueError(f"no zero-mode rule for {f.value}(0) on base {b!r}")

    @property
    def xfam(self) -> Family:
        return extra_family(self.kind)

    def base_action(self, mode: Mode, base: str) -> dict[str, Rational]:
        if mode.index > 0:
            return {}
        if mode.index < 0:
            raise ValueError(f"negative mode {mode} is not a base action")
        try:
            return self.zero_modes[(mode.family, base)]
        except KeyError:
            raise ValueError(f"unresolvable action of {mode} on base {base!r}") from None

    def check_mode(self, mode: Mode) -> None:
        if mode.family not in (Family.VIR, self.xfam):
            raise ValueError(f"mode {mode} does not belong to the {self.kind.value} algebra")

    def hw(self, base: str | None = None) -> PBWMonomial:
        return PBWMonomial((), (), base if base is not None else self.bases[0])

    def format(self, v: ModuleVector) -> str:
        return format_vector(v, self.xfam)


def verma_spec(kind: AlgebraKind, charges: CentralCharges, h, second, base: str = "hw") -> ModuleSpec:
    """Verma module spec; ``second`` is ``h_I`` (HV) or ``h_W`` (W22)."""
    h, second = rational(h), rational(second)
    xf = extra_family(kind)
    return ModuleSpec(
        kind=kind,
        charges=charges,
        bases=(base,),
        weights={base: h},
        zero_modes={(Family.VIR, base): {base: h}, (xf, base): {base: second}},
        name=f"V^{kind.name}({format_rational(h)},{format_rational(second)})",
    )


# ---------------------------------------------------------------------------
# recursive action


def _scaled(vec: ModuleVector, a) -> ModuleVector:
    return vec if a == 1 else vec * a


def _prepend_x(xs: tuple[int, ...], vec: ModuleVector) -> ModuleVector:
    if not xs:
        return vec
    return ModuleVector._raw({PBWMonomial(_merge(xs, m.x), m.l, m.base): c for m, c in vec.terms.items()})


def _apply_to_vector(spec: ModuleSpec, mode: Mode, vec: ModuleVector) -> ModuleVector:
    out = ModuleVector()
    for m, c in vec.terms.items():
        out.iadd(_apply_mono(spec, mode, m), c)
    return out


def _apply_bracket(spec: ModuleSpec, a: Mode, b: Mode, rest: PBWMonomial, out: ModuleVector) -> None:
    """``out += [a, b] . rest``."""
    br = bracket(spec.kind, a, b, spec.charges)
    for coef, mode in br.linear:
        out.iadd(_apply_mono(spec, mode, rest), coef)
    if br.central:
        out.iadd(ModuleVector._raw({rest: br.central}))


def _apply_mono(spec: ModuleSpec, mode: Mode, mono: PBWMonomial) -> ModuleVector:
    cache = spec._cache
    key = (mode, mono)
    hit = cache.get(key)
    if hit is not None:
        return hit
    res = _compute(spec, mode, mono)
    cache[key] = res
    return res


def _compute(spec: ModuleSpec, mode: Mode, mono: PBWMonomial) -> ModuleVector:
    fam, n = mode
    x, l, base = mono
    xfam = spec.xfam
    if fam is xfam:
        if n < 0:
            return ModuleVector._raw({PBWMonomial(_merge((n,), x), l, base): gmpy2.mpq(1)})
        # X modes commute among themselves, so X(n) passes the X part freely.
        if x:
            return _prepend_x(x, _apply_mono(spec, mode, PBWMonomial((), l, base)))
    else:
        if x:
            # L(n) X1 R = X1 (L(n) R) + [L(n), X1] R
            x1, rest = x[0], PBWMonomial(x[1:], l, base)
            out = _prepend_x((x1,), _apply_mono(spec, mode, rest))
            out = ModuleVector._raw(dict(out.terms))
            _apply_bracket(spec, mode, Mode(xfam, x1), rest, out)
            return out
        if n < 0 and (not l or n <= l[0]):
            return ModuleVector._raw({PBWMonomial((), (n,) + l, base): gmpy2.mpq(1)})
    if l:
        # m L1 R = L1 (m R) + [m, L1] R
        l1, rest = l[0], PBWMonomial((), l[1:], base)
        out = _apply_to_vector(spec, Mode(Family.VIR, l1), _apply_mono(spec, mode, rest))
        _apply_bracket(spec, mode, Mode(Family.VIR, l1), rest, out)
        return out
    acts = spec.base_action(mode, base)
    return ModuleVector._raw({PBWMonomial((), (), b): gmpy2.mpq(c) for b, c in acts.items() if c})


def apply_mode(m: Mode, v: ModuleVector, spec: ModuleSpec) -> ModuleVector:
    """Act by ``m`` on a PBW-form vector of the module described by ``spec``."""
    spec.check_mode(m)
    return _apply_to_vector(spec, m, v)


def apply_mode_mono(m: Mode, mono: PBWMonomial, spec: ModuleSpec) -> ModuleVector:
    """Memoized action on a single monomial; the result must not be mutated."""
    return _apply_mono(spec, m, mono)


def apply_word(word: Sequence[Mode], v: ModuleVector, spec: ModuleSpec) -> ModuleVector:
    """Apply ``word[0] word[1] ... word[-1]`` to ``v`` (rightmost acts first)."""
    for m in reversed(word):
        v = apply_mode(m, v, spec)
    return v


def normal_order(word: Sequence[Mode], base: str, spec: ModuleSpec) -> ModuleVector:
    """PBW form of ``word`` acting on the base vector ``base``."""
    if base not in spec.bases:
        raise ValueError(f"unknown base vector {base!r}")
    return apply_word(word, ModuleVector.basis_vector(spec.hw(base)), spec)


# ---------------------------------------------------------------------------
# global word rewriting (independent cross-check of normal_order)


def _order_key(mode: Mode, xfam: Family):
    fam, n = mode
    if n >= 0:
        return (2, 0)
    return (0, n) if fam is xfam else (1, n)


def rewrite_word(word: Sequence[Mode], base: str, spec: ModuleSpec, strategy: str = "leftmost") -> ModuleVector:
    """Reduce ``word . base`` by adjacent swaps, fixing one violation at a time.

    ``strategy`` selects the leftmost or the rightmost violation at each step.
    Each swap ``a b -> b a + [a, b]`` lowers the inversion count or the word
    length, so the process terminates.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError("strategy must be 'leftmost' or 'rightmost'")
    for m in word:
        spec.check_mode(m)
    xfam = spec.xfam
    pending: dict[tuple[tuple[Mode, ...], str], Rational] = {(tuple(word), base): gmpy2.mpq(1)}
    done = ModuleVector()
    while pending:
        (w, b), coef = pending.popitem()
        if coef == 0:
            continue
        keys = [_order_key(m, xfam) for m in w]
        viol = [i for i in range(len(w) - 1) if keys[i] > keys[i + 1]]
        if w and w[-1].index >= 0:
            viol.append(len(w) - 1)
        if not viol:
            mono = PBWMonomial(
                tuple(m.index for m in w if m.family is xfam),
                tuple(m.index for m in w if m.family is Family.VIR),
                b,
            )
            done.iadd(ModuleVector._raw({mono: coef}))
            continue
        i = viol[0] if strategy == "leftmost" else viol[-1]
        terms: list[tuple[tuple[Mode, ...], str, Rational]] = []
        if i == len(w) - 1:
            for b2, c in spec.base_action(w[-1], b).items():
                terms.append((w[:-1], b2, c))
        else:
            a, bb = w[i], w[i + 1]
            terms.append((w[:i] + (bb, a) + w[i + 2 :], b, gmpy2.mpq(1)))
            br = bracket(spec.kind, a, bb, spec.charges)
            for c, md in br.linear:
                terms.append((w[:i] + (md,) + w[i + 2 :], b, c))
            if br.central:
                terms.append((w[:i] + w[i + 2 :], b, br.central))
        for w2, b2, c in terms:
            k = (w2, b2)
            s = pending.get(k, 0) + coef * c
            if s:
                pending[k] = s
            else:
                pending.pop(k, None)
    return done


# ---------------------------------------------------------------------------
# graded bases


@lru_cache(maxsize=None)
def partitions(n: int, largest: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Partitions of ``n`` as weakly decreasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return tuple(out)


def graded_basis(spec: ModuleSpec, base: str, n: int) -> list[PBWMonomial]:
    """All PBW monomials of level ``n`` over ``base``, in canonical order."""
    if n < 0:
        return []
    out = []
    for a in range(n + 1):
        for px in partitions(a):
            for pl in partitions(n - a):
                out.append(PBWMonomial(tuple(-k for k in px), tuple(-k for k in pl), base))
    out.sort(key=PBWMonomial.sort_key)
    return out


def level_basis(spec: ModuleSpec, n: int) -> list[PBWMonomial]:
    """Level-``n`` monomials over every base vector of ``spec``, canonical order."""
    out = [m for b in spec.bases for m in graded_basis(spec, b, n)]
    out.sort(key=PBWMonomial.sort_key)
    return out
