"""Verma modules over W(2,2) and H: classification, Gram pairings, quotients,
submodule closures, singular and cosingular vectors.

A graded module is modelled by :class:`GradedModule`: a :class:`ModuleSpec`
(free over the negative part) together with an optional graded submodule,
given level by level as a :class:`Subspace` in the PBW coordinates of that
level. Vectors of the quotient are represented by canonical representatives:
the submodule's reduced echelon basis is used to eliminate its pivot monomials
(always the highest ones in canonical order).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import gmpy2

from .algebra import (
    AlgebraKind,
    CentralCharges,
    Family,
    Mode,
    Rational,
    format_rational,
    rational,
)
from .characters import h_pr_any, partition_p2
from .linalg import LevelMatrix, SparseVec, Subspace, nullspace
from .pbw import (
    ModuleSpec,
    ModuleVector,
    PBWMonomial,
    apply_mode_mono,
    level_basis,
    verma_spec,
)


@dataclass(frozen=True)
class HighestWeightSpec:
    """Central charges plus a highest weight ``(h, h_I)`` or ``(h, h_W)``."""

    kind: AlgebraKind
    charges: CentralCharges
    h: Rational
    second: Rational

    @classmethod
    def hv(cls, charges: CentralCharges, h, h_I) -> "HighestWeightSpec":
        return cls(AlgebraKind.HV, charges, rational(h), rational(h_I))

    @classmethod
    def w22(cls, charges: CentralCharges, h, h_W) -> "HighestWeightSpec":
        return cls(AlgebraKind.W22, charges, rational(h), rational(h_W))

    @property
    def h_I(self) -> Rational:
        if self.kind is not AlgebraKind.HV:
            raise AttributeError("h_I is only defined for Heisenberg-Virasoro weights")
        return self.second

    @property
    def h_W(self) -> Rational:
        if self.kind is AlgebraKind.W22:
            return self.second
        return self.second * (self.second - 2 * self.charges.c_LI)

    def to_w22(self) -> "HighestWeightSpec":
        """The W(2,2) weight ``(h, h_I (h_I - 2 c_LI))`` matched by the embedding."""
        if self.kind is AlgebraKind.W22:
            return self
        return HighestWeightSpec.w22(self.charges, self.h, self.h_W)

    def dual(self) -> "HighestWeightSpec":
        """Highest weight of the contragredient module."""
        if self.kind is AlgebraKind.W22:
            return self
        return HighestWeightSpec.hv(self.charges, self.h, 2 * self.charges.c_LI - self.second)

    def shifted(self, k) -> "HighestWeightSpec":
        return HighestWeightSpec(self.kind, self.charges, self.h + k, self.second)

    def label(self) -> str:
        name = "H" if self.kind is AlgebraKind.HV else "W22"
        return f"{name}({format_rational(self.h)},{format_rational(self.second)})"


class Classification(enum.Enum):
    TYPICAL = "typical"
    ATYPICAL = "atypical"


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class AtypicalityReport:
    """Typicality data of a highest weight.

    ``p`` (and for HV, ``branch``) is recorded whenever the Verma module is
    reducible, even if the weight is typical; ``r`` only for atypical weights.
    """

    classification: Classification
    p: int | None = None
    r: int | None = None
    branch: Branch | None = None

    @property
    def atypical(self) -> bool:
        return self.classification is Classification.ATYPICAL

    @property
    def verma_reducible(self) -> bool:
        return self.p is not None

    def as_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "p": self.p,
            "r": self.r,
            "branch": self.branch.value if self.branch else None,
        }


def _positive_int(q: Rational) -> int | None:
    if q.denominator == 1 and q.numerator > 0:
        return int(q.numerator)
    return None


def _isqrt_exact(q: Rational) -> int | None:
    if q.denominator != 1 or q.numerator < 0:
        return None
    n = int(q.numerator)
    s = int(gmpy2.isqrt(n))
    return s if s * s == n else None


def solve_r(p: int, h, c_L) -> Rational:
    """The ``r`` with ``h = h_{p,r}`` (the formula is linear in ``r``)."""
    # h_{p,r} = h_{p,1} - p (r - 1) / 2
    return 1 + 2 * (h_pr_any(p, 1, c_L) - rational(h)) / p


def classify(spec: HighestWeightSpec) -> AtypicalityReport:
    cc = spec.charges
    p = None
    branch = None
    if spec.kind is AlgebraKind.HV:
        t = spec.h_I / cc.c_LI - 1
        minus, plus = _positive_int(-t), _positive_int(t)
        # both cannot be positive at once; minus is preferred by convention
        if minus is not None:
            p, branch = minus, Branch.MINUS
        elif plus is not None:
            p, branch = plus, Branch.PLUS
    else:
        s = _isqrt_exact(1 - 24 * spec.h_W / cc.c_W)
        if s is not None and s > 0:
            p = s
    if p is None:
        return AtypicalityReport(Classification.TYPICAL)
    r = _positive_int(solve_r(p, spec.h, cc.c_L))
    if r is None:
        return AtypicalityReport(Classification.TYPICAL, p=p, branch=branch)
    return AtypicalityReport(Classification.ATYPICAL, p=p, r=r, branch=branch)


@lru_cache(maxsize=None)
def module_spec(spec: HighestWeightSpec) -> ModuleSpec:
    return verma_spec(spec.kind, spec.charges, spec.h, spec.second)


def annihilators(kind: AlgebraKind) -> tuple[Mode, ...]:
    """Positive modes whose joint kernel is the space of singular vectors.

    For W(2,2), W(2) is needed on top of W(1) because [L(1), W(1)] = 0.
    """
    if kind is AlgebraKind.HV:
        return (Mode(Family.VIR, 1), Mode(Family.VIR, 2), Mode(Family.I, 1))
    return (Mode(Family.VIR, 1), Mode(Family.VIR, 2), Mode(Family.W, 1), Mode(Family.W, 2))


def lowering_generators(kind: AlgebraKind) -> tuple[Mode, ...]:
    """Modes generating the negative part as an associative algebra."""
    if kind is AlgebraKind.HV:
        return (Mode(Family.VIR, -1), Mode(Family.VIR, -2), Mode(Family.I, -1))
    return (Mode(Family.VIR, -1), Mode(Family.VIR, -2), Mode(Family.W, -1), Mode(Family.W, -2))


# ---------------------------------------------------------------------------
# graded module models


class GradedModule:
    """A module free over the negative part, optionally modulo a graded submodule.

    ``submodule[n]`` is the level-``n`` piece in PBW coordinates of level ``n``;
    when a submodule is present it is only known up to ``max_level``.
    """

    def __init__(
        self,
        spec: ModuleSpec,
        submodule: dict[int, Subspace] | None = None,
        max_level: int | None = None,
        name: str = "",
    ):
        self.spec = spec
        self._sub = submodule or {}
        self.max_level = max_level
        self.name = name or spec.name
        self._bases: dict[int, list[PBWMonomial]] = {}
        self._index: dict[int, dict[PBWMonomial, int]] = {}
        self._qbases: dict[int, list[PBWMonomial]] = {}

    # action protocol used by closures and singular-vector solvers
    @property
    def lowering_modes(self) -> tuple[Mode, ...]:
        return lowering_generators(self.spec.kind)

    @property
    def raising_modes(self) -> tuple[Mode, ...]:
        return annihilators(self.spec.kind)

    @property
    def is_quotient(self) -> bool:
        return self.max_level is not None

    def basis(self, n: int) -> list[PBWMonomial]:
        b = self._bases.get(n)
        if b is None:
            b = level_basis(self.spec, n)
            self._bases[n] = b
            self._index[n] = {m: i for i, m in enumerate(b)}
        return b

    def index(self, n: int) -> dict[PBWMonomial, int]:
        self.basis(n)
        return self._index[n]

    def sub(self, n: int) -> Subspace:
        if self.max_level is not None and n > self.max_level:
            raise ValueError(f"{self.name}: submodule only known up to level {self.max_level}, asked for {n}")
        return self._sub.get(n) or Subspace()

    def sparse(self, v: ModuleVector, n: int) -> SparseVec:
        idx = self.index(n)
        out: SparseVec = {}
        for m, c in v.terms.items():
            if m.level != n:
                raise ValueError(f"vector is not homogeneous of level {n}")
            out[idx[m]] = c
        return out

    def vector(self, sv: SparseVec, n: int) -> ModuleVector:
        b = self.basis(n)
        return ModuleVector._raw({b[i]: c for i, c in sv.items() if c})

    def reduce_sparse(self, sv: SparseVec, n: int) -> SparseVec:
        if not sv or (self.max_level is None and not self._sub):
            return sv
        return self.sub(n).reduce(sv)

    def reduce(self, v: ModuleVector) -> ModuleVector:
        """Canonical representative of ``v`` modulo the submodule."""
        if self.max_level is None and not self._sub:
            return v
        out = ModuleVector()
        for n in sorted(v.levels()):
            out.iadd(self.vector(self.reduce_sparse(self.sparse(v.component(n), n), n), n))
        return out

    def quotient_basis(self, n: int) -> list[PBWMonomial]:
        """Monomials that are not submodule pivots; they span a complement."""
        q = self._qbases.get(n)
        if q is None:
            piv = set(self.sub(n).rows)
            q = [m for i, m in enumerate(self.basis(n)) if i not in piv]
            self._qbases[n] = q
        return q

    def dim(self, n: int) -> int:
        return len(self.basis(n)) - self.sub(n).dim

    def dims(self, N: int) -> list[int]:
        return [self.dim(n) for n in range(N + 1)]

    def project(self, v: ModuleVector, n: int) -> SparseVec:
        """Coordinates of ``v`` (level ``n``) in :meth:`quotient_basis` order."""
        red = self.reduce_sparse(self.sparse(v, n), n)
        qpos = {self.index(n)[m]: j for j, m in enumerate(self.quotient_basis(n))}
        return {qpos[i]: c for i, c in red.items()}

    def apply(self, mode: Mode, v: ModuleVector) -> ModuleVector:
        out = ModuleVector()
        spec = self.spec
        for m, c in v.terms.items():
            out.iadd(apply_mode_mono(mode, m, spec), c)
        return self.reduce(out)

    def apply_mono(self, mode: Mode, m: PBWMonomial) -> ModuleVector:
        return self.reduce(apply_mode_mono(mode, m, self.spec))

    def is_zero(self, v: ModuleVector) -> bool:
        return not self.reduce(v)

    def format(self, v: ModuleVector) -> str:
        return self.spec.format(v)


class QuotientModel(GradedModule):
    """``V / S`` for a Verma module ``V`` and a graded submodule ``S``.

    Records the spanning sets of ``S`` per level (as reduced echelon bases),
    the complement bases (:meth:`quotient_basis`) and the projections
    (:meth:`project`).
    """

    def __init__(self, hw_spec: HighestWeightSpec | None, spec: ModuleSpec, submodule: dict[int, Subspace], max_level: int, name: str = ""):
        super().__init__(spec, submodule, max_level, name)
        self.hw_spec = hw_spec

    def submodule_dims(self, N: int | None = None) -> list[int]:
        N = self.max_level if N is None else N
        return [self.sub(n).dim for n in range(N + 1)]

    def submodule_basis(self, n: int) -> list[ModuleVector]:
        return [self.vector(r, n) for r in self.sub(n).basis()]


@lru_cache(maxsize=None)
def verma(spec: HighestWeightSpec) -> GradedModule:
    return GradedModule(module_spec(spec), name="V^" + spec.label())


# ---------------------------------------------------------------------------
# closures


@dataclass
class Closure:
    """Level-by-level span of ``U(negative part) . generators`` inside ``model``."""

    model: GradedModule
    levels: dict[int, Subspace]
    N: int

    @property
    def dims(self) -> list[int]:
        return [self.levels[n].dim for n in range(self.N + 1)]

    def basis(self, n: int) -> list[ModuleVector]:
        return [self.model.vector(r, n) for r in self.levels[n].basis()]

    def contains(self, v: ModuleVector) -> bool:
        v = self.model.reduce(v)
        return all(self.levels[n].contains(self.model.sparse(v.component(n), n)) for n in v.levels())

    def as_quotient(self, hw_spec: HighestWeightSpec | None = None, name: str = "") -> QuotientModel:
        """Quotient of the ambient free module by (model submodule + this closure)."""
        sub = {}
        for n in range(self.N + 1):
            s = self.model.sub(n).copy() if self.model.is_quotient else Subspace()
            for r in self.levels[n].rows.values():
                s.add(r)
            sub[n] = s
        return QuotientModel(hw_spec, self.model.spec, sub, self.N, name)


def submodule_closure(model: GradedModule, generators: Iterable[ModuleVector], N: int, action=None) -> Closure:
    """Span of all lowering words applied to ``generators`` up to level ``N``.

    ``action`` must expose ``lowering_modes`` and ``apply(mode, vector)``
    returning reduced vectors of ``model``; the default is the Lie action of
    the model itself. The result is the submodule generated by the
    generators whenever each generator is singular or cosingular modulo what
    the other generators produce (highest weight vectors included).
    """
    action = action or model
    levels: dict[int, Subspace] = {n: Subspace() for n in range(N + 1)}
    for g in generators:
        g = model.reduce(g)
        for n in g.levels():
            if n <= N:
                levels[n].add(model.sparse(g.component(n), n))
    modes = action.lowering_modes
    for n in range(1, N + 1):
        target = levels[n]
        for mode in modes:
            k = -mode.index
            if k > n:
                continue
            for row in levels[n - k].basis():
                img = action.apply(mode, model.vector(row, n - k))
                if img:
                    target.add(model.sparse(img, n))
    return Closure(model, levels, N)


def verma_quotient(spec: HighestWeightSpec, generators: Sequence[ModuleVector], N: int) -> QuotientModel:
    """``V(spec) / U(g) . generators`` up to level ``N``."""
    V = verma(spec)
    cl = submodule_closure(V, generators, N)
    return cl.as_quotient(spec, name=f"V^{spec.label()}/<{len(generators)} gens>")


# ---------------------------------------------------------------------------
# singular vectors


def operator_matrix(model: GradedModule, mode: Mode, n: int, action=None, columns: Sequence[PBWMonomial] | None = None) -> LevelMatrix:
    """Matrix of ``mode`` from level ``n`` (given columns) to level ``n - index``.

    Rows are indexed by the target's quotient basis.
    """
    action = action or model
    cols = list(columns) if columns is not None else model.quotient_basis(n)
    tgt = n - mode.index
    if tgt < 0:
        return LevelMatrix([], len(cols), [], cols)
    colvecs = []
    for m in cols:
        img = action.apply(mode, ModuleVector._raw({m: gmpy2.mpq(1)}))
        colvecs.append(model.project(img, tgt) if img else {})
    nrows = len(model.quotient_basis(tgt))
    rows: list[SparseVec] = [{} for _ in range(nrows)]
    for j, cv in enumerate(colvecs):
        for i, c in cv.items():
            rows[i][j] = c
    return LevelMatrix(rows, len(cols), model.quotient_basis(tgt), cols)


def singular_space(model: GradedModule, n: int, modes: Sequence[Mode] | None = None, action=None, columns=None) -> list[ModuleVector]:
    """Vectors of level ``n`` killed by every mode in ``modes``, normalized.

    Each vector's leading monomial has coefficient 1.
    """
    action = action or model
    modes = modes if modes is not None else action.raising_modes
    cols = list(columns) if columns is not None else model.quotient_basis(n)
    rows: list[SparseVec] = []
    for mode in modes:
        rows.extend(operator_matrix(model, mode, n, action, cols).rows)
    null = nullspace(rows, len(cols))
    return [ModuleVector._raw({cols[j]: c for j, c in v.items()}) for v in null]


def find_singular(spec: HighestWeightSpec, n: int) -> list[ModuleVector]:
    """Basis of singular vectors of level ``n >= 1`` in the Verma module."""
    if n < 1:
        raise ValueError("singular vectors live at positive levels")
    return singular_space(verma(spec), n)


def is_singular(model: GradedModule, v: ModuleVector, action=None) -> bool:
    action = action or model
    return all(not action.apply(m, v) for m in action.raising_modes)


@lru_cache(maxsize=None)
def _chain_vector(spec: HighestWeightSpec, k: int) -> ModuleVector:
    """The ``k``-th vector ``u'_{kp}`` of the singular chain of a reducible Verma module.

    For W(2,2) it is the unique singular vector of level ``kp`` in
    ``C[W(-1), W(-2), ...] v``; for H the unique singular vector of that level.
    """
    V = verma(spec)
    if k == 0:
        return ModuleVector.basis_vector(V.spec.hw())
    rep = classify(spec)
    if rep.p is None:
        raise ValueError(f"{spec.label()}: Verma module is irreducible, there is no singular chain")
    n = k * rep.p
    if spec.kind is AlgebraKind.W22:
        cols = [m for m in V.basis(n) if not m.l]
        found = singular_space(V, n, columns=cols)
    else:
        found = singular_space(V, n)
    if len(found) != 1:
        raise ArithmeticError(f"{spec.label()}: expected one chain vector at level {n}, found {len(found)}")
    return found[0]


def singular_chain(spec: HighestWeightSpec, N: int) -> list[tuple[int, ModuleVector]]:
    """``(level, vector)`` for ``u'_{kp}``, ``k >= 0``, with ``kp <= N``."""
    rep = classify(spec)
    if rep.p is None:
        return [(0, _chain_vector(spec, 0))]
    return [(k * rep.p, _chain_vector(spec, k)) for k in range(N // rep.p + 1)]


@lru_cache(maxsize=None)
def _chain_closure(spec: HighestWeightSpec, k: int, N: int) -> Closure:
    return submodule_closure(verma(spec), [_chain_vector(spec, k)], N)


def find_cosingular(spec: HighestWeightSpec, n: int) -> list[ModuleVector]:
    """Cosingular vectors of level ``n`` in a reducible Verma module.

    Along the chain ``M_k = <u'_{kp}>``, collects the vectors of ``M_k`` that
    are singular modulo ``M_{k+1}`` without lying in it, returned as canonical
    lifts (reduced modulo ``M_{k+1}``, leading coefficient 1). For ``k = 0``
    these are the lifts of the singular vectors of ``V / <u'_p>``.
    """
    if n < 1:
        raise ValueError("cosingular vectors live at positive levels")
    rep = classify(spec)
    if rep.p is None:
        raise ValueError(f"{spec.label()} is typical with an irreducible Verma module; no cosingular vectors")
    V = verma(spec)
    p = rep.p
    found = Subspace()
    out: list[ModuleVector] = []
    k = 0
    while k * p < n:
        Mk = _chain_closure(spec, k, n)
        Mnext = _chain_closure(spec, k + 1, n)
        gens = Mk.basis(n)
        if gens:
            rows: list[SparseVec] = []
            for mode in annihilators(spec.kind):
                tgt = n - mode.index
                if tgt < 0:
                    continue
                sub = Mnext.levels[tgt]
                block: list[SparseVec] = [{} for _ in V.basis(tgt)]
                for j, g in enumerate(gens):
                    for i, c in sub.reduce(V.sparse(V.apply(mode, g), tgt)).items():
                        block[i][j] = c
                rows.extend(block)
            for coeffs in nullspace(rows, len(gens)):
                x = ModuleVector()
                for j, c in coeffs.items():
                    x.iadd(gens[j], c)
                red = Mnext.levels[n].reduce(V.sparse(x, n))
                if red:
                    found.add(red)
        k += 1
    for row in found.basis():
        out.append(V.vector(row, n))
    return out


# ---------------------------------------------------------------------------
# contravariant pairing


def adjoint(mode: Mode) -> tuple[Rational, Mode]:
    """``a^dagger`` with ``<a m', m> = <m', a^dagger m>`` for negative modes.

    ``L(-k) -> L(k)``, ``W(-k) -> W(k)``, ``I(-k) -> -I(k)``.
    """
    fam, n = mode
    if n == 0:
        raise ValueError("zero modes are handled through the highest weights")
    sign = -1 if fam is Family.I else 1
    return gmpy2.mpq(sign), Mode(fam, -n)


@dataclass
class GramData:
    level: int
    matrix: LevelMatrix
    rank: int
    radical: list[ModuleVector]

    @property
    def size(self) -> int:
        return self.matrix.ncols


_GRAM_ROWS: dict[tuple[HighestWeightSpec, int], list[SparseVec]] = {}


def _gram_rows(spec: HighestWeightSpec, n: int) -> list[SparseVec]:
    key = (spec, n)
    hit = _GRAM_ROWS.get(key)
    if hit is not None:
        return hit
    V = verma(spec)
    basis = V.basis(n)
    if n == 0:
        rows = [{0: gmpy2.mpq(1)}]
        _GRAM_ROWS[key] = rows
        return rows
    xfam = V.spec.xfam
    # <a u'', m> = <u'', a^dagger m>; a is the leftmost factor of the dual monomial
    images: dict[Mode, list[SparseVec]] = {}
    rows = []
    for u in basis:
        if u.x:
            a, rest = Mode(xfam, u.x[0]), PBWMonomial(u.x[1:], u.l, u.base)
        else:
            a, rest = Mode(Family.VIR, u.l[0]), PBWMonomial((), u.l[1:], u.base)
        k = -a.index
        if a not in images:
            sign, adj = adjoint(a)
            images[a] = [V.sparse(apply_mode_mono(adj, m, V.spec), n - k) for m in basis]
            if sign != 1:
                images[a] = [{i: sign * c for i, c in im.items()} for im in images[a]]
        lower = _gram_rows(spec, n - k)[V.index(n - k)[rest]]
        row: SparseVec = {}
        for j, im in enumerate(images[a]):
            s = 0
            for i, c in im.items():
                g = lower.get(i)
                if g:
                    s += c * g
            if s:
                row[j] = gmpy2.mpq(s)
        rows.append(row)
    _GRAM_ROWS[key] = rows
    return rows


@lru_cache(maxsize=None)
def gram_matrix(spec: HighestWeightSpec, n: int) -> GramData:
    """Contravariant pairing at level ``n``.

    Rows are indexed by the PBW basis of the contragredient side, columns by
    the PBW basis of ``V(spec)``. For W(2,2) this is the symmetric Gram
    matrix; for H it pairs ``V(h, 2 c_LI - h_I)`` with ``V(h, h_I)``.
    The right radical is the level-``n`` piece of the maximal submodule.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    V = verma(spec)
    rows = _gram_rows(spec, n)
    basis = V.basis(n)
    mat = LevelMatrix(rows, len(basis), basis, basis)
    rad = [V.vector(v, n) for v in nullspace(rows, len(basis))]
    return GramData(level=n, matrix=mat, rank=len(basis) - len(rad), radical=rad)


def irr_graded_dims(spec: HighestWeightSpec, N: int) -> list[int]:
    """Graded dimensions of the irreducible quotient, as ranks of the pairing."""
    return [gram_matrix(spec, n).rank for n in range(N + 1)]


@lru_cache(maxsize=None)
def irreducible(spec: HighestWeightSpec, N: int) -> QuotientModel:
    """``L(spec)`` up to level ``N``: the Verma module modulo the pairing radical."""
    V = verma(spec)
    sub = {}
    for n in range(N + 1):
        sub[n] = Subspace(V.sparse(v, n) for v in gram_matrix(spec, n).radical)
    return QuotientModel(spec, V.spec, sub, N, name="L^" + spec.label())


def maximal_submodule_generators(spec: HighestWeightSpec, N: int) -> list[ModuleVector]:
    """Singular chain vectors plus, for atypical W(2,2) weights, cosingular lifts."""
    rep = classify(spec)
    if rep.p is None:
        return []
    gens = [v for lvl, v in singular_chain(spec, N) if lvl > 0]
    if spec.kind is AlgebraKind.W22 and rep.atypical:
        for n in range(1, N + 1):
            gens.extend(find_cosingular(spec, n))
    return gens


def level_dims(spec: HighestWeightSpec, N: int) -> list[int]:
    return [partition_p2(n) for n in range(N + 1)]
