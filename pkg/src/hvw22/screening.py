"""Screening operators from the vacuum module of H into the extension module U.

Setup:

* ``E`` is the two-dimensional module of the non-negative part with basis
  ``v0, v1`` of ``L(0)``-weight 1, ``I(0) v1 = v0``, ``I(0) v0 = 0`` and the
  positive modes acting by zero;
* ``U`` is the induced module modulo the submodule generated by the singular
  vector ``(L(-1) + I(-1)/c_LI) v0``;
* the vacuum module is ``V^H(0, 0) / <L(-1) hw>``.

``S_i(m)`` (the modes of the field of ``v^i``) is evaluated on a vacuum vector
by pulling each mode through ``S``:

    S_i(m) L(n) R = L(n) S_i(m) R + m S_i(n + m) R
    S_1(m) I(n) R = I(n) S_1(m) R - S_0(n + m) R
    S_0(m) I(n) R = I(n) S_0(m) R

down to ``S_i(m) 1 = L(-1)^(-m-1) v^i / (-m-1)!`` (zero for ``m >= 0``). The
rule for ``[I(n), S_1(m)]`` follows from ``I(j) v^1 = delta_{j,0} v^0``; the
tests confirm it against the ``W`` relations.

Levels: ``U`` is graded by ``L(0) - 1``, so ``S_i(m)`` sends vacuum level
``n`` to ``U`` level ``n - m - 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Sequence

import gmpy2

from .algebra import AlgebraKind, CentralCharges, Family, I, L, Mode, W, format_rational
from .characters import w22_irr_character
from .embedding import Certificate, PsiAction
from .linalg import LevelMatrix, SparseVec, Subspace, nullspace
from .pbw import ModuleSpec, ModuleVector, PBWMonomial, normal_order
from .verma import (
    GradedModule,
    HighestWeightSpec,
    QuotientModel,
    irr_graded_dims,
    is_singular,
    submodule_closure,
    verma,
    verma_quotient,
)


class Which(enum.Enum):
    S0 = 0
    S1 = 1

    @classmethod
    def parse(cls, value) -> "Which":
        if isinstance(value, Which):
            return value
        if value in (0, 1):
            return cls(value)
        if isinstance(value, str) and value.upper() in ("S0", "S1"):
            return cls[value.upper()]
        raise ValueError(f"unknown screening operator {value!r}; expected S0 or S1")


BASE_OF = {Which.S0: "v0", Which.S1: "v1"}

# Largest |n|, |m| in the commutator checks. The vacuum and U are built this
# far beyond the requested level so every intermediate image is reduced.
SPAN = 2


def ext_spec(charges: CentralCharges) -> ModuleSpec:
    """The induced module on ``E``: free over the negative part on ``v0, v1``."""
    one = gmpy2.mpq(1)
    return ModuleSpec(
        kind=AlgebraKind.HV,
        charges=charges,
        bases=("v0", "v1"),
        weights={"v0": one, "v1": one},
        zero_modes={
            (Family.VIR, "v0"): {"v0": one},
            (Family.VIR, "v1"): {"v1": one},
            (Family.I, "v0"): {},
            (Family.I, "v1"): {"v0": one},
        },
        name="E~",
    )


@dataclass
class ExtModuleU:
    """``U`` up to level ``N`` together with its induced cover and relation."""

    charges: CentralCharges
    N: int
    induced: GradedModule
    relation: ModuleVector
    model: QuotientModel

    def dims(self, N: int | None = None) -> list[int]:
        return self.model.dims(self.N if N is None else N)

    def relation_is_singular(self) -> bool:
        """``(L(-1) + I(-1)/c_LI) v0`` is killed by ``L(1), L(2), I(1)`` in the induced module."""
        return is_singular(self.induced, self.relation)

    def base(self, which: Which) -> ModuleVector:
        return ModuleVector.basis_vector(PBWMonomial((), (), BASE_OF[which]))


@lru_cache(maxsize=None)
def build_ext_module(charges: CentralCharges, N: int) -> ExtModuleU:
    if N < 0:
        raise ValueError("N must be non-negative")
    spec = ext_spec(charges)
    induced = GradedModule(spec, name="E~")
    v0 = ModuleVector.basis_vector(PBWMonomial((), (), "v0"))
    rel = induced.apply(L(-1), v0) + induced.apply(I(-1), v0) * (1 / charges.c_LI)
    cl = submodule_closure(induced, [rel], N)
    return ExtModuleU(charges, N, induced, rel, cl.as_quotient(None, name="U"))


def vacuum_spec(charges: CentralCharges) -> HighestWeightSpec:
    return HighestWeightSpec.hv(charges, 0, 0)


@lru_cache(maxsize=None)
def vacuum_module(charges: CentralCharges, N: int) -> QuotientModel:
    """``V^H(0, 0) / <L(-1) hw>`` up to level ``N``."""
    spec = vacuum_spec(charges)
    hw = ModuleVector.basis_vector(PBWMonomial((), (), "hw"))
    gen = verma(spec).apply(L(-1), hw)
    return verma_quotient(spec, [gen], N)


class Screening:
    """Evaluator for ``S_0(m)``, ``S_1(m)`` on the vacuum module (vacuum levels <= ``N``)."""

    def __init__(self, charges: CentralCharges, N: int):
        self.charges = charges
        self.N = N
        self.vacuum = vacuum_module(charges, N + SPAN)
        self.U = build_ext_module(charges, N + 2 * SPAN + 1)
        self._memo: dict[tuple[Which, int, PBWMonomial], ModuleVector] = {}
        self._word_memo: dict[tuple[Which, int, tuple[Mode, ...]], ModuleVector] = {}

    @property
    def target(self) -> QuotientModel:
        return self.U.model

    def _base(self, which: Which, m: int) -> ModuleVector:
        if m >= 0:
            return ModuleVector()
        k = -m - 1
        v = self.U.base(which)
        for _ in range(k):
            v = self.target.apply(L(-1), v)
        return v * gmpy2.mpq(1, factorial(k)) if k > 1 else v

    def _pull(self, which: Which, m: int, a: Mode, rest_image, out: ModuleVector) -> ModuleVector:
        """``S(m) a R`` from ``S(.) R`` supplied by ``rest_image(which, m)``."""
        out.iadd(self.target.apply(a, rest_image(which, m)))
        if a.family is Family.VIR:
            if m:
                out.iadd(rest_image(which, a.index + m), m)
        elif which is Which.S1:
            out.iadd(rest_image(Which.S0, a.index + m), -1)
        return out

    def apply_mono(self, which: Which, m: int, mono: PBWMonomial) -> ModuleVector:
        key = (which, m, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        x, l, base = mono
        if x:
            a, rest = I(x[0]), PBWMonomial(x[1:], l, base)
        elif l:
            a, rest = L(l[0]), PBWMonomial((), l[1:], base)
        else:
            res = self._base(which, m)
            self._memo[key] = res
            return res
        res = self._pull(which, m, a, lambda w, k: self.apply_mono(w, k, rest), ModuleVector())
        self._memo[key] = res
        return res

    def apply(self, which, m: int, x: ModuleVector) -> ModuleVector:
        """``S(m) x`` for a vacuum vector in PBW form; the result is reduced in ``U``."""
        which = Which.parse(which)
        out = ModuleVector()
        for mono, c in x.terms.items():
            if mono.base != "hw":
                raise ValueError("screening operators act on the vacuum module")
            out.iadd(self.apply_mono(which, m, mono), c)
        return out

    def apply_word(self, which, m: int, word: Sequence[Mode]) -> ModuleVector:
        """``S(m) word . 1`` by peeling the word left to right, with no normal ordering.

        Any modes may appear in ``word``; the commutation rules hold for all
        indices, and only the empty word touches the vacuum vector.
        """
        which = Which.parse(which)
        return self._apply_word(which, m, tuple(word))

    def _apply_word(self, which: Which, m: int, word: tuple[Mode, ...]) -> ModuleVector:
        key = (which, m, word)
        hit = self._word_memo.get(key)
        if hit is not None:
            return hit
        if not word:
            res = self._base(which, m)
        else:
            a, rest = word[0], word[1:]
            if a.family is Family.W:
                raise ValueError("words must be in L and I modes")
            res = self._pull(which, m, a, lambda w, k: self._apply_word(w, k, rest), ModuleVector())
        self._word_memo[key] = res
        return res

    def target_level(self, m: int, n: int) -> int:
        return n - m - 1

    def matrix(self, which, m: int, n: int) -> LevelMatrix:
        """``S(m)`` from vacuum level ``n`` to ``U`` level ``n - m - 1`` in quotient bases."""
        which = Which.parse(which)
        vac, U = self.vacuum, self.target
        cols = vac.quotient_basis(n)
        tgt = self.target_level(m, n)
        if tgt < 0:
            return LevelMatrix([], len(cols), [], cols)
        rows: list[SparseVec] = [{} for _ in U.quotient_basis(tgt)]
        for j, mono in enumerate(cols):
            img = self.apply_mono(which, m, mono)
            if img:
                for i, c in U.project(img, tgt).items():
                    rows[i][j] = c
        return LevelMatrix(rows, len(cols), U.quotient_basis(tgt), cols)

    def kernel(self, n: int) -> list[ModuleVector]:
        """Canonical basis of ``ker S_1(0)`` at vacuum level ``n``."""
        mat = self.matrix(Which.S1, 0, n)
        cols = mat.col_labels
        return [ModuleVector._raw({cols[j]: c for j, c in v.items()}) for v in nullspace(mat.rows, mat.ncols)]


_screenings: dict[tuple[CentralCharges, int], Screening] = {}


def screening(charges: CentralCharges, N: int) -> Screening:
    """Shared evaluator per ``(charges, N)``; caches are filled once and then reused."""
    key = (charges, N)
    s = _screenings.get(key)
    if s is None:
        s = Screening(charges, N)
        _screenings[key] = s
    return s


@dataclass
class SOperator:
    """``S_0(m)`` or ``S_1(m)`` bound to an evaluator."""

    which: Which
    m: int
    context: Screening

    def __call__(self, x: ModuleVector) -> ModuleVector:
        return self.context.apply(self.which, self.m, x)

    def __str__(self) -> str:
        return f"S{self.which.value}({self.m})"


def s_apply(which, m: int, x: ModuleVector, context: Screening) -> ModuleVector:
    """``S_i(m) x`` for ``x`` in the vacuum module, as a reduced vector of ``U``."""
    return context.apply(which, m, x)


def vacuum_vector(word: Sequence[Mode], charges: CentralCharges, N: int) -> ModuleVector:
    """``word . 1`` in the vacuum module, reduced."""
    vac = vacuum_module(charges, N)
    return vac.reduce(normal_order(word, "hw", vac.spec))


def kernel_dims(charges: CentralCharges, N: int) -> list[int]:
    """``dim ker S_1(0)`` on vacuum levels ``0..N``."""
    s = screening(charges, N)
    return [s.vacuum.dim(n) - s.matrix(Which.S1, 0, n).rank() for n in range(N + 1)]


def w_closure_of_vacuum(charges: CentralCharges, N: int):
    """``<1>_W``: the W(2,2)-submodule of the vacuum module generated by ``1``."""
    vac = screening(charges, N).vacuum
    one = ModuleVector.basis_vector(PBWMonomial((), (), "hw"))
    return submodule_closure(vac, [one], N, action=PsiAction(vac))


# ---------------------------------------------------------------------------
# certificates


@dataclass
class CommutatorFailure:
    family: str
    n: int
    m: int
    level: int
    column: str
    lhs: str
    rhs: str


@dataclass
class CommutatorReport:
    N: int
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[CommutatorFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def family_passed(self, family: str) -> bool:
        return family in self.checked and not any(f.family == family for f in self.failures)


# (name, operator family acting, S acted on, coefficient of S_j(n+m) on the right)
_FAMILIES = (
    ("[L(n),S0(m)] = -m S0(n+m)", Family.VIR, Which.S0, Which.S0, lambda m, c: -m),
    ("[L(n),S1(m)] = -m S1(n+m)", Family.VIR, Which.S1, Which.S1, lambda m, c: -m),
    ("[W(n),S0(m)] = 0", Family.W, Which.S0, Which.S0, lambda m, c: 0),
    ("[W(n),S1(m)] = 2m c_LI S0(n+m)", Family.W, Which.S1, Which.S0, lambda m, c: 2 * m * c),
    ("[I(n),S0(m)] = 0", Family.I, Which.S0, Which.S0, lambda m, c: 0),
    ("[I(n),S1(m)] = S0(n+m)", Family.I, Which.S1, Which.S0, lambda m, c: 1),
)

STATED_FAMILIES = tuple(f[0] for f in _FAMILIES[:4])
DERIVED_FAMILIES = tuple(f[0] for f in _FAMILIES[4:])


def verify_screening_commutators(charges: CentralCharges, N: int, span: int = SPAN, max_failures: int = 10) -> CommutatorReport:
    """Check the commutator families column by column on vacuum levels ``0..N``.

    For each ``|n|, |m| <= span`` and each vacuum basis vector ``x`` the
    identity ``A(n) S(m) x - S(m) A(n) x = coef * S'(n+m) x`` is tested in
    ``U``, with ``A(n) x`` computed in the vacuum module (``W`` through the
    embedding). This is equality of the corresponding level matrices.
    """
    if not 0 <= span <= SPAN:
        raise ValueError(f"span must lie in 0..{SPAN}")
    s = screening(charges, N)
    vac, U = s.vacuum, s.target
    act_vac, act_U = PsiAction(vac), PsiAction(U)
    report = CommutatorReport(N)
    for name, fam, which, rhs_which, coef_fn in _FAMILIES:
        count = 0
        for n in range(-span, span + 1):
            mode = Mode(fam, n)
            for m in range(-span, span + 1):
                coef = coef_fn(m, charges.c_LI)
                for lvl in range(N + 1):
                    for mono in vac.quotient_basis(lvl):
                        x = ModuleVector.basis_vector(mono)
                        lhs = act_U.apply(mode, s.apply(which, m, x)) if fam is not Family.I else U.apply(mode, s.apply(which, m, x))
                        ax = act_vac.apply(mode, x) if fam is not Family.I else vac.apply(mode, x)
                        lhs = lhs - s.apply(which, m, ax)
                        rhs = s.apply(rhs_which, n + m, x) * coef if coef else ModuleVector()
                        count += 1
                        if U.reduce(lhs - rhs):
                            if len(report.failures) < max_failures:
                                report.failures.append(
                                    CommutatorFailure(name, n, m, lvl, vac.format(x), U.format(lhs), U.format(rhs))
                                )
        report.checked[name] = count
    return report


@dataclass
class ScreeningReport:
    charges: CentralCharges
    N: int
    vacuum_dims: list[int]
    u_dims: list[int]
    kernel_dims: list[int]
    closure_dims: list[int]
    character: list[int]
    ranks: list[int]
    certificates: list[Certificate]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)

    def as_dict(self) -> dict:
        return {
            "charges": {"c_L": format_rational(self.charges.c_L), "c_LI": format_rational(self.charges.c_LI)},
            "N": self.N,
            "vacuum_dims": self.vacuum_dims,
            "U_dims": self.u_dims,
            "kernel_dims": self.kernel_dims,
            "w_closure_dims": self.closure_dims,
            "character": self.character,
            "ranks": self.ranks,
            "certificates": [c.as_dict() for c in self.certificates],
        }


def screening_report(charges: CentralCharges, N: int) -> ScreeningReport:
    """Kernel of ``S_1(0)`` against the W-closure of ``1`` and the atypical character.

    Certificates: the kernel equals ``<1>_W`` as a subspace at every level;
    ``S_1(0)`` kills the generator ``L(-1) hw`` of the maximal submodule;
    the kernel is stable under ``L(-1), L(-2), W(-1), W(-2)``; the image of
    ``S_1(0)`` is the submodule of ``U`` generated by ``v0`` and has the
    dimensions of ``L^H(1, 0)``.
    """
    s = screening(charges, N)
    vac, U = s.vacuum, s.target
    certs: list[Certificate] = []

    kernels = [s.kernel(n) for n in range(N + 1)]
    kdims = [len(k) for k in kernels]
    cl = w_closure_of_vacuum(charges, N)
    char = w22_irr_character(N, 1, 1)
    certs.append(Certificate("kernel dims equal the atypical W(2,2) character", kdims == char, f"{kdims} vs {char}"))
    certs.append(Certificate("kernel dims equal <1>_W dims", kdims == cl.dims, f"{kdims} vs {cl.dims}"))
    same = True
    bad = None
    for n in range(N + 1):
        ks = Subspace(vac.sparse(v, n) for v in kernels[n])
        if not (cl.levels[n].issubspace(ks) and ks.dim == cl.levels[n].dim):
            same, bad = False, n
            break
    certs.append(Certificate("kernel equals <1>_W as a subspace", same, "" if same else f"level {bad}", bad))

    # well-definedness on the quotient: S_1(0) and S_0(0) vanish on L(-1) hw and everything below it
    V = verma(vacuum_spec(charges))
    ok, bad = True, None
    for n in range(1, N + 1):
        for row in vac.sub(n).basis():
            x = V.vector(row, n)
            for which in Which:
                for m in (-1, 0, 1):
                    if s.apply(which, m, x):
                        ok, bad = False, n
    certs.append(Certificate("S kills the maximal submodule <L(-1) hw>", ok, "" if ok else f"level {bad}", bad))

    ok, bad = True, None
    psi = PsiAction(vac)
    for n in range(N - 1):
        for v in kernels[n]:
            for mode in psi.lowering_modes:
                k = -mode.index
                if n + k > N:
                    continue
                img = psi.apply(mode, v)
                if img and s.apply(Which.S1, 0, img):
                    ok, bad = False, n + k
    certs.append(Certificate("kernel is stable under L(-1), L(-2), W(-1), W(-2)", ok, "" if ok else f"level {bad}", bad))

    ranks = [vac.dim(n) - kdims[n] for n in range(N + 1)]
    irr10 = irr_graded_dims(HighestWeightSpec.hv(charges, 1, 0), N)
    expected = [0] + irr10[:N]
    certs.append(Certificate("rank S_1(0) at level n equals dim L^H(1,0) at level n-1", ranks == expected, f"{ranks} vs {expected}"))

    v0 = U.reduce(s.U.base(Which.S0))
    gen = submodule_closure(U, [v0], N)
    ok, bad = True, None
    for n in range(1, N + 1):
        tgt = n - 1
        img = Subspace()
        for mono in vac.quotient_basis(n):
            r = s.apply_mono(Which.S1, 0, mono)
            if r:
                img.add(U.sparse(r, tgt))
        if not (img.issubspace(gen.levels[tgt]) and img.dim == gen.levels[tgt].dim):
            ok, bad = False, n
            break
    certs.append(Certificate("image of S_1(0) equals <v0> in U", ok, "" if ok else f"level {bad}", bad))

    return ScreeningReport(
        charges=charges,
        N=N,
        vacuum_dims=vac.dims(N),
        u_dims=s.U.dims(N),
        kernel_dims=kdims,
        closure_dims=cl.dims,
        character=char,
        ranks=ranks,
        certificates=certs,
    )
