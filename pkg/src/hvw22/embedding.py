"""W(2,2) acting on Heisenberg-Virasoro modules through the free field embedding.

The W-field is realized quadratically in the Heisenberg modes:

    W(n) = -2 c_LI (n + 1) I(n) + sum_i I(-i) I(n + i)

At level zero all I-modes commute, so the ordering inside the sum is
immaterial; the sum truncates on any graded vector. This reproduces
W(0) v = h_I (h_I - 2 c_LI) v on a highest weight vector.

Everything here is a finite-level certificate: "irreducible" means "no
W-singular vectors at levels 1..N", not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2

from .algebra import AlgebraKind, Family, I, L, Mode, W
from .characters import p2_series, shift, telescoping_holds
from .linalg import Subspace
from .pbw import ModuleVector, PBWMonomial, apply_mode_mono
from .verma import (
    AtypicalityReport,
    Branch,
    GradedModule,
    HighestWeightSpec,
    classify,
    irr_graded_dims,
    irreducible,
    is_singular,
    singular_chain,
    singular_space,
    submodule_closure,
    verma,
)


def _w_on_monomial(n: int, m: PBWMonomial, host: GradedModule) -> ModuleVector:
    spec = host.spec
    c = spec.charges.c_LI
    lvl = m.level
    out = ModuleVector()
    lin = -2 * c * (n + 1)
    if lin:
        out.iadd(apply_mode_mono(I(n), m, spec), lin)
    # unordered pairs a + b = n with a <= b; I(b) kills m once b > level
    b = -((-n) // 2)
    while b <= lvl:
        a = n - b
        mult = 1 if a == b else 2
        inner = apply_mode_mono(I(b), m, spec)
        for mono, coef in inner.terms.items():
            out.iadd(apply_mode_mono(I(a), mono, spec), mult * coef)
        b += 1
    return out


class PsiAction:
    """W(2,2) acting on an H-module (Verma or quotient) via the embedding.

    Exposes the same action protocol as :class:`GradedModule`
    (``lowering_modes``, ``raising_modes``, ``apply``), so closures and
    singular-vector solvers run unchanged with W(2,2) in place of H.
    """

    lowering_modes = (L(-1), L(-2), W(-1), W(-2))
    raising_modes = (L(1), L(2), W(1), W(2))

    def __init__(self, host: GradedModule):
        if host.spec.kind is not AlgebraKind.HV:
            raise ValueError("the embedding acts on Heisenberg-Virasoro modules")
        self.host = host
        self.charges = host.spec.charges
        self._cache: dict[tuple[int, PBWMonomial], ModuleVector] = {}

    def w_raw(self, n: int, v: ModuleVector) -> ModuleVector:
        """``W(n) v`` in the free module, before reduction."""
        out = ModuleVector()
        for m, c in v.terms.items():
            key = (n, m)
            img = self._cache.get(key)
            if img is None:
                img = _w_on_monomial(n, m, self.host)
                self._cache[key] = img
            out.iadd(img, c)
        return out

    def w(self, n: int, v: ModuleVector) -> ModuleVector:
        return self.host.reduce(self.w_raw(n, v))

    def apply(self, mode: Mode, v: ModuleVector) -> ModuleVector:
        if mode.family is Family.W:
            return self.w(mode.index, v)
        if mode.family is Family.VIR:
            return self.host.apply(mode, v)
        raise ValueError(f"{mode} is not a W(2,2) mode")


def w_mode(n: int, x: ModuleVector, host: GradedModule) -> ModuleVector:
    """``W(n) x`` for ``x`` in an H-module at level zero."""
    return PsiAction(host).w(n, x)


# ---------------------------------------------------------------------------
# relations


@dataclass
class RelationFailure:
    relation: str
    source: str
    witness: str


@dataclass
class RelationReport:
    passed: bool
    checked: int
    failures: list[RelationFailure] = field(default_factory=list)


def verify_w22_relations(host: GradedModule, N: int, c_W=None, modes: int = 3, max_failures: int = 5) -> RelationReport:
    """Check the W(2,2) brackets for the induced action on levels ``<= N``.

    For ``|n|, |m| <= modes`` verifies on every basis vector ``x`` whose
    intermediate images stay within levels ``0..N``:

        [L(n), W(m)] x = (n - m) W(n + m) x + delta_{n,-m} (n^3 - n)/12 c_W x
        [W(n), W(m)] x = 0

    ``c_W`` defaults to ``-24 c_LI^2``; pass another value to see the check fail.
    """
    act = PsiAction(host)
    c_W = host.spec.charges.c_W if c_W is None else gmpy2.mpq(c_W)
    rep = RelationReport(passed=True, checked=0)
    rng = range(-modes, modes + 1)
    for lvl in range(N + 1):
        for mono in host.quotient_basis(lvl):
            x = ModuleVector._raw({mono: gmpy2.mpq(1)})
            wx = {m: act.w(m, x) if lvl - m >= 0 else ModuleVector() for m in rng}
            for n in rng:
                for m in rng:
                    if max(lvl - m, lvl - n, lvl - n - m) > N:
                        continue
                    lx = host.apply(L(n), x)
                    lhs = host.apply(L(n), wx[m]) - act.w(m, lx)
                    rhs = act.w(n + m, x) * (n - m)
                    if n == -m and n**3 - n:
                        rhs = rhs + x * (c_W * (n**3 - n) / 12)
                    rep.checked += 1
                    if host.reduce(lhs - rhs):
                        rep.passed = False
                        if len(rep.failures) < max_failures:
                            rep.failures.append(RelationFailure(f"[L({n}),W({m})]", host.format(x), host.format(host.reduce(lhs - rhs))))
                    if n < m:
                        ww = act.w(n, wx[m]) - act.w(m, wx[n])
                        rep.checked += 1
                        if ww:
                            rep.passed = False
                            if len(rep.failures) < max_failures:
                                rep.failures.append(RelationFailure(f"[W({n}),W({m})]", host.format(x), host.format(ww)))
    return rep


# ---------------------------------------------------------------------------
# the homomorphism of Verma modules


def psi_map(y: ModuleVector, source: HighestWeightSpec, target: HighestWeightSpec) -> ModuleVector:
    """Image of ``y`` in ``V^H(target)`` under ``v_{h,h_W} -> v_{h,h_I}``."""
    if source.kind is not AlgebraKind.W22 or target.kind is not AlgebraKind.HV:
        raise ValueError("psi_map goes from a W(2,2) Verma module to an H Verma module")
    if source.charges != target.charges or source.h != target.h or source.h_W != target.h_W:
        raise ValueError(
            f"incompatible weights: {source.label()} does not match {target.label()} "
            "(need equal h and h_W = h_I (h_I - 2 c_LI))"
        )
    V = verma(target)
    act = PsiAction(V)
    out = ModuleVector()
    hw = ModuleVector.basis_vector(V.spec.hw())
    for mono, c in y.terms.items():
        v = hw
        for k in reversed(mono.l):
            v = V.apply(L(k), v)
        for k in reversed(mono.x):
            v = act.w(k, v)
        out.iadd(v, c)
    return out


def v_r_minus(r: int, charges) -> ModuleVector:
    """``prod_{i=0}^{r-1} (L(-1) + (1 - r + 2i)/(2 c_LI) I(-1)) v`` in ``V^H((1-r)/2, 0)``.

    The factor with ``i = 0`` acts first (rightmost): each factor is the level-one
    singular vector ``L(-1) + (h + i)/c_LI I(-1)`` at the current weight.
    """
    if r < 1:
        raise ValueError("r must be positive")
    spec = HighestWeightSpec.hv(charges, gmpy2.mpq(1 - r, 2), 0)
    V = verma(spec)
    v = ModuleVector.basis_vector(V.spec.hw())
    for i in range(r):
        a = gmpy2.mpq(1 - r + 2 * i) / (2 * charges.c_LI)
        v = V.apply(L(-1), v) + V.apply(I(-1), v) * a
    return v


def v_r_minus_spec(r: int, charges) -> HighestWeightSpec:
    return HighestWeightSpec.hv(charges, gmpy2.mpq(1 - r, 2), 0)


# ---------------------------------------------------------------------------
# branching


@dataclass
class Certificate:
    name: str
    passed: bool
    detail: str = ""
    level: int | None = None

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "level": self.level}


@dataclass
class BranchReport:
    spec: HighestWeightSpec
    atypicality: AtypicalityReport
    N: int
    host_dims: list[int]
    sub_dims: list[int]
    quotient_dims: list[int]
    w_singular: dict[int, list[str]] = field(default_factory=dict)
    certificates: list[Certificate] = field(default_factory=list)
    nonsplit_level: int | None = None
    checks: list[Certificate] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Exact-sequence certificates (atypical) and irreducibility checks (typical) all hold."""
        return all(c.passed for c in self.certificates + self.checks)


def _w22_dims(charges, h, h_W, N: int, offset: int = 0) -> list[int]:
    if N - offset < 0:
        return [0] * (N + 1)
    dims = irr_graded_dims(HighestWeightSpec.w22(charges, h, h_W), N - offset)
    return shift(dims + [0] * offset, offset)


def w_closure(model: GradedModule, vectors, N: int):
    """``<vectors>_{W(2,2)}`` inside an H-module, up to level ``N``."""
    return submodule_closure(model, vectors, N, action=PsiAction(model))


def w_singular_space(model: GradedModule, n: int) -> list[ModuleVector]:
    return singular_space(model, n, action=PsiAction(model))


def branch(spec: HighestWeightSpec, N: int) -> BranchReport:
    """Decompose ``L^H(h, h_I)`` as a W(2,2)-module up to level ``N``."""
    if spec.kind is not AlgebraKind.HV:
        raise ValueError("branch() takes a Heisenberg-Virasoro highest weight")
    cc = spec.charges
    rep = classify(spec)
    host = irreducible(spec, N)
    act = PsiAction(host)
    host_dims = host.dims(N)
    h_W = spec.h_W
    hw = ModuleVector.basis_vector(host.spec.hw())
    certs: list[Certificate] = []
    wsing: dict[int, list[str]] = {}

    if not rep.atypical:
        for n in range(1, N + 1):
            found = singular_space(host, n, action=act)
            if found:
                wsing[n] = [host.format(v) for v in found]
        # typical: nothing splits, so there are no sequence certificates, only irreducibility checks
        expected = _w22_dims(cc, spec.h, h_W, N)
        checks = [
            Certificate("no W-singular vectors at levels 1..N", not wsing, f"found at levels {sorted(wsing)}" if wsing else ""),
            Certificate("host dims equal L^W22(h, h_W) dims", expected == host_dims, f"host {host_dims} vs W22 {expected}"),
        ]
        return BranchReport(spec, rep, N, host_dims, [0] * (N + 1), host_dims, wsing, [], checks=checks)

    p, r = rep.p, rep.r
    top = r * p
    hw_closure = w_closure(host, [hw], N)
    if top > N:
        certs.append(Certificate("atypical level r*p within truncation", False, f"r*p = {top} > N = {N}"))
        return BranchReport(spec, rep, N, host_dims, [0] * (N + 1), host_dims, wsing, certs)

    found = singular_space(host, top, action=act)
    if found:
        wsing[top] = [host.format(v) for v in found]
    nonsplit = None
    if rep.branch is Branch.PLUS:
        certs.append(Certificate("unique W-singular vector at level r*p", len(found) == 1, f"dimension {len(found)}", top))
        sub = w_closure(host, found[:1], N) if found else None
        sub_dims = sub.dims if sub else [0] * (N + 1)
        q_dims = [a - b for a, b in zip(host_dims, sub_dims)]
        exp_sub = _w22_dims(cc, spec.h + top, h_W, N, top)
        exp_q = _w22_dims(cc, spec.h, h_W, N)
        full = hw_closure.dims == host_dims
        certs.append(Certificate("non-split: <hw>_W is the whole host", full and any(sub_dims), f"<hw>_W dims {hw_closure.dims}", top))
        if full and any(sub_dims):
            nonsplit = top
    else:
        sub_dims = hw_closure.dims
        q_dims = [a - b for a, b in zip(host_dims, sub_dims)]
        exp_sub = _w22_dims(cc, spec.h, h_W, N)
        exp_q = _w22_dims(cc, spec.h + top, h_W, N, top)
        inside = all(hw_closure.contains(v) for v in found)
        certs.append(
            Certificate(
                "non-split: no W-singular vector at level r*p outside <hw>_W",
                inside and q_dims[top] > 0,
                f"{len(found)} W-singular vectors at level {top}, all inside <hw>_W: {inside}",
                top,
            )
        )
        if inside and q_dims[top] > 0:
            nonsplit = top
    certs.append(Certificate("submodule dims match L^W22", sub_dims == exp_sub, f"{sub_dims} vs {exp_sub}"))
    certs.append(Certificate("quotient dims match L^W22", q_dims == exp_q, f"{q_dims} vs {exp_q}"))
    return BranchReport(spec, rep, N, host_dims, sub_dims, q_dims, wsing, certs, nonsplit)


@dataclass
class DualityReport:
    dims: list[int]
    dual_dims: list[int]

    @property
    def passed(self) -> bool:
        return self.dims == self.dual_dims


def contragredient_check(spec: HighestWeightSpec, N: int) -> DualityReport:
    """Graded dims of ``L(h, h_I)`` and of its contragredient ``L(h, 2 c_LI - h_I)``."""
    return DualityReport(irr_graded_dims(spec, N), irr_graded_dims(spec.dual(), N))


@dataclass
class DecompositionReport:
    spec: HighestWeightSpec
    N: int
    chain_levels: list[int]
    h_singular: list[bool]
    w_singular: list[bool]
    closure_dims: list[list[int]]
    expected_dims: list[list[int]]
    union_dims: list[int]
    verma_dims: list[int]
    telescoping: bool

    @property
    def independent(self) -> bool:
        sums = [sum(d[n] for d in self.closure_dims) for n in range(self.N + 1)]
        return sums == self.union_dims

    @property
    def passed(self) -> bool:
        return (
            all(self.h_singular)
            and all(self.w_singular)
            and self.closure_dims == self.expected_dims
            and self.independent
            and self.union_dims == self.verma_dims
            and self.telescoping
        )


def verma_branch_decomposition(h, p: int, charges, N: int) -> DecompositionReport:
    """``V^H(h, (1-p) c_LI)`` as a direct sum of irreducible W(2,2)-modules, up to level ``N``."""
    spec = HighestWeightSpec.hv(charges, h, (1 - p) * charges.c_LI)
    rep = classify(spec)
    if rep.atypical:
        raise ValueError(f"{spec.label()} is atypical (p={rep.p}, r={rep.r}); use branch() instead")
    V = verma(spec)
    act = PsiAction(V)
    chain = singular_chain(spec, N)
    h_sing, w_sing, cdims, edims = [], [], [], []
    union = {n: Subspace() for n in range(N + 1)}
    for lvl, v in chain:
        h_sing.append(is_singular(V, v))
        w_sing.append(is_singular(V, v, act))
        cl = submodule_closure(V, [v], N, action=act)
        cdims.append(cl.dims)
        edims.append(_w22_dims(charges, spec.h + lvl, spec.h_W, N, lvl))
        for n in range(N + 1):
            for row in cl.levels[n].rows.values():
                union[n].add(row)
    return DecompositionReport(
        spec,
        N,
        [lvl for lvl, _ in chain],
        h_sing,
        w_sing,
        cdims,
        edims,
        [union[n].dim for n in range(N + 1)],
        p2_series(N),
        telescoping_holds(p, N),
    )
