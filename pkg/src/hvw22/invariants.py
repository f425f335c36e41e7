"""Bundled invariant suites, shared by ``hvw22 verify`` and the test-suite.

Each suite returns a list of :class:`Check` rows (name, pass/fail, detail).
Everything is exact and seeded, so a suite run is reproducible line for line.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable

import gmpy2

from .algebra import AlgebraKind, CentralCharges, I, L, Mode, W, bracket, format_rational, make_charges
from .characters import hv_irr_character, p2_series, partition_count, telescoping_holds, w22_irr_character
from .embedding import PsiAction, branch, contragredient_check, v_r_minus, v_r_minus_spec, verify_w22_relations, verma_branch_decomposition
from .pbw import ModuleVector, level_basis, normal_order, partitions, rewrite_word, verma_spec
from .screening import (
    DERIVED_FAMILIES,
    STATED_FAMILIES,
    Which,
    screening,
    screening_report,
    vacuum_vector,
    verify_screening_commutators,
)
from .verma import (
    HighestWeightSpec,
    classify,
    find_cosingular,
    find_singular,
    gram_matrix,
    irr_graded_dims,
    is_singular,
    singular_space,
    verma,
)

DEFAULT_CHARGES = (("1", "1"), ("1/2", "2/3"), ("-3", "5/7"))
P2_TABLE = (1, 2, 5, 10, 20, 36, 65, 110, 185)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{status} [{self.suite}] {self.name}{tail}"

    def as_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def charge_sets(raw=DEFAULT_CHARGES) -> list[CentralCharges]:
    return [make_charges(a, b) for a, b in raw]


def random_rational(rng: random.Random, num: int = 9, den: int = 7) -> gmpy2.mpq:
    return gmpy2.mpq(rng.randint(-num, num), rng.randint(1, den))


def random_typical_h(rng: random.Random, charges: CentralCharges, count: int = 3) -> list[gmpy2.mpq]:
    """Random rationals ``h`` avoiding every ``h_{p,r}``-type coincidence for small ``p``."""
    out: list[gmpy2.mpq] = []
    while len(out) < count:
        h = random_rational(rng)
        # keep h away from the finitely many values where (h, (1-p)c_LI) turns atypical
        if h in out or any(classify(HighestWeightSpec.hv(charges, h, (1 - p) * charges.c_LI)).atypical for p in (1, 2, 3)):
            continue
        out.append(h)
    return out


# ---------------------------------------------------------------------------
# brackets


def _modes(kind: AlgebraKind, bound: int) -> list[Mode]:
    x = W if kind is AlgebraKind.W22 else I
    return [f(n) for f in (L, x) for n in range(-bound, bound + 1)]


def _combo(pairs) -> dict:
    out: dict = {}
    for c, m in pairs:
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _bracket_combo(kind, a: Mode, combo: dict, cc) -> tuple[dict, gmpy2.mpq]:
    lin, cen = [], gmpy2.mpq(0)
    for m, c in combo.items():
        r = bracket(kind, a, m, cc)
        lin.extend((c * k, md) for k, md in r.linear)
        cen += c * r.central
    return _combo(lin), cen


def antisymmetry_violations(kind: AlgebraKind, cc: CentralCharges, bound: int = 4) -> list[str]:
    bad = []
    for a, b in itertools.product(_modes(kind, bound), repeat=2):
        x, y = bracket(kind, a, b, cc), bracket(kind, b, a, cc)
        if _combo(x.linear) != _combo((-c, m) for c, m in y.linear) or x.central != -y.central:
            bad.append(f"[{a},{b}]")
    return bad


def jacobi_violations(kind: AlgebraKind, cc: CentralCharges, bound: int = 4) -> list[str]:
    """Triples with ``[a,[b,c]] + [b,[c,a]] + [c,[a,b]] != 0`` (central parts included)."""
    bad = []
    modes = _modes(kind, bound)
    for a, b, c in itertools.combinations(modes, 3):
        lin: list = []
        cen = gmpy2.mpq(0)
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            inner = bracket(kind, y, z, cc)
            l2, c2 = _bracket_combo(kind, x, _combo(inner.linear), cc)
            lin.extend((v, m) for m, v in l2.items())
            cen += c2
        if _combo(lin) or cen:
            bad.append(f"({a},{b},{c})")
    return bad


def grading_violations(kind: AlgebraKind, cc: CentralCharges, bound: int = 4) -> list[str]:
    bad = []
    for a, b in itertools.product(_modes(kind, bound), repeat=2):
        r = bracket(kind, a, b, cc)
        if any(m.index != a.index + b.index for _, m in r.linear) or (r.central and a.index + b.index):
            bad.append(f"[{a},{b}]")
    return bad


def suite_brackets(N: int = 6, charges=None, seed: int = 0) -> list[Check]:
    out = []
    for cc in charges or charge_sets():
        tag = f"c_L={format_rational(cc.c_L)}, c_LI={format_rational(cc.c_LI)}"
        for kind in AlgebraKind:
            for name, fn in (("antisymmetry", antisymmetry_violations), ("Jacobi", jacobi_violations), ("grading", grading_violations)):
                bad = fn(kind, cc)
                out.append(Check("brackets", f"{kind.value} {name}, |index| <= 4, {tag}", not bad, f"{len(bad)} violations" + (f", first {bad[0]}" if bad else "")))
    return out


# ---------------------------------------------------------------------------
# PBW engine


def random_word(rng: random.Random, kind: AlgebraKind, length: int, bound: int = 3) -> list[Mode]:
    x = W if kind is AlgebraKind.W22 else I
    return [rng.choice((L, x))(rng.randint(-bound, bound)) for _ in range(length)]


def suite_pbw(N: int = 6, charges=None, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    out = []
    cc = (charges or charge_sets())[0]
    for kind in AlgebraKind:
        spec = verma_spec(kind, cc, "3/2", "-1/3")
        mismatches = 0
        for _ in range(60):
            w = random_word(rng, kind, rng.randint(0, 5))
            a = normal_order(w, "hw", spec)
            if a != rewrite_word(w, "hw", spec, "leftmost") or a != rewrite_word(w, "hw", spec, "rightmost"):
                mismatches += 1
        out.append(Check("pbw", f"{kind.value} recursive normal order agrees with both rewriting strategies", not mismatches, f"{mismatches}/60 words differ"))
        dims = [len(level_basis(spec, n)) for n in range(N + 1)]
        out.append(Check("pbw", f"{kind.value} graded basis dims equal P2(n), n <= {N}", dims == p2_series(N), str(dims)))
    hv = verma_spec(AlgebraKind.HV, cc, 0, 0)
    ok = normal_order([L(1), L(-1)], "hw", hv) == ModuleVector() and normal_order([I(1), L(-1)], "hw", hv) == ModuleVector()
    out.append(Check("pbw", "L(1)L(-1) and I(1)L(-1) kill the weight-(0,0) vector", ok))
    return out


# ---------------------------------------------------------------------------
# characters


def brute_p2(n: int) -> int:
    """Pairs of partitions with total size ``n``, by explicit enumeration."""
    return sum(len(partitions(a)) * len(partitions(n - a)) for a in range(n + 1))


def suite_characters(N: int = 6, charges=None, seed: int = 0) -> list[Check]:
    M = max(N, 8)
    table = [brute_p2(n) for n in range(9)]
    conv = [sum(partition_count(i) * partition_count(n - i) for i in range(n + 1)) for n in range(9)]
    out = [
        Check("characters", "P2(0..8) = 1,2,5,10,20,36,65,110,185 (enumeration oracle)", tuple(table) == P2_TABLE, str(table)),
        Check("characters", "convolution P2 agrees with enumeration", conv == table and p2_series(8) == table),
    ]
    for p in (1, 2, 3):
        out.append(Check("characters", f"telescoping identity sum q^(ip)(1-q^p) P2 = P2, p={p}, N={M}", telescoping_holds(p, M)))
    return out


# ---------------------------------------------------------------------------
# Verma modules


def singular_grid(cc: CentralCharges, hs, N: int) -> list[Check]:
    out = []
    for p in (1, 2, 3):
        for sign, label in ((-1, "minus"), (1, "plus")):
            for h in hs:
                spec = HighestWeightSpec.hv(cc, h, (1 + sign * p) * cc.c_LI)
                dims = [len(find_singular(spec, n)) for n in range(1, N + 1)]
                expected = [1 if n % p == 0 else 0 for n in range(1, N + 1)]
                out.append(Check("verma", f"HV singular levels, p={p} {label}, h={format_rational(h)}", dims == expected, f"dims {dims}"))
    for h in hs:
        hi = random_rational(random.Random(str(h)), 13, 11) + gmpy2.mpq(1, 101)
        spec = HighestWeightSpec.hv(cc, h, hi)
        if classify(spec).verma_reducible:
            continue
        dims = [len(find_singular(spec, n)) for n in range(1, N + 1)]
        out.append(Check("verma", f"HV typical control h={format_rational(h)}, h_I={format_rational(hi)} has no singular vectors", not any(dims), f"dims {dims}"))
    return out


def w22_grid(cc: CentralCharges, hs, N: int) -> list[Check]:
    out = []
    for p in (1, 2, 3):
        hW = (1 - p * p) * cc.c_W / 24
        for h in hs[:1]:
            spec = HighestWeightSpec.w22(cc, h, hW)
            V = verma(spec)
            sing = find_singular(spec, p)
            w_only = [m for m in V.basis(p) if not m.l]
            wsing = singular_space(V, p, columns=w_only)
            earlier = [len(find_singular(spec, n)) for n in range(1, p)]
            out.append(Check(
                "verma",
                f"W22 h_W=(1-p^2)c_W/24 singular at level p={p} in C[W(-1),...]v, h={format_rational(h)}",
                bool(sing) and len(wsing) == 1 and not any(earlier),
                f"{len(sing)} singular, {len(wsing)} W-only",
            ))
    spec = HighestWeightSpec.w22(cc, hs[0], gmpy2.mpq(5, 3) * cc.c_LI**2 + gmpy2.mpq(1, 7))
    if not classify(spec).verma_reducible:
        dims = [len(find_singular(spec, n)) for n in range(1, N + 1)]
        out.append(Check("verma", "W22 typical control has no singular vectors", not any(dims), f"dims {dims}"))
    return out


def suite_verma(N: int = 6, charges=None, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    out: list[Check] = []
    sets = charges or charge_sets()
    cc = sets[0]
    hs = random_typical_h(rng, cc)
    out += singular_grid(cc, hs, N)
    out += w22_grid(cc, hs, min(N, 5))

    # level-one singular vector, coefficient for coefficient
    for c in sets:
        for h in hs:
            spec = HighestWeightSpec.hv(c, h, 0)
            V = verma(spec)
            hw = ModuleVector.basis_vector(V.spec.hw())
            expected = V.apply(L(-1), hw) + V.apply(I(-1), hw) * (h / c.c_LI)
            got = find_singular(spec, 1)
            out.append(Check("verma", f"u'_1 = (L(-1) + h/c_LI I(-1)) hw, h={format_rational(h)}, c_LI={format_rational(c.c_LI)}", got == [expected], spec.label()))
    for c in sets:
        ok = []
        for r in (1, 2, 3, 4):
            spec = v_r_minus_spec(r, c)
            V = verma(spec)
            v = v_r_minus(r, c)
            ok.append(is_singular(V, v) and find_singular(spec, r) == [v.normalized()])
        out.append(Check("verma", f"v_r^- product is singular for r=1..4, c_LI={format_rational(c.c_LI)}", all(ok), str(ok)))

    # Gram matrices at level one
    for _ in range(5):
        h, x = random_rational(rng), random_rational(rng)
        g = gram_matrix(HighestWeightSpec.w22(cc, h, x), 1).matrix.dense()
        out.append(Check("verma", f"W22 level-1 Gram = [[0,2h_W],[2h_W,2h]] at ({format_rational(h)},{format_rational(x)})", g == [[0, 2 * x], [2 * x, 2 * h]], str(g)))
        g = gram_matrix(HighestWeightSpec.hv(cc, h, x), 1).matrix.dense()
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        want = x * (x - 2 * cc.c_LI)
        out.append(Check("verma", f"HV level-1 Gram det = h_I(h_I - 2c_LI) at ({format_rational(h)},{format_rational(x)})", det == want, f"det {format_rational(det)}"))

    # irreducible dimensions from the pairing against the character formulas
    M = min(N, 5)
    for spec in (
        HighestWeightSpec.hv(cc, hs[0], gmpy2.mpq(1, 3)),
        HighestWeightSpec.hv(cc, hs[0], 0),
        HighestWeightSpec.hv(cc, hs[1], -cc.c_LI),
        HighestWeightSpec.hv(cc, 0, 0),
        HighestWeightSpec.w22(cc, 0, 0),
        HighestWeightSpec.w22(cc, -1, 0),
    ):
        rep = classify(spec)
        want = hv_irr_character(M, rep.p) if spec.kind is AlgebraKind.HV else w22_irr_character(M, rep.p, rep.r)
        got = irr_graded_dims(spec, M)
        out.append(Check("verma", f"irreducible dims of {spec.label()} match the character ({rep.classification.value})", got == want, str(got)))

    cos = find_cosingular(HighestWeightSpec.w22(cc, 0, 0), 1)
    V = verma(HighestWeightSpec.w22(cc, 0, 0))
    out.append(Check("verma", "W22(0,0): cosingular vector at level 1 is L(-1) hw", [V.format(v) for v in cos] == ["L(-1) hw"], str([V.format(v) for v in cos])))
    return out


# ---------------------------------------------------------------------------
# embedding


def suite_embedding(N: int = 6, charges=None, seed: int = 0) -> list[Check]:
    rng = random.Random(seed + 1)
    out: list[Check] = []
    sets = charges or charge_sets()
    for cc in sets:
        host = verma(HighestWeightSpec.hv(cc, random_rational(rng), random_rational(rng)))
        rep = verify_w22_relations(host, N)
        out.append(Check("embedding", f"W(2,2) relations on {host.name} levels <= {N}", rep.passed, f"{rep.checked} checks"))
        bad = verify_w22_relations(host, min(N, 4), c_W=cc.c_W + 1, max_failures=1)
        w = bad.failures[0].relation if bad.failures else "none"
        out.append(Check("embedding", f"perturbed c_W+1 is detected on {host.name}", not bad.passed and bool(bad.failures), f"witness {w}"))
    cc = sets[0]
    for hi in (gmpy2.mpq(1, 3), gmpy2.mpq(-2)):
        spec = HighestWeightSpec.hv(cc, "1/5", hi)
        V = verma(spec)
        hw = ModuleVector.basis_vector(V.spec.hw())
        ok = PsiAction(V).w(0, hw) == hw * (hi * (hi - 2 * cc.c_LI))
        out.append(Check("embedding", f"W(0) hw = h_I(h_I - 2c_LI) hw at h_I={format_rational(hi)}", ok))
    M = N
    hs = random_typical_h(rng, cc, 2)
    for spec in (HighestWeightSpec.hv(cc, hs[0], gmpy2.mpq(1, 3)), HighestWeightSpec.hv(cc, 0, 2 * cc.c_LI), HighestWeightSpec.hv(cc, 0, 0)):
        b = branch(spec, M)
        out.append(Check("embedding", f"branching of L^{spec.label()} over W(2,2), N={M} ({b.atypicality.classification.value})", b.passed, f"sub {b.sub_dims}, quotient {b.quotient_dims}, non-split level {b.nonsplit_level}"))
    for p in (1, 2):
        for h in hs:
            d = verma_branch_decomposition(h, p, cc, M)
            out.append(Check("embedding", f"V^H(h,(1-p)c_LI) splits into W(2,2) irreducibles, p={p}, h={format_rational(h)}, N={M}", d.passed, f"closure dims {[x[: min(4, M + 1)] for x in d.closure_dims]}..."))
    for spec in (HighestWeightSpec.hv(cc, hs[0], gmpy2.mpq(1, 3)), HighestWeightSpec.hv(cc, 0, 2 * cc.c_LI), HighestWeightSpec.hv(cc, 1, 0)):
        d = contragredient_check(spec, min(M, 5))
        out.append(Check("embedding", f"L^{spec.label()} and its contragredient have equal dims", d.passed, str(d.dims)))
    return out


# ---------------------------------------------------------------------------
# screening


def suite_screening(N: int = 6, charges=None, seed: int = 0) -> list[Check]:
    rng = random.Random(seed + 2)
    out: list[Check] = []
    sets = charges or charge_sets()
    for cc in sets:
        tag = f"c_L={format_rational(cc.c_L)}, c_LI={format_rational(cc.c_LI)}"
        s = screening(cc, N)
        U = s.target
        vv = lambda w: vacuum_vector(w, cc, N)  # noqa: E731
        u_dims = s.U.dims(3)
        out.append(Check("screening", f"dims U(0..3) = 2,3,8,15, {tag}", u_dims == [2, 3, 8, 15], str(u_dims)))
        want = [(p2_series(N)[n] - (p2_series(N)[n - 1] if n else 0)) + p2_series(N)[n] for n in range(N + 1)]
        out.append(Check("screening", f"dims U(m) = P2(m) - P2(m-1) + P2(m), m <= {N}", s.U.dims(N) == want))
        out.append(Check("screening", "(L(-1) + I(-1)/c_LI) v0 is singular in the induced module", s.U.relation_is_singular()))
        v0 = U.reduce(s.U.base(Which.S0))
        w2 = PsiAction(s.vacuum).w(-2, vv([]))
        examples = {
            "S1(0) 1 = 0": s.apply("S1", 0, vv([])) == ModuleVector(),
            "S1(0) I(-1)1 = -v0": s.apply("S1", 0, vv([I(-1)])) == -v0,
            "S1(0) L(-2)1 = 0": s.apply("S1", 0, vv([L(-2)])) == ModuleVector(),
            "S1(0) W(-2)1 = 0": s.apply("S1", 0, w2) == ModuleVector(),
            "S0(0) = 0 on the vacuum": all(not s.apply_mono(Which.S0, 0, m) for n in range(N + 1) for m in s.vacuum.quotient_basis(n)),
        }
        for name, ok in examples.items():
            out.append(Check("screening", f"{name}, {tag}", ok))
        K = min(N, 4)
        rep = verify_screening_commutators(cc, K)
        for fam in STATED_FAMILIES + DERIVED_FAMILIES:
            fails = [f for f in rep.failures if f.family == fam]
            detail = f"{rep.checked.get(fam, 0)} columns" + (f", witness n={fails[0].n} m={fails[0].m} at {fails[0].column}" if fails else "")
            out.append(Check("screening", f"{fam} on vacuum levels <= {K}, {tag}", rep.family_passed(fam), detail))
        sr = screening_report(cc, N)
        for c in sr.certificates:
            out.append(Check("screening", f"{c.name}, {tag}", c.passed, c.detail))
        bad = 0
        tried = 0
        while tried < 40:
            w = [rng.choice((L, I))(rng.randint(-3, 2)) for _ in range(rng.randint(1, 5))]
            nv = normal_order(w, "hw", s.vacuum.spec)
            if any(lvl > min(N, 5) for lvl in nv.levels()):
                continue
            tried += 1
            nv = s.vacuum.reduce(nv)
            for m in (-1, 0, 1):
                if U.reduce(s.apply_word("S1", m, w) - s.apply("S1", m, nv)):
                    bad += 1
        out.append(Check("screening", f"word-order evaluation agrees with PBW evaluation (40 random words), {tag}", not bad, f"{bad} mismatches"))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "brackets": suite_brackets,
    "pbw": suite_pbw,
    "characters": suite_characters,
    "verma": suite_verma,
    "embedding": suite_embedding,
    "screening": suite_screening,
}


def run_suite(name: str, N: int = 6, charges=None, seed: int = 0) -> list[Check]:
    """Run one named suite, or every suite for ``"all"``."""
    if name == "all":
        out: list[Check] = []
        for fn in SUITES.values():
            out += fn(N, charges, seed)
        return out
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(['all', *SUITES])}") from None
    return fn(N, charges, seed)
