"""Acceptance criteria, one test per criterion, all exact.

Each test records a PASS/FAIL line that is printed in the terminal summary
(and when the file is run as a script). N = 6 throughout.
"""

import random

import gmpy2
import pytest

from hvw22 import AlgebraKind, HighestWeightSpec, I, L, make_charges
from hvw22.characters import p2_series, telescoping_holds, w22_irr_character
from hvw22.embedding import branch, v_r_minus, v_r_minus_spec, verify_w22_relations, verma_branch_decomposition
from hvw22.invariants import P2_TABLE, antisymmetry_violations, brute_p2, jacobi_violations, random_rational
from hvw22.pbw import ModuleVector
from hvw22.screening import STATED_FAMILIES, Which, kernel_dims, screening, vacuum_vector, verify_screening_commutators, w_closure_of_vacuum
from hvw22.embedding import PsiAction
from hvw22.verma import classify, find_singular, gram_matrix, is_singular, submodule_closure, verma

N = 6
SEED = 20240601
CHARGES = [make_charges(1, 1), make_charges("1/2", "2/3"), make_charges(-3, "5/7")]
RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def hw(V):
    return ModuleVector.basis_vector(V.spec.hw())


def random_charges(rng, count):
    out = []
    while len(out) < count:
        c_li = random_rational(rng)
        if c_li:
            out.append(make_charges(random_rational(rng), c_li))
    return out


def test_criterion_1_brackets():
    bad = 0
    for cc in CHARGES:
        for kind in AlgebraKind:
            bad += len(antisymmetry_violations(kind, cc, 4)) + len(jacobi_violations(kind, cc, 4))
    record(1, "antisymmetry and Jacobi for |index| <= 4, both algebras", bad == 0, f"{bad} violations")


def test_criterion_2_singular_grid():
    rng = random.Random(SEED)
    cc = CHARGES[0]
    problems = []
    hs = [random_rational(rng) for _ in range(3)]
    for p in (1, 2, 3):
        for sign in (1, -1):
            for h in hs:
                spec = HighestWeightSpec.hv(cc, h, (1 + sign * p) * cc.c_LI)
                V = verma(spec)
                dims = [len(find_singular(spec, n)) for n in range(1, N + 1)]
                if dims != [1 if n % p == 0 else 0 for n in range(1, N + 1)]:
                    problems.append(f"{spec.label()} dims {dims}")
                    continue
                # every later singular vector lies in the submodule generated by the level-p one
                up = find_singular(spec, p)[0]
                chain = submodule_closure(V, [up], N)
                for n in range(2 * p, N + 1, p):
                    if not all(chain.contains(v) for v in find_singular(spec, n)):
                        problems.append(f"{spec.label()} level {n} outside the chain")
    for h in hs:
        for hi in (cc.c_LI / 3, gmpy2.mpq(5, 7) * cc.c_LI):
            spec = HighestWeightSpec.hv(cc, h, hi)
            if classify(spec).verma_reducible or any(find_singular(spec, n) for n in range(1, N + 1)):
                problems.append(f"typical control {spec.label()}")
    record(2, "singular vectors at multiples of p only, one new at level p; typical controls empty", not problems, "; ".join(problems[:3]))


def test_criterion_3_example_vectors():
    ok = True
    for cc in CHARGES:
        for h in (gmpy2.mpq(2), gmpy2.mpq(-3, 4), gmpy2.mpq(5, 11)):
            spec = HighestWeightSpec.hv(cc, h, 0)
            V = verma(spec)
            want = V.apply(L(-1), hw(V)) + V.apply(I(-1), hw(V)) * (h / cc.c_LI)
            ok &= find_singular(spec, 1) == [want]
        for r in (1, 2, 3, 4):
            V = verma(v_r_minus_spec(r, cc))
            ok &= is_singular(V, v_r_minus(r, cc))
    record(3, "u'_1 coefficients and v_r^- annihilation for r = 1..4", ok)


def test_criterion_4_gram():
    rng = random.Random(SEED + 4)
    ok = True
    cc = CHARGES[1]
    for _ in range(5):
        h, x = random_rational(rng), random_rational(rng)
        ok &= gram_matrix(HighestWeightSpec.w22(cc, h, x), 1).matrix.dense() == [[0, 2 * x], [2 * x, 2 * h]]
        m = gram_matrix(HighestWeightSpec.hv(cc, h, x), 1).matrix.dense()
        ok &= m[0][0] * m[1][1] - m[0][1] * m[1][0] == x * (x - 2 * cc.c_LI)
    record(4, "level-1 Gram matrix (W22) and determinant (HV) on 5 random weights", ok)


def test_criterion_5_embedding_relations():
    rng = random.Random(SEED + 5)
    ok, detail = True, []
    for cc in random_charges(rng, 3):
        assert cc.c_W == -24 * cc.c_LI**2
        V = verma(HighestWeightSpec.hv(cc, random_rational(rng), random_rational(rng)))
        good = verify_w22_relations(V, N)
        bad = verify_w22_relations(V, N, c_W=cc.c_W + 1, max_failures=1)
        ok &= good.passed and not bad.passed and bool(bad.failures)
        detail.append(f"{good.checked} checks, witness {bad.failures[0].relation if bad.failures else None}")
    record(5, "W(2,2) relations through the embedding on levels <= 6; c_W + 1 fails", ok, "; ".join(detail))


def test_criterion_6_branching():
    cc = CHARGES[0]
    typ = branch(HighestWeightSpec.hv(cc, gmpy2.mpq(1, 3), cc.c_LI / 3), N)
    plus = branch(HighestWeightSpec.hv(cc, 0, 2 * cc.c_LI), N)
    minus = branch(HighestWeightSpec.hv(cc, 0, 0), N)
    ok = typ.passed and not typ.w_singular and typ.host_dims == p2_series(N)
    ok &= plus.passed and plus.host_dims[:6] == [1, 1, 3, 5, 10, 16]
    ok &= plus.quotient_dims[:6] == [1, 0, 2, 2, 5, 6] and plus.sub_dims[:6] == [0, 1, 1, 3, 5, 10]
    ok &= plus.nonsplit_level == 1 and any(c.name.startswith("non-split") and c.passed for c in plus.certificates)
    ok &= minus.passed and minus.sub_dims[:6] == [1, 0, 2, 2, 5, 6] and minus.quotient_dims[:6] == [0, 1, 1, 3, 5, 10]
    ok &= minus.nonsplit_level == 1
    record(6, "branching: typical irreducible, plus and minus non-split sequences", ok, f"plus {plus.quotient_dims}+{plus.sub_dims}")


def test_criterion_7_decomposition():
    rng = random.Random(SEED + 7)
    ok, detail = True, []
    cc = CHARGES[0]
    for p in (1, 2):
        h = random_rational(rng)
        while classify(HighestWeightSpec.hv(cc, h, (1 - p) * cc.c_LI)).atypical:
            h = random_rational(rng)
        d = verma_branch_decomposition(h, p, cc, N)
        sums = [sum(c[n] for c in d.closure_dims) for n in range(N + 1)]
        ok &= d.passed and d.independent and sums == p2_series(N) == d.union_dims
        detail.append(f"p={p} h={h}: {sums}")
    record(7, "typical V^H(h,(1-p)c_LI) is the direct sum of the closures of its chain", ok, "; ".join(detail))


def test_criterion_8_screening():
    cc = CHARGES[0]
    s = screening(cc, 5)
    v0 = s.target.reduce(s.U.base(Which.S0))
    one = vacuum_vector([], cc, 5)
    ok = s.apply("S1", 0, one) == ModuleVector()
    ok &= s.apply("S1", 0, vacuum_vector([I(-1)], cc, 5)) == -v0
    ok &= s.apply("S1", 0, vacuum_vector([L(-2)], cc, 5)) == ModuleVector()
    ok &= s.apply("S1", 0, PsiAction(s.vacuum).w(-2, one)) == ModuleVector()
    rep = verify_screening_commutators(cc, 4)
    ok &= all(rep.family_passed(f) for f in STATED_FAMILIES)
    k = kernel_dims(cc, 5)
    ok &= k == [1, 0, 2, 2, 5, 6] == w_closure_of_vacuum(cc, 5).dims == w22_irr_character(5, 1, 1)
    record(8, "screening examples, four commutator families on levels <= 4, kernel = <1>_W = character", ok, f"kernel {k}")


def test_criterion_9_characters():
    table = [brute_p2(n) for n in range(9)]
    ok = tuple(table) == P2_TABLE and p2_series(8) == table
    ok &= all(telescoping_holds(p, 8) for p in (1, 2, 3))
    record(9, "P2(0..8) by enumeration and convolution; telescoping identity at N = 8", ok, str(table))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
