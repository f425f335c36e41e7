import random

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hvw22 import I, L, W, make_charges
from hvw22.embedding import PsiAction
from hvw22.pbw import ModuleVector, normal_order
from hvw22.screening import (
    SOperator,
    Which,
    build_ext_module,
    kernel_dims,
    s_apply,
    screening,
    screening_report,
    vacuum_vector,
    verify_screening_commutators,
    w_closure_of_vacuum,
)

from strategies import charge_sets

CC = make_charges(1, 1)
CHARGES = [make_charges(1, 1), make_charges("1/2", "2/3"), make_charges(-3, "5/7")]


@pytest.fixture(scope="module")
def ctx():
    return screening(CC, 5)


def v0(ctx):
    return ctx.target.reduce(ctx.U.base(Which.S0))


@pytest.mark.parametrize("cc", CHARGES)
def test_module_u_dims(cc):
    U = build_ext_module(cc, 4)
    assert U.dims(3) == [2, 3, 8, 15]
    p2 = [1, 2, 5, 10, 20]
    assert U.dims() == [(p2[m] - (p2[m - 1] if m else 0)) + p2[m] for m in range(5)]
    assert U.relation_is_singular()


def test_s1_examples(ctx):
    one = vacuum_vector([], CC, 5)
    assert s_apply(Which.S1, 0, one, ctx) == ModuleVector()
    assert s_apply("S1", 0, vacuum_vector([I(-1)], CC, 5), ctx) == -v0(ctx)
    assert s_apply("S1", 0, vacuum_vector([L(-2)], CC, 5), ctx) == ModuleVector()
    w2 = PsiAction(ctx.vacuum).w(-2, one)
    assert s_apply("S1", 0, w2, ctx) == ModuleVector()


def test_w_minus_two_terms_cancel(ctx):
    # -2 I(-1) v0 from I(-1)^2 against +2 I(-1) v0 from 2 c_LI I(-2)
    a = s_apply("S1", 0, vacuum_vector([I(-1), I(-1)], CC, 5), ctx)
    b = s_apply("S1", 0, vacuum_vector([I(-2)], CC, 5), ctx) * (2 * CC.c_LI)
    assert a == -b and a


def test_base_values(ctx):
    one = vacuum_vector([], CC, 5)
    U = ctx.target
    assert s_apply("S0", -1, one, ctx) == v0(ctx)
    v1 = U.reduce(ctx.U.base(Which.S1))
    assert s_apply("S1", -3, one, ctx) == U.apply(L(-1), U.apply(L(-1), v1)) * gmpy2.mpq(1, 2)
    assert all(s_apply(w, m, one, ctx) == ModuleVector() for w in Which for m in range(0, 3))


def test_s0_zero_vanishes(ctx):
    vac = ctx.vacuum
    assert all(not ctx.apply_mono(Which.S0, 0, m) for n in range(6) for m in vac.quotient_basis(n))


def test_level_shift(ctx):
    x = vacuum_vector([I(-1), L(-2)], CC, 5)
    for m in (-2, -1, 0, 1):
        img = s_apply("S1", m, x, ctx)
        assert img.levels() <= {3 - m - 1}


def test_s_operator_wrapper(ctx):
    op = SOperator(Which.S1, 0, ctx)
    assert op(vacuum_vector([I(-1)], CC, 5)) == -v0(ctx)
    assert str(op) == "S1(0)"
    with pytest.raises(ValueError):
        Which.parse("S2")


@pytest.mark.parametrize("cc", CHARGES)
def test_kernel_dims(cc):
    assert kernel_dims(cc, 5) == [1, 0, 2, 2, 5, 6]
    assert w_closure_of_vacuum(cc, 5).dims == [1, 0, 2, 2, 5, 6]


def test_i_minus_one_not_in_kernel(ctx):
    assert s_apply("S1", 0, vacuum_vector([I(-1)], CC, 5), ctx)


@pytest.mark.parametrize("cc", CHARGES)
def test_commutators(cc):
    rep = verify_screening_commutators(cc, 3)
    assert rep.passed, rep.failures[:2]
    assert set(rep.checked) == {
        "[L(n),S0(m)] = -m S0(n+m)",
        "[L(n),S1(m)] = -m S1(n+m)",
        "[W(n),S0(m)] = 0",
        "[W(n),S1(m)] = 2m c_LI S0(n+m)",
        "[I(n),S0(m)] = 0",
        "[I(n),S1(m)] = S0(n+m)",
    }


def test_specific_commutators(ctx):
    vac, U = ctx.vacuum, ctx.target
    psi_v, psi_u = PsiAction(vac), PsiAction(U)
    for n in range(4):
        for m in vac.quotient_basis(n):
            x = ModuleVector.basis_vector(m)
            # [W(1), S1(0)] = 0
            assert psi_u.apply(W(1), ctx.apply("S1", 0, x)) == ctx.apply("S1", 0, psi_v.apply(W(1), x))
            # [L(1), S1(-1)] = S1(0)
            lhs = U.apply(L(1), ctx.apply("S1", -1, x)) - ctx.apply("S1", -1, vac.apply(L(1), x))
            assert U.reduce(lhs - ctx.apply("S1", 0, x)) == ModuleVector()


def test_wrong_rule_is_detected(monkeypatch):
    """Dropping the derived [I, S_1] term breaks the W(2,2) commutator family."""
    import hvw22.screening as scr

    def pull(self, which, m, a, rest_image, out):
        out.iadd(self.target.apply(a, rest_image(which, m)))
        if a.family is L(0).family and m:
            out.iadd(rest_image(which, a.index + m), m)
        return out

    monkeypatch.setattr(scr.Screening, "_pull", pull)
    monkeypatch.setattr(scr, "_screenings", {})
    rep = verify_screening_commutators(make_charges(7, 3), 2)
    assert not rep.family_passed("[W(n),S1(m)] = 2m c_LI S0(n+m)")


@settings(max_examples=30)
@given(st.lists(st.tuples(st.sampled_from(["L", "I"]), st.integers(-3, 2)), max_size=5), st.sampled_from(["S0", "S1"]), st.integers(-2, 1))
def test_confluence(ctx, raw, which, m):
    word = [L(k) if f == "L" else I(k) for f, k in raw]
    nv = normal_order(word, "hw", ctx.vacuum.spec)
    if any(lvl > 5 for lvl in nv.levels()):
        return
    nv = ctx.vacuum.reduce(nv)
    assert ctx.target.reduce(ctx.apply_word(which, m, word) - ctx.apply(which, m, nv)) == ModuleVector()


def test_confluence_commuting_orders(ctx):
    rng = random.Random(7)
    for _ in range(40):
        xs = [-rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        if -sum(xs) > 5:
            continue
        a = [I(k) for k in xs] + [L(-1)]
        b = [I(k) for k in reversed(xs)] + [L(-1)]
        for m in (-1, 0):
            assert ctx.apply_word("S1", m, a) == ctx.apply_word("S1", m, b)


def test_report_certificates():
    r = screening_report(CC, 5)
    assert r.passed, [c for c in r.certificates if not c.passed]
    assert r.kernel_dims == r.closure_dims == r.character == [1, 0, 2, 2, 5, 6]
    assert r.ranks == [0, 1, 1, 3, 5, 10]
