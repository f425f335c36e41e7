import gmpy2
import pytest
from hypothesis import given, settings

from hvw22 import HighestWeightSpec, I, L, W, make_charges
from hvw22.characters import p2_series
from hvw22.embedding import (
    PsiAction,
    branch,
    contragredient_check,
    psi_map,
    v_r_minus,
    v_r_minus_spec,
    verify_w22_relations,
    verma_branch_decomposition,
    w_closure,
    w_mode,
)
from hvw22.pbw import ModuleVector
from hvw22.screening import vacuum_module
from hvw22.verma import find_singular, irr_graded_dims, is_singular, verma

from strategies import charge_sets, rationals

q = gmpy2.mpq
CC = make_charges(1, 1)


def hw(V):
    return ModuleVector.basis_vector(V.spec.hw())


@given(charge_sets, rationals, rationals)
def test_w_zero_on_hw(cc, h, hi):
    V = verma(HighestWeightSpec.hv(cc, h, hi))
    assert w_mode(0, hw(V), V) == hw(V) * (hi * (hi - 2 * cc.c_LI))


@given(charge_sets, rationals, rationals)
def test_w_minus_one_on_hw(cc, h, hi):
    V = verma(HighestWeightSpec.hv(cc, h, hi))
    assert w_mode(-1, hw(V), V) == V.apply(I(-1), hw(V)) * (2 * hi)


@given(charge_sets)
def test_w_minus_two_on_vacuum(cc):
    vac = vacuum_module(cc, 3)
    one = hw(vac)
    want = vac.apply(I(-1), vac.apply(I(-1), one)) + vac.apply(I(-2), one) * (2 * cc.c_LI)
    assert w_mode(-2, one, vac) == want


@settings(max_examples=5)
@given(charge_sets, rationals, rationals)
def test_relations_hold(cc, h, hi):
    rep = verify_w22_relations(verma(HighestWeightSpec.hv(cc, h, hi)), 3)
    assert rep.passed and rep.checked > 0


def test_relations_detect_wrong_c_w():
    V = verma(HighestWeightSpec.hv(CC, q(1, 2), q(1, 3)))
    rep = verify_w22_relations(V, 3, c_W=CC.c_W + 1)
    assert not rep.passed
    assert rep.failures[0].relation.startswith("[L(")


def test_l2_w_minus2_on_hw():
    spec = HighestWeightSpec.hv(CC, q(1, 2), q(1, 3))
    V = verma(spec)
    act = PsiAction(V)
    x = hw(V)
    comm = V.apply(L(2), act.w(-2, x)) - act.w(-2, V.apply(L(2), x))
    assert comm == x * (4 * spec.h_W + CC.c_W / 2)


def test_psi_map():
    target = HighestWeightSpec.hv(CC, 0, 0)
    source = target.to_w22()
    Vw = verma(source)
    V = verma(target)
    assert psi_map(hw(Vw), source, target) == hw(V)
    assert psi_map(Vw.apply(L(-1), hw(Vw)), source, target) == V.apply(L(-1), hw(V))
    assert psi_map(Vw.apply(W(-1), hw(Vw)), source, target) == ModuleVector()
    assert is_singular(V, V.apply(L(-1), hw(V)))
    with pytest.raises(ValueError):
        psi_map(hw(Vw), HighestWeightSpec.w22(CC, 0, 1), target)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("c_LI", ["1", "2/3", "-5/2"])
def test_v_r_minus_is_singular(r, c_LI):
    cc = make_charges(0, c_LI)
    spec = v_r_minus_spec(r, cc)
    V = verma(spec)
    v = v_r_minus(r, cc)
    assert is_singular(V, v)
    assert find_singular(spec, r) == [v.normalized()]


def test_v_1_and_v_2():
    V = verma(v_r_minus_spec(1, CC))
    assert v_r_minus(1, CC) == V.apply(L(-1), hw(V))
    V = verma(v_r_minus_spec(2, CC))
    x = hw(V)
    first = V.apply(L(-1), x) + V.apply(I(-1), x) * q(-1, 2)
    assert v_r_minus(2, CC) == V.apply(L(-1), first) + V.apply(I(-1), first) * q(1, 2)


def test_branch_typical():
    b = branch(HighestWeightSpec.hv(CC, q(1, 3), q(1, 3)), 5)
    assert b.passed and not b.w_singular and b.certificates == []
    assert b.host_dims == p2_series(5)


def test_branch_plus():
    b = branch(HighestWeightSpec.hv(CC, 0, 2), 5)
    assert b.passed
    assert b.host_dims == [1, 1, 3, 5, 10, 16]
    assert b.sub_dims == [0, 1, 1, 3, 5, 10]
    assert b.quotient_dims == [1, 0, 2, 2, 5, 6]
    assert b.nonsplit_level == 1


def test_branch_minus():
    b = branch(HighestWeightSpec.hv(CC, 0, 0), 5)
    assert b.passed
    assert b.sub_dims == [1, 0, 2, 2, 5, 6]
    assert b.quotient_dims == [0, 1, 1, 3, 5, 10]
    assert b.nonsplit_level == 1


def test_branch_rejects_w22():
    with pytest.raises(ValueError):
        branch(HighestWeightSpec.w22(CC, 0, 0), 3)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_contragredient(p):
    h = q(2, 7)
    a = contragredient_check(HighestWeightSpec.hv(CC, h, (1 + p) * CC.c_LI), 5)
    assert a.passed and a.dims == irr_graded_dims(HighestWeightSpec.hv(CC, h, (1 - p) * CC.c_LI), 5)
    assert contragredient_check(HighestWeightSpec.w22(CC, 0, 0), 4).passed
    t = contragredient_check(HighestWeightSpec.hv(CC, h, q(1, 3)), 4)
    assert t.dims == t.dual_dims == p2_series(4)


@pytest.mark.parametrize("p", [1, 2])
def test_decomposition(p):
    d = verma_branch_decomposition(q(1, 3), p, CC, 6)
    assert d.passed and d.independent
    assert d.union_dims == p2_series(6)
    if p == 1:
        assert d.closure_dims[0][:4] == [1, 1, 3, 5]
        assert d.closure_dims[1][:4] == [0, 1, 1, 3]


def test_decomposition_rejects_atypical():
    with pytest.raises(ValueError):
        verma_branch_decomposition(0, 1, CC, 3)


def test_atypical_nesting():
    spec = HighestWeightSpec.hv(CC, 0, 0)
    V = verma(spec)
    big = w_closure(V, [hw(V)], 5)
    small = w_closure(V, [V.apply(L(-1), hw(V))], 5)
    # nested, not direct: the smaller closure sits inside the larger one
    assert all(small.levels[n].issubspace(big.levels[n]) for n in range(6))
    assert any(small.dims)
