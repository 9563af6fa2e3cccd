from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gentwist.exact_series import TruncatedSeries, named_series
from gentwist.free_group_ring import PANTS, UnorientedClass, reduce_word
from gentwist.skein_shadow import (
    ModuleElement,
    SPrimeElement,
    ShadowError,
    TraceRep,
    chebyshev_polys,
    chebyshev_trace_check,
    closed_form_matrix,
    congruence_target,
    direct_twist_image,
    figure_eight_display,
    figure_eight_report,
    figure_eight_sigma,
    kernel_reduce,
    leibniz_bracket,
    module_action,
    listed_rewrites,
    replay,
    sprime_ops,
    unoriented_closure,
)
from gentwist.surface_loops import build_surface

S1 = build_surface(1)
S2 = build_surface(2)

letters2 = st.sampled_from([1, 2, 3, 4, -1, -2, -3, -4])
loops2 = st.lists(letters2, min_size=1, max_size=3).map(lambda w: reduce_word(tuple(w))).filter(bool)


def u(w):
    return UnorientedClass(tuple(w))


def test_trivial_class_is_two():
    assert SPrimeElement.of(()) == SPrimeElement.constant(2)
    assert SPrimeElement.of((), (1,)) == SPrimeElement.of((1,), coeff=2)


def test_unoriented_class_ignores_orientation():
    assert SPrimeElement.of((1, 2)) == SPrimeElement.of((-2, -1))


def test_bracket_a_b_genus_one():
    br = unoriented_closure(S1, u((1,)), u((2,)))
    assert br == SPrimeElement.of((1, 2)) - SPrimeElement.of((1, -2))


@given(loops2)
def test_bracket_with_itself_vanishes(w):
    assert unoriented_closure(S2, u(w), u(w)).is_zero()


@given(loops2, loops2)
def test_bracket_antisymmetric(x, y):
    assert unoriented_closure(S2, u(x), u(y)) == -unoriented_closure(S2, u(y), u(x))


@given(loops2, loops2, loops2)
def test_leibniz_bracket_jacobi(x, y, z):
    X, Y, Z = (SPrimeElement.of(w) for w in (x, y, z))
    br = lambda p, q: leibniz_bracket(S2, p, q)
    total = br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))
    assert total.is_zero()


@given(loops2, loops2, loops2)
def test_leibniz_rule(x, y, z):
    X, Y, Z = (SPrimeElement.of(w) for w in (x, y, z))
    lhs = leibniz_bracket(S2, X, Y * Z)
    rhs = leibniz_bracket(S2, X, Y) * Z + Y * leibniz_bracket(S2, X, Z)
    assert lhs == rhs


@given(loops2, loops2, st.lists(letters2, max_size=3))
def test_module_action_is_lie(x, y, path):
    X, Y = SPrimeElement.of(x), SPrimeElement.of(y)
    E = ModuleElement.path(tuple(path), 1)
    act = lambda W, e: module_action(S2, W, e)
    lhs = act(X, act(Y, E)) - act(Y, act(X, E))
    assert lhs == act(leibniz_bracket(S2, X, Y), E)


def test_sprime_ops_dispatch():
    x, y = SPrimeElement.of((1,)), SPrimeElement.of((2,))
    assert sprime_ops(x, y, "mul") == SPrimeElement.of((1,), (2,))
    assert sprime_ops(x, y, "leibniz_bracket") == unoriented_closure(S1, u((1,)), u((2,)))
    with pytest.raises(ShadowError):
        sprime_ops(x, y, "wedge")


def test_reduce_class_relation():
    e = SPrimeElement.of((1, 2)) + SPrimeElement.of((-1, 2))
    res = kernel_reduce(e)
    assert res.value == SPrimeElement.of((1,), (2,))
    assert res.status == "normal_form" and len(res.log) == 1


def test_reduce_zero_and_kernel_element():
    assert kernel_reduce(SPrimeElement()).is_zero
    rel = SPrimeElement.of((1, 3)) + SPrimeElement.of((-1, 3)) - SPrimeElement.of((1,), (3,))
    assert kernel_reduce(rel).is_zero


def test_reduce_path_relation():
    e = ModuleElement.path((1, 2)) + ModuleElement.path((-1, 2)) - ModuleElement({((u((1,)),), (2,)): 1})
    assert kernel_reduce(e).is_zero


@given(st.lists(st.tuples(loops2, st.integers(-3, 3)), min_size=1, max_size=3))
def test_replay_reproduces_reduction(pairs):
    e = SPrimeElement()
    for w, c in pairs:
        e = e + SPrimeElement.of(w, coeff=c)
    res = kernel_reduce(e)
    seq = replay(e, res.log)
    assert seq[-1] == res.value
    for before, after, step in zip(seq, seq[1:], res.log):
        assert before - after == step.element(e.alphabet).scale(step.coeff)


def test_chebyshev_polys_small():
    p = chebyshev_polys(3)
    assert p[0] == {0: 2}
    assert p[2] == {2: 1, 0: -2}
    assert p[3] == {3: 1, 1: -3}


@pytest.mark.parametrize("order", [1, 2, 4])
def test_chebyshev_trace_check(order):
    assert chebyshev_trace_check(order).all()


def test_figure_eight_sigma_display():
    assert figure_eight_sigma() == figure_eight_display()


def test_figure_eight_congruence_by_listed_steps():
    diff = figure_eight_sigma() - congruence_target()
    assert not diff.is_zero()
    assert replay(diff, listed_rewrites())[-1].is_zero()


@pytest.mark.parametrize("order", [0, 1, 2])
def test_figure_eight_report(order):
    assert figure_eight_report(order).all()


def test_figure_eight_report_order_four():
    rep = figure_eight_report(4)
    assert rep.all(), str(rep)


def test_figure_eight_report_rejects_large_order():
    with pytest.raises(ShadowError):
        figure_eight_report(5)


def test_closed_form_detects_wrong_chi():
    order = 3
    K = order + 1
    ends = ("0", "1")
    direct = ModuleElement.from_ring(direct_twist_image(order, ends), ends)
    tr = TraceRep.seeded(K, 1)
    cache = {}
    want = tr.module(direct, cache).key()
    assert closed_form_matrix(tr, cache).key() == want
    chi = named_series("chi", K, base=2)
    bent = chi + TruncatedSeries(chi.var, chi.base, chi.order, {0: Fraction(1, 7)})
    assert closed_form_matrix(tr, cache, chi_series=bent).key() != want


def test_pants_alphabet_elements():
    e = ModuleElement.path("r1")
    assert e.alphabet == PANTS and e.ends == ("0", "1")


def _pants_word(text):
    from gentwist.free_group_ring import parse_letters
    return parse_letters(text, PANTS)[0]


def test_pants_path_relation_example():
    r3 = UnorientedClass(_pants_word("r3"), PANTS)
    e = (ModuleElement.path("r1 r3") + ModuleElement.path("r1 R3")
         - ModuleElement({((r3,), _pants_word("r1")): 1}, PANTS, ("0", "1")))
    assert kernel_reduce(e).is_zero


def test_pants_action_product_rule():
    from gentwist.surface_loops import build_pants
    P = build_pants()
    r3 = UnorientedClass(_pants_word("r3"), PANTS)
    y = ModuleElement.path("r1")
    single = module_action(P, SPrimeElement({(r3,): 1}, PANTS), y)
    square = module_action(P, SPrimeElement({(r3, r3): 1}, PANTS), y)
    assert not single.is_zero()
    assert square == single.lmul(SPrimeElement({(r3,): 2}, PANTS))
