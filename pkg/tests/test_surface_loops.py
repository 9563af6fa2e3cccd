import random
from fractions import Fraction as F

import pytest

from gentwist.acceptance import random_loop, random_word
from gentwist.fox_pairing import derived_form, in_augmentation_power, surface_pairing
from gentwist.free_group_ring import (
    ClassCombo,
    ConjClass,
    RingElement,
    class_projection,
    commutator,
    inverse_word,
    mul_words,
    parse_letters,
    rotations_normal_form,
)
from gentwist.skein_shadow import SIGMA_DISPLAY
from gentwist.surface_loops import (
    apply_substitution,
    build_pants,
    build_surface,
    classical_twist_images,
    classical_twist_word,
    eta_pairing,
    goldman_bracket,
    is_simple,
    pants_endpoints,
    sigma_action,
    zeta_word,
)

S1, S2 = build_surface(1), build_surface(2)
R = RingElement.word


def cls(w):
    return ConjClass(tuple(w))


def test_boundary_word_genus_one():
    assert rotations_normal_form(zeta_word(1)) == rotations_normal_form((1, 2, -1, -2))
    assert S1.boundary_words[0] == cls((1, 2, -1, -2))


def test_euler_characteristic():
    assert S2.euler_characteristic == -3


def test_pants_generators():
    P = build_pants()
    ends = [pants_endpoints((i,)) for i in range(1, 5)]
    assert ends == [("0", "1"), ("0", "2"), ("1", "1"), ("2", "2")]
    assert len(P.boundary_words) == 3


def test_eta_examples():
    assert not eta_pairing(S1, (), (2,))
    assert eta_pairing(S1, (1,), (2,)).augmentation() == 1


def test_eta_filtration_on_squares():
    rng = random.Random(5)
    one = RingElement.one()
    for _ in range(10):
        x1, x2, y1, y2 = (R(random_word(2, rng.randint(1, 3), rng)) - one for _ in range(4))
        e = _eta_ring(S2, x1 * x2, y1 * y2)
        assert in_augmentation_power(e, 2, 4, 2)


def _eta_ring(S, x, y):
    out = RingElement.zero()
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            out = out + eta_pairing(S, u, v).scale(cu * cv)
    return out


def test_sigma_figure_eight_display():
    P = build_pants()
    gamma = ConjClass(parse_letters("r1 r3 R1 r2 R4 R2")[0], "r")
    out = sigma_action(P, gamma, parse_letters("r1")[0], "0", "1")
    # sigma of an unoriented class sums both orientations
    out = out + sigma_action(P, gamma.reverse(), parse_letters("r1")[0], "0", "1")
    expected = RingElement({parse_letters(w)[0]: c for w, c in SIGMA_DISPLAY}, "r")
    assert out == expected


def test_sigma_parallel_copy_is_zero():
    assert not sigma_action(S1, cls((1,)), (1,))


def test_sigma_kills_boundary():
    rng = random.Random(2)
    for g, S in ((1, S1), (2, S2)):
        for _ in range(10):
            assert not sigma_action(S, cls(random_loop(g, 6, rng)), zeta_word(g))


def test_sigma_homotopy_invariance():
    rng = random.Random(3)
    for _ in range(20):
        loop = random_loop(2, 5, rng)
        conj = random_word(2, 2, rng)
        v = random_word(2, 4, rng)
        padded = v + (3, -3)
        base = sigma_action(S2, cls(loop), v)
        assert sigma_action(S2, cls(mul_words(conj, loop, inverse_word(conj))), v) == base
        assert sigma_action(S2, cls(loop), padded) == base


def test_goldman_examples():
    x = cls((1,))
    assert not goldman_bracket(S1, x, x)
    b = goldman_bracket(S1, cls((1,)), cls((2,)))
    assert b in (ClassCombo.single((1, 2)), ClassCombo.single((1, 2), -1))
    assert b == class_projection(sigma_action(S1, cls((1,)), (2,)))


def _bracket_combo(S, x: ClassCombo, y: ClassCombo) -> ClassCombo:
    out = ClassCombo({})
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            out = out + goldman_bracket(S, u, v).scale(cu * cv)
    return out


@pytest.mark.parametrize("g", [1, 2])
def test_goldman_jacobi_and_antisymmetry(g):
    S = build_surface(g)
    trip = [ClassCombo.single(w) for w in ((1,), (2,), (1, 2))]
    if g == 2:
        trip = [ClassCombo.single(w) for w in ((1, 3), (2, -4), (1, 2, 4))]
    a, b, c = trip
    total = (_bracket_combo(S, a, _bracket_combo(S, b, c))
             + _bracket_combo(S, b, _bracket_combo(S, c, a))
             + _bracket_combo(S, c, _bracket_combo(S, a, b)))
    assert not total
    assert _bracket_combo(S, a, b) == -_bracket_combo(S, b, a)


def test_classical_twist_examples():
    assert classical_twist_word(S2, (1,), (3,)).letters == (3,)
    w = classical_twist_word(S1, (1,), (2,)).letters
    assert sorted(w) == [1, 2]
    for C in ((1,), (2,)):
        im = classical_twist_images(S1, C)
        assert apply_substitution(im, zeta_word(1)) == zeta_word(1)


def test_simplicity():
    assert is_simple(S1, (1, 2))
    assert is_simple(S2, commutator((1,), (2,)))
    assert not is_simple(S2, (1, 3, -1, -3, 1))


def test_eta_properties_sampled():
    rng = random.Random(11)
    P2 = surface_pairing(S2)
    for _ in range(100):
        x, y, z = (random_word(2, rng.randint(0, 6), rng) for _ in range(3))
        assert eta_pairing(S2, mul_words(x, y), z) == R(x) * eta_pairing(S2, y, z) + eta_pairing(S2, x, z)
        assert eta_pairing(S2, x, mul_words(y, z)) == eta_pairing(S2, x, y) * R(z) + eta_pairing(S2, x, z)
        loop = random_loop(2, 5, rng)
        assert derived_form(P2, loop, x) == sigma_action(S2, cls(loop), x)
