import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentwist.acceptance import random_loop, random_word
from gentwist.expansion import TruncatedAutomorphism, exponential_expansion
from gentwist.fox_pairing import (
    FoxPairingError,
    derived_form,
    extend_pairing,
    generic_twist,
    homological_form,
    in_augmentation_power,
    surface_pairing,
)
from gentwist.free_group_ring import RingElement, mul_words
from gentwist.surface_loops import build_surface, eta_pairing
from gentwist.twist_engine import classical_twist_automorphism, generalized_twist

S1, S2 = build_surface(1), build_surface(2)
P1, P2 = surface_pairing(S1), surface_pairing(S2)
ONE = RingElement.one()
R = RingElement.word


def aug_power(letter, m):
    x = ONE
    for _ in range(m):
        x = x * (R((letter,)) - ONE)
    return x


def test_unit_pairs_to_zero():
    assert not extend_pairing(P2, ONE, R((1, 2, -3)))


def test_matches_geometric_eta():
    assert P1(R((1,)), R((2,))) == eta_pairing(S1, (1,), (2,))


def test_filtration_example():
    e = extend_pairing(P1, aug_power(1, 3), aug_power(2, 2))
    assert in_augmentation_power(e, 3, 5, 1)


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3), (2, 4)])
def test_filtration_bound(m, n):
    rng = random.Random(m * 10 + n)
    for _ in range(3):
        x = aug_power(rng.randint(1, 4), m) * R(random_word(2, 2, rng))
        y = R(random_word(2, 2, rng)) * aug_power(rng.randint(1, 4), n)
        e = extend_pairing(P2, x, y)
        assert in_augmentation_power(e, max(m + n - 2, 0), 6, 2)


def test_derived_form_vanishes_on_commutators():
    rng = random.Random(1)
    for _ in range(20):
        a, b, c = (random_word(2, rng.randint(0, 4), rng) for _ in range(3))
        comm = R(mul_words(a, b)) - R(mul_words(b, a))
        assert not derived_form(P2, comm, c)
    assert not derived_form(P2, ONE, R((1,)))


def test_homological_form():
    assert homological_form(P1, R((1,)) - ONE, R((2,)) - ONE) == 1
    x = R((1, 2)) - ONE
    assert homological_form(P1, x, x) == 0
    with pytest.raises(FoxPairingError):
        homological_form(P1, R((1,)), ONE)


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.integers(0, 50))
def test_homological_form_bilinear(cs, seed):
    rng = random.Random(seed)
    xs = [R(random_word(2, 3, rng)) - ONE for _ in range(3)]
    a, b, c, d = cs
    lhs = homological_form(P2, xs[0].scale(a) + xs[1].scale(b), xs[2].scale(c + d))
    rhs = sum((homological_form(P2, xs[i], xs[2]) * k * (c + d) for i, k in ((0, a), (1, b))), F(0))
    assert lhs == rhs


def test_trivial_twists():
    assert generic_twist(P1, (), F(1, 2), 4).is_identity()
    assert generic_twist(P1, (1,), 0, 4).is_identity()


@pytest.mark.parametrize("C", [(1,), (2,), (1, 2)])
def test_agrees_with_twist_engine(C):
    u = generic_twist(P1, C, F(1, 2), 5)
    assert u == generalized_twist(S1, C, F(1, 2), 5)
    assert u == classical_twist_automorphism(S1, C, 5)


def test_fixes_curve_and_group_law():
    N = 5
    theta0 = exponential_expansion(2, N)
    for C in [(1, -3, 2), (1, 2, -1, -2)]:
        u = generic_twist(P2, C, F(1, 3), N)
        assert u.of_word(C) == theta0.of_word(C)
        v = generic_twist(P2, C, F(-1, 5), N)
        assert u.compose(v) == generic_twist(P2, C, F(2, 15), N)
        x, y = (2, 3), (-4, 1)
        assert u.of_word(mul_words(x, y)) == u.of_word(x) * u.of_word(y)
