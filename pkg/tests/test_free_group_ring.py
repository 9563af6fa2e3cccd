from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentwist.free_group_ring import (
    PANTS,
    ClassCombo,
    ConjClass,
    GroupWord,
    RingElement,
    UnorientedClass,
    WordSyntaxError,
    class_projection,
    coproduct_product,
    cyclic_reduce,
    format_letters,
    mul_words,
    parse_letters,
    primitive_root,
    reduce_word,
    ring_hopf,
    word_ops,
)

letters = st.sampled_from([1, -1, 2, -2, 3, -3, 4, -4])
raw_words = st.lists(letters, max_size=12).map(tuple)
words = raw_words.map(reduce_word)


def gw(text):
    return GroupWord.parse(text)


def test_word_ops_examples():
    assert word_ops(gw("a1"), gw("A1"), "mul").letters == ()
    assert str(word_ops(gw("a1 b1"), None, "power", 2)) == "a1 b1 a1 b1"
    assert str(word_ops(gw("a1 b1 A1"), None, "inverse")) == "a1 B1 A1"


def test_empty_word_prints_as_one():
    assert format_letters(()) == "1"
    assert GroupWord.parse("1").letters == ()


def test_parse_errors_and_alphabets():
    assert parse_letters("r1 R4") == ((1, -4), PANTS)
    with pytest.raises(WordSyntaxError):
        parse_letters("a1 r2")
    with pytest.raises(WordSyntaxError):
        parse_letters("c3")


def test_hopf_examples():
    a1 = RingElement.word((1,))
    assert ring_hopf(a1 - RingElement.one(), "augmentation") == 0
    assert ring_hopf(a1, "coproduct") == {((1,), (1,)): 1}
    assert ring_hopf(RingElement.word((1, 2), 3), "antipode") == RingElement.word((-2, -1), 3)


def test_class_examples():
    assert class_projection(gw("a1 b1 A1")) == ClassCombo.single(gw("b1"))
    assert UnorientedClass.of(gw("a1")) == UnorientedClass.of(gw("A1"))
    assert ConjClass(()).is_trivial()


@given(words)
def test_only_trivial_class_is_its_own_reverse(w):
    # in a free group no nontrivial element is conjugate to its inverse
    u = UnorientedClass(w)
    assert u.palindromic == u.is_trivial()


@given(raw_words, raw_words, raw_words)
def test_reduction_is_confluent(x, y, z):
    whole = reduce_word(x + y + z)
    assert mul_words(mul_words(x, y), z) == whole
    assert mul_words(x, mul_words(y, z)) == whole


@given(words, st.integers(min_value=0, max_value=12))
def test_class_projection_rotation_invariant(w, k):
    if not w:
        return
    k %= len(w)
    assert class_projection(w) == class_projection(w[k:] + w[:k])


@given(words)
def test_primitive_root(w):
    c = cyclic_reduce(w)
    root, n = primitive_root(c)
    if c:
        assert root * n == c


ring_elements = st.dictionaries(words, st.integers(min_value=-3, max_value=3), max_size=5).map(RingElement)


@given(ring_elements, ring_elements)
def test_coproduct_is_multiplicative(x, y):
    assert (x * y).coproduct() == coproduct_product(x.coproduct(), y.coproduct())


def test_coproduct_cancellation_case():
    x = RingElement.word((1,)) - RingElement.word((2,))
    assert (x * x).coproduct() == coproduct_product(x.coproduct(), x.coproduct())
