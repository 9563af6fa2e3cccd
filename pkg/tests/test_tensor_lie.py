from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentwist.tensor_lie import (
    Derivation,
    LieElement,
    TensorElement,
    apply_derivation,
    bch,
    check_symplectic,
    derivation_bracket,
    derivation_from_hl,
    format_tensor,
    is_grouplike,
    is_primitive,
    lyndon_words,
    omega_element,
    parse_tensor,
    tensor_exp,
    tensor_log,
    tensor_ops,
    to_lyndon,
    witt_dimension,
)

N = 5
coeffs = st.integers(min_value=-3, max_value=3)


def letters(q):
    return st.integers(min_value=0, max_value=q - 1)


def tensors(q=2, max_len=4):
    return st.dictionaries(st.lists(letters(q), max_size=max_len).map(tuple), coeffs, max_size=5).map(
        lambda d: TensorElement(N, d))


def lie_elements(q=2, max_deg=4):
    words = [w for d in range(1, max_deg + 1) for w in lyndon_words(q, d)]
    return st.dictionaries(st.sampled_from(words), coeffs.filter(bool), max_size=4).map(
        lambda d: LieElement(q, d))


A = TensorElement.letter(N, 0)
B = TensorElement.letter(N, 1)


def test_truncate_example():
    x = TensorElement.one(N) + A + A * B
    assert x.truncate(2) == TensorElement.one(N) + A


def test_exp_log_examples():
    assert tensor_log(tensor_exp(A)) == A
    assert tensor_exp(TensorElement.zero(N)) == TensorElement.one(N)
    assert tensor_ops(tensor_exp(A + B), None, "is_grouplike")


def test_bch_examples():
    x, y = LieElement(2, {(0,): 1}), LieElement(2, {(1,): 1})
    assert bch(x, LieElement(2, {}), N).coeffs == x.coeffs
    assert not bch(x, x.scale(-1), N).coeffs
    assert bch(x, y, N).degree(2).coeffs == {(0, 1): F(1, 2)}


def test_omega_and_witt():
    assert omega_element(1, N) == B * A - A * B
    assert witt_dimension(2, 3) == 2
    for q in (2, 3, 4):
        for d in range(1, 6):
            assert len(lyndon_words(q, d)) == witt_dimension(q, d)


def test_format_parse_roundtrip():
    x = A * B.scale(F(-3, 6)) + TensorElement.one(N)
    assert parse_tensor(format_tensor(x), N) == x


@given(tensors(), tensors(), tensors())
def test_mul_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(lie_elements())
def test_lyndon_roundtrip(x):
    t = x.to_tensor(N)
    assert is_primitive(t)
    assert to_lyndon(t, 2).coeffs == {w: c for w, c in x.coeffs.items() if len(w) < N}


@given(lie_elements(), lie_elements())
def test_log_of_grouplike_is_primitive(x, y):
    g = tensor_exp(x.to_tensor(N)) * tensor_exp(y.to_tensor(N))
    assert is_grouplike(g)
    assert is_primitive(tensor_log(g))


@given(lie_elements(max_deg=2), lie_elements(max_deg=2), lie_elements(max_deg=2))
def test_bracket_jacobi_antisymmetry(x, y, z):
    a, b, c = (e.to_tensor(N) for e in (x, y, z))
    assert a.bracket(b) == -b.bracket(a)
    assert (a.bracket(b.bracket(c)) + b.bracket(c.bracket(a)) + c.bracket(a.bracket(b))).is_zero()


@given(st.lists(coeffs, min_size=4, max_size=4))
def test_transvection_derivation_symplectic(cs):
    c = TensorElement(N, {(i,): v for i, v in enumerate(cs)})
    # h -> omega(c, h) c corresponds to c (x) c
    hl = [c.scale(v) for v in cs]
    D = derivation_from_hl(hl)
    assert check_symplectic(D, 2)


@given(st.lists(coeffs, min_size=4, max_size=4), tensors(q=4))
def test_square_zero_degree_zero_nilpotent(cs, x):
    c = TensorElement(N, {(i,): v for i, v in enumerate(cs)})
    D = derivation_from_hl([c.scale(v) for v in cs])
    for d in range(N):
        y = x.degree_part(d)
        for _ in range(d + 1):
            y = apply_derivation(D, y)
        assert y.is_zero()


@given(st.integers(0, 2), st.integers(0, 2), st.randoms(use_true_random=False))
def test_bracket_of_symplectic_is_symplectic(d1, d2, rng):
    from gentwist.jacobi_diagrams import DiagramCombo, diagram_space, xi

    def sample(d):
        basis = diagram_space(2, d).basis
        return DiagramCombo(2, {d: {b: F(rng.randint(-3, 3)) for b in basis}})

    M = d1 + d2 + 3
    D1, D2 = xi(sample(d1), M), xi(sample(d2), M)
    assert check_symplectic(D1, 1) and check_symplectic(D2, 1)
    assert check_symplectic(derivation_bracket(D1, D2), 1)
