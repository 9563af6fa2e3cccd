import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentwist.acceptance import random_symplectic
from gentwist.expansion import TruncatedAutomorphism, exponential_expansion, gamma_leading, make_symplectic
from gentwist.free_group_ring import commutator, mul_words
from gentwist.jacobi_diagrams import DiagramCombo, diagram_space, glue
from gentwist.surface_loops import build_surface
from gentwist.tensor_lie import LieElement
from gentwist.twist_engine import classical_twist_automorphism, generalized_twist, johnson_degree
from gentwist.twist_factorization import (
    FactorizationError,
    OddPiece,
    TwistWord,
    approximate_by_twists,
    basis_matrix,
    decompose_leading,
    four_squares,
    is_symplectic_matrix,
    product_of_transvections,
    rational_transvections,
    realize_lie_word,
    recompose,
    symplectic_factor,
    transvection_matrix,
    unit_transvections,
)

S1, S2 = build_surface(1), build_surface(2)


def test_factor_identity_and_single():
    assert symplectic_factor(basis_matrix(4)) == []
    M = transvection_matrix([1, 0])
    cs = symplectic_factor(M)
    assert cs == [[1, 0]]


@pytest.mark.parametrize("seed", range(12))
def test_factor_roundtrip(seed):
    rng = random.Random(seed)
    g = 1 + seed % 3
    M = random_symplectic(g, rng)
    assert is_symplectic_matrix(M)
    assert product_of_transvections(symplectic_factor(M), 2 * g) == M
    prod = basis_matrix(2 * g)
    for a, c in rational_transvections(M):
        prod = [[sum(x * y for x, y in zip(row, col)) for col in zip(*transvection_matrix(c, a))] for row in prod]
    assert prod == M
    assert all(s in (1, -1) for s, _ in unit_transvections(M))


@given(st.integers(min_value=0, max_value=5000))
def test_four_squares(n):
    xs = four_squares(n)
    assert len(xs) <= 4 and sum(x * x for x in xs) == n


def test_realize_lie_word():
    assert realize_lie_word(LieElement(2, {(0, 1): 1})) == (1, 2, -1, -2)
    assert realize_lie_word(LieElement(2, {(0,): 2})) == (1, 1)
    th = exponential_expansion(2, 5)
    x = LieElement(4, {(0, 1, 2): 1})
    w = realize_lie_word(x)
    k, lead = gamma_leading(w, th)
    assert (k, lead.coeffs) == (3, x.coeffs)
    with pytest.raises(FactorizationError):
        realize_lie_word(LieElement(2, {(0,): F(1, 2)}))


def test_decompose_even_polarization():
    x, y = LieElement(4, {(0, 1): 1}), LieElement(4, {(2, 3): 1})
    T = glue(x, y, 4)
    pieces = decompose_leading(T, 2)
    assert recompose(pieces, 4) == T
    assert decompose_leading(DiagramCombo(4, {}), 2) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_decompose_random_combos(n):
    rng = random.Random(n)
    for q in (2, 4):
        basis = diagram_space(q, n).basis
        if not basis:
            continue
        T = DiagramCombo(q, {n: {b: F(rng.randint(-3, 3), rng.randint(1, 2)) for b in rng.sample(basis, min(4, len(basis)))}})
        pieces = decompose_leading(T, n)
        assert recompose(pieces, q) == T
        if n % 2:
            assert all(isinstance(p, OddPiece) for p in pieces)


def test_twist_word_text_roundtrip():
    w = TwistWord(((F(1, 3), (1, -2)), (F(-2, 5), ())))
    assert TwistWord.parse(str(w)) == w


def test_evaluation_is_homomorphic():
    a = TwistWord(((F(1, 3), (1,)),))
    b = TwistWord(((F(1, 2), (1, 4)), (F(-1, 2), (2,))))
    assert (a + b).evaluate(S2, 4) == a.evaluate(S2, 4).compose(b.evaluate(S2, 4))


def test_identity_factorizes_to_empty_word():
    word, rep = approximate_by_twists(S2, TruncatedAutomorphism.identity(2, 5), 3)
    assert word.factors == ()
    assert rep.residual_degree == 4


def test_classical_twist_to_target_two():
    u = classical_twist_automorphism(S1, (1,), 5)
    word, rep = approximate_by_twists(S1, u, 2)
    assert rep.residual_degree >= 3


def test_product_of_rational_twists_to_target_three():
    N = 5
    u = TwistWord(((F(1, 3), (1,)), (F(1, 2), commutator((1,), (2,))))).evaluate(S2, N)
    word, rep = approximate_by_twists(S2, u, 3)
    residual = word.evaluate(S2, N).inverse().compose(u)
    assert rep.residual_degree >= 4
    assert johnson_degree(residual) == rep.residual_degree


def test_odd_stage_one():
    # the leading term sits in odd diagram degree 1
    N = 5
    C, D = (1,), mul_words(commutator((3,), (4,)), (1,))
    u = generalized_twist(S2, C, F(1, 2), N).inverse().compose(generalized_twist(S2, D, F(1, 2), N))
    assert johnson_degree(u) == 1
    word, rep = approximate_by_twists(S2, u, 2)
    assert rep.residual_degree >= 3
    assert rep.stages[1][1] != "0"


def test_rejects_non_mapping_class():
    bad = TruncatedAutomorphism.from_word_images(2, 5, [(1, 3), (2,), (3,), (4,)])
    with pytest.raises(FactorizationError):
        approximate_by_twists(S2, bad, 2)
    with pytest.raises(FactorizationError):
        approximate_by_twists(S2, TruncatedAutomorphism.identity(2, 4), 3)
