import random
from fractions import Fraction as F

import pytest

from gentwist.jacobi_diagrams import (
    DiagramCombo,
    bracket,
    der_omega_dimension,
    diagram_space,
    diagram_string,
    glue,
    glue_and_bracket,
    reduce,
    reduce_combo,
    xi,
    xi_inverse,
    xi_rank,
)
from gentwist.tensor_lie import (
    LieElement,
    TensorElement,
    check_symplectic,
    derivation_bracket,
    derivation_from_hl,
)


def sample(q, d, rng, k=3):
    basis = diagram_space(q, d).basis
    picks = rng.sample(basis, min(k, len(basis)))
    return DiagramCombo(q, {d: {b: F(rng.randint(-3, 3)) for b in picks}})


def lie(q, coeffs):
    return LieElement(q, coeffs)


def test_as_relation():
    x = reduce([(1, (0, ((0, 1), 1)))], 2)
    y = reduce([(1, (0, (1, (0, 1))))], 2)
    assert not x.is_zero()
    assert x == -y


def test_multilinearity():
    mixed = reduce([(1, (0, ({0: 1, 1: 1}, (0, 1))))], 2)
    split = reduce([(1, (0, (0, (0, 1)))), (1, (0, (1, (0, 1))))], 2)
    assert mixed == split


def test_ihx():
    a, b, c, r = 0, 1, 2, 3
    total = reduce([(1, (r, ((a, b), c))), (1, (r, ((b, c), a))), (1, (r, ((c, a), b)))], 4)
    assert total.is_zero()


def test_xi_of_strut():
    D = xi(reduce([(1, (0, 1))], 2), 3)
    assert D == derivation_from_hl([TensorElement.letter(3, 1), TensorElement.letter(3, 0)])


def test_xi_respects_as_on_raw_diagrams():
    raw1 = DiagramCombo(2, {1: {(0, ((0, 1), 1)): 1}})
    raw2 = DiagramCombo(2, {1: {(0, (1, (0, 1))): 1}})
    assert (xi(raw1, 4) + xi(raw2, 4)).is_zero()


@pytest.mark.parametrize("q,d", [(2, 0), (2, 2), (4, 0), (4, 1), (4, 2)])
def test_xi_symplectic_and_inverse(q, d):
    rng = random.Random(q * 7 + d)
    for _ in range(3):
        T = sample(q, d, rng)
        D = xi(T, d + 3)
        assert check_symplectic(D, q // 2)
        assert xi_inverse(D, q // 2, d) == T


def test_strut_from_symmetric_tensor():
    D = derivation_from_hl([TensorElement.letter(3, 1), TensorElement.letter(3, 0)])
    assert str(xi_inverse(D, 1, 0)) == "1*(A1—B1)"


@pytest.mark.parametrize("g,d", [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1)])
def test_xi_rank_equals_both_dimensions(g, d):
    q = 2 * g
    assert diagram_space(q, d).dimension == xi_rank(q, d) == der_omega_dimension(q, d)


def test_glue_examples():
    A1, B1 = lie(2, {(0,): 1}), lie(2, {(1,): 1})
    assert str(glue(A1, B1, 2)) == "1*(A1—B1)"
    x = lie(4, {(0, 1): 1, (2,): 2})
    y = lie(4, {(1,): 1, (0, 3): -1})
    s = x + y
    lhs = glue(s, s, 4) - glue(x, x, 4) - glue(y, y, 4)
    assert lhs == glue(x, y, 4).scale(2)
    assert glue(x, y, 4) == glue(y, x, 4)


def test_bracket_transport_and_lie_laws():
    rng = random.Random(5)
    for q in (2, 4):
        for d1, d2, d3 in [(0, 0, 0), (0, 1, 0), (0, 2, 0), (1, 1, 0)] if q == 4 else [(0, 0, 0), (0, 2, 0)]:
            T, U, V = sample(q, d1, rng), sample(q, d2, rng), sample(q, d3, rng)
            N = d1 + d2 + 3
            assert xi(bracket(T, U), N) == derivation_bracket(xi(T, N), xi(U, N))
            assert bracket(T, U) == -bracket(U, T)
            jac = bracket(T, bracket(U, V)) + bracket(U, bracket(V, T)) + bracket(V, bracket(T, U))
            assert jac.is_zero()
            assert glue_and_bracket(T, U, "bracket", q) == bracket(T, U)


def test_reduce_is_projection():
    rng = random.Random(8)
    for d in (0, 1, 2):
        T = sample(4, d, rng, k=6)
        assert reduce_combo(T) == T
        assert reduce_combo(reduce_combo(T)) == reduce_combo(T)


def test_diagram_string():
    assert diagram_string((0, (1, 2))) == "(A1—[B1,A2])"
