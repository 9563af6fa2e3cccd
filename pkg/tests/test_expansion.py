import random
from fractions import Fraction as F

import pytest

from gentwist.acceptance import random_word
from gentwist.expansion import (
    ExpansionError,
    TruncatedAutomorphism,
    exponential_expansion,
    gamma_leading,
    is_symplectic,
    make_symplectic,
    transport,
    transport_inverse,
    zeta_word,
)
from gentwist.free_group_ring import RingElement, commutator, inverse_word, mul_words
from gentwist.surface_loops import build_surface
from gentwist.tensor_lie import TensorElement, is_grouplike, omega_element, tensor_exp, tensor_log
from gentwist.twist_engine import classical_twist_automorphism
from gentwist.twist_factorization import transvection_matrix

TH1 = make_symplectic(exponential_expansion(1, 6))
TH2 = make_symplectic(exponential_expansion(2, 6))


def test_exponential_basics():
    th = exponential_expansion(1, 5)
    assert th.of_word((1, -1)) == TensorElement.one(5)
    assert is_grouplike(th.of_word((1,)))
    assert tensor_log(th.of_word(zeta_word(1))).degree_part(2) == -omega_element(1, 5)


@pytest.mark.parametrize("th", [TH1, TH2])
def test_symplectic_expansion(th):
    assert is_symplectic(th)
    assert th.of_word(zeta_word(th.genus)) * tensor_exp(omega_element(th.genus, th.N)) == TensorElement.one(th.N)
    for k in range(th.rank):
        assert th.logs[k].degree_part(1) == TensorElement.letter(th.N, k)
        assert is_grouplike(th.generator_image(k + 1))


def test_make_symplectic_idempotent():
    assert make_symplectic(TH2).logs == TH2.logs


def test_grouplike_and_inverse():
    rng = random.Random(4)
    for _ in range(20):
        w = random_word(2, rng.randint(0, 6), rng)
        x = TH2.of_word(w)
        assert is_grouplike(x)
        assert x * TH2.of_word(inverse_word(w)) == TensorElement.one(6)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_lower_central_series_detection(k):
    rng = random.Random(k)
    for _ in range(5):
        w = random_word(2, 2, rng) or (1,)
        for _ in range(k - 1):
            w = commutator(w, random_word(2, 2, rng) or (2,))
        low = TH2.log_of_word(w).lowest_degree()
        assert low is None or low >= k


def test_transport():
    ident = TruncatedAutomorphism.identity(2, 6)
    assert transport(TH2, ident) == ident
    rng = random.Random(9)
    for _ in range(5):
        x = RingElement({random_word(2, 3, rng): 1, random_word(2, 2, rng): -2})
        t0 = exponential_expansion(2, 6).of_ring(x)
        assert transport_inverse(TH2, transport(TH2, x)) == t0


def test_transported_classical_twist_on_homology():
    S = build_surface(1)
    u = transport(TH1, classical_twist_automorphism(S, (1,), 6))
    assert u.degree_one_matrix() == transvection_matrix([1, 0])


def test_gamma_leading():
    k, lead = gamma_leading((1,), TH2)
    assert (k, lead.coeffs) == (1, {(0,): 1})
    k, lead = gamma_leading(commutator((1,), (2,)), TH2)
    assert (k, lead.coeffs) == (2, {(0, 1): 1})
    conj = mul_words((3, 4), commutator((1,), (2,)), (-4, -3))
    assert gamma_leading(conj, TH2)[0] == 2
    with pytest.raises(ExpansionError):
        gamma_leading((), TH2)
