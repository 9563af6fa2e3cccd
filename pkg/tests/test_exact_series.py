from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentwist.exact_series import (
    SeriesError,
    TruncatedSeries,
    cosh_series,
    format_rational,
    lambda_series,
    named_series,
    parse_rational,
    series_ring_ops,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def coeff_lists(n):
    return st.lists(rationals, min_size=n, max_size=n)


def dense_mul(a, b, n):
    out = [F(0)] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                out[i + j] += x * y
    return out


def test_rational_roundtrip_and_unicode_minus():
    assert parse_rational("−3/6") == F(-1, 2)
    assert format_rational(parse_rational("-3/6")) == "-1/2"
    with pytest.raises(SeriesError):
        parse_rational("1/0")


def test_derive_half_log_square():
    d = named_series("L", 4).derive()
    assert d.as_list() == [0, 1, F(-3, 2)]


def test_compose_with_zero_series_gives_constant():
    f = named_series("fraction", 5)
    zero = TruncatedSeries("t", 0, 5, {})
    assert f.compose(zero).as_list() == [F(1, 2), 0, 0, 0, 0]


def test_log_square():
    lg = named_series("log", 4)
    assert (lg * lg).as_list() == [0, 0, 1, -1]


@pytest.mark.parametrize("name,order,expected", [
    ("arccosh_sq_neg", 3, [0, -1, F(-1, 12)]),
    ("fraction", 3, [F(1, 2), 0, F(1, 12)]),
    ("boundary_term", 4, [0, 0, 2, 2]),
])
def test_named_series_coefficients(name, order, expected):
    assert named_series(name, order).as_list() == expected


def test_base_points():
    assert named_series("arccosh_sq_neg", 3).base == -2
    assert named_series("fraction", 3).base == -1
    assert named_series("chi", 3).base == 2


@pytest.mark.parametrize("order", [2, 5, 9, 17])
def test_arccosh_square_composition(order):
    inner = cosh_series(order, "u").scale(-2) + 2
    out = named_series("arccosh_sq_neg", order).compose(inner)
    expected = {2: F(1)} if order > 2 else {}
    assert out.coeffs == expected


@pytest.mark.parametrize("base", [2, -2])
def test_chi_is_half_derivative(base):
    even = named_series("arccosh_sq_neg", 17, base)
    assert even.derive().scale(F(1, 2)) == named_series("chi", 17, base).truncate(16)


def test_specializations():
    assert named_series("fraction", 1).coefficient(0) == F(1, 2)
    assert named_series("arcsinh_prefactor", 1).coefficient(0) == 1


def test_mismatched_base_rejected():
    with pytest.raises(SeriesError):
        named_series("chi", 3) + named_series("arccosh_sq_neg", 3)


@given(coeff_lists(8), coeff_lists(8))
def test_ring_ops_match_dense_oracle(a, b):
    x = TruncatedSeries.from_list("x", 0, a)
    y = TruncatedSeries.from_list("x", 0, b)
    assert series_ring_ops(x, y, "add").as_list() == [p + q for p, q in zip(a, b)]
    assert series_ring_ops(x, y, "mul").as_list() == dense_mul(a, b, 8)
    assert series_ring_ops(x, None, "derive").as_list() == [k * a[k] for k in range(1, 8)]


@given(coeff_lists(6), coeff_lists(5))
def test_compose_matches_dense_oracle(a, b):
    f = TruncatedSeries.from_list("x", 0, a)
    g = TruncatedSeries.from_list("t", 0, [0] + b)
    total = [F(0)] * 6
    power = [F(1)] + [F(0)] * 5
    for k in range(6):
        total = [s + a[k] * p for s, p in zip(total, power)]
        power = dense_mul(power, [0] + b, 6)
    assert f.compose(g).as_list() == total


def test_lambda_one_is_half_log_square():
    lam = lambda_series(1, 6)
    L = named_series("L", 6)
    assert lam.coeffs == {(k,): c for k, c in L.coeffs.items()}


@pytest.mark.parametrize("n,value", [(1, 0), (2, 0), (3, F(1, 2))])
def test_lambda_at_one(n, value):
    # lambda^[n](1,...,1) is the (n-1)-st divided difference of x L(x) on a
    # collapsed grid, i.e. (x L(x))^{(n-1)}(1) / (n-1)!; for n = 3 that is 1/2
    assert lambda_series(n, 4).constant_term() == value


def _solve(rows, rhs):
    n = len(rows[0])
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    piv_row = 0
    where = [-1] * n
    for col in range(n):
        p = next((r for r in range(piv_row, len(m)) if m[r][col] != 0), None)
        if p is None:
            continue
        m[piv_row], m[p] = m[p], m[piv_row]
        inv = 1 / m[piv_row][col]
        m[piv_row] = [v * inv for v in m[piv_row]]
        for r in range(len(m)):
            if r != piv_row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[piv_row])]
        where[col] = piv_row
        piv_row += 1
    return [m[where[c]][-1] for c in range(n)]


def test_lambda_two_matches_divided_difference_interpolation():
    # the defining quotient evaluated at rational points, then interpolated
    L = named_series("L", 6).as_list()

    def f(y):
        return sum(c * y ** k for k, c in enumerate(L))

    def quotient(y1, y2):
        return ((1 + y1) * f(y1) - (1 + y2) * f(y2)) / (y1 - y2)

    monos = [(i, j) for i in range(6) for j in range(6) if i + j <= 5]
    pts = [(F(i, 2), F(-j, 3) - 1) for i in range(1, 8) for j in range(1, 8)]
    rows = [[x ** i * y ** j for i, j in monos] for x, y in pts]
    sol = dict(zip(monos, _solve(rows, [quotient(x, y) for x, y in pts])))
    lam = lambda_series(2, 4)
    for (i, j), c in sol.items():
        if i + j < 4:
            assert lam.coeffs.get((i, j), 0) == c, (i, j)
