"""Exact truncated power series over the rationals.

A :class:`TruncatedSeries` is a power series in ``(var - base)`` known up to
(but excluding) degree ``order``.  A :class:`MultiSeries` is the multivariate
analogue in the shifted variables ``X_i - 1``, truncated by total degree.

Every named series used by the skein-side computations is generated here from
its closed formula with exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Mapping, Tuple

Rational = Fraction


class SeriesError(ValueError):
    """Raised for domain or usage errors in series arithmetic."""


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer, accepting a unicode minus sign."""
    cleaned = text.strip().replace("−", "-")
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise SeriesError(f"malformed rational {text!r}") from exc


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _clean(coeffs: Mapping[int, Fraction], order: int) -> Dict[int, Fraction]:
    return {k: Fraction(v) for k, v in coeffs.items() if v != 0 and 0 <= k < order}


@dataclass(frozen=True)
class TruncatedSeries:
    """Series ``sum c_k (var - base)^k`` modulo degree ``order``."""

    var: str
    base: Fraction
    order: int
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 0:
            raise SeriesError("order must be non-negative")
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "coeffs", _clean(self.coeffs, self.order))

    # construction helpers
    @classmethod
    def from_list(cls, var, base, values: Iterable) -> "TruncatedSeries":
        values = list(values)
        return cls(var, base, len(values), {k: Fraction(v) for k, v in enumerate(values)})

    @classmethod
    def constant(cls, var, base, order, value) -> "TruncatedSeries":
        return cls(var, base, order, {0: Fraction(value)})

    @classmethod
    def variable(cls, var, base, order) -> "TruncatedSeries":
        """The shifted variable ``var - base`` itself."""
        return cls(var, base, order, {1: Fraction(1)})

    def coefficient(self, k: int) -> Fraction:
        if k >= self.order:
            raise SeriesError(f"degree {k} is beyond the truncation order {self.order}")
        return self.coeffs.get(k, Fraction(0))

    def as_list(self):
        return [self.coeffs.get(k, Fraction(0)) for k in range(self.order)]

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.var, self.base, min(order, self.order), self.coeffs)

    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise SeriesError("expected a TruncatedSeries")
        if other.var != self.var or other.base != self.base:
            raise SeriesError(
                f"mismatched variables {self.var}@{self.base} and {other.var}@{other.base}"
            )

    # ring structure
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.var, self.base, self.order, other)
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TruncatedSeries(self.var, self.base, order, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.var, self.base, self.order, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries(self.var, self.base, self.order, {k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        out: Dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j < order:
                    out[i + j] = out.get(i + j, 0) + a * b
        return TruncatedSeries(self.var, self.base, order, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries.constant(self.var, self.base, self.order, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs.get(0, 0)
        if c0 == 0:
            raise SeriesError("series with zero constant term is not invertible")
        out = [Fraction(0)] * self.order
        if self.order:
            out[0] = 1 / Fraction(c0)
        for n in range(1, self.order):
            acc = sum((self.coeffs.get(k, 0) * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out[n] = -acc / c0
        return TruncatedSeries.from_list(self.var, self.base, out)

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Quotient, cancelling a common power of the variable if needed.

        When the divisor has valuation ``v`` the numerator must have valuation
        at least ``v``; the result is then known to order ``min(orders) - v``.
        """
        self._check(other)
        v = other.valuation()
        if v is None:
            raise SeriesError("division by zero series")
        if any(k < v for k in self.coeffs):
            raise SeriesError("quotient is not a power series")
        num = TruncatedSeries(self.var, self.base, self.order - v, {k - v: c for k, c in self.coeffs.items()})
        den = TruncatedSeries(self.var, self.base, other.order - v, {k - v: c for k, c in other.coeffs.items()})
        return num * den.inverse()

    def derive(self) -> "TruncatedSeries":
        out = {k - 1: k * c for k, c in self.coeffs.items() if k >= 1}
        return TruncatedSeries(self.var, self.base, max(self.order - 1, 0), out)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Substitute ``inner`` for the shifted variable ``var - base``.

        ``inner`` must have zero constant term; the result lives in the
        variable and base point of ``inner``.
        """
        if inner.coeffs.get(0, 0) != 0:
            raise SeriesError("compose requires an inner series with zero constant term")
        order = inner.order
        result = TruncatedSeries.constant(inner.var, inner.base, order, self.coeffs.get(0, 0))
        power = TruncatedSeries.constant(inner.var, inner.base, order, 1)
        # the inner series raises valuation, so terms past the order vanish
        for k in range(1, min(self.order, order)):
            power = power * inner
            c = self.coeffs.get(k, 0)
            if c:
                result = result + power.scale(c)
        if self.order < order:
            # coefficients of self beyond its own order are unknown
            lowest = (inner.valuation() or order) * self.order
            result = result.truncate(min(order, lowest))
        return result

    def rebase(self, new_base) -> "TruncatedSeries":
        """Re-expand a polynomial (finite) series around another base point.

        Only exact for series whose stored coefficients describe a
        polynomial; the caller is responsible for that.
        """
        shift = Fraction(self.base) - Fraction(new_base)
        out: Dict[int, Fraction] = {}
        for k, c in self.coeffs.items():
            # (y + shift)^k with y = var - new_base
            for j in range(k + 1):
                out[j] = out.get(j, 0) + c * _binom(k, j) * shift ** (k - j)
        return TruncatedSeries(self.var, new_base, self.order, out)

    def format_lines(self):
        return [f"{k} {format_rational(c)}" for k, c in sorted(self.coeffs.items())]


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def series_ring_ops(a: TruncatedSeries, b: TruncatedSeries | None, op: str) -> TruncatedSeries:
    """Dispatch wrapper: ``op`` in ``add``, ``mul``, ``compose``, ``derive``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "compose":
        return a.compose(b)
    if op == "derive":
        return a.derive()
    raise SeriesError(f"unknown series operation {op!r}")


# ---------------------------------------------------------------------------
# named series


def _log_series(order: int, var="x") -> TruncatedSeries:
    # log x in (x - 1)
    return TruncatedSeries(var, 1, order, {n: Fraction((-1) ** (n - 1), n) for n in range(1, order)})


def _log_one_minus(order: int, var: str, base) -> TruncatedSeries:
    # log(1 - s) in s
    return TruncatedSeries(var, base, order, {n: Fraction(-1, n) for n in range(1, order)})


def _even_arccosh_sq(order: int, base) -> TruncatedSeries:
    """-1/4 sum_i i!i!/((i+1)(2i+1)!) (4 - x^2)^{i+1} expanded at base = +-2."""
    base = Fraction(base)
    if base * base != 4:
        raise SeriesError("the (4 - x^2) series only expands around x = 2 or x = -2")
    y = TruncatedSeries.variable("x", base, order)
    x = y + base
    q = (x * x).scale(-1) + 4  # 4 - x^2, valuation 1
    total = TruncatedSeries("x", base, order, {})
    power = TruncatedSeries.constant("x", base, order, 1)
    for i in range(order):
        power = power * q
        c = Fraction(factorial(i) ** 2, (i + 1) * factorial(2 * i + 1))
        total = total + power.scale(c)
    return total.scale(Fraction(-1, 4))


def _chi(order: int, base) -> TruncatedSeries:
    """(x/4) sum_i i!i!/(2i+1)! (4 - x^2)^i expanded at base = +-2."""
    base = Fraction(base)
    if base * base != 4:
        raise SeriesError("chi only expands around x = 2 or x = -2")
    y = TruncatedSeries.variable("x", base, order)
    x = y + base
    q = (x * x).scale(-1) + 4
    total = TruncatedSeries("x", base, order, {})
    power = TruncatedSeries.constant("x", base, order, 1)
    for i in range(order):
        c = Fraction(factorial(i) ** 2, factorial(2 * i + 1))
        total = total + power.scale(c)
        power = power * q
    return (x * total).scale(Fraction(1, 4))


def _fraction_parts(order: int):
    # in s = A + 1: -A + A^{-1} and log(-A) = log(1 - s)
    s_var = "A"
    a_inv = named_series("A_inverse", order)
    minus_a = TruncatedSeries(s_var, -1, order, {0: 1, 1: -1})
    numerator = minus_a + a_inv
    log_minus_a = _log_one_minus(order, s_var, -1)
    return numerator, log_minus_a


def cosh_series(order: int, var: str = "u", scale: int = 1) -> TruncatedSeries:
    """cosh(scale * u) in u, from the factorial ratios."""
    return TruncatedSeries(
        var, 0, order,
        {k: Fraction(scale ** k, factorial(k)) for k in range(0, order, 2)},
    )


def arcsinh_series(order: int, var: str = "z") -> TruncatedSeries:
    out = {}
    for n in range(order):
        k = 2 * n + 1
        if k >= order:
            break
        out[k] = Fraction((-1) ** n * factorial(2 * n), 4 ** n * factorial(n) ** 2 * k)
    return TruncatedSeries(var, 0, order, out)


def named_series(name: str, order: int, base=None) -> TruncatedSeries:
    """Return one of the named series truncated at ``order``.

    ``base`` is only meaningful for the even series ``arccosh_sq_neg`` and
    ``chi``, which are polynomials in ``4 - x^2`` termwise and expand around
    either root; the defaults are ``-2`` and ``+2`` respectively.
    """
    if order < 0:
        raise SeriesError("order must be non-negative")
    if name == "log":
        return _log_series(order)
    if name == "L":
        extra = order + 1
        lg = _log_series(extra)
        return (lg * lg).scale(Fraction(1, 2)).truncate(order)
    if name == "arccosh_sq_neg":
        return _even_arccosh_sq(order, -2 if base is None else base)
    if name == "chi":
        return _chi(order, 2 if base is None else base)
    if name == "A_inverse":
        # 1/A = 1/(s - 1) = -sum s^m
        return TruncatedSeries("A", -1, order, {m: -1 for m in range(order)})
    if name == "fraction":
        numerator, log_minus_a = _fraction_parts(order + 1)
        return numerator.divide(log_minus_a.scale(4)).truncate(order)
    if name == "boundary_term":
        numerator, log_minus_a = _fraction_parts(order)
        return numerator * log_minus_a
    if name == "arcsinh_prefactor":
        # ((h/2) / arcsinh(h/2))^2 in h
        z = TruncatedSeries("h", 0, order + 1, {1: Fraction(1, 2)})
        asinh = arcsinh_series(order + 1, "z").compose(z)
        ratio = z.divide(asinh)
        return (ratio * ratio).truncate(order)
    raise SeriesError(f"unknown series name {name!r}")


NAMED_SERIES = ("L", "log", "arccosh_sq_neg", "fraction", "boundary_term", "A_inverse", "chi", "arcsinh_prefactor")


# ---------------------------------------------------------------------------
# multivariate series in the shifted variables X_i - 1


Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class MultiSeries:
    """Series in ``y_i = X_i - 1`` truncated at total degree ``order``."""

    vars: Tuple[str, ...]
    order: int
    coeffs: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.vars)
        clean = {}
        for mono, c in self.coeffs.items():
            if len(mono) != n:
                raise SeriesError("monomial arity does not match the variables")
            if c != 0 and sum(mono) < self.order:
                clean[tuple(mono)] = Fraction(c)
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "coeffs", clean)

    def _check(self, other):
        if self.vars != other.vars:
            raise SeriesError("mismatched variables")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return MultiSeries(self.vars, min(self.order, other.order), out)

    def __neg__(self):
        return MultiSeries(self.vars, self.order, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return MultiSeries(self.vars, self.order, {m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(Fraction(other))
        self._check(other)
        order = min(self.order, other.order)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            d1 = sum(m1)
            for m2, c2 in other.coeffs.items():
                if d1 + sum(m2) < order:
                    m = tuple(a + b for a, b in zip(m1, m2))
                    out[m] = out.get(m, 0) + c1 * c2
        return MultiSeries(self.vars, order, out)

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * len(self.vars), Fraction(0))

    def relabel(self, new_vars, positions) -> "MultiSeries":
        """Embed into ``new_vars``; variable i goes to slot ``positions[i]``."""
        out = {}
        for m, c in self.coeffs.items():
            nm = [0] * len(new_vars)
            for i, e in enumerate(m):
                nm[positions[i]] += e
            out[tuple(nm)] = c
        return MultiSeries(tuple(new_vars), self.order, out)

    def divide_by_difference(self, i: int, j: int) -> "MultiSeries":
        """Exact quotient by ``X_i - X_j`` (equivalently ``y_i - y_j``).

        The remainder (substitute y_i := y_j) must vanish below the order;
        the quotient is known to total degree ``order - 1``.
        """
        remainder: Dict[Monomial, Fraction] = {}
        quotient: Dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            a = m[i]
            rm = list(m)
            rm[i] = 0
            rm[j] += a
            rm = tuple(rm)
            remainder[rm] = remainder.get(rm, 0) + c
            # (y_i^a - y_j^a)/(y_i - y_j) = sum_{k<a} y_i^k y_j^{a-1-k}
            for k in range(a):
                qm = list(m)
                qm[i] = k
                qm[j] += a - 1 - k
                qm = tuple(qm)
                quotient[qm] = quotient.get(qm, 0) + c
        if any(v != 0 for v in remainder.values()):
            raise SeriesError("numerator is not divisible by the variable difference")
        return MultiSeries(self.vars, self.order - 1, quotient)


def lambda_series(n: int, order: int) -> MultiSeries:
    """The series lambda^[n](X_1, ..., X_n) truncated at total degree ``order``."""
    if n < 1:
        raise SeriesError("lambda^[n] needs n >= 1")
    work = order + n - 1
    lg = named_series("L", work)
    current = MultiSeries(("X1",), work, {(k,): c for k, c in lg.coeffs.items()})
    for m in range(1, n):
        names = tuple(f"X{i}" for i in range(1, m + 2))
        first = current.relabel(names, list(range(m)))
        second = current.relabel(names, list(range(1, m + 1)))
        p1 = _product_of_vars(names, range(0, m), current.order)
        p2 = _product_of_vars(names, range(1, m + 1), current.order)
        numerator = p1 * first - p2 * second
        current = numerator.divide_by_difference(0, m)
    return MultiSeries(current.vars, order, current.coeffs)


def _product_of_vars(names, indices, order) -> MultiSeries:
    # prod (1 + y_i)
    result = MultiSeries(names, order, {(0,) * len(names): 1})
    for i in indices:
        mono = [0] * len(names)
        mono[i] = 1
        factor = MultiSeries(names, order, {(0,) * len(names): 1, tuple(mono): 1})
        result = result * factor
    return result
