"""Fox pairings on free group rings and the twist maps they define.

A pairing is given by its values on pairs of generators.  Everything else
follows from the two Fox rules: in the first variable the pairing expands
along left Fox derivatives, in the second along right Fox derivatives,

    eta(a, b) = sum_{i,j} d_i(a) eta(x_i, x_j) d'_j(b).

so values on inverse generators are never supplied by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Tuple

from .expansion import (
    Expansion,
    TruncatedAutomorphism,
    derivation_from_group_values,
    exp_derivation_automorphism,
    exponential_expansion,
)
from .free_group_ring import SURFACE, GroupWord, RingElement, Word, _add_into, inverse_word, mul_words
from .tensor_lie import TensorElement, tensor_log


class FoxPairingError(ValueError):
    pass


def _ring(x, alphabet=SURFACE) -> RingElement:
    if isinstance(x, RingElement):
        return x
    if isinstance(x, GroupWord):
        return RingElement.word(x)
    return RingElement.word(tuple(x), 1, alphabet)


def left_fox(a: RingElement, i: int) -> RingElement:
    """d_i with d_i(uv) = d_i(u) eps(v) + u d_i(v)."""
    out: Dict[Word, Fraction] = {}
    for w, c in a.terms.items():
        for k, x in enumerate(w):
            if x == i:
                _add_into(out, w[:k], c)
            elif x == -i:
                _add_into(out, w[:k + 1], -c)
    return RingElement(out, a.alphabet)


def right_fox(b: RingElement, j: int) -> RingElement:
    """d'_j with d'_j(uv) = d'_j(u) v + eps(u) d'_j(v)."""
    out: Dict[Word, Fraction] = {}
    for w, c in b.terms.items():
        for k, x in enumerate(w):
            if x == j:
                _add_into(out, w[k + 1:], c)
            elif x == -j:
                _add_into(out, w[k:], -c)
    return RingElement(out, b.alphabet)


@dataclass(frozen=True)
class FoxPairing:
    """Generator table ``table[(i, j)] = eta(x_i, x_j)`` (1-based, positive)."""

    rank: int
    table: Mapping[Tuple[int, int], RingElement]
    alphabet: str = SURFACE

    def __post_init__(self):
        for (i, j) in self.table:
            if not (1 <= i <= self.rank and 1 <= j <= self.rank):
                raise FoxPairingError(f"table entry ({i},{j}) is not a generator pair")

    def value(self, i: int, j: int) -> RingElement:
        return self.table.get((i, j), RingElement.zero(self.alphabet))

    def __call__(self, x, y) -> RingElement:
        return extend_pairing(self, x, y)


def extend_pairing(P: FoxPairing, x, y) -> RingElement:
    x, y = _ring(x, P.alphabet), _ring(y, P.alphabet)
    total = RingElement.zero(P.alphabet)
    lefts = {i: left_fox(x, i) for i in range(1, P.rank + 1)}
    rights = {j: right_fox(y, j) for j in range(1, P.rank + 1)}
    for (i, j), v in P.table.items():
        if lefts[i] and rights[j] and v:
            total = total + lefts[i] * v * rights[j]
    return total


def surface_pairing(S) -> FoxPairing:
    """The homotopy intersection form read off the surface model on generators."""
    from .surface_loops import eta_pairing
    q = S.n_petals
    table = {}
    for i in range(1, q + 1):
        for j in range(1, q + 1):
            v = eta_pairing(S, (i,), (j,))
            if v:
                table[(i, j)] = v
    return FoxPairing(q, table, S.alphabet)


def derived_form(P: FoxPairing, a, b) -> RingElement:
    """sigma_eta(a, b) = sum b' S(eta(a'', b'')') a' eta(a'', b'')''."""
    a, b = _ring(a, P.alphabet), _ring(b, P.alphabet)
    out: Dict[Word, Fraction] = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            e = extend_pairing(P, RingElement.word(u, 1, P.alphabet), RingElement.word(v, 1, P.alphabet))
            for w, cw in e.terms.items():
                _add_into(out, mul_words(v, inverse_word(w), u, w), cu * cv * cw)
    return RingElement(out, P.alphabet)


def homological_form(P: FoxPairing, a, b) -> Fraction:
    a, b = _ring(a, P.alphabet), _ring(b, P.alphabet)
    if a.augmentation() != 0 or b.augmentation() != 0:
        raise FoxPairingError("homological form is defined on the augmentation ideal")
    return extend_pairing(P, a, b).augmentation()


def in_augmentation_power(x, m: int, N: int, genus: int) -> bool:
    """x in I^m, decided through exponential coordinates (needs m <= N)."""
    if m > N:
        raise FoxPairingError("membership beyond the truncation order is undecidable here")
    t = exponential_expansion(genus, N).of_ring(_ring(x))
    return all(not t.parts[d] for d in range(min(m, N)))


# ---------------------------------------------------------------------------
# pairing in tensor coordinates


@lru_cache(maxsize=None)
def _bernoulli_factor(N: int) -> Tuple[Fraction, ...]:
    """Coefficients of t / (e^t - 1)."""
    from .exact_series import TruncatedSeries
    e = TruncatedSeries("t", 0, N + 1, {k: Fraction(1, _fact(k + 1)) for k in range(N + 1)})
    inv = e.inverse()
    return tuple(inv.coefficient(k) for k in range(N))


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _series_in_letter(N: int, letter: int) -> TensorElement:
    coeffs = _bernoulli_factor(N)
    return TensorElement(N, {(letter,) * k: c for k, c in enumerate(coeffs)})


def tensor_fox_left(a: TensorElement, q: int):
    """Coordinates of d_i(a) for the exponential expansion."""
    N = a.N
    out = []
    for i in range(q):
        strip = {w[:-1]: c for w, c in a.terms() if w and w[-1] == i}
        out.append(TensorElement(N, strip) * _series_in_letter(N, i))
    return out


def tensor_fox_right(b: TensorElement, q: int):
    N = b.N
    out = []
    for j in range(q):
        strip = {w[1:]: c for w, c in b.terms() if w and w[0] == j}
        out.append(_series_in_letter(N, j) * TensorElement(N, strip))
    return out


def tensor_pairing(P: FoxPairing, theta: Expansion, a: TensorElement, b: TensorElement) -> TensorElement:
    """The pairing extended by continuity to exponential coordinates."""
    q = P.rank
    lefts = tensor_fox_left(a, q)
    rights = tensor_fox_right(b, q)
    total = TensorElement.zero(a.N)
    for (i, j), v in P.table.items():
        L, R = lefts[i - 1], rights[j - 1]
        if L.is_zero() or R.is_zero():
            continue
        total = total + L * theta.of_ring(v) * R
    return total


# ---------------------------------------------------------------------------
# twist maps


def generic_twist(P: FoxPairing, C, r, N: int) -> TruncatedAutomorphism:
    """t_{r,C} = exp(r sigma_eta((log C)^2)) modulo degree N.

    For a word C one has sigma_eta(C^n, x_k) = n sum_p c_p x_k p^-1 C^n p,
    where eta(C, x_k) = sum_p c_p p, so sigma_eta(f(C), x_k) only needs
    C f'(C) = 2 log C.  The logarithm is then exact in coordinates.
    """
    if P.alphabet != SURFACE or P.rank % 2:
        raise FoxPairingError("twist maps are built in surface coordinates")
    genus = P.rank // 2
    c = C.letters if isinstance(C, GroupWord) else tuple(C)
    r = Fraction(r)
    cw = RingElement.word(c, 1, P.alphabet)
    one = RingElement.one(P.alphabet)
    if homological_form(P, cw - one, cw - one) != 0:
        raise FoxPairingError("isotropy condition fails for this element")
    if not c or r == 0:
        return TruncatedAutomorphism.identity(genus, N)
    theta0 = exponential_expansion(genus, N)
    log_c = theta0.log_of_word(c)
    values = []
    for k in range(1, P.rank + 1):
        v = TensorElement.zero(N)
        for p, cp in extend_pairing(P, cw, RingElement.word((k,), 1, P.alphabet)).terms.items():
            left = theta0.of_word(mul_words((k,), inverse_word(p)))
            v = v + (left * log_c * theta0.of_word(p)).scale(2 * r * cp)
        values.append(v)
    D = derivation_from_group_values(values)
    return exp_derivation_automorphism(genus, D, f"fox-twist r={r} C={c}")
