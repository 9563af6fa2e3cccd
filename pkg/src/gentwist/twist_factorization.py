"""Approximating boundary-fixing automorphisms by products of twist powers.

Stage 0 matches the action on H with transvections.  A transvection by
c = v/m (v integral) is induced by t_{1/(2m^2), C} for any curve C with
[C] = v, because the degree-0 symbol of r sigma((log C)^2) is
h -> 2r omega([C], h)[C] and squares to zero.  Stage n >= 1 reads the
leading Jacobi diagram of the residual, writes it through glued integral
Lie elements, and cancels it with twists along realizing curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm
from typing import Dict, List, Sequence, Tuple

from .exact_series import format_rational, parse_rational
from .expansion import Expansion, TruncatedAutomorphism, exponential_expansion, make_symplectic
from .free_group_ring import (
    SURFACE,
    Word,
    commutator,
    format_letters,
    mul_words,
    parse_letters,
    power_word,
)
from .jacobi_diagrams import DiagramCombo, glue, glue_planar, lyndon_tree, reduce
from .tensor_lie import LieElement, _acc, lyndon_words, omega_form


class FactorizationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# symplectic linear algebra on H (column vectors in the basis A1 B1 A2 B2 ...)


def omega_vec(u: Sequence, v: Sequence) -> Fraction:
    total = Fraction(0)
    for i in range(0, len(u), 2):
        total += Fraction(u[i]) * v[i + 1] - Fraction(u[i + 1]) * v[i]
    return total


def transvection_matrix(c: Sequence, a=1) -> List[List[Fraction]]:
    """Matrix of h -> h + a omega(c, h) c."""
    n = len(c)
    M = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for j in range(n):
        e = [0] * n
        e[j] = 1
        w = Fraction(a) * omega_vec(c, e)
        for i in range(n):
            M[i][j] += w * c[i]
    return M


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def mat_vec(A, v):
    return [sum((A[i][k] * v[k] for k in range(len(v))), Fraction(0)) for i in range(len(A))]


def is_symplectic_matrix(M) -> bool:
    n = len(M)
    cols = [[M[i][j] for i in range(n)] for j in range(n)]
    for i in range(n):
        for j in range(n):
            if omega_vec(cols[i], cols[j]) != omega_form(i, j):
                return False
    return True


def _apply_transvection(M, c, a):
    return mat_mul(transvection_matrix(c, a), M)


def _move(u, v, fixed_ok, W):
    """Rational transvections (a, c), c in span W, taking u to v."""
    if u == v:
        return []
    w_uv = omega_vec(u, v)
    if w_uv != 0:
        c = [x - y for x, y in zip(v, u)]
        return [(1 / omega_vec(v, u), c)]
    # go through an intermediate vector w with omega(u,w), omega(w,v) nonzero
    for w in _candidates(W):
        if omega_vec(u, w) != 0 and omega_vec(w, v) != 0 and fixed_ok(w):
            return _move(u, w, fixed_ok, W) + _move(w, v, fixed_ok, W)
    raise FactorizationError("no intermediate vector found")


def _candidates(W):
    yield from W
    for i in range(len(W)):
        for j in range(len(W)):
            if i != j:
                for t in (1, 2, -1):
                    yield [x + t * y for x, y in zip(W[i], W[j])]


def rational_transvections(M) -> List[Tuple[Fraction, List[Fraction]]]:
    """(a_i, c_i) with M = prod_i (h -> h + a_i omega(c_i, h) c_i)."""
    n = len(M)
    if not is_symplectic_matrix(M):
        raise FactorizationError("matrix does not preserve omega")
    cur = [[Fraction(x) for x in row] for row in M]
    steps: List[Tuple[Fraction, List[Fraction]]] = []
    basis = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]

    def record(a, c):
        nonlocal cur
        steps.append((a, c))
        cur = _apply_transvection(cur, c, a)

    for k in range(n // 2):
        eA, eB = basis[2 * k], basis[2 * k + 1]
        W = basis[2 * k:]
        u = [cur[i][2 * k] for i in range(n)]
        for a, c in _move(u, eA, lambda w: True, W):
            record(a, c)
        v = [cur[i][2 * k + 1] for i in range(n)]
        if v != eB:
            if omega_vec(v, eB) != 0:
                c = [x - y for x, y in zip(eB, v)]
                record(1 / omega_vec(eB, v), c)
            else:
                w = [x + y for x, y in zip(eA, eB)]
                record(1 / omega_vec(w, v), [x - y for x, y in zip(w, v)])
                v = [cur[i][2 * k + 1] for i in range(n)]
                record(1 / omega_vec(eB, v), [x - y for x, y in zip(eB, v)])
    if cur != basis_matrix(n):
        raise FactorizationError("symplectic reduction did not reach the identity")
    # T_k ... T_1 M = 1  =>  M = T_1^-1 ... T_k^-1; c and -c give the same map
    return [(-a, _positive(c)) for a, c in steps]


def _positive(c):
    lead = next(x for x in c if x)
    return c if lead > 0 else [-x for x in c]


def basis_matrix(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _is_three_squares(n: int) -> bool:
    while n and n % 4 == 0:
        n //= 4
    return n % 8 != 7


def four_squares(n: int) -> Tuple[int, ...]:
    """Nonzero integers whose squares sum to n (at most four)."""
    if n == 0:
        return ()
    for x in range(isqrt(n), 0, -1):
        r = n - x * x
        if r == 0:
            return (x,)
        if not _is_three_squares(r):
            continue
        for y in range(isqrt(r), 0, -1):
            r2 = r - y * y
            if r2 == 0:
                return (x, y)
            for z in range(isqrt(r2), 0, -1):
                w2 = r2 - z * z
                w = isqrt(w2)
                if w * w == w2:
                    return (x, y, z, w) if w else (x, y, z)
    raise FactorizationError(f"no four-square decomposition of {n}")


def unit_transvections(M) -> List[Tuple[int, List[Fraction]]]:
    """(s, c) with s = +-1 and M = prod (h -> h + s omega(c,h) c).

    A rational transvection with |a| = pq/q^2 and pq = sum x_k^2 is the
    commuting product of the unit ones along (x_k/q) c.
    """
    out = []
    for a, c in rational_transvections(M):
        p, q = abs(a.numerator), a.denominator
        s = 1 if a > 0 else -1
        for x in four_squares(p * q):
            out.append((s, [Fraction(x, q) * y for y in c]))
    return out


def _partner(c):
    """d with omega(c, d) = 1."""
    n = len(c)
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        w = omega_vec(c, e)
        if w:
            return [x / w for x in e]
    raise FactorizationError("zero vector has no partner")


def symplectic_factor(M) -> List[List[Fraction]]:
    """Vectors c_1..c_p with prod (h -> h + omega(c_i,h) c_i) = M exactly.

    Inverse transvections are rewritten through T_c^-1 = T_d (T_c T_d)^5 with
    omega(c, d) = 1, which holds because (T_c T_d)^6 = 1.
    """
    out: List[List[Fraction]] = []
    for s, c in unit_transvections(M):
        if s > 0:
            out.append(c)
        else:
            d = _partner(c)
            out.append(d)
            out.extend([c, d] * 5)
    return out


def product_of_transvections(cs, n) -> List[List[Fraction]]:
    M = basis_matrix(n)
    for c in cs:
        M = mat_mul(M, transvection_matrix(c))
    return M


# ---------------------------------------------------------------------------
# realizing Lie elements by words


def _realize_lyndon(w: Tuple[int, ...]) -> Word:
    t = lyndon_tree(w)
    return _realize_tree(t)


def _realize_tree(t) -> Word:
    if isinstance(t, int):
        return (t + 1,)
    return commutator(_realize_tree(t[0]), _realize_tree(t[1]))


def realize_lie_word(x: LieElement) -> Word:
    """A word in Gamma_k whose leading term is exactly the integral element x."""
    degrees = {len(w) for w in x.coeffs}
    if len(degrees) > 1:
        raise FactorizationError("input must be homogeneous")
    out: Word = ()
    for w in sorted(x.coeffs, key=lambda w: (len(w), w)):
        c = Fraction(x.coeffs[w])
        if c.denominator != 1:
            raise FactorizationError("Lie element is not integral")
        out = mul_words(out, power_word(_realize_lyndon(w), int(c)))
    return out


def homology_word(v: Sequence[int]) -> Word:
    """A closed curve (as a word) with homology class v."""
    out: Word = ()
    for i, n in enumerate(v):
        out = mul_words(out, power_word((i + 1,), int(n)))
    return out


# ---------------------------------------------------------------------------
# leading-term decomposition


@dataclass(frozen=True)
class EvenPiece:
    r: Fraction
    x: LieElement


@dataclass(frozen=True)
class OddPiece:
    r: Fraction
    x: LieElement
    y: LieElement


def _lyndon_pairs(q, a, b):
    for u in lyndon_words(q, a):
        for w in lyndon_words(q, b):
            if a == b and w < u:
                continue
            yield u, w


def _solve_in_span(target: Dict, generators: List[Tuple[object, Dict]]) -> Dict:
    """Coefficients expressing target as a combination of the generators."""
    echelon: Dict = {}
    for label, vec in generators:
        vec = dict(vec)
        comb = {label: Fraction(1)}
        vec, comb = _reduce(echelon, vec, comb)
        if vec:
            p = min(vec, key=repr)
            f = vec[p]
            echelon[p] = ({k: c / f for k, c in vec.items()}, {k: c / f for k, c in comb.items()})
    rest, comb = _reduce(echelon, dict(target), {})
    if rest:
        raise FactorizationError("target is not in the span of glued Lie elements")
    return {k: -c for k, c in comb.items() if c}


def _reduce(echelon, vec, comb):
    changed = True
    while changed:
        changed = False
        for p in list(vec):
            if p in echelon and p in vec:
                f = vec[p]
                ev, ec = echelon[p]
                for k, c in ev.items():
                    _acc(vec, k, -f * c)
                for k, c in ec.items():
                    _acc(comb, k, -f * c)
                changed = True
    return vec, comb


def decompose_leading(T: DiagramCombo, n: int):
    """Even n = 2m: [EvenPiece]; odd n = 2m+1: [OddPiece] (see module doc)."""
    q = T.q
    target = T.parts.get(n, {})
    if not target:
        return []
    m = n // 2
    a, b = m + 1, (m + 1 if n % 2 == 0 else m + 2)
    gens = []
    for u, w in _lyndon_pairs(q, a, b):
        vec = reduce([(1, glue_planar(lyndon_tree(u), lyndon_tree(w)))], q).parts.get(n, {})
        if vec:
            gens.append(((u, w), vec))
    coeffs = _solve_in_span(target, gens)
    if n % 2:
        return [OddPiece(c / 2, LieElement(q, {u: Fraction(1)}), LieElement(q, {w: Fraction(1)}))
                for (u, w), c in sorted(coeffs.items())]
    squares: Dict[Tuple, Fraction] = {}
    for (u, w), c in sorted(coeffs.items()):
        if u == w:
            _acc(squares, ((u, 1),), c)
        else:
            # x--y = 1/2 [(x+y)--(x+y) - x--x - y--y]
            _acc(squares, ((u, 1), (w, 1)), c / 2)
            _acc(squares, ((u, 1),), -c / 2)
            _acc(squares, ((w, 1),), -c / 2)
    return [EvenPiece(c, LieElement(q, dict(k))) for k, c in sorted(squares.items()) if c]


def recompose(pieces, q: int) -> DiagramCombo:
    total = DiagramCombo(q, {})
    for p in pieces:
        if isinstance(p, EvenPiece):
            total = total + glue(p.x, p.x, q).scale(p.r)
        else:
            total = total + glue(p.x, p.y, q).scale(2 * p.r)
    return total


# ---------------------------------------------------------------------------
# twist words and the factorization


@dataclass(frozen=True)
class TwistWord:
    """Factors (r, curve word), composed left to right: t_1 o t_2 o ..."""

    factors: Tuple[Tuple[Fraction, Word], ...] = ()

    def __add__(self, other):
        return TwistWord(self.factors + other.factors)

    def evaluate(self, S, N: int) -> TruncatedAutomorphism:
        from .twist_engine import generalized_twist
        u = TruncatedAutomorphism.identity(S.genus, N)
        cache: Dict = {}
        for r, w in self.factors:
            key = (r, w)
            if key not in cache:
                cache[key] = generalized_twist(S, w, r, N)
            u = u.compose(cache[key])
        return u

    def __str__(self):
        return "\n".join(f"r={format_rational(r)} curve={format_letters(w)}" for r, w in self.factors)

    @classmethod
    def parse(cls, text: str) -> "TwistWord":
        out = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            try:
                rpart, cpart = line.split(" curve=")
                r = parse_rational(rpart.removeprefix("r="))
                w, _ = parse_letters(cpart, SURFACE)
            except ValueError as exc:
                raise FactorizationError(f"line {lineno}: {exc}") from None
            out.append((r, w))
        return cls(tuple(out))


@dataclass
class FactorizationReport:
    genus: int
    N: int
    target: int
    stages: List[Tuple[int, str]] = field(default_factory=list)
    residual_degree: int = -1

    def __str__(self):
        lines = [f"genus\t{self.genus}", f"trunc\t{self.N}", f"target\t{self.target}"]
        for n, lead in self.stages:
            lines.append(f"stage {n}\t{lead}")
        lines.append(f"residual_degree\t{self.residual_degree}")
        return "\n".join(lines)


def stage_zero_word(M) -> TwistWord:
    """Twists inducing M on H: one t_{+-1/(2m^2), C} per unit transvection."""
    factors = []
    for s, c in unit_transvections(M):
        m = lcm(*[Fraction(x).denominator for x in c])
        v = [int(x * m) for x in c]
        factors.append((Fraction(s, 2 * m * m), homology_word(v)))
    return TwistWord(tuple(factors))


def stage_word(pieces) -> TwistWord:
    factors = []
    for p in pieces:
        C = realize_lie_word(p.x)
        if isinstance(p, EvenPiece):
            factors.append((p.r, C))
        else:
            D = mul_words(realize_lie_word(p.y), C)
            factors.append((-p.r, C))
            factors.append((p.r, D))
    return TwistWord(tuple(factors))


def approximate_by_twists(S, u: TruncatedAutomorphism, target: int,
                          theta: Expansion | None = None, check: bool = True):
    """TwistWord v with v^-1 o u in the Johnson filtration term target + 1."""
    from .twist_engine import johnson_degree, structure_checks, derivation_log
    from .jacobi_diagrams import xi_inverse
    N, g = u.N, u.genus
    if target >= N - 1:
        raise FactorizationError("target must be below N - 1")
    if check:
        rep = structure_checks(S, u)
        if not (rep.fixes_zeta and rep.preserves_eta and rep.hopf):
            raise FactorizationError(f"input is not in the generalized mapping class group: {rep}")
    theta = make_symplectic(exponential_expansion(g, N)) if theta is None else theta
    report = FactorizationReport(g, N, target)
    word = stage_zero_word(u.degree_one_matrix())
    v = word.evaluate(S, N)
    residual = v.inverse().compose(u)
    if johnson_degree(residual) < 1:
        raise FactorizationError("stage 0 did not match the action on H")
    report.stages.append((0, f"{len(word.factors)} transvection twists"))
    for n in range(1, target + 1):
        jd = johnson_degree(residual)
        if jd >= n + 1:
            report.stages.append((n, "0"))
            continue
        if jd < n:
            raise FactorizationError(f"stage {n}: residual degree {jd} did not improve")
        delta = derivation_log(residual, theta).degree_part(n)
        lead = xi_inverse(delta, g, n)
        pieces = decompose_leading(lead, n)
        step = stage_word(pieces)
        word = word + step
        v = v.compose(step.evaluate(S, N))
        residual = v.inverse().compose(u)
        report.stages.append((n, str(lead)))
        if johnson_degree(residual) < n + 1:
            raise FactorizationError(f"stage {n}: residual still has degree {johnson_degree(residual)}")
    report.residual_degree = johnson_degree(residual)
    return word, report
