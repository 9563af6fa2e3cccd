"""The commutative shadow of the skein picture at A = -1.

Elements of S'(Q||pi||) are polynomials in unoriented classes ||x|| = |x| +
|x^-1| with ||1|| = 2.  The module S'(Q||pi||) (x) Q pi_{.,*} carries the
action characterized by

    sigma(w)(v (x) y) = [w, v] (x) y + v (x) sigma(w)(y)     (w of degree one)
    sigma(w w') = w' sigma(w) + w sigma(w')

and the kernel of the map to the skein module is generated by the two
schemas

    path:   1 (x) (r x r' + r x^-1 r') - ||x|| (x) r r'
    class:  ||x x'|| + ||x^-1 x'|| - ||x|| ||x'||

Equality modulo the kernel is certified by directed rewriting: inverse loop
letters and squares are removed (trace-style reduction), every step logged
as an explicit instance of one of the schemas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact_series import TruncatedSeries, cosh_series, format_rational, named_series
from .free_group_ring import (
    PANTS,
    SURFACE,
    ClassCombo,
    ConjClass,
    GroupWord,
    RingElement,
    UnorientedClass,
    Word,
    _add_into,
    cyclic_reduce,
    format_letters,
    inverse_word,
    mul_words,
    parse_letters,
    primitive_root,
    reduce_word,
)
from .surface_loops import build_pants, build_surface, goldman_bracket, sigma_action

Monomial = Tuple[UnorientedClass, ...]


class ShadowError(ValueError):
    pass


class ClosureError(ShadowError):
    """The Goldman bracket of unoriented classes left the unoriented span."""


def _ckey(c: UnorientedClass):
    return (len(c.letters), [(abs(x), x < 0) for x in c.letters])


def _monomial(classes: Iterable[UnorientedClass]) -> Tuple[Fraction, Monomial]:
    factor = Fraction(1)
    kept = []
    for c in classes:
        if c.is_trivial():
            factor *= 2
        else:
            kept.append(c)
    return factor, tuple(sorted(kept, key=_ckey))


def _unoriented(x, alphabet) -> UnorientedClass:
    if isinstance(x, UnorientedClass):
        return x
    if isinstance(x, (GroupWord, ConjClass)):
        return UnorientedClass(x.letters, x.alphabet)
    if isinstance(x, str):
        w, alpha = parse_letters(x, alphabet)
        return UnorientedClass(w, alpha)
    return UnorientedClass(tuple(x), alphabet)


def _mono_str(m: Monomial) -> str:
    return " ".join(f"||{c}||" for c in m)


# ---------------------------------------------------------------------------
# S'(Q||pi||)


@dataclass(frozen=True)
class SPrimeElement:
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)
    alphabet: str = SURFACE

    def __post_init__(self):
        clean: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            f, key = _monomial(m)
            _add_into(clean, key, Fraction(c) * f)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, c, alphabet=SURFACE) -> "SPrimeElement":
        return cls({(): Fraction(c)}, alphabet)

    @classmethod
    def of(cls, *xs, coeff=1, alphabet=SURFACE) -> "SPrimeElement":
        """The monomial ||x_1|| ... ||x_k|| (words, classes or text)."""
        return cls({tuple(_unoriented(x, alphabet) for x in xs): Fraction(coeff)}, alphabet)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SPrimeElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return SPrimeElement(out, self.alphabet)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SPrimeElement":
        c = Fraction(c)
        return SPrimeElement({k: c * v for k, v in self.terms.items()}, self.alphabet)

    def __mul__(self, other):
        if isinstance(other, ModuleElement):
            return other.lmul(self)
        if not isinstance(other, SPrimeElement):
            return self.scale(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                f, key = _monomial(m1 + m2)
                _add_into(out, key, c1 * c2 * f)
        return SPrimeElement(out, self.alphabet)

    def max_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), [_ckey(x) for x in t[0]])):
            parts.append(f"{format_rational(c)}" + (f"*{_mono_str(m)}" if m else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# S'(Q||pi||) (x) Q pi_{.,*}


@dataclass(frozen=True)
class ModuleElement:
    """Combination of (monomial, path word); ``ends`` fixes groupoid endpoints."""

    terms: Mapping[Tuple[Monomial, Word], Fraction] = field(default_factory=dict)
    alphabet: str = SURFACE
    ends: Optional[Tuple[str, str]] = None

    def __post_init__(self):
        clean: Dict = {}
        for (m, w), c in self.terms.items():
            f, key = _monomial(m)
            _add_into(clean, (key, reduce_word(w)), Fraction(c) * f)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def path(cls, word, coeff=1, alphabet=None, ends=None) -> "ModuleElement":
        if isinstance(word, str):
            word, alphabet = parse_letters(word, alphabet)
        elif isinstance(word, GroupWord):
            word, alphabet = word.letters, word.alphabet
        alphabet = alphabet or SURFACE
        if ends is None and alphabet == PANTS and word:
            from .surface_loops import pants_endpoints
            ends = pants_endpoints(tuple(word))
        return cls({((), tuple(word)): Fraction(coeff)}, alphabet, ends)

    @classmethod
    def from_ring(cls, x: RingElement, ends=None) -> "ModuleElement":
        return cls({((), w): c for w, c in x.terms.items()}, x.alphabet, ends)

    def _new(self, terms) -> "ModuleElement":
        return ModuleElement(terms, self.alphabet, self.ends)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        ends = self.ends or other.ends
        return ModuleElement(out, self.alphabet, ends)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ModuleElement":
        c = Fraction(c)
        return self._new({k: c * v for k, v in self.terms.items()})

    def lmul(self, s: SPrimeElement) -> "ModuleElement":
        out: Dict = {}
        for m1, c1 in s.terms.items():
            for (m2, w), c2 in self.terms.items():
                f, key = _monomial(m1 + m2)
                _add_into(out, (key, w), c1 * c2 * f)
        return self._new(out)

    def rmul_path(self, word: Word) -> "ModuleElement":
        return self._new({(m, mul_words(w, word)): c for (m, w), c in self.terms.items()})

    def lmul_path(self, word: Word) -> "ModuleElement":
        return self._new({(m, mul_words(word, w)): c for (m, w), c in self.terms.items()})

    def ring_part(self) -> RingElement:
        """The part with trivial S' coefficient, as a ring element."""
        return RingElement({w: c for (m, w), c in self.terms.items() if not m}, self.alphabet)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, w), c in sorted(self.terms.items(), key=lambda t: (len(t[0][0]), [_ckey(x) for x in t[0][0]], len(t[0][1]), t[0][1])):
            coef = format_rational(c)
            word = format_letters(w, self.alphabet)
            parts.append(f"{coef}*{_mono_str(m)} (x) {word}" if m else f"{coef}*{word}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# bracket and action


def default_surface(alphabet: str, *elements):
    if alphabet == PANTS:
        return build_pants()
    top = max([1] + [_max_letter(e) for e in elements])
    return build_surface((top + 1) // 2)


def _max_letter(e) -> int:
    best = 0
    if isinstance(e, SPrimeElement):
        for m in e.terms:
            for c in m:
                best = max([best] + [abs(x) for x in c.letters])
    elif isinstance(e, ModuleElement):
        for (m, w) in e.terms:
            for c in m:
                best = max([best] + [abs(x) for x in c.letters])
            best = max([best] + [abs(x) for x in w])
    return best


def unoriented_closure(S, x: UnorientedClass, y: UnorientedClass) -> SPrimeElement:
    """[||x||, ||y||] re-expressed in the span of unoriented classes."""
    br = goldman_bracket(S, x.oriented(), y.oriented())
    out: Dict[Monomial, Fraction] = {}
    seen = set()
    for cls, c in br.terms.items():
        u = UnorientedClass(cls.letters, S.alphabet)
        if u in seen:
            continue
        seen.add(u)
        if u.palindromic:
            # ||u|| = 2|u|
            _add_into(out, (u,), c / 2)
            continue
        other = br.terms.get(cls.reverse(), Fraction(0))
        if other != c:
            raise ClosureError(f"bracket of ||{x}|| and ||{y}|| is not orientation symmetric at |{cls}|")
        _add_into(out, (u,), c)
    return SPrimeElement(out, S.alphabet)


def leibniz_bracket(S, X: SPrimeElement, Y: SPrimeElement) -> SPrimeElement:
    total = SPrimeElement({}, S.alphabet)
    for m1, c1 in X.terms.items():
        for m2, c2 in Y.terms.items():
            for i in range(len(m1)):
                for j in range(len(m2)):
                    rest = SPrimeElement({m1[:i] + m1[i + 1:] + m2[:j] + m2[j + 1:]: c1 * c2}, S.alphabet)
                    total = total + rest * unoriented_closure(S, m1[i], m2[j])
    return total


def _sigma_path(S, x: UnorientedClass, w: Word, ends) -> RingElement:
    start, end = ends if ends else (None, None)
    return sigma_action(S, x.oriented(), RingElement.word(w, 1, S.alphabet), start, end)


def module_action(S, W: SPrimeElement, E: ModuleElement) -> ModuleElement:
    total = ModuleElement({}, E.alphabet, E.ends)
    for m, c in W.terms.items():
        for i, x in enumerate(m):
            cof = SPrimeElement({m[:i] + m[i + 1:]: c}, S.alphabet)
            for (v, y), cv in E.terms.items():
                single = SPrimeElement({(x,): 1}, S.alphabet)
                vpart = leibniz_bracket(S, single, SPrimeElement({v: cv}, S.alphabet))
                piece = ModuleElement.path(y, 1, E.alphabet, E.ends).lmul(vpart)
                ring = _sigma_path(S, x, y, E.ends)
                piece = piece + ModuleElement.from_ring(ring, E.ends).lmul(SPrimeElement({v: cv}, S.alphabet))
                total = total + piece.lmul(cof)
    return total


def sprime_ops(x, y, op: str, surface=None):
    """``mul``, ``leibniz_bracket`` or ``module_action`` on shadow elements."""
    alphabet = x.alphabet
    if op == "mul":
        return x * y
    S = surface or default_surface(alphabet, x, y)
    if op == "leibniz_bracket":
        return leibniz_bracket(S, x, y)
    if op == "module_action":
        return module_action(S, x, y)
    raise ShadowError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# kernel rewriting


def _is_loop_letter(x: int, alphabet: str) -> bool:
    return abs(x) in (3, 4) if alphabet == PANTS else True


@dataclass(frozen=True)
class RewriteStep:
    """One instance of a kernel schema, scaled: e_next = e - coeff * element."""

    schema: str
    coeff: Fraction
    x: Word
    x2: Word = ()
    r: Word = ()
    r2: Word = ()
    cofactor: Monomial = ()
    tail: Optional[Word] = None  # path factor for class relations inside the module

    def element(self, alphabet: str, ends=None):
        cof = SPrimeElement({self.cofactor: 1}, alphabet)
        if self.schema == "path_relation":
            a = mul_words(self.r, self.x, self.r2)
            b = mul_words(self.r, inverse_word(self.x), self.r2)
            base = ModuleElement({((), a): 1, ((), b): 1}, alphabet, ends)
            base = base - ModuleElement({((UnorientedClass(self.x, alphabet),), mul_words(self.r, self.r2)): 1}, alphabet, ends)
            return base.lmul(cof)
        u = lambda w: UnorientedClass(w, alphabet)
        rel = (SPrimeElement.of(u(mul_words(self.x, self.x2)), alphabet=alphabet)
               + SPrimeElement.of(u(mul_words(inverse_word(self.x), self.x2)), alphabet=alphabet)
               - SPrimeElement.of(u(self.x), u(self.x2), alphabet=alphabet))
        rel = rel * cof
        if self.tail is None:
            return rel
        return ModuleElement.path(self.tail, 1, alphabet, ends).lmul(rel)

    def __str__(self):
        def f(w):
            return format_letters(w, SURFACE) if w else "1"
        head = f"{format_rational(self.coeff)} * {self.schema}"
        return head + f" x={self.x} x'={self.x2} r={self.r} r'={self.r2} m={_mono_str(self.cofactor)}"


@dataclass
class ReduceResult:
    value: object
    log: List[RewriteStep]
    status: str  # "zero", "normal_form" or "budget_exhausted"

    @property
    def is_zero(self) -> bool:
        return self.status == "zero"

    @property
    def decided(self) -> bool:
        return self.status != "budget_exhausted"


def _inverse_count(w: Word, alphabet) -> int:
    return sum(1 for x in w if x < 0 and _is_loop_letter(x, alphabet))


def _class_rule(c: UnorientedClass, alphabet: str):
    """(x, x') with ||c|| = ||x x'|| or ||x^-1 x'|| removable; None in normal form."""
    w = c.letters
    root, n = primitive_root(w)
    if n >= 2:
        return root, tuple(root * (n - 1))
    fwd, bwd = w, cyclic_reduce(inverse_word(w))
    cand = min((fwd, bwd), key=lambda v: _inverse_count(v, alphabet))
    k = len(cand)
    for i, x in enumerate(cand):
        if x < 0 and _is_loop_letter(x, alphabet):
            rot = cand[i:] + cand[:i]
            return (-x,), rot[1:]
    for i in range(k):
        x, y = cand[i], cand[(i + 1) % k]
        if x == y and _is_loop_letter(x, alphabet) and k > 1:
            rot = cand[i:] + cand[:i]
            return (x,), rot[1:]
    return None


def _path_rule(w: Word, alphabet: str):
    for i, x in enumerate(w):
        if x < 0 and _is_loop_letter(x, alphabet):
            return w[:i], (-x,), w[i + 1:]
    for i in range(len(w) - 1):
        if w[i] == w[i + 1] and _is_loop_letter(w[i], alphabet):
            return w[:i], (w[i],), w[i + 1:]
    return None


def _module_key(k):
    m, w = k
    return ([_ckey(c) for c in m], len(w), [(abs(x), x < 0) for x in w])


def _sprime_key(m):
    return [_ckey(c) for c in m]


def kernel_reduce(e, budget: int = 10000) -> ReduceResult:
    """Directed rewriting by kernel schemas; deterministic for a given budget."""
    is_module = isinstance(e, ModuleElement)
    alphabet = e.alphabet
    ends = e.ends if is_module else None
    log: List[RewriteStep] = []
    cur = e
    for _ in range(budget):
        step = None
        for key in sorted(cur.terms, key=_module_key if is_module else _sprime_key):
            coeff = cur.terms[key]
            m, w = key if is_module else (key, None)
            for i, c in enumerate(m):
                rule = _class_rule(c, alphabet)
                if rule:
                    x, x2 = rule
                    step = RewriteStep("class_relation", coeff, x, x2, cofactor=m[:i] + m[i + 1:], tail=w)
                    break
            if step is None and is_module:
                rule = _path_rule(w, alphabet)
                if rule:
                    r, x, r2 = rule
                    step = RewriteStep("path_relation", coeff, x, r=r, r2=r2, cofactor=m)
            if step is not None:
                elem = step.element(alphabet, ends)
                kappa = elem.terms.get(key, Fraction(0))
                if kappa == 0:
                    raise ShadowError("rewrite instance does not contain the rewritten term")
                step = RewriteStep(step.schema, coeff / kappa, step.x, step.x2, step.r, step.r2, step.cofactor, step.tail)
                cur = cur - elem.scale(step.coeff)
                log.append(step)
                break
        if step is None:
            return ReduceResult(cur, log, "zero" if cur.is_zero() else "normal_form")
    if cur.is_zero():
        return ReduceResult(cur, log, "zero")
    done = not any(
        (_class_rule(c, alphabet) for key in cur.terms for c in (key[0] if is_module else key))
    ) and not (is_module and any(_path_rule(k[1], alphabet) for k in cur.terms))
    return ReduceResult(cur, log, "normal_form" if done else "budget_exhausted")


def replay(e, log: Sequence[RewriteStep]):
    """Re-expand a rewrite log step by step; returns the list of intermediates."""
    alphabet = e.alphabet
    ends = e.ends if isinstance(e, ModuleElement) else None
    seq = [e]
    for s in log:
        seq.append(seq[-1] - s.element(alphabet, ends).scale(s.coeff))
    return seq


# ---------------------------------------------------------------------------
# Chebyshev trace reduction


@dataclass
class TraceCheck:
    order: int
    base_case: bool
    recursion: bool
    cosh_values: bool
    arccosh_match: bool
    u_square: bool

    def all(self) -> bool:
        return self.base_case and self.recursion and self.cosh_values and self.arccosh_match and self.u_square

    def __str__(self):
        rows = [("order", self.order), ("p1", self.base_case), ("recursion", self.recursion),
                ("cosh", self.cosh_values), ("arccosh_sq", self.arccosh_match), ("two_u_sq", self.u_square)]
        return "\n".join(f"{k}\t{v}" for k, v in rows)


def _poly_in_t(s: SPrimeElement, t: UnorientedClass) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for m, c in s.terms.items():
        if any(x != t for x in m):
            raise ShadowError(f"reduction left a class other than ||{t}||")
        _add_into(out, len(m), c)
    return out


def chebyshev_polys(n_max: int, letter: int = 1) -> List[Dict[int, Fraction]]:
    """p_n(t) with ||r^n|| = p_n(||r||), from the class relation."""
    t = UnorientedClass((letter,))
    out = []
    for n in range(n_max + 1):
        res = kernel_reduce(SPrimeElement.of(tuple([letter] * n)))
        out.append(_poly_in_t(res.value, t))
    return out


def _poly_eval_series(p: Dict[int, Fraction], x: TruncatedSeries) -> TruncatedSeries:
    total = TruncatedSeries.constant(x.var, x.base, x.order, 0)
    power = TruncatedSeries.constant(x.var, x.base, x.order, 1)
    for k in range(max(p, default=0) + 1):
        if p.get(k):
            total = total + power.scale(p[k])
        power = power * x
    return total


def chebyshev_trace_check(order: int) -> TraceCheck:
    """||(log r)^2|| against 2 arccosh(t/2)^2 and 2u^2 with t = 2cosh(u), to order."""
    k = order
    J = 2 * k + 1
    polys = chebyshev_polys(max(J, 6))
    base_case = polys[1] == {1: Fraction(1)} and polys[0] == {0: Fraction(2)}
    rec = True
    for a in range(7):
        for b in range(7 - a):
            lhs: Dict[int, Fraction] = {}
            for d, c in polys[a + b].items():
                _add_into(lhs, d, c)
            for d, c in polys[abs(a - b)].items():
                _add_into(lhs, d, c)
            rhs: Dict[int, Fraction] = {}
            for d1, c1 in polys[a].items():
                for d2, c2 in polys[b].items():
                    _add_into(rhs, d1 + d2, c1 * c2)
            rec &= lhs == rhs
    U = 2 * k + 2
    t_of_u = cosh_series(U, "u").scale(2)
    cosh_ok = all(_poly_eval_series(polys[n], t_of_u) == cosh_series(U, "u", n).scale(2) for n in range(len(polys)))
    # (log r)^2 = sum_j c_j (r - 1)^j = sum_n d_n r^n, j < J
    L = named_series("L", J).scale(2)
    d: Dict[int, Fraction] = {}
    for j in range(2, J):
        cj = L.coefficient(j)
        for n in range(j + 1):
            _add_into(d, n, cj * _binom(j, n) * (-1) ** (j - n))
    # ||(log r)^2|| = sum d_n ||r^n||
    Q: Dict[int, Fraction] = {}
    for n, dn in d.items():
        for deg, c in polys[n].items():
            _add_into(Q, deg, dn * c)
    tvar = TruncatedSeries.variable("t", 2, k + 1) + 2
    Qs = _poly_eval_series(Q, tvar)
    target = named_series("arccosh_sq_neg", k + 1, base=2).scale(2)
    arccosh_ok = Qs.as_list() == target.as_list()
    inner = (t_of_u - 2).truncate(2 * k + 2)
    Qu = _poly_eval_series(Q, t_of_u)
    two_u2 = TruncatedSeries("u", 0, 2 * k + 2, {2: Fraction(2)})
    u_ok = Qu.truncate(2 * k + 2).as_list() == two_u2.as_list()
    return TraceCheck(order, base_case, rec, cosh_ok, arccosh_ok, u_ok)


def _binom(n, k):
    from math import comb
    return comb(n, k)


# ---------------------------------------------------------------------------
# the figure eight in the pair of pants


def _pw(text: str) -> Word:
    return parse_letters(text, PANTS)[0]


FIGURE_EIGHT = "r1 r3 R1 r2 R4 R2"
BOUNDARY_R5 = "r1 r3 R1 r2 r4 R2"
SIGMA_DISPLAY = (("r2 r4 R2 r1 R3", 1), ("r1 r3 R1 r2 R4 R2 r1", -1))


def _module(pairs, ends) -> ModuleElement:
    return ModuleElement({((), _pw(w)): Fraction(c) for w, c in pairs}, PANTS, ends)


def congruence_target() -> ModuleElement:
    """(r5 - r5^-1) r1 - ||r4|| (x) r1 (r3 - r3^-1)."""
    ends = ("0", "1")
    r5, r1 = _pw(BOUNDARY_R5), _pw("r1")
    t = ModuleElement({((), mul_words(r5, r1)): 1, ((), mul_words(inverse_word(r5), r1)): -1}, PANTS, ends)
    r4 = UnorientedClass(_pw("r4"), PANTS)
    t = t - ModuleElement({((r4,), _pw("r1 r3")): 1, ((r4,), _pw("r1 R3")): -1}, PANTS, ends)
    return t


def listed_rewrites() -> List[RewriteStep]:
    """The two path-relation instances that turn the display into the target."""
    return [
        RewriteStep("path_relation", Fraction(1), _pw("r4"), r=_pw("r2"), r2=_pw("R2 r1 R3")),
        RewriteStep("path_relation", Fraction(-1), _pw("r4"), r=_pw("r1 r3 R1 r2"), r2=_pw("R2 r1")),
    ]


def figure_eight_L(J: int) -> ClassCombo:
    """|(1/2)(log gamma)^2| truncated below (gamma - 1)^J, as pants classes."""
    gamma = _pw(FIGURE_EIGHT)
    L = named_series("L", J)
    out: Dict[ConjClass, Fraction] = {}
    for j in range(2, J):
        cj = L.coefficient(j)
        for i in range(j + 1):
            _add_into(out, ConjClass(gamma * i, PANTS), cj * _binom(j, i) * (-1) ** (j - i))
    return ClassCombo(out)


def _pmul(p, q, K):
    out = [0] * K
    for i, x in enumerate(p):
        if x:
            for j in range(K - i):
                if q[j]:
                    out[i + j] += x * q[j]
    return out


class _Mat:
    """2x2 matrices over Q[e]/(e^K), entries as coefficient lists."""

    def __init__(self, K, rows):
        self.K = K
        self.rows = rows

    @classmethod
    def scalar(cls, K, s):
        z = [0] * K
        return cls(K, [[list(s), z], [z, list(s)]])

    @classmethod
    def identity(cls, K):
        return cls.scalar(K, [1] + [0] * (K - 1))

    def __add__(self, o):
        return _Mat(self.K, [[[x + y for x, y in zip(self.rows[i][j], o.rows[i][j])] for j in range(2)] for i in range(2)])

    def __sub__(self, o):
        return self + o.scale(-1)

    def __mul__(self, o):
        K = self.K
        if not isinstance(o, _Mat):
            return _Mat(K, [[_pmul(x, o, K) for x in row] for row in self.rows])
        A, B = self.rows, o.rows
        return _Mat(K, [[[x + y for x, y in zip(_pmul(A[i][0], B[0][j], K), _pmul(A[i][1], B[1][j], K))]
                         for j in range(2)] for i in range(2)])

    def scale(self, c):
        return _Mat(self.K, [[[c * x for x in e] for e in row] for row in self.rows])

    def trace(self):
        return [x + y for x, y in zip(self.rows[0][0], self.rows[1][1])]

    def adjugate(self):
        (a, b), (c, d) = self.rows
        neg = lambda p: [-x for x in p]
        return _Mat(self.K, [[d, neg(b)], [neg(c), a]])

    def exp(self):
        total = _Mat.identity(self.K)
        term = _Mat.identity(self.K)
        for n in range(1, self.K + 1):
            term = (term * self).scale(Fraction(1, n))
            total = total + term
        return total

    def key(self):
        return tuple(tuple(tuple(Fraction(x) for x in e) for e in row) for row in self.rows)


@dataclass
class TraceRep:
    """Groupoid representation r_i -> 1 + e N_i (N_i nilpotent) into SL2(Q[e]/e^K)."""

    K: int
    mats: Dict[int, _Mat]
    inv: Dict[int, _Mat]

    @classmethod
    def seeded(cls, K: int, seed: int) -> "TraceRep":
        import random
        rng = random.Random(seed)
        mats, inv = {}, {}
        for g in (1, 2, 3, 4):
            # N = v w^T with w^T v = 0
            p, q = 0, 0
            while (p, q) == (0, 0):
                p, q = rng.randint(-3, 3), rng.randint(-3, 3)
            s = rng.choice([1, -1, 2, -2])
            N = [[s * p * q, -s * p * p], [s * q * q, -s * p * q]]
            def mat(sign):
                rows = [[[int(i == j), sign * N[i][j]] + [0] * (K - 2) for j in range(2)] for i in range(2)]
                return _Mat(K, rows)
            mats[g], inv[g] = mat(1), mat(-1)
        return cls(K, mats, inv)

    def word(self, w: Word, cache: Dict) -> _Mat:
        out = cache.get(w)
        if out is None:
            if not w:
                out = _Mat.identity(self.K)
            else:
                x = w[-1]
                out = self.word(w[:-1], cache) * (self.mats[x] if x > 0 else self.inv[-x])
            cache[w] = out
        return out

    def module(self, e: ModuleElement, cache) -> _Mat:
        total = _Mat.scalar(self.K, [0] * self.K)
        for (m, w), c in e.terms.items():
            s = [c] + [0] * (self.K - 1)
            for x in m:
                s = _pmul(s, self.word(x.letters, cache).trace(), self.K)
            total = total + self.word(w, cache) * s
        return total


def _power_classes(j: int) -> ClassCombo:
    """|(gamma - 1)^j| as a combination of powers of the figure eight."""
    gamma = _pw(FIGURE_EIGHT)
    return ClassCombo({ConjClass(gamma * i, PANTS): _binom(j, i) * (-1) ** (j - i) for i in range(j + 1)})


def direct_twist_image(order: int, ends=("0", "1"), path: str = "r1", weighted: bool = True) -> RingElement:
    """exp(sigma(L(gamma)))(path), dropping terms beyond I-adic degree ``order``.

    With L = sum_j c_j |(gamma - 1)^j|, each sigma(|(gamma - 1)^j|) raises the
    degree by at least j - 1 here, so only chains with sum (j_k - 1) <= order
    matter.  ``weighted=False`` keeps every j < order + 2 in every factor.
    """
    S = build_pants()
    J = order + 2
    L = named_series("L", J)
    ops = {j: _power_classes(j).scale(L.coefficient(j)) for j in range(2, J)}
    states = {(0, 0): RingElement.word(_pw(path), 1, PANTS)}
    total = RingElement.zero(PANTS)
    frontier = dict(states)
    while frontier:
        nxt: Dict[Tuple[int, int], RingElement] = {}
        for (n, w), y in frontier.items():
            total = total + y.scale(Fraction(1, factorial(n)))
            if n == order:
                continue
            for j, op in ops.items():
                w2 = w + (j - 1 if weighted else 0)
                if w2 > order:
                    continue
                z = sigma_action(S, op, y, *ends)
                if z:
                    key = (n + 1, w2)
                    nxt[key] = nxt[key] + z if key in nxt else z
        frontier = nxt
    return total


def closed_form_matrix(rep: TraceRep, cache, chi_series: TruncatedSeries | None = None) -> _Mat:
    """exp(chi(||gamma||)(r5 - r5^-1)) r1 exp(-chi(||gamma||)||r4||(r3 - r3^-1)).

    ``chi_series`` overrides the series in (x - 2) used for chi.
    """
    K = rep.K
    tg = rep.word(_pw(FIGURE_EIGHT), cache).trace()
    shifted = TruncatedSeries("e", 0, K, {k: Fraction(c) for k, c in enumerate(tg)}) - 2
    chi_series = named_series("chi", K, base=2) if chi_series is None else chi_series
    chi = chi_series.compose(shifted).as_list()
    chi = list(chi) + [0] * (K - len(chi))
    r5 = rep.word(_pw(BOUNDARY_R5), cache)
    left = ((r5 - r5.adjugate()) * chi).exp()
    r3 = rep.word(_pw("r3"), cache)
    t4 = rep.word(_pw("r4"), cache).trace()
    right = ((r3 - r3.adjugate()) * _pmul(chi, t4, K)).scale(-1).exp()
    return left * rep.word(_pw("r1"), cache) * right


@dataclass
class FigureEightReport:
    order: int
    sigma_value: str = ""
    sigma_matches: bool = False
    congruence_listed: bool = False
    congruence_reduce: str = ""
    congruence_steps: int = 0
    exp_match: Dict[int, bool] = field(default_factory=dict)
    annihilation: Dict[str, bool] = field(default_factory=dict)

    def all(self) -> bool:
        return (self.sigma_matches and self.congruence_listed and self.congruence_reduce == "zero"
                and all(self.exp_match.values()) and all(self.annihilation.values()))

    def __str__(self):
        lines = [f"order\t{self.order}", f"sigma\t{self.sigma_value}",
                 f"sigma_matches_display\t{self.sigma_matches}",
                 f"congruence_listed_steps\t{self.congruence_listed}",
                 f"congruence_kernel_reduce\t{self.congruence_reduce} ({self.congruence_steps} steps)"]
        for seed, ok in sorted(self.exp_match.items()):
            lines.append(f"closed_form_rep_{seed}\t{ok}")
        for k, v in self.annihilation.items():
            lines.append(f"annihilates_{k}\t{v}")
        return "\n".join(lines)


def figure_eight_sigma() -> ModuleElement:
    """sigma(||gamma||)(r1) for the figure-eight curve, as a path element *0 -> *1."""
    ends = ("0", "1")
    gamma = UnorientedClass(_pw(FIGURE_EIGHT), PANTS)
    return ModuleElement.from_ring(_sigma_path(build_pants(), gamma, _pw("r1"), ends), ends)


def figure_eight_display() -> ModuleElement:
    return _module(SIGMA_DISPLAY, ("0", "1"))


def figure_eight_report(order: int, seeds: Sequence[int] = (1, 2), budget: int = 10000) -> FigureEightReport:
    if not 0 <= order <= 4:
        raise ShadowError("the figure-eight report is desk scale: order must be in 0..4")
    S = build_pants()
    ends = ("0", "1")
    rep = FigureEightReport(order)
    gamma = UnorientedClass(_pw(FIGURE_EIGHT), PANTS)
    value = figure_eight_sigma()
    rep.sigma_value = str(value)
    rep.sigma_matches = value == figure_eight_display()
    diff = value - congruence_target()
    seq = replay(diff, listed_rewrites())
    rep.congruence_listed = seq[-1].is_zero()
    red = kernel_reduce(diff, budget)
    rep.congruence_reduce, rep.congruence_steps = red.status, len(red.log)
    # closed form against the direct exponential, in trace representations
    K = order + 1
    direct = ModuleElement.from_ring(direct_twist_image(order, ends), ends)
    for seed in seeds:
        tr = TraceRep.seeded(K, seed)
        cache: Dict = {}
        rep.exp_match[seed] = tr.module(direct, cache).key() == closed_form_matrix(tr, cache).key()
    # annihilation by sigma(L(gamma)), exactly, at the same truncation
    L = figure_eight_L(order + 2)
    # brackets of classes live in S'(Q||pi||): symmetrize, bracket, reduce mod kernel
    Lsym = SPrimeElement({(UnorientedClass(c.letters, PANTS),): v / 2 for c, v in L.terms.items()}, PANTS)
    for name, cls in (("gamma", gamma), ("r4_class", UnorientedClass(_pw("r4"), PANTS))):
        br = leibniz_bracket(S, Lsym, SPrimeElement({(cls,): 1}, PANTS))
        rep.annihilation[name] = kernel_reduce(br, budget).is_zero
    rep.annihilation["r3_path"] = not sigma_action(S, L, RingElement.word(_pw("r3"), 1, PANTS), "1", "1")
    rep.annihilation["r5_path"] = not sigma_action(S, L, RingElement.word(_pw(BOUNDARY_R5), 1, PANTS), "0", "0")
    return rep
