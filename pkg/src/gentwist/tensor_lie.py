"""Truncated tensor algebra on H and the free Lie algebra inside it.

Tensor letters are integers ``0 .. 2g-1`` standing for ``A1 B1 A2 B2 ...``;
the group letter ``k`` (1-based) has homology class letter ``k - 1``.  An
element is stored as one dictionary per degree, mapping letter tuples to
rationals, and everything is truncated below a fixed total degree ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

TWord = Tuple[int, ...]


class TensorError(ValueError):
    pass


def letter_label(i: int) -> str:
    return f"{'A' if i % 2 == 0 else 'B'}{i // 2 + 1}"


def parse_tensor_letter(tok: str) -> int:
    tok = tok.strip()
    if len(tok) < 2 or tok[0] not in "AB" or not tok[1:].isdigit() or int(tok[1:]) < 1:
        raise TensorError(f"malformed tensor letter {tok!r}")
    return 2 * (int(tok[1:]) - 1) + (0 if tok[0] == "A" else 1)


def _acc(d: Dict, k, v):
    nv = d.get(k, 0) + v
    if nv:
        d[k] = nv
    else:
        d.pop(k, None)


class TensorElement:
    """Element of T(H) modulo degree ``N``; immutable by convention."""

    __slots__ = ("N", "parts")

    def __init__(self, N: int, parts=None):
        self.N = N
        clean = [dict() for _ in range(N)]
        if parts:
            items = parts.items() if isinstance(parts, Mapping) else (
                (w, c) for part in parts for w, c in part.items())
            for w, c in items:
                d = len(w)
                if d < N and c:
                    _acc(clean[d], tuple(w), Fraction(c))
        self.parts = tuple(clean)

    @classmethod
    def _raw(cls, N, parts):
        obj = cls.__new__(cls)
        obj.N = N
        obj.parts = tuple(parts)
        return obj

    # constructors
    @classmethod
    def zero(cls, N):
        return cls._raw(N, [dict() for _ in range(N)])

    @classmethod
    def one(cls, N):
        parts = [dict() for _ in range(N)]
        if N:
            parts[0][()] = Fraction(1)
        return cls._raw(N, parts)

    @classmethod
    def letter(cls, N, i, coeff=1):
        return cls(N, {(i,): coeff})

    @classmethod
    def monomial(cls, N, word, coeff=1):
        return cls(N, {tuple(word): coeff})

    # basic access
    def terms(self):
        for part in self.parts:
            yield from part.items()

    def as_dict(self) -> Dict[TWord, Fraction]:
        out = {}
        for part in self.parts:
            out.update(part)
        return out

    def degree_part(self, d: int) -> "TensorElement":
        parts = [dict() for _ in range(self.N)]
        if d < self.N:
            parts[d] = dict(self.parts[d])
        return TensorElement._raw(self.N, parts)

    def constant(self) -> Fraction:
        return self.parts[0].get((), Fraction(0)) if self.N else Fraction(0)

    def lowest_degree(self):
        for d, part in enumerate(self.parts):
            if part:
                return d
        return None

    def is_zero(self) -> bool:
        return not any(self.parts)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.N == other.N and self.parts == other.parts

    def __hash__(self):
        return hash((self.N, tuple(frozenset(p.items()) for p in self.parts)))

    def _check(self, other):
        if not isinstance(other, TensorElement):
            raise TensorError("expected a TensorElement")
        if other.N != self.N:
            raise TensorError(f"mismatched truncation orders {self.N} and {other.N}")

    # linear structure
    def __add__(self, other):
        self._check(other)
        parts = [dict(p) for p in self.parts]
        for d, part in enumerate(other.parts):
            target = parts[d]
            for w, c in part.items():
                _acc(target, w, c)
        return TensorElement._raw(self.N, parts)

    def __neg__(self):
        return TensorElement._raw(self.N, [{w: -c for w, c in p.items()} for p in self.parts])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return TensorElement.zero(self.N)
        return TensorElement._raw(self.N, [{w: c * v for w, v in p.items()} for p in self.parts])

    def __rmul__(self, c):
        return self.scale(c)

    # product
    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return self.scale(other)
        self._check(other)
        N = self.N
        parts = [dict() for _ in range(N)]
        for d1, p1 in enumerate(self.parts):
            if not p1:
                continue
            for d2 in range(N - d1):
                p2 = other.parts[d2]
                if not p2:
                    continue
                target = parts[d1 + d2]
                for w1, c1 in p1.items():
                    for w2, c2 in p2.items():
                        k = w1 + w2
                        v = target.get(k, 0) + c1 * c2
                        if v:
                            target[k] = v
                        else:
                            del target[k]
        return TensorElement._raw(N, parts)

    def truncate(self, n: int) -> "TensorElement":
        """Discard degrees >= n (the truncation order itself is kept)."""
        return TensorElement._raw(self.N, [p if d < n else {} for d, p in enumerate(self.parts)])

    def with_order(self, n: int) -> "TensorElement":
        """Change the truncation order (dropping degrees >= n)."""
        parts = [dict(self.parts[d]) if d < self.N else {} for d in range(n)]
        return TensorElement._raw(n, parts)

    def bracket(self, other):
        return self * other - other * self

    def __pow__(self, n: int):
        result = TensorElement.one(self.N)
        for _ in range(n):
            result = result * self
        return result

    def __repr__(self):
        return f"TensorElement(N={self.N}, {format_tensor(self)})"

    def __str__(self):
        return format_tensor(self)


def format_tensor(x: TensorElement) -> str:
    from .exact_series import format_rational
    items = []
    for d, part in enumerate(x.parts):
        for w in sorted(part):
            mono = ".".join(letter_label(i) for i in w) if w else "1"
            items.append(f"{format_rational(part[w])}*{mono}")
    return " + ".join(items) if items else "0"


def parse_tensor(text: str, N: int) -> TensorElement:
    from .exact_series import parse_rational
    text = text.strip()
    if text == "0":
        return TensorElement.zero(N)
    out = {}
    for col, chunk in _split_terms(text):
        if "*" not in chunk:
            raise TensorError(f"malformed tensor term {chunk!r} at column {col}")
        coef, mono = chunk.split("*", 1)
        c = parse_rational(coef)
        word = () if mono.strip() == "1" else tuple(parse_tensor_letter(t) for t in mono.split("."))
        out[word] = out.get(word, 0) + c
    return TensorElement(N, out)


def _split_terms(text):
    col = 0
    for chunk in text.split(" + "):
        yield col + 1, chunk.strip()
        col += len(chunk) + 3


# ---------------------------------------------------------------------------
# exp / log / primitivity


def tensor_exp(x: TensorElement) -> TensorElement:
    if x.constant() != 0:
        raise TensorError("exp needs an element without constant term")
    result = TensorElement.one(x.N)
    term = TensorElement.one(x.N)
    for n in range(1, x.N):
        term = (term * x).scale(Fraction(1, n))
        if term.is_zero():
            break
        result = result + term
    return result


def tensor_log(x: TensorElement) -> TensorElement:
    if x.constant() != 1:
        raise TensorError("log needs an element with constant term 1")
    y = x - TensorElement.one(x.N)
    result = TensorElement.zero(x.N)
    power = TensorElement.one(x.N)
    for n in range(1, x.N):
        power = power * y
        if power.is_zero():
            break
        result = result + power.scale(Fraction((-1) ** (n + 1), n))
    return result


def exp_log(x: TensorElement, direction: str) -> TensorElement:
    if direction == "exp":
        return tensor_exp(x)
    if direction == "log":
        return tensor_log(x)
    raise TensorError(f"unknown direction {direction!r}")


def dynkin(word: TWord, coeff, out: Dict):
    """Accumulate the left-normed bracket [[..[x1,x2],..],xn] of a word."""
    terms = {(word[0],): Fraction(coeff)}
    for x in word[1:]:
        nxt: Dict[TWord, Fraction] = {}
        for w, c in terms.items():
            _acc(nxt, w + (x,), c)
            _acc(nxt, (x,) + w, -c)
        terms = nxt
    for w, c in terms.items():
        _acc(out, w, c)


def is_primitive(x: TensorElement) -> bool:
    """Dynkin-Specht-Wever test, degree by degree."""
    if x.constant() != 0:
        return False
    for d, part in enumerate(x.parts):
        if d == 0 or not part:
            continue
        image: Dict[TWord, Fraction] = {}
        for w, c in part.items():
            dynkin(w, c, image)
        if image != {w: d * c for w, c in part.items()}:
            return False
    return True


def is_grouplike(x: TensorElement) -> bool:
    if x.constant() != 1:
        return False
    return is_primitive(tensor_log(x))


def lie_projection(x: TensorElement) -> TensorElement:
    """Dynkin idempotent r/d applied degreewise (identity on Lie elements)."""
    parts = [dict() for _ in range(x.N)]
    for d, part in enumerate(x.parts):
        if d == 0:
            continue
        for w, c in part.items():
            dynkin(w, c / d, parts[d])
    return TensorElement._raw(x.N, parts)


def tensor_ops(x: TensorElement, y, op: str):
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "truncate":
        return x.truncate(y)
    if op == "is_grouplike":
        return is_grouplike(x)
    if op == "is_primitive":
        return is_primitive(x)
    raise TensorError(f"unknown tensor operation {op!r}")


# ---------------------------------------------------------------------------
# Lyndon basis


@lru_cache(maxsize=None)
def lyndon_words(q: int, d: int) -> Tuple[TWord, ...]:
    """Lyndon words of length exactly d over letters 0..q-1 (Duval), sorted."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == d:
            out.append(tuple(w))
        m = len(w)
        while len(w) < d:
            w.append(w[len(w) - m])
        while w and w[-1] == q - 1:
            w.pop()
    return tuple(sorted(out))


def witt_dimension(q: int, d: int) -> int:
    """dim of the degree-d part of the free Lie algebra on q letters."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * q ** (d // e)
    return total // d


def _mobius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def _standard_split(w: TWord) -> Tuple[TWord, TWord]:
    # longest proper Lyndon suffix
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise TensorError("not a Lyndon word")


def _is_lyndon(w: TWord) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def lyndon_bracket(w: TWord) -> Tuple[Tuple[TWord, Fraction], ...]:
    """Tensor expansion of the standard bracketing of a Lyndon word."""
    if len(w) == 1:
        return ((w, Fraction(1)),)
    u, v = _standard_split(w)
    pu, pv = dict(lyndon_bracket(u)), dict(lyndon_bracket(v))
    out: Dict[TWord, Fraction] = {}
    for a, ca in pu.items():
        for b, cb in pv.items():
            _acc(out, a + b, ca * cb)
            _acc(out, b + a, -ca * cb)
    return tuple(sorted(out.items()))


def lyndon_bracket_string(w: TWord) -> str:
    if len(w) == 1:
        return letter_label(w[0])
    u, v = _standard_split(w)
    return f"[{lyndon_bracket_string(u)},{lyndon_bracket_string(v)}]"


@dataclass(frozen=True)
class LieElement:
    """Coordinates in the Lyndon basis, ``coeffs[word] = c``; rank q = 2g."""

    q: int
    coeffs: Mapping[TWord, Fraction]

    def to_tensor(self, N: int) -> TensorElement:
        out: Dict[TWord, Fraction] = {}
        for w, c in self.coeffs.items():
            if len(w) >= N:
                continue
            for m, e in lyndon_bracket(w):
                _acc(out, m, c * e)
        return TensorElement(N, out)

    def degree(self, d) -> "LieElement":
        return LieElement(self.q, {w: c for w, c in self.coeffs.items() if len(w) == d})

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            _acc(out, w, c)
        return LieElement(self.q, out)

    def scale(self, c):
        return LieElement(self.q, {w: c * v for w, v in self.coeffs.items() if c * v})

    def __str__(self):
        from .exact_series import format_rational
        if not self.coeffs:
            return "0"
        return " + ".join(f"{format_rational(c)}*{lyndon_bracket_string(w)}"
                          for w, c in sorted(self.coeffs.items(), key=lambda t: (len(t[0]), t[0])))


def to_lyndon(x: TensorElement, q: int) -> LieElement:
    """Lyndon coordinates of a primitive tensor; raises if x is not Lie."""
    out: Dict[TWord, Fraction] = {}
    for d, part in enumerate(x.parts):
        if not part:
            continue
        if d == 0:
            raise TensorError("a Lie element has no constant term")
        rest = dict(part)
        while rest:
            w = min(rest)
            if not _is_lyndon(w):
                raise TensorError("element is not in the free Lie algebra")
            c = rest[w]
            out[w] = c
            for m, e in lyndon_bracket(w):
                _acc(rest, m, -c * e)
    return LieElement(q, out)


def bch(x, y, N: int, q: int | None = None):
    """log(exp(x) exp(y)), for LieElements or primitive tensors."""
    as_lie = isinstance(x, LieElement)
    if as_lie:
        q = x.q
        x, y = x.to_tensor(N), y.to_tensor(N)
    z = tensor_log(tensor_exp(x) * tensor_exp(y))
    return to_lyndon(z, q) if as_lie else z


# ---------------------------------------------------------------------------
# symplectic structure


def omega_form(i: int, j: int) -> int:
    """Intersection form on tensor letters: omega(A_k, B_k) = 1."""
    if i // 2 != j // 2:
        return 0
    if i % 2 == 0 and j == i + 1:
        return 1
    if j % 2 == 0 and i == j + 1:
        return -1
    return 0


def omega_element(g: int, N: int) -> TensorElement:
    """The symplectic element, with log theta0(zeta) = -omega in degree 2."""
    out = {}
    for k in range(g):
        a, b = 2 * k, 2 * k + 1
        out[(b, a)] = 1
        out[(a, b)] = -1
    return TensorElement(N, out)


class Derivation:
    """A derivation of the tensor algebra, given by its values on letters."""

    def __init__(self, values: Sequence[TensorElement]):
        self.values = tuple(values)
        self.N = self.values[0].N if self.values else 0

    @property
    def rank(self):
        return len(self.values)

    def __call__(self, x: TensorElement) -> TensorElement:
        return apply_derivation(self, x)

    def __add__(self, other):
        return Derivation([a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        return Derivation([a - b for a, b in zip(self.values, other.values)])

    def scale(self, c):
        return Derivation([v.scale(c) for v in self.values])

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.values == other.values

    def degree_part(self, d: int) -> "Derivation":
        """Component raising tensor degree by d (values in degree d + 1)."""
        return Derivation([v.degree_part(d + 1) for v in self.values])

    def is_zero(self):
        return all(v.is_zero() for v in self.values)


def apply_derivation(D: Derivation, x: TensorElement) -> TensorElement:
    N = x.N
    parts = [dict() for _ in range(N)]
    vals = [v.parts for v in D.values]
    for d, part in enumerate(x.parts):
        for w, c in part.items():
            for i, letter in enumerate(w):
                pre, post = w[:i], w[i + 1:]
                rest = d - 1
                for dv in range(N - rest):
                    vp = vals[letter][dv]
                    if not vp:
                        continue
                    target = parts[rest + dv]
                    for m, e in vp.items():
                        _acc(target, pre + m + post, c * e)
    return TensorElement._raw(N, parts)


def derivation_bracket(D1: Derivation, D2: Derivation) -> Derivation:
    return Derivation([D1(v2) - D2(v1) for v1, v2 in zip(D1.values, D2.values)])


def derivation_from_hl(hl: Sequence[TensorElement]) -> Derivation:
    """h (x) l  ->  (X -> omega(h, X) l); ``hl[h]`` is the factor paired with h."""
    q = len(hl)
    N = hl[0].N
    values = []
    for x in range(q):
        v = TensorElement.zero(N)
        for h in range(q):
            w = omega_form(h, x)
            if w and not hl[h].is_zero():
                v = v + hl[h].scale(w)
        values.append(v)
    return Derivation(values)


def hl_from_derivation(D: Derivation) -> List[TensorElement]:
    """Inverse of :func:`derivation_from_hl`."""
    q = D.rank
    out = []
    for h in range(q):
        k = h // 2
        if h % 2 == 0:
            out.append(D.values[2 * k + 1])  # A_k (x) D(B_k)
        else:
            out.append(-D.values[2 * k])  # -B_k (x) D(A_k)
    return out


def bracket_map(hl: Sequence[TensorElement]) -> TensorElement:
    """H (x) L -> L, h (x) l -> [h, l]."""
    N = hl[0].N
    total = TensorElement.zero(N)
    for h, l in enumerate(hl):
        if not l.is_zero():
            total = total + TensorElement.letter(N, h).bracket(l)
    return total


def check_symplectic(D: Derivation, g: int) -> bool:
    return apply_derivation(D, omega_element(g, D.N)).is_zero()


def omega_and_der(op: str, *args):
    if op == "omega_element":
        return omega_element(*args)
    if op == "check_symplectic":
        return check_symplectic(*args)
    if op == "derivation_bracket":
        return derivation_bracket(*args)
    if op == "apply_derivation":
        return apply_derivation(*args)
    raise TensorError(f"unknown operation {op!r}")


def derivation_exp(D: Derivation, x: TensorElement, cap: int | None = None) -> TensorElement:
    """exp(D)(x) = sum D^n(x)/n!, requiring the series to terminate."""
    N = x.N
    cap = N * (N + 1) if cap is None else cap
    total = x
    term = x
    for n in range(1, cap + 1):
        term = D(term).scale(Fraction(1, n))
        if term.is_zero():
            return total
        total = total + term
    raise TensorError("derivation exponential did not terminate within the hard bound")


# ---------------------------------------------------------------------------
# substitution endomorphisms X_k -> y_k


class Substitution:
    """Algebra endomorphism of the truncated tensor algebra.

    The images ``y_k`` must have zero constant term.  Images of monomials are
    memoized by prefix, so repeated application shares work.
    """

    def __init__(self, images: Sequence[TensorElement]):
        self.images = tuple(images)
        self.N = self.images[0].N
        for y in self.images:
            if y.constant() != 0:
                raise TensorError("substitution images need zero constant term")
        self._memo: Dict[TWord, TensorElement] = {(): TensorElement.one(self.N)}

    def word_image(self, w: TWord) -> TensorElement:
        memo = self._memo
        hit = memo.get(w)
        if hit is not None:
            return hit
        prefix = self.word_image(w[:-1])
        # prefix has valuation >= len(w) - 1, so only low degrees of y are needed
        y = self.images[w[-1]].truncate(self.N - len(w) + 1)
        value = prefix * y
        memo[w] = value
        return value

    def __call__(self, x: TensorElement) -> TensorElement:
        N = self.N
        parts = [dict() for _ in range(N)]
        for d, part in enumerate(x.parts):
            for w, c in part.items():
                img = self.word_image(w)
                for dd in range(d, N):
                    target = parts[dd]
                    for m, e in img.parts[dd].items():
                        _acc(target, m, c * e)
        return TensorElement._raw(N, parts)
