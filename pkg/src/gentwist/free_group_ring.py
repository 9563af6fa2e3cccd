"""Free groups, their rational group rings, and conjugacy classes.

Letters are nonzero integers: ``+k`` is the k-th generator and ``-k`` its
inverse.  Two alphabets are used.  For a surface of genus g with one
boundary component the generators are ``a1 b1 ... ag bg`` with ``a_i -> 2i-1``
and ``b_i -> 2i``.  For the pair of pants they are the groupoid generators
``r1 .. r4`` with ``r_i -> i``.

Words are plain tuples internally (they are dictionary keys in hot loops);
:class:`GroupWord` is the public wrapper that remembers its alphabet.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

Word = Tuple[int, ...]

SURFACE = "ab"
PANTS = "r"


class WordSyntaxError(ValueError):
    """A word could not be parsed; the message names the offending token."""


# ---------------------------------------------------------------------------
# raw tuple words


def reduce_word(letters: Iterable[int]) -> Word:
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def mul_words(*words: Word) -> Word:
    out = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def inverse_word(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def power_word(w: Word, n: int) -> Word:
    if n < 0:
        w, n = inverse_word(w), -n
    return mul_words(*([w] * n)) if n else ()


def commutator(x: Word, y: Word) -> Word:
    """The group commutator ``x y x^-1 y^-1``."""
    return mul_words(x, y, inverse_word(x), inverse_word(y))


def cyclic_reduce(w: Word) -> Word:
    w = reduce_word(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


def cyclic_conjugator(w: Word) -> Tuple[Word, Word]:
    """Split a reduced word as ``u c u^-1`` with ``c`` cyclically reduced."""
    w = reduce_word(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[:i], w[i:j + 1]


def _letter_key(x: int) -> Tuple[int, int]:
    # a1 < A1 < b1 < B1 < ...
    return (abs(x), 0 if x > 0 else 1)


def least_rotation(seq) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    s = list(seq) * 2
    n = len(s)
    f = [-1] * n
    k = 0
    for j in range(1, n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % max(len(seq), 1)


def rotations_normal_form(w: Word) -> Word:
    c = cyclic_reduce(w)
    if not c:
        return ()
    k = least_rotation([_letter_key(x) for x in c])
    return c[k:] + c[:k]


def primitive_root(w: Word) -> Tuple[Word, int]:
    """For a cyclically reduced word return ``(u, n)`` with ``w = u^n`` maximal."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d], n // d
    return w, 1


# ---------------------------------------------------------------------------
# alphabets and text syntax


_TOKEN = re.compile(r"^([abrABR])(\d+)$")


def letter_name(x: int, alphabet: str = SURFACE) -> str:
    k = abs(x)
    if alphabet == SURFACE:
        name = f"{'a' if k % 2 else 'b'}{(k + 1) // 2}"
    else:
        name = f"r{k}"
    return name if x > 0 else name.upper()


def parse_letter(token: str) -> Tuple[int, str]:
    m = _TOKEN.match(token)
    if not m:
        raise WordSyntaxError(f"malformed letter {token!r}")
    kind, idx = m.group(1), int(m.group(2))
    if idx < 1:
        raise WordSyntaxError(f"malformed letter {token!r}")
    sign = 1 if kind.islower() else -1
    kind = kind.lower()
    if kind == "r":
        return sign * idx, PANTS
    base = 2 * idx - 1 if kind == "a" else 2 * idx
    return sign * base, SURFACE


def parse_letters(text: str, alphabet: str | None = None) -> Tuple[Word, str]:
    tokens = text.replace(",", " ").split()
    letters = []
    for tok in tokens:
        if tok == "1":
            continue
        x, alpha = parse_letter(tok)
        if alphabet is None:
            alphabet = alpha
        elif alpha != alphabet:
            raise WordSyntaxError(f"letter {tok!r} mixes alphabets")
        letters.append(x)
    return tuple(letters), alphabet or SURFACE


def format_letters(w: Word, alphabet: str = SURFACE) -> str:
    if not w:
        return "1"
    return " ".join(letter_name(x, alphabet) for x in w)


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word in the free group (or groupoid) generators."""

    letters: Word = ()
    alphabet: str = SURFACE

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce_word(tuple(self.letters)))

    @classmethod
    def parse(cls, text: str, alphabet: str | None = None) -> "GroupWord":
        letters, alpha = parse_letters(text, alphabet)
        return cls(letters, alpha)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(mul_words(self.letters, other.letters), self.alphabet)

    def inverse(self) -> "GroupWord":
        return GroupWord(inverse_word(self.letters), self.alphabet)

    def __pow__(self, n: int) -> "GroupWord":
        return GroupWord(power_word(self.letters, n), self.alphabet)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_letters(self.letters, self.alphabet)


def word_ops(x: GroupWord, y: GroupWord | None, op: str, n: int = 1) -> GroupWord:
    if op == "mul":
        return x * y
    if op == "inverse":
        return x.inverse()
    if op == "power":
        return x ** n
    raise ValueError(f"unknown word operation {op!r}")


# ---------------------------------------------------------------------------
# group ring


def _add_into(target: Dict, key, value):
    v = target.get(key, 0) + value
    if v:
        target[key] = v
    else:
        target.pop(key, None)


@dataclass(frozen=True)
class RingElement:
    """Finite rational combination of reduced words."""

    terms: Mapping[Word, Fraction] = field(default_factory=dict)
    alphabet: str = SURFACE

    def __post_init__(self):
        clean: Dict[Word, Fraction] = {}
        for w, c in self.terms.items():
            _add_into(clean, reduce_word(w), Fraction(c))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def word(cls, w, coeff=1, alphabet: str = SURFACE) -> "RingElement":
        if isinstance(w, GroupWord):
            alphabet, w = w.alphabet, w.letters
        return cls({tuple(w): Fraction(coeff)}, alphabet)

    @classmethod
    def one(cls, alphabet: str = SURFACE) -> "RingElement":
        return cls({(): Fraction(1)}, alphabet)

    @classmethod
    def zero(cls, alphabet: str = SURFACE) -> "RingElement":
        return cls({}, alphabet)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "RingElement") -> "RingElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(out, w, c)
        return RingElement(out, self.alphabet)

    def __neg__(self):
        return RingElement({w: -c for w, c in self.terms.items()}, self.alphabet)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "RingElement":
        c = Fraction(c)
        return RingElement({w: c * v for w, v in self.terms.items()}, self.alphabet)

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            return self.scale(other)
        out: Dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _add_into(out, mul_words(w1, w2), c1 * c2)
        return RingElement(out, self.alphabet)

    def __rmul__(self, other):
        return self.scale(other)

    def augmentation(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def coproduct(self) -> Dict[Tuple[Word, Word], Fraction]:
        return {(w, w): c for w, c in self.terms.items()}

    def antipode(self) -> "RingElement":
        return RingElement({inverse_word(w): c for w, c in self.terms.items()}, self.alphabet)

    def __str__(self):
        if not self.terms:
            return "0"
        from .exact_series import format_rational
        parts = [f"{format_rational(c)}*{format_letters(w, self.alphabet)}"
                 for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))]
        return " + ".join(parts)


def ring_hopf(x: RingElement, op: str, y: RingElement | None = None):
    if op == "mul":
        return x * y
    if op == "augmentation":
        return x.augmentation()
    if op == "coproduct":
        return x.coproduct()
    if op == "antipode":
        return x.antipode()
    raise ValueError(f"unknown Hopf operation {op!r}")


def coproduct_product(a: Mapping, b: Mapping) -> Dict:
    """Multiply two coproduct expansions (maps of word pairs to coefficients)."""
    out: Dict = {}
    for (u1, u2), c in a.items():
        for (v1, v2), d in b.items():
            _add_into(out, (mul_words(u1, v1), mul_words(u2, v2)), c * d)
    return out


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass(frozen=True)
class ConjClass:
    """Free homotopy class, stored as the least rotation of a cyclic reduction."""

    letters: Word = ()
    alphabet: str = SURFACE

    def __post_init__(self):
        object.__setattr__(self, "letters", rotations_normal_form(tuple(self.letters)))

    @classmethod
    def of(cls, w) -> "ConjClass":
        if isinstance(w, GroupWord):
            return cls(w.letters, w.alphabet)
        return cls(tuple(w))

    @classmethod
    def parse(cls, text: str, alphabet: str | None = None) -> "ConjClass":
        letters, alpha = parse_letters(text, alphabet)
        return cls(letters, alpha)

    def is_trivial(self) -> bool:
        return not self.letters

    def reverse(self) -> "ConjClass":
        return ConjClass(inverse_word(self.letters), self.alphabet)

    def power(self, n: int) -> "ConjClass":
        return ConjClass(power_word(self.letters, n), self.alphabet)

    def __str__(self):
        return format_letters(self.letters, self.alphabet)


@dataclass(frozen=True)
class ClassCombo:
    """Finite rational combination of conjugacy classes."""

    terms: Mapping[ConjClass, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[ConjClass, Fraction] = {}
        for k, c in self.terms.items():
            if not isinstance(k, ConjClass):
                k = ConjClass(tuple(k))
            _add_into(clean, k, Fraction(c))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def single(cls, cls_or_word, coeff=1) -> "ClassCombo":
        c = cls_or_word if isinstance(cls_or_word, ConjClass) else ConjClass.of(cls_or_word)
        return cls({c: Fraction(coeff)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ClassCombo):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return ClassCombo(out)

    def __neg__(self):
        return ClassCombo({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return ClassCombo({k: c * v for k, v in self.terms.items()})

    def reverse(self) -> "ClassCombo":
        return ClassCombo({k.reverse(): c for k, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        from .exact_series import format_rational
        return " + ".join(f"{format_rational(c)}*|{k}|" for k, c in
                          sorted(self.terms.items(), key=lambda t: (len(t[0].letters), t[0].letters)))


def class_projection(x) -> ClassCombo:
    if isinstance(x, GroupWord):
        return ClassCombo.single(x)
    if isinstance(x, RingElement):
        out: Dict[ConjClass, Fraction] = {}
        for w, c in x.terms.items():
            _add_into(out, ConjClass(w, x.alphabet), c)
        return ClassCombo(out)
    return ClassCombo.single(ConjClass(tuple(x)))


@dataclass(frozen=True)
class UnorientedClass:
    """The unordered pair of a class and its reverse."""

    letters: Word = ()
    alphabet: str = SURFACE
    palindromic: bool = False

    def __post_init__(self):
        fwd = rotations_normal_form(tuple(self.letters))
        bwd = rotations_normal_form(inverse_word(fwd))
        key = lambda w: [_letter_key(x) for x in w]
        rep = min(fwd, bwd, key=key)
        object.__setattr__(self, "letters", rep)
        object.__setattr__(self, "palindromic", fwd == bwd)

    @classmethod
    def of(cls, w) -> "UnorientedClass":
        if isinstance(w, (GroupWord, ConjClass)):
            return cls(w.letters, w.alphabet)
        return cls(tuple(w))

    def is_trivial(self) -> bool:
        return not self.letters

    def oriented(self) -> ClassCombo:
        """``|x| + |x^-1|`` as a combination of oriented classes."""
        c = ConjClass(self.letters, self.alphabet)
        return ClassCombo({c: 1}) + ClassCombo({c.reverse(): 1})

    def __str__(self):
        return format_letters(self.letters, self.alphabet)


def unoriented(x) -> UnorientedClass:
    return UnorientedClass.of(x)
