"""Expansions of the surface group into the truncated tensor algebra.

The exponential expansion ``theta0`` (generator ``x_k -> exp(X_k)``) is the
canonical coordinate system: automorphisms and derivations of the completed
group ring are always stored through it.  Other expansions are described by
the algebra automorphism ``phi`` with ``theta = phi o theta0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .free_group_ring import ConjClass, GroupWord, RingElement, Word, cyclic_reduce
from .tensor_lie import (
    LieElement,
    Substitution,
    TensorElement,
    TensorError,
    apply_derivation,
    Derivation,
    dynkin,
    is_grouplike,
    omega_element,
    tensor_exp,
    tensor_log,
    to_lyndon,
)


class ExpansionError(ValueError):
    pass


def zeta_word(g: int) -> Word:
    out: List[int] = []
    for i in range(1, g + 1):
        a, b = 2 * i - 1, 2 * i
        out += [a, b, -a, -b]
    return tuple(out)


def tensor_antipode(x: TensorElement) -> TensorElement:
    """Reverse every monomial with sign (-1)^degree; inverts group-like elements."""
    parts = [{tuple(reversed(w)): (c if d % 2 == 0 else -c) for w, c in p.items()}
             for d, p in enumerate(x.parts)]
    return TensorElement._raw(x.N, parts)


def group_inverse(x: TensorElement) -> TensorElement:
    """Inverse of a tensor with constant term 1 (geometric series)."""
    if x.constant() != 1:
        raise ExpansionError("only elements with constant term 1 are inverted here")
    y = TensorElement.one(x.N) - x
    total = TensorElement.one(x.N)
    power = TensorElement.one(x.N)
    for _ in range(1, x.N):
        power = power * y
        if power.is_zero():
            break
        total = total + power
    return total


@dataclass
class Expansion:
    """Generator images ``exp(Y_k)``; ``Y_k = X_k`` for the exponential expansion."""

    genus: int
    N: int
    logs: Tuple[TensorElement, ...]
    label: str = "theta0"
    _images: Tuple[TensorElement, ...] = field(default=None, repr=False)
    _inverses: Tuple[TensorElement, ...] = field(default=None, repr=False)

    def __post_init__(self):
        self._images = tuple(tensor_exp(y) for y in self.logs)
        self._inverses = tuple(tensor_exp(-y) for y in self.logs)
        self._memo: Dict[Word, TensorElement] = {}

    @property
    def rank(self):
        return 2 * self.genus

    def generator_image(self, k: int) -> TensorElement:
        return self._images[k - 1]

    def of_word(self, w) -> TensorElement:
        if isinstance(w, GroupWord):
            w = w.letters
        w = tuple(w)
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if not w:
            value = TensorElement.one(self.N)
        else:
            head = self.of_word(w[:-1])
            x = w[-1]
            value = head * (self._images[x - 1] if x > 0 else self._inverses[-x - 1])
        if len(w) <= 12:
            self._memo[w] = value
        return value

    def of_ring(self, x: RingElement) -> TensorElement:
        total = TensorElement.zero(self.N)
        for w, c in x.terms.items():
            total = total + self.of_word(w).scale(c)
        return total

    def log_of_word(self, w) -> TensorElement:
        return tensor_log(self.of_word(w))

    def substitution(self) -> Substitution:
        """phi with theta = phi o theta0."""
        return Substitution(self.logs)


def exponential_expansion(g: int, N: int) -> Expansion:
    return Expansion(g, N, tuple(TensorElement.letter(N, i) for i in range(2 * g)))


def _bracket_decomposition(P: TensorElement, d: int, q: int) -> List[TensorElement]:
    """Write a degree-d Lie element as sum_h [h, l_h] via the Dynkin map."""
    N = P.N
    parts: List[Dict] = [dict() for _ in range(q)]
    for w, c in P.parts[d].items():
        h = w[-1]
        # r(w) = [r(w[:-1]), h] = -[h, r(w[:-1])], and P = r(P)/d
        dynkin(w[:-1], -c / d, parts[h])
    return [TensorElement(N, p) for p in parts]


def make_symplectic(theta: Expansion) -> Expansion:
    """Correct an expansion degree by degree so that theta(zeta) = exp(-omega).

    The work is done one order higher: the degree N-1 log parts are only
    constrained by the degree N defect, and leaving them free would break
    the symplectic property of transported derivations in their top degree.
    """
    g, N, q = theta.genus, theta.N, theta.rank
    M = N + 1
    omega = omega_element(g, M)
    logs = [y.with_order(M) for y in theta.logs]
    z = zeta_word(g)
    for d in range(2, M):
        current = Expansion(g, M, tuple(logs), theta.label)
        defect = (tensor_log(current.of_word(z)) + omega).degree_part(d)
        for e in range(2, d):
            if (tensor_log(current.of_word(z)) + omega).parts[e]:
                raise ExpansionError("lower-degree defect reappeared")
        if defect.is_zero():
            continue
        if d == 2:
            raise ExpansionError("degree-2 defect: the degree-1 parts are not standard")
        ell = _bracket_decomposition(-defect, d, q)
        for i in range(g):
            a, b = 2 * i, 2 * i + 1
            # [u_A, B] + [A, u_B] must equal -defect
            logs[b] = logs[b] + ell[a]
            logs[a] = logs[a] - ell[b]
    out = Expansion(g, N, tuple(y.with_order(N) for y in logs), "symplectic")
    check = tensor_log(out.of_word(z)) + omega_element(g, N)
    if not check.is_zero():
        raise ExpansionError("symplectic correction failed")
    return out


def is_symplectic(theta: Expansion) -> bool:
    z = zeta_word(theta.genus)
    return (tensor_log(theta.of_word(z)) + omega_element(theta.genus, theta.N)).is_zero()


def gamma_leading(gamma, theta: Expansion) -> Tuple[int, LieElement]:
    """(k, {gamma}_k): the lowest nonzero degree of log theta(gamma)."""
    if isinstance(gamma, ConjClass):
        w = gamma.letters
    elif isinstance(gamma, GroupWord):
        w = gamma.letters
    else:
        w = tuple(gamma)
    if not cyclic_reduce(w):
        raise ExpansionError("the trivial class has no leading term")
    y = theta.log_of_word(w)
    k = y.lowest_degree()
    if k is None:
        raise ExpansionError("leading term lies beyond the truncation order")
    return k, to_lyndon(y.degree_part(k), theta.rank)


# ---------------------------------------------------------------------------
# truncated automorphisms


class TruncatedAutomorphism:
    """Automorphism of the completed group ring in theta0 coordinates.

    ``logs[k]`` is the image of the letter ``X_k``, i.e. the logarithm of the
    theta0-image of ``u(x_{k+1})``.
    """

    def __init__(self, genus: int, logs: Sequence[TensorElement], recipe: str = ""):
        self.genus = genus
        self.logs = tuple(logs)
        self.N = self.logs[0].N
        self.recipe = recipe
        self._subst = None

    @classmethod
    def identity(cls, genus: int, N: int):
        return cls(genus, [TensorElement.letter(N, i) for i in range(2 * genus)], "identity")

    @classmethod
    def from_images(cls, genus: int, images: Sequence[TensorElement], recipe: str = ""):
        return cls(genus, [tensor_log(x) for x in images], recipe)

    @classmethod
    def from_word_images(cls, genus: int, N: int, words: Sequence[Word], recipe: str = ""):
        theta0 = exponential_expansion(genus, N)
        return cls(genus, [theta0.log_of_word(w) for w in words], recipe)

    @property
    def images(self) -> Tuple[TensorElement, ...]:
        return tuple(tensor_exp(y) for y in self.logs)

    @property
    def substitution(self) -> Substitution:
        if self._subst is None:
            self._subst = Substitution(self.logs)
        return self._subst

    def apply(self, x: TensorElement) -> TensorElement:
        return self.substitution(x)

    def __call__(self, x: TensorElement) -> TensorElement:
        return self.apply(x)

    def compose(self, other: "TruncatedAutomorphism") -> "TruncatedAutomorphism":
        """self o other."""
        _check_orders(self, other)
        return TruncatedAutomorphism(self.genus, [self.apply(y) for y in other.logs],
                                     f"({self.recipe}) o ({other.recipe})")

    def __matmul__(self, other):
        return self.compose(other)

    def degree_one_matrix(self) -> List[List[Fraction]]:
        """M[i][j] = coefficient of letter i in u(X_j)."""
        q = 2 * self.genus
        return [[self.logs[j].parts[1].get((i,), Fraction(0)) for j in range(q)] for i in range(q)]

    def inverse(self) -> "TruncatedAutomorphism":
        q, N = 2 * self.genus, self.N
        M = self.degree_one_matrix()
        Minv = _invert_matrix(M)
        lin = Substitution([TensorElement(N, {(i,): Minv[i][j] for i in range(q)}) for j in range(q)])
        letters = [TensorElement.letter(N, j) for j in range(q)]
        W = [lin(x) for x in letters]
        for _ in range(N):
            UW = [self.apply(w) for w in W]
            new = [w + lin(x - uw) for w, x, uw in zip(W, letters, UW)]
            if new == W:
                break
            W = new
        out = TruncatedAutomorphism(self.genus, W, f"inverse({self.recipe})")
        if any(out.apply(y) != x for y, x in zip(self.logs, letters)):
            raise ExpansionError("automorphism inversion did not converge")
        return out

    def power(self, n: int) -> "TruncatedAutomorphism":
        base = self if n >= 0 else self.inverse()
        result = TruncatedAutomorphism.identity(self.genus, self.N)
        for _ in range(abs(n)):
            result = result.compose(base)
        return result

    def __eq__(self, other):
        return isinstance(other, TruncatedAutomorphism) and self.logs == other.logs

    def __hash__(self):
        return hash(self.logs)

    def of_word(self, w) -> TensorElement:
        theta0 = exponential_expansion(self.genus, self.N)
        return self.apply(theta0.of_word(w))

    def is_identity(self) -> bool:
        return all(y == TensorElement.letter(self.N, i) for i, y in enumerate(self.logs))


def _check_orders(u, v):
    if u.N != v.N or u.genus != v.genus:
        raise ExpansionError("truncation orders or genera differ")


def _invert_matrix(M: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ExpansionError("degree-one part is not invertible")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


# ---------------------------------------------------------------------------
# derivations given through group-ring values


def derivation_from_group_values(values: Sequence[TensorElement]) -> Derivation:
    """Recover D(X_k) from D(exp X_k) = V_k.

    Uses D(e^X) = sum_{n>=1} 1/n! sum_i X^i D(X) X^(n-1-i) and solves by
    fixed-point iteration; each pass fixes one more degree.
    """
    N = values[0].N
    out = []
    for k, V in enumerate(values):
        X = TensorElement.letter(N, k)
        powers = [TensorElement.one(N)]
        for _ in range(N):
            powers.append(powers[-1] * X)
        Y = V
        for _ in range(N + 1):
            extra = TensorElement.zero(N)
            fact = 1
            for n in range(2, N + 1):
                fact *= n
                for i in range(n):
                    extra = extra + (powers[i] * Y * powers[n - 1 - i]).scale(Fraction(1, fact))
            new = V - extra
            if new == Y:
                break
            Y = new
        out.append(Y)
    return Derivation(out)


def exp_derivation_automorphism(genus: int, D: Derivation, recipe: str = "") -> TruncatedAutomorphism:
    """exp(D) as a truncated automorphism; D must be weakly nilpotent."""
    N = D.N
    cap = N * (N + 1)
    logs = []
    for k in range(2 * genus):
        term = TensorElement.letter(N, k)
        total = term
        for n in range(1, cap + 1):
            term = apply_derivation(D, term).scale(Fraction(1, n))
            if term.is_zero():
                break
            total = total + term
        else:
            raise ExpansionError("exponential of the derivation did not terminate")
        logs.append(total)
    return TruncatedAutomorphism(genus, logs, recipe)


def log_automorphism(u: TruncatedAutomorphism) -> Derivation:
    """log(u) = sum (-1)^(n+1) (u - 1)^n / n; requires a unipotent degree-one part."""
    N = u.N
    cap = N * (N + 1)
    values = []
    for k in range(2 * u.genus):
        X = TensorElement.letter(N, k)
        term = X
        total = TensorElement.zero(N)
        for n in range(1, cap + 1):
            term = u.apply(term) - term
            if term.is_zero():
                break
            total = total + term.scale(Fraction((-1) ** (n + 1), n))
        else:
            raise ExpansionError("degree-one part is not unipotent")
        values.append(total)
    return Derivation(values)


# ---------------------------------------------------------------------------
# transport between coordinate systems


def transport(theta: Expansion, obj):
    """Express an object given in theta0 coordinates in theta coordinates."""
    if isinstance(obj, RingElement):
        return theta.of_ring(obj)
    if isinstance(obj, GroupWord):
        return theta.of_word(obj.letters)
    phi = theta.substitution()
    if obj.N != theta.N:
        raise ExpansionError("truncation orders differ")
    phi_inv = TruncatedAutomorphism(theta.genus, theta.logs, "phi").inverse().substitution
    if isinstance(obj, TruncatedAutomorphism):
        logs = [phi(obj.apply(phi_inv(TensorElement.letter(theta.N, k)))) for k in range(theta.rank)]
        return TruncatedAutomorphism(theta.genus, logs, f"{theta.label}-transport({obj.recipe})")
    if isinstance(obj, Derivation):
        vals = [phi(apply_derivation(obj, phi_inv(TensorElement.letter(theta.N, k))))
                for k in range(theta.rank)]
        return Derivation(vals)
    raise ExpansionError(f"cannot transport {type(obj).__name__}")


def transport_inverse(theta: Expansion, obj):
    """Back from theta coordinates to theta0 coordinates."""
    phi = theta.substitution()
    phi_inv = TruncatedAutomorphism(theta.genus, theta.logs, "phi").inverse().substitution
    if isinstance(obj, TensorElement):
        return phi_inv(obj)
    if isinstance(obj, TruncatedAutomorphism):
        logs = [phi_inv(obj.apply(phi(TensorElement.letter(theta.N, k)))) for k in range(theta.rank)]
        return TruncatedAutomorphism(theta.genus, logs, obj.recipe)
    raise ExpansionError(f"cannot transport {type(obj).__name__}")


def automorphism_is_grouplike(u: TruncatedAutomorphism) -> bool:
    return all(is_grouplike(x) for x in u.images)
