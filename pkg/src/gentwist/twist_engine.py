"""Generalized Dehn twists as truncated automorphisms, and checks on them.

``generalized_twist`` computes exp(r sigma((log gamma)^2)).  Two routes are
available and are compared in the tests:

* ``route="crossings"``: at each signed crossing p of gamma with a generator
  x_k, sigma((log gamma)^2)(x_k) picks up 2 eps_p (x_k)_{*p} log(gamma_p)
  (x_k)_{p*}, and the logarithm is exact in coordinates.
* ``route="series"``: expand L(gamma) to a finite class combination and
  apply the geometric sigma term by term (slow, used as a reference).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .exact_series import named_series
from .expansion import (
    Expansion,
    ExpansionError,
    TruncatedAutomorphism,
    derivation_from_group_values,
    exp_derivation_automorphism,
    exponential_expansion,
    gamma_leading,
    log_automorphism,
    transport,
    zeta_word,
)
from .fox_pairing import surface_pairing, tensor_pairing
from .free_group_ring import (
    ClassCombo,
    ConjClass,
    GroupWord,
    RingElement,
    Word,
    cyclic_reduce,
    inverse_word,
    mul_words,
)
from .surface_loops import (
    SurfaceModel,
    classical_twist_images,
    crossing_data,
    insertion_word,
    sigma_action,
)
from .tensor_lie import Derivation, TensorElement, is_grouplike, tensor_exp, tensor_log

__all__ = [
    "TruncatedAutomorphism",
    "L_truncation",
    "generalized_twist",
    "classical_twist_automorphism",
    "nilpotent_quotient_action",
    "johnson_degree",
    "structure_checks",
    "diagram_log",
    "twist_derivation",
]


class TwistError(ValueError):
    pass


def _letters(gamma) -> Word:
    if isinstance(gamma, (ConjClass, GroupWord)):
        return gamma.letters
    return tuple(gamma)


def L_truncation(gamma, m: int) -> ClassCombo:
    """sum_{2 <= j < m} c_j (gamma - 1)^j expanded into powers of gamma."""
    if m < 2:
        raise TwistError("the truncation order must be at least 2")
    w = cyclic_reduce(_letters(gamma))
    if not w:
        return ClassCombo({})
    L = named_series("L", m)
    out: Dict[ConjClass, Fraction] = {}
    for j in range(2, m):
        cj = L.coefficient(j)
        if not cj:
            continue
        for i in range(j + 1):
            coeff = cj * _binom(j, i) * (-1) ** (j - i)
            key = ConjClass(w * i)
            out[key] = out.get(key, 0) + coeff
    return ClassCombo(out)


def _binom(n, k):
    from math import comb
    return comb(n, k)


def twist_derivation(S: SurfaceModel, gamma, r, N: int, route: str = "crossings") -> Derivation:
    """r sigma((log gamma)^2) in exponential coordinates."""
    g = S.genus
    theta0 = exponential_expansion(g, N)
    loop = cyclic_reduce(_letters(gamma))
    r = Fraction(r)
    values = []
    if route == "crossings":
        logs: Dict[int, TensorElement] = {}
        for k in range(1, S.n_petals + 1):
            v = TensorElement.zero(N)
            for i, j, s in (crossing_data(S, loop, (k,)) if loop else ()):
                if i not in logs:
                    logs[i] = theta0.log_of_word(loop[i:] + loop[:i])
                pre, post = theta0.of_word((k,)[:j]), theta0.of_word((k,)[j:])
                v = v + (pre * logs[i] * post).scale(2 * r * s)
            values.append(v)
    elif route == "series":
        combo = L_truncation(loop, N + 2).scale(2 * r) if loop else ClassCombo({})
        for k in range(1, S.n_petals + 1):
            values.append(theta0.of_ring(sigma_action(S, combo, (k,))))
    else:
        raise TwistError(f"unknown route {route!r}")
    return derivation_from_group_values(values)


def generalized_twist(S: SurfaceModel, gamma, r, N: int, route: str = "crossings") -> TruncatedAutomorphism:
    """t_{r,gamma} = exp(r sigma((log gamma)^2)) modulo degree N."""
    if N < 2:
        raise TwistError("truncation order must be at least 2")
    if S.boundary != 1:
        raise TwistError("generalized twists are computed on one-boundary surfaces")
    r = Fraction(r)
    if r == 0 or not cyclic_reduce(_letters(gamma)):
        return TruncatedAutomorphism.identity(S.genus, N)
    D = twist_derivation(S, gamma, r, N, route)
    return exp_derivation_automorphism(S.genus, D, f"twist r={r} curve={_letters(gamma)}")


def classical_twist_automorphism(S: SurfaceModel, C, N: int) -> TruncatedAutomorphism:
    images = classical_twist_images(S, _letters(C))
    return TruncatedAutomorphism.from_word_images(S.genus, N, images, f"classical {_letters(C)}")


def word_automorphism(genus: int, N: int, images: Sequence[Word], recipe: str = "") -> TruncatedAutomorphism:
    return TruncatedAutomorphism.from_word_images(genus, N, images, recipe)


# ---------------------------------------------------------------------------
# nilpotent quotients and the Johnson filtration


@dataclass(frozen=True)
class QuotientReport:
    k: int
    holds: bool
    discrepancy_degree: int | None
    insertion: Word


def nilpotent_quotient_action(S: SurfaceModel, u: TruncatedAutomorphism, gamma, ell, k: int) -> QuotientReport:
    """Compare u(ell) with ell carrying gamma^(+-1) at each crossing, mod Gamma_2k."""
    loop = cyclic_reduce(_letters(gamma))
    theta0 = exponential_expansion(S.genus, u.N)
    kk, _ = gamma_leading(loop, theta0)
    if kk < k:
        raise TwistError(f"curve has nilpotency class {kk} < {k}")
    if u.N < 2 * k:
        raise TwistError("truncation order must be at least 2k")
    ell = _letters(ell)
    ins = insertion_word(S, loop, ell)
    lhs = u.of_word(ell)
    quotient = tensor_log(lhs * theta0.of_word(inverse_word(ins)))
    low = quotient.lowest_degree()
    holds = low is None or low >= 2 * k
    return QuotientReport(k, holds, low, ins)


def johnson_degree(u: TruncatedAutomorphism) -> int:
    """Largest k < N with u acting trivially on coordinates of degree <= k."""
    N = u.N
    low = N
    for i, y in enumerate(u.logs):
        d = (y - TensorElement.letter(N, i)).lowest_degree()
        if d is not None:
            low = min(low, d)
    return low - 1


@dataclass(frozen=True)
class StructureReport:
    hopf: bool
    fixes_zeta: bool
    preserves_eta: bool

    def all(self) -> bool:
        return self.hopf and self.fixes_zeta and self.preserves_eta


def structure_checks(S: SurfaceModel, u: TruncatedAutomorphism) -> StructureReport:
    N, g = u.N, u.genus
    theta0 = exponential_expansion(g, N)
    hopf = all(is_grouplike(x) for x in u.images)
    z = theta0.of_word(zeta_word(g))
    fixes = u.apply(z) == z
    P = surface_pairing(S)
    ims = u.images
    ok = True
    cut = max(N - 2, 0)
    for i in range(1, 2 * g + 1):
        for j in range(1, 2 * g + 1):
            lhs = tensor_pairing(P, theta0, ims[i - 1], ims[j - 1]).truncate(cut)
            rhs = u.apply(theta0.of_ring(P(RingElement.word((i,)), RingElement.word((j,))))).truncate(cut)
            if lhs != rhs:
                ok = False
                break
        if not ok:
            break
    return StructureReport(hopf, fixes, ok)


# ---------------------------------------------------------------------------
# diagrammatic logarithm


def derivation_log(u: TruncatedAutomorphism, theta: Expansion) -> Derivation:
    """log(theta o u o theta^-1) as a derivation in theta coordinates."""
    return log_automorphism(transport(theta, u))


def diagram_log(u: TruncatedAutomorphism, theta: Expansion, max_degree: int | None = None):
    """Xi^-1 of log(theta o u o theta^-1), degree by degree up to N - 2."""
    from .jacobi_diagrams import xi_inverse
    D = derivation_log(u, theta)
    top = u.N - 2 if max_degree is None else min(max_degree, u.N - 2)
    out = {}
    for d in range(0, top + 1):
        part = D.degree_part(d)
        if part.is_zero():
            continue
        out[d] = xi_inverse(part, u.genus, d)
    return out
