"""The acceptance suite: ten exact checks, each returning a CriterionResult.

All comparisons are exact rational equalities.  Randomized sampling is driven
by ``random.Random(seed)`` so that a run is fully determined by its config.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from .exact_series import cosh_series, named_series
from .expansion import exponential_expansion, make_symplectic
from .fox_pairing import derived_form, surface_pairing
from .free_group_ring import (
    ClassCombo,
    ConjClass,
    RingElement,
    Word,
    commutator,
    cyclic_reduce,
    inverse_word,
    mul_words,
    reduce_word,
)
from .jacobi_diagrams import (
    DiagramCombo,
    bracket,
    der_omega_dimension,
    diagram_space,
    half_glue_square,
    xi,
    xi_rank,
)
from .skein_shadow import (
    chebyshev_trace_check,
    figure_eight_display,
    figure_eight_report,
    figure_eight_sigma,
)
from .surface_loops import (
    apply_substitution,
    build_surface,
    classical_twist_images,
    eta_pairing,
    sigma_action,
    zeta_word,
)
from .tensor_lie import derivation_bracket, omega_form
from .twist_engine import (
    classical_twist_automorphism,
    diagram_log,
    generalized_twist,
    johnson_degree,
    nilpotent_quotient_action,
    structure_checks,
)
from .twist_factorization import (
    TwistWord,
    approximate_by_twists,
    basis_matrix,
    mat_mul,
    product_of_transvections,
    symplectic_factor,
    transvection_matrix,
)


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 7
    trunc: int = 5
    samples: int = 100


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}\t{self.number}\t{self.name}\t{self.detail}"


# ---------------------------------------------------------------------------
# seeded samplers


def random_word(genus: int, length: int, rng: random.Random) -> Word:
    letters = [s * k for k in range(1, 2 * genus + 1) for s in (1, -1)]
    w: List[int] = []
    while len(w) < length:
        x = rng.choice(letters)
        if w and w[-1] == -x:
            continue
        w.append(x)
    return tuple(w)


def random_loop(genus: int, max_length: int, rng: random.Random) -> Word:
    while True:
        w = cyclic_reduce(random_word(genus, rng.randint(1, max_length), rng))
        if w:
            return w


def random_symplectic(genus: int, rng: random.Random, factors: int = 4):
    """A product of seeded rational transvections, so symplectic by construction."""
    M = basis_matrix(2 * genus)
    for _ in range(factors):
        c = [Fraction(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(2 * genus)]
        if any(c):
            M = mat_mul(M, transvection_matrix(c, rng.choice([1, -1, Fraction(2, 3)])))
    return M


def _homology(w: Word, genus: int) -> List[int]:
    v = [0] * (2 * genus)
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def _omega_int(u, v) -> int:
    n = len(u)
    return sum(u[i] * v[j] * omega_form(i, j) for i in range(n) for j in range(n))


def _ring(w: Word) -> RingElement:
    return RingElement.word(w)


# ---------------------------------------------------------------------------
# criteria


def criterion_1(cfg: AcceptanceConfig) -> CriterionResult:
    value = figure_eight_sigma()
    ok = value == figure_eight_display()
    return CriterionResult(1, "figure-eight sigma value", ok, str(value))


def criterion_2(cfg: AcceptanceConfig) -> CriterionResult:
    N = 6
    cases = [(1, (1,)), (1, (2,)), (2, (1,)), (2, (2,)), (2, commutator((1,), (2,)))]
    bad = []
    for g, C in cases:
        S = build_surface(g)
        if generalized_twist(S, C, Fraction(1, 2), N) != classical_twist_automorphism(S, C, N):
            bad.append((g, C))
    return CriterionResult(2, "generalized twist equals classical twist", not bad,
                           f"{len(cases) - len(bad)}/{len(cases)} cases mod degree {N}")


def criterion_3(cfg: AcceptanceConfig) -> CriterionResult:
    S = build_surface(2)
    gamma = commutator((1,), (2,))
    u = generalized_twist(S, gamma, Fraction(1, 2), 6)
    rep = nilpotent_quotient_action(S, u, gamma, (1,), 2)
    return CriterionResult(3, "insertion formula mod Gamma_4", rep.holds,
                           f"discrepancy degree {rep.discrepancy_degree}")


def criterion_4(cfg: AcceptanceConfig) -> CriterionResult:
    N, g = 6, 2
    S = build_surface(g)
    theta = make_symplectic(exponential_expansion(g, N))
    curves = [(1,), (1, 4), commutator((1,), (2,))]
    bad = []
    for C in curves:
        u = generalized_twist(S, C, Fraction(1, 2), N)
        dl = diagram_log(u, theta, 3)
        lhs = DiagramCombo(2 * g, {d: v.parts.get(d, {}) for d, v in dl.items()})
        rhs = half_glue_square(theta.log_of_word(C), 2 * g, 3)
        if lhs != rhs:
            bad.append(C)
    return CriterionResult(4, "diagrammatic log is half glue square", not bad,
                           f"{len(curves) - len(bad)}/{len(curves)} curves through degree 3")


def criterion_5(cfg: AcceptanceConfig) -> CriterionResult:
    g, N, target = 2, max(cfg.trunc, 5), 3
    S = build_surface(g)
    factors = ((Fraction(1, 3), (1,)), (Fraction(1, 2), commutator((1,), (2,))), (Fraction(-2, 5), (1, 4)))
    u = TwistWord(factors).evaluate(S, N)
    word, report = approximate_by_twists(S, u, target)
    residual = word.evaluate(S, N).inverse().compose(u)
    pipeline = report.residual_degree >= target + 1 and johnson_degree(residual) >= target + 1
    rng = random.Random(cfg.seed)
    good = 0
    for k in range(20):
        M = random_symplectic(1 + k % 3, rng)
        good += product_of_transvections(symplectic_factor(M), len(M)) == M
    ok = pipeline and good == 20
    return CriterionResult(5, "twist factorization", ok,
                           f"residual degree {report.residual_degree}, {len(word.factors)} twists; "
                           f"{good}/20 matrices factored")


def criterion_6(cfg: AcceptanceConfig) -> CriterionResult:
    n = 17
    checks = {}
    inner = cosh_series(n, "u").scale(-2) + 2
    comp = named_series("arccosh_sq_neg", n).compose(inner)
    checks["arccosh_sq(-2cosh u) = u^2"] = comp.order >= n - 1 and comp.coeffs == {2: 1}
    even = named_series("arccosh_sq_neg", n, 2)
    checks["chi derivative"] = even.derive().scale(Fraction(1, 2)) == named_series("chi", n, 2).truncate(n - 1)
    checks["arccosh_sq coefficients"] = named_series("arccosh_sq_neg", 3).as_list() == [0, -1, Fraction(-1, 12)]
    checks["fraction coefficients"] = named_series("fraction", 3).as_list() == [Fraction(1, 2), 0, Fraction(1, 12)]
    checks["boundary coefficients"] = named_series("boundary_term", 4).as_list() == [0, 0, 2, 2]
    checks["fraction constant"] = named_series("fraction", 1).coefficient(0) == Fraction(1, 2)
    checks["arcsinh constant"] = named_series("arcsinh_prefactor", 1).coefficient(0) == 1
    bad = [k for k, v in checks.items() if not v]
    return CriterionResult(6, "power series suite", not bad,
                           f"{len(checks) - len(bad)}/{len(checks)} checks" + (f"; failed {bad}" if bad else ""))


def criterion_7(cfg: AcceptanceConfig) -> CriterionResult:
    rng = random.Random(cfg.seed)
    n = cfg.samples
    surfaces = {g: build_surface(g) for g in (1, 2)}
    pairings = {g: surface_pairing(S) for g, S in surfaces.items()}
    bad = {"fox": 0, "augmentation": 0, "derivation": 0, "zeta": 0, "derived": 0, "equivariance": 0}
    for t in range(n):
        g = 1 + t % 2
        S = surfaces[g]
        x, y, z = (random_word(g, rng.randint(0, 6), rng) for _ in range(3))
        left = eta_pairing(S, mul_words(x, y), z) == _ring(x) * eta_pairing(S, y, z) + eta_pairing(S, x, z)
        right = eta_pairing(S, x, mul_words(y, z)) == eta_pairing(S, x, y) * _ring(z) + eta_pairing(S, x, z)
        bad["fox"] += not (left and right)
        aug = eta_pairing(S, x, y).augmentation()
        bad["augmentation"] += aug != _omega_int(_homology(x, g), _homology(y, g))
        loop = random_loop(g, 6, rng)
        u = ConjClass(loop)
        v1, v2 = random_word(g, rng.randint(0, 6), rng), random_word(g, rng.randint(0, 6), rng)
        lhs = sigma_action(S, u, mul_words(v1, v2))
        rhs = sigma_action(S, u, v1) * _ring(v2) + _ring(v1) * sigma_action(S, u, v2)
        bad["derivation"] += lhs != rhs
        bad["zeta"] += bool(sigma_action(S, u, zeta_word(g)))
        bad["derived"] += derived_form(pairings[g], loop, v1) != sigma_action(S, u, v1)
    simple = {1: [(1,), (2,), (1, 2)], 2: [(1,), (2,), (1, 2), commutator((1,), (2,)), (1, 3), (2, 4)]}
    images = {(g, C): classical_twist_images(surfaces[g], C) for g in simple for C in simple[g]}
    keys = sorted(images)
    for t in range(n):
        g, C = keys[t % len(keys)]
        S, im = surfaces[g], images[(g, C)]
        x, y = random_word(g, rng.randint(1, 6), rng), random_word(g, rng.randint(1, 6), rng)
        lhs = eta_pairing(S, apply_substitution(im, x), apply_substitution(im, y))
        e = eta_pairing(S, x, y)
        rhs = RingElement({apply_substitution(im, w): c for w, c in e.terms.items()})
        bad["equivariance"] += lhs != rhs
    failed = {k: v for k, v in bad.items() if v}
    return CriterionResult(7, "eta and sigma properties", not failed,
                           f"{len(bad)} properties x {n} samples" + (f"; failures {failed}" if failed else ""))


def _power_minus_one(loop: Word, m: int) -> ClassCombo:
    from math import comb
    out = {}
    for i in range(m + 1):
        key = ConjClass(loop * i)
        out[key] = out.get(key, 0) + Fraction(comb(m, i) * (-1) ** (m - i))
    return ClassCombo(out)


def criterion_8(cfg: AcceptanceConfig) -> CriterionResult:
    from .fox_pairing import in_augmentation_power
    rng = random.Random(cfg.seed + 1)
    N, g = cfg.trunc, 2
    S = build_surface(g)
    bad = {"structure": 0, "square": 0, "cube": 0, "filtration": 0}
    for _ in range(5):
        C = random_loop(g, 4, rng)
        t = generalized_twist(S, C, Fraction(1, 2), N)
        bad["structure"] += not structure_checks(S, t).all()
        bad["square"] += generalized_twist(S, C * 2, Fraction(1, 2), N) != t.power(4)
        bad["cube"] += generalized_twist(S, C * 3, Fraction(1, 2), N) != t.power(9)
        for m in (2, 3):
            combo = _power_minus_one(C, m)
            for n in (1, 2):
                k = rng.randint(1, 2 * g)
                v = RingElement.one()
                for _ in range(n):
                    v = v * (_ring((k,)) - RingElement.one())
                out = sigma_action(S, combo, v)
                bad["filtration"] += not in_augmentation_power(out, min(m + n - 2, N), N, g)
    failed = {k: v for k, v in bad.items() if v}
    return CriterionResult(8, "twist structure", not failed,
                           f"5 curves mod degree {N}" + (f"; failures {failed}" if failed else ""))


def criterion_9(cfg: AcceptanceConfig) -> CriterionResult:
    ranks = []
    for g, d in [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1)]:
        q = 2 * g
        dims = (diagram_space(q, d).dimension, xi_rank(q, d), der_omega_dimension(q, d))
        ranks.append(dims[0] == dims[1] == dims[2])
    rng = random.Random(cfg.seed)

    def sample(q, d):
        basis = diagram_space(q, d).basis
        picks = rng.sample(basis, min(3, len(basis)))
        return DiagramCombo(q, {d: {b: Fraction(rng.randint(-3, 3)) for b in picks}})

    transport = []
    for q in (2, 4):
        for d1, d2 in [(0, 0), (0, 1), (1, 1), (0, 2)] + ([(1, 2)] if q == 4 else []):
            T, U = sample(q, d1), sample(q, d2)
            N = d1 + d2 + 3
            transport.append(xi(bracket(T, U), N) == derivation_bracket(xi(T, N), xi(U, N)))
    ok = all(ranks) and all(transport)
    return CriterionResult(9, "Jacobi diagram suite", ok,
                           f"ranks {sum(ranks)}/{len(ranks)}, bracket transport {sum(transport)}/{len(transport)}")


def criterion_10(cfg: AcceptanceConfig) -> CriterionResult:
    rep = figure_eight_report(4)
    tc = chebyshev_trace_check(6)
    ok = rep.all() and tc.all()
    return CriterionResult(10, "figure-eight report and Chebyshev traces", ok,
                           f"report {rep.all()}, congruence {rep.congruence_reduce}, traces {tc.all()}")


CRITERIA: Tuple[Callable[[AcceptanceConfig], CriterionResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
)


def run_criterion(k: int, cfg: AcceptanceConfig) -> CriterionResult:
    fn = CRITERIA[k - 1]
    try:
        return fn(cfg)
    except Exception as exc:  # a crash is a failure, reported with its message
        return CriterionResult(k, fn.__name__, False, f"error: {type(exc).__name__}: {exc}")


def run_all(cfg: AcceptanceConfig = AcceptanceConfig(), only: Sequence[int] | None = None) -> List[CriterionResult]:
    ks = range(1, len(CRITERIA) + 1) if only is None else only
    return [run_criterion(k, cfg) for k in ks]
