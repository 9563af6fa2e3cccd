"""H-colored uni-trivalent trees modulo AS, IHX and multilinearity.

A tree is handled in rooted form ``(c, t)``: the leaf colored ``c`` is the
root and ``t`` is a planar binary tree whose leaves are colors (ints) and
whose internal nodes are pairs ``(left, right)``.  An internal vertex met from
its parent has cyclic order (parent, left, right), so swapping the two
children is the AS relation.  A strut ``h -- k`` is ``(h, k)``.

The quotient space is built explicitly: canonical trees with basis colors
span, IHX relations (Jacobi identities at internal edges) are eliminated,
and the surviving columns are the diagram basis.  Xi is then an honest map
between two independently built spaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Tuple

from .tensor_lie import (
    Derivation,
    LieElement,
    TensorElement,
    TensorError,
    _acc,
    derivation_from_hl,
    hl_from_derivation,
    letter_label,
    lyndon_words,
    _standard_split,
    witt_dimension,
)

GLUE_SYMBOL = "\u2014"


class DiagramError(ValueError):
    pass


# ---------------------------------------------------------------------------
# planar trees


def n_leaves(t) -> int:
    return 1 if isinstance(t, int) else n_leaves(t[0]) + n_leaves(t[1])


def leaf_colors(t) -> List[int]:
    return [t] if isinstance(t, int) else leaf_colors(t[0]) + leaf_colors(t[1])


def _tkey(t):
    return (t,) if isinstance(t, int) else (-1, _tkey(t[0]), _tkey(t[1]))


def _canon_planar(t):
    """(sign, tree) with children sorted; sign 0 when AS forces zero."""
    if isinstance(t, int):
        return 1, t
    s1, a = _canon_planar(t[0])
    s2, b = _canon_planar(t[1])
    s = s1 * s2
    if s == 0:
        return 0, None
    ka, kb = _tkey(a), _tkey(b)
    if ka == kb:
        return 0, None
    if ka > kb:
        return -s, (b, a)
    return s, (a, b)


def comm_tensor(t, N: int) -> Dict[Tuple[int, ...], Fraction]:
    """Expansion of the iterated bracket of a planar tree."""
    if isinstance(t, int):
        return {(t,): Fraction(1)}
    a, b = comm_tensor(t[0], N), comm_tensor(t[1], N)
    out: Dict = {}
    for u, cu in a.items():
        for v, cv in b.items():
            if len(u) + len(v) < N:
                _acc(out, u + v, cu * cv)
                _acc(out, v + u, -cu * cv)
    return out


def bracket_string(t) -> str:
    if isinstance(t, int):
        return letter_label(t)
    return f"[{bracket_string(t[0])},{bracket_string(t[1])}]"


# ---------------------------------------------------------------------------
# unrooted structure and rerooting


class _Graph:
    def __init__(self):
        self.color: Dict[int, int] = {}
        self.adj: Dict[int, Tuple[int, ...]] = {}
        self.n = 0

    def new(self):
        self.n += 1
        return self.n - 1

    def add_planar(self, t, parent: int) -> int:
        v = self.new()
        if isinstance(t, int):
            self.color[v] = t
            self.adj[v] = (parent,)
        else:
            self.adj[v] = (parent, -1, -1)
            left = self.add_planar(t[0], v)
            right = self.add_planar(t[1], v)
            self.adj[v] = (parent, left, right)
        return v

    def planar_from(self, v: int, came: int):
        if v in self.color:
            return self.color[v]
        a = self.adj[v]
        k = a.index(came)
        return (self.planar_from(a[(k + 1) % 3], v), self.planar_from(a[(k + 2) % 3], v))

    def rootings(self):
        for v, c in self.color.items():
            u = self.adj[v][0]
            yield c, self.planar_from(u, v)


def _graph_of(diagram) -> _Graph:
    c, t = diagram
    G = _Graph()
    root = G.new()
    G.color[root] = c
    top = G.add_planar(t, root)
    G.adj[root] = (top,)
    return G


def glue_planar(x, y) -> Tuple[int, object]:
    """Join two planar rooted trees at their roots; returns a rooted diagram."""
    if isinstance(y, int):
        return (y, x)
    if isinstance(x, int):
        return (x, y)
    G = _Graph()
    vx = G.new()
    vy = G.new()
    lx = G.add_planar(x[0], vx)
    rx = G.add_planar(x[1], vx)
    G.adj[vx] = (vy, lx, rx)
    ly = G.add_planar(y[0], vy)
    ry = G.add_planar(y[1], vy)
    G.adj[vy] = (vx, ly, ry)
    return next(G.rootings())


def canonical(diagram) -> Tuple[int, object]:
    """(sign, key) of a rooted diagram; sign 0 means the diagram vanishes."""
    c, t = diagram
    if isinstance(t, int):
        return 1, (min(c, t), max(c, t))
    best = None
    for rc, rt in _graph_of(diagram).rootings():
        s, ct = _canon_planar(rt)
        if s == 0:
            return 0, None
        key = (rc, ct)
        k = (rc, _tkey(ct))
        if best is None or k < best[0]:
            best = (k, s, key)
        elif k == best[0] and s != best[1]:
            return 0, None
    return best[1], best[2]


def degree_of(diagram) -> int:
    return n_leaves(diagram[1]) - 1


def diagram_string(key) -> str:
    c, t = key
    return f"({letter_label(c)}{GLUE_SYMBOL}{bracket_string(t)})"


# ---------------------------------------------------------------------------
# shapes and the quotient basis


@lru_cache(maxsize=None)
def _shapes(n: int) -> Tuple:
    """Planar binary shapes with n leaves (leaves marked None)."""
    if n == 1:
        return (None,)
    out = []
    for k in range(1, n):
        for a in _shapes(k):
            for b in _shapes(n - k):
                out.append((a, b))
    return tuple(out)


def _fill(shape, colors, pos=0):
    if shape is None:
        return colors[pos], pos + 1
    a, pos = _fill(shape[0], colors, pos)
    b, pos = _fill(shape[1], colors, pos)
    return (a, b), pos


def _raw_diagrams(q: int, d: int):
    n = d + 1
    for shape in _shapes(n):
        for colors in itertools.product(range(q), repeat=n + 1):
            t, _ = _fill(shape, colors[1:])
            yield (colors[0], t)


def _jacobi_relations(key) -> Iterable[Dict]:
    """IHX: at every parent/child edge of internal nodes, [[a,b],c] + cyclic = 0."""
    c0, t = key

    def walk(t, rebuild):
        if isinstance(t, int):
            return
        left, right = t
        if not isinstance(left, int):
            a, b = left
            cc = right
            yield [rebuild(((a, b), cc)), rebuild(((b, cc), a)), rebuild(((cc, a), b))]
        yield from walk(left, lambda s, r=right: rebuild((s, r)))
        yield from walk(right, lambda s, l=left: rebuild((l, s)))

    for triple in walk(t, lambda s: s):
        rel: Dict = {}
        for tt in triple:
            s, k = canonical((c0, tt))
            if s:
                _acc(rel, k, Fraction(s))
        if rel:
            yield rel


def _sort_key(k):
    return (k[0], _tkey(k[1]))


@dataclass
class _Block:
    columns: List  # canonical keys, sorted
    pivots: Dict  # key -> reduced row (dict over non-pivot keys, including the pivot with coeff 1)
    basis: List  # free keys


@dataclass
class DiagramSpace:
    """The reduced basis of T_d for rank q = 2g."""

    q: int
    d: int
    blocks: Dict[Tuple[int, ...], _Block] = field(default_factory=dict)

    @property
    def basis(self) -> List:
        out = []
        for m in sorted(self.blocks):
            out.extend(self.blocks[m].basis)
        return out

    @property
    def dimension(self) -> int:
        return sum(len(b.basis) for b in self.blocks.values())

    def reduce_vector(self, vec: Mapping) -> Dict:
        out: Dict = {}
        for k, c in vec.items():
            m = _multiset(k)
            block = self.blocks.get(m)
            if block is None or (k not in block.pivots and k not in block.basis):
                raise DiagramError("diagram outside the enumerated space")
            if k in block.pivots:
                for kk, cc in block.pivots[k].items():
                    if kk != k:
                        _acc(out, kk, -c * cc)
            else:
                _acc(out, k, c)
        return out


def _multiset(key) -> Tuple[int, ...]:
    c, t = key
    cols = [c] + ([t] if isinstance(t, int) else leaf_colors(t))
    return tuple(sorted(cols))


@lru_cache(maxsize=None)
def diagram_space(q: int, d: int) -> DiagramSpace:
    if d > 4:
        raise DiagramError("diagram degrees above 4 are not supported")
    keys = set()
    if d == 0:
        for a in range(q):
            for b in range(a, q):
                keys.add((a, b))
    else:
        for raw in _raw_diagrams(q, d):
            s, k = canonical(raw)
            if s:
                keys.add(k)
    by_block: Dict[Tuple[int, ...], List] = {}
    for k in keys:
        by_block.setdefault(_multiset(k), []).append(k)
    space = DiagramSpace(q, d)
    for m, cols in by_block.items():
        cols.sort(key=_sort_key)
        order = {k: i for i, k in enumerate(cols)}
        pivots: Dict = {}
        if d >= 2:
            for k in cols:
                for rel in _jacobi_relations(k):
                    _insert_relation(pivots, rel, order)
        basis = [k for k in cols if k not in pivots]
        space.blocks[m] = _Block(cols, pivots, basis)
    return space


def _insert_relation(pivots: Dict, rel: Dict, order: Dict):
    row = dict(rel)
    for p in [k for k in row if k in pivots]:
        if p in row:
            f = row[p]
            for kk, cc in pivots[p].items():
                _acc(row, kk, -f * cc)
    if not row:
        return
    p = max(row, key=lambda k: order[k])
    f = row[p]
    row = {k: c / f for k, c in row.items()}
    # keep all pivot rows fully reduced
    for q, other in pivots.items():
        if p in other:
            g = other[p]
            for kk, cc in row.items():
                _acc(other, kk, -g * cc)
    pivots[p] = row


# ---------------------------------------------------------------------------
# combinations


@dataclass(frozen=True)
class DiagramCombo:
    """Reduced combination of diagrams, ``parts[d][key] = coeff``."""

    q: int
    parts: Mapping[int, Mapping] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, p in self.parts.items():
            kept = {k: Fraction(c) for k, c in p.items() if c}
            if kept:
                clean[d] = kept
        object.__setattr__(self, "parts", clean)

    def __add__(self, other):
        parts = {d: dict(p) for d, p in self.parts.items()}
        for d, p in other.parts.items():
            tgt = parts.setdefault(d, {})
            for k, c in p.items():
                _acc(tgt, k, c)
        return DiagramCombo(self.q, parts)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return DiagramCombo(self.q, {d: {k: c * v for k, v in p.items() if c * v} for d, p in self.parts.items()})

    def __eq__(self, other):
        return isinstance(other, DiagramCombo) and self.q == other.q and self.parts == other.parts

    def __hash__(self):
        return hash((self.q, tuple(sorted((d, frozenset(p.items())) for d, p in self.parts.items()))))

    def degree(self, d):
        return DiagramCombo(self.q, {d: self.parts.get(d, {})})

    def is_zero(self):
        return not self.parts

    def __str__(self):
        from .exact_series import format_rational
        items = []
        for d in sorted(self.parts):
            for k in sorted(self.parts[d], key=_sort_key):
                items.append(f"{format_rational(self.parts[d][k])}*{diagram_string(k)}")
        return " + ".join(items) if items else "0"


def reduce(raw: Iterable[Tuple[object, object]], q: int, degree: int | None = None) -> DiagramCombo:
    """Reduce (coefficient, rooted diagram) pairs modulo AS/IHX/multilinearity.

    Leaf colors may be ints or mappings {letter: coefficient}; the latter
    are expanded multilinearly.
    """
    per: Dict[int, Dict] = {}
    for coeff, diagram in raw:
        for c2, dia in _multilinear(diagram):
            d = degree_of(dia)
            if degree is not None and d != degree:
                raise DiagramError("mixed degrees in reduce")
            s, k = canonical(dia)
            if s:
                _acc(per.setdefault(d, {}), k, Fraction(coeff) * c2 * s)
    parts = {d: diagram_space(q, d).reduce_vector(v) for d, v in per.items()}
    return DiagramCombo(q, parts)


def _multilinear(diagram):
    c, t = diagram
    for cc, root in _expand_leaf(c):
        for ct, tree in _expand_tree(t):
            yield cc * ct, (root, tree)


def _expand_leaf(c):
    if isinstance(c, int):
        yield Fraction(1), c
    else:
        for letter, coef in dict(c).items():
            yield Fraction(coef), letter


def _expand_tree(t):
    if isinstance(t, int) or isinstance(t, Mapping):
        yield from _expand_leaf(t)
        return
    for ca, a in _expand_tree(t[0]):
        for cb, b in _expand_tree(t[1]):
            yield ca * cb, (a, b)


def reduce_combo(x: DiagramCombo) -> DiagramCombo:
    return DiagramCombo(x.q, {d: diagram_space(x.q, d).reduce_vector(p) for d, p in x.parts.items()})


# ---------------------------------------------------------------------------
# Xi


def _xi_hl(key, N: int, q: int) -> List[Dict]:
    hl = [dict() for _ in range(q)]
    c, t = key
    if isinstance(t, int):
        _acc(hl[c], (t,), Fraction(1))
        _acc(hl[t], (c,), Fraction(1))
        return hl
    for rc, rt in _graph_of(key).rootings():
        for w, e in comm_tensor(rt, N).items():
            _acc(hl[rc], w, e)
    return hl


def xi(D: DiagramCombo, N: int | None = None) -> Derivation:
    """Xi(T) = sum_v col(v) (x) comm(T_v), returned as a derivation."""
    q = D.q
    top = max(D.parts) if D.parts else 0
    N = top + 3 if N is None else N
    hl = [dict() for _ in range(q)]
    for d, p in D.parts.items():
        for k, c in p.items():
            for h, part in enumerate(_xi_hl(k, N, q)):
                for w, e in part.items():
                    _acc(hl[h], w, c * e)
    return derivation_from_hl([TensorElement(N, h) for h in hl])


@dataclass
class _XiSolver:
    rows: Dict  # pivot coordinate -> (vector, combination)


@lru_cache(maxsize=None)
def _xi_solver(q: int, d: int):
    space = diagram_space(q, d)
    N = d + 3
    solver: Dict[Tuple[int, ...], Dict] = {}
    ranks = 0
    for m, block in space.blocks.items():
        echelon: Dict = {}
        for b in block.basis:
            vec: Dict = {}
            for h, part in enumerate(_xi_hl(b, N, q)):
                for w, e in part.items():
                    _acc(vec, (h, w), e)
            comb = {b: Fraction(1)}
            vec, comb = _eliminate(echelon, vec, comb)
            if vec:
                p = min(vec)
                f = vec[p]
                echelon[p] = ({k: c / f for k, c in vec.items()}, {k: c / f for k, c in comb.items()})
                ranks += 1
        solver[m] = echelon
    return solver, ranks


def _eliminate(echelon, vec, comb):
    vec, comb = dict(vec), dict(comb)
    changed = True
    while changed:
        changed = False
        for p in sorted(k for k in vec if k in echelon):
            if p not in vec:
                continue
            f = vec[p]
            ev, ec = echelon[p]
            for k, c in ev.items():
                _acc(vec, k, -f * c)
            for k, c in ec.items():
                _acc(comb, k, -f * c)
            changed = True
    return vec, comb


def xi_rank(q: int, d: int) -> int:
    return _xi_solver(q, d)[1]


def der_omega_dimension(q: int, d: int) -> int:
    """dim ker(H (x) L_{d+1} -> L_{d+2})."""
    return q * witt_dimension(q, d + 1) - witt_dimension(q, d + 2)


def xi_inverse(delta: Derivation, genus: int, d: int) -> DiagramCombo:
    """The diagram combination mapped by Xi onto a degree-d symplectic derivation."""
    q = 2 * genus
    solver, _ = _xi_solver(q, d)
    hl = hl_from_derivation(delta)
    per_block: Dict = {}
    for h, t in enumerate(hl):
        for w, c in t.parts[d + 1].items() if d + 1 < t.N else ():
            m = tuple(sorted((h,) + w))
            _acc(per_block.setdefault(m, {}), (h, w), c)
        for e, part in enumerate(t.parts):
            if e != d + 1 and part:
                raise DiagramError("derivation is not homogeneous of the requested degree")
    out: Dict = {}
    for m, vec in per_block.items():
        echelon = solver.get(m)
        if echelon is None:
            raise DiagramError("derivation is not in the image of Xi (not symplectic)")
        comb = {}
        rest, neg = _eliminate(echelon, vec, comb)
        if rest:
            raise DiagramError("derivation is not in the image of Xi (not symplectic)")
        for k, c in neg.items():
            _acc(out, k, -c)
    return DiagramCombo(q, {d: out})


# ---------------------------------------------------------------------------
# gluing and the bracket


def lyndon_tree(w: Tuple[int, ...]):
    if len(w) == 1:
        return w[0]
    u, v = _standard_split(w)
    return (lyndon_tree(u), lyndon_tree(v))


def rooted_trees(x) -> List[Tuple[Fraction, object]]:
    """A Lie element (LieElement or primitive tensor) as planar rooted trees."""
    if isinstance(x, TensorElement):
        from .tensor_lie import to_lyndon
        x = to_lyndon(x, max((max(w) for w, _ in x.terms() if w), default=0) + 1)
    if isinstance(x, LieElement):
        return [(Fraction(c), lyndon_tree(w)) for w, c in x.coeffs.items()]
    return [(Fraction(c), t) for c, t in x]


def glue(x, y, q: int) -> DiagramCombo:
    """Root-to-root gluing x -- y, bilinear."""
    raw = []
    for cx, tx in rooted_trees(x):
        for cy, ty in rooted_trees(y):
            raw.append((cx * cy, glue_planar(tx, ty)))
    return reduce(raw, q)


def _omega(i, j):
    from .tensor_lie import omega_form
    return omega_form(i, j)


def bracket(T: DiagramCombo, U: DiagramCombo) -> DiagramCombo:
    """[T, T'] = sum omega(col v, col v') T_v -- T'_v'."""
    raw = []
    for d1, p1 in T.parts.items():
        for k1, c1 in p1.items():
            for d2, p2 in U.parts.items():
                for k2, c2 in p2.items():
                    for rc1, rt1 in _rootings(k1):
                        for rc2, rt2 in _rootings(k2):
                            w = _omega(rc1, rc2)
                            if w:
                                raw.append((c1 * c2 * w, glue_planar(rt1, rt2)))
    return reduce(raw, T.q)


def _rootings(key):
    c, t = key
    if isinstance(t, int):
        return [(c, t), (t, c)]
    return list(_graph_of(key).rootings())


def glue_and_bracket(x, y, mode: str, q: int) -> DiagramCombo:
    if mode == "glue":
        return glue(x, y, q)
    if mode == "bracket":
        return bracket(x, y)
    raise DiagramError(f"unknown mode {mode!r}")


def half_glue_square(ell: TensorElement, q: int, max_degree: int) -> DiagramCombo:
    """1/2 ell -- ell, keeping diagram degrees <= max_degree."""
    from .tensor_lie import to_lyndon
    lie = to_lyndon(ell, q)
    trees = [(Fraction(c), lyndon_tree(w), len(w)) for w, c in lie.coeffs.items()]
    raw = []
    for cx, tx, nx in trees:
        for cy, ty, ny in trees:
            if nx + ny - 2 <= max_degree:
                raw.append((cx * cy / 2, glue_planar(tx, ty)))
    return reduce(raw, q)
