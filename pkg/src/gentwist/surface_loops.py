"""Combinatorial surfaces and the geometric loop operations on them.

A surface is a ribbon graph with a single vertex ("rose"): every generator is
a petal, and the ribbon structure is the cyclic order of the edge ends
(slots) around the vertex.  Each petal letter ``l`` leaves the vertex through
the slot ``l`` and comes back through the slot ``-l``.

Loops are drawn as taut representatives: a reduced word becomes a sequence of
*passages* through the vertex, each passage entering through one slot and
leaving through another.  Two representatives then meet either inside the
vertex disk (two chords with interleaved endpoints) or along a common run of
petals, which is a crossing exactly when the strands swap sides between the
two ends of the run.  This gives the minimal position and the signs, and
everything else (eta, sigma, the Goldman bracket) is a sum over those points.

A second, independent realization (:class:`ChordModel`) places every petal
traversal at an explicit transverse height inside its band.  It is used for
the word-insertion formula of Dehn twists and as an oracle for the above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Tuple

from .free_group_ring import (
    PANTS, SURFACE, ClassCombo, ConjClass, GroupWord, RingElement, Word,
    cyclic_reduce, inverse_word, mul_words, primitive_root, reduce_word,
)

Passage = Tuple[object, object]

# The surface orientation is opposite to the counterclockwise order of the
# slots: with it the intersection pairing satisfies omega(a_i, b_i) = +1 while
# the boundary, read counterclockwise, is a1 b1 A1 B1 ... (see the ledger).
ORIENTATION = -1


class SurfaceError(ValueError):
    pass


class NotSimpleError(SurfaceError):
    """The curve has no embedded representative in this model."""


# ---------------------------------------------------------------------------
# the model


@dataclass(frozen=True)
class SurfaceModel:
    """Ribbon rose with marked basepoints in the boundary gaps.

    ``slots`` lists the edge ends in counterclockwise order, each named by the
    signed petal letter that departs through it.  ``stars`` maps a basepoint
    label to the gap index it sits in; gap ``k`` lies between ``slots[k]`` and
    ``slots[k+1]``.
    """

    genus: int
    boundary: int
    alphabet: str
    n_petals: int
    slots: Tuple[int, ...]
    stars: Tuple[Tuple[str, int], ...]
    boundary_words: Tuple[ConjClass, ...] = ()
    # pants only: orientation of r3, r4 relative to the petals x, y
    petal_signs: Tuple[int, int] = (1, 1)

    @property
    def euler_characteristic(self) -> int:
        return 1 - self.n_petals

    def star_gap(self, label: str) -> int:
        return dict(self.stars)[label]

    # --- slot positions -------------------------------------------------
    def positions(self, star_tokens: Sequence[Tuple[object, int]] = ()) -> Tuple[Dict, int]:
        """Map every slot and the given star tokens to an integer position.

        ``star_tokens`` is a list of (token, gap) pairs; tokens in the same gap
        are placed in the listed (counterclockwise) order.
        """
        idx: Dict[object, int] = {}
        for i, s in enumerate(self.slots):
            idx[s] = 100 * i
        count: Dict[int, int] = {}
        for tok, gap in star_tokens:
            k = count.get(gap, 0) + 1
            count[gap] = k
            idx[tok] = 100 * gap + k
        return idx, 100 * len(self.slots)


def _face_walk(slots: Sequence[int]) -> List[List[Tuple[int, int]]]:
    """Trace the boundary: arrive through slot h, leave via its ccw successor.

    Returns, for each boundary component, the list of (gap index, letter
    departed next) pairs in boundary order.
    """
    m = len(slots)
    where = {s: i for i, s in enumerate(slots)}
    seen = set()
    faces = []
    for start in range(m):
        if start in seen:
            continue
        face = []
        gap = start
        while gap not in seen:
            seen.add(gap)
            letter = slots[(gap + 1) % m]
            face.append((gap, letter))
            gap = where[-letter]  # arrive through the slot of the inverse letter
        faces.append(face)
    return faces


def _boundary_word_from_gap(slots, gap) -> Word:
    for face in _face_walk(slots):
        gaps = [g for g, _ in face]
        if gap in gaps:
            k = gaps.index(gap)
            rotated = face[k:] + face[:k]
            return tuple(letter for _, letter in rotated)
    raise SurfaceError("gap not found")


# Pants conventions, fixed by the search in scripts/calibrate_pants.py: the
# petal order s_x t_x s_y t_y, r3 = x, r4 = y, and *0 in the second outer
# gap.  The only other accepted choice is the mirror image of this one.
PANTS_MIRROR = False
PANTS_SIGNS = (1, 1)
PANTS_OUTER_GAP = 1


def _pants_slots(mirror: bool) -> Tuple[int, ...]:
    # x = petal 1, y = petal 2
    order = (1, -1, 2, -2)
    return tuple(reversed(order)) if mirror else order


def build_pants(mirror: bool = PANTS_MIRROR, signs=PANTS_SIGNS, outer: int = PANTS_OUTER_GAP) -> SurfaceModel:
    slots = _pants_slots(mirror)
    faces = _face_walk(slots)
    single = {}
    outer_gaps = []
    for face in faces:
        if len(face) == 1:
            single[abs(face[0][1])] = face[0][0]
        else:
            outer_gaps.extend(sorted(g for g, _ in face))
    stars = (("0", outer_gaps[outer]), ("1", single[1]), ("2", single[2]))
    words = tuple(ConjClass(_boundary_word_from_gap(slots, gap)) for _, gap in stars)
    return SurfaceModel(0, 3, PANTS, 2, slots, stars, words, tuple(signs))


def build_surface(genus: int, boundary: int = 1) -> SurfaceModel:
    """The genus-g surface with one boundary component, or the pair of pants."""
    if genus == 0 and boundary == 3:
        return build_pants()
    if genus < 1 or boundary != 1:
        raise SurfaceError(f"unsupported surface (genus={genus}, boundary={boundary})")
    slots: List[int] = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        slots += [a, -b, -a, b]
    gap = len(slots) - 1
    words = (ConjClass(_boundary_word_from_gap(slots, gap)),)
    return SurfaceModel(genus, 1, SURFACE, 2 * genus, tuple(slots), (("*", gap),), words)


def zeta_word(genus: int) -> Word:
    """The boundary word a1 b1 A1 B1 ... ag bg Ag Bg."""
    out = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        out += [a, b, -a, -b]
    return tuple(out)


# ---------------------------------------------------------------------------
# pants groupoid <-> petal words


def _pants_tree_path(star: str) -> Word:
    # c_0 = 1, c_1 = r1, c_2 = r2 (paths from *0)
    return {"0": (), "1": (1,), "2": (2,)}[star]


def pants_endpoints(word: Word) -> Tuple[str, str]:
    """Start and end basepoints of a reduced groupoid word in r1..r4."""
    if not word:
        raise SurfaceError("the empty groupoid word has no determined endpoints")
    ends = {1: ("0", "1"), 2: ("0", "2"), 3: ("1", "1"), 4: ("2", "2")}
    cur = None
    start = None
    for x in word:
        s, t = ends[abs(x)]
        if x < 0:
            s, t = t, s
        if cur is not None and s != cur:
            raise SurfaceError("groupoid word is not composable")
        if start is None:
            start = s
        cur = t
    return start, cur


def pants_to_petal(S: SurfaceModel, word: Word) -> Word:
    e3, e4 = S.petal_signs
    image = {1: (), 2: (), 3: (e3 * 1,), 4: (e4 * 2,)}
    out = []
    for x in word:
        piece = image[abs(x)]
        out.extend(piece if x > 0 else inverse_word(piece))
    return reduce_word(out)


def petal_to_pants(S: SurfaceModel, petal: Word, start: str, end: str) -> Word:
    e3, e4 = S.petal_signs
    loops = {1: (1, 3 * e3, -1), 2: (2, 4 * e4, -2)}
    pieces = [inverse_word(_pants_tree_path(start))]
    for x in petal:
        loop = loops[abs(x)]
        pieces.append(loop if x > 0 else inverse_word(loop))
    pieces.append(_pants_tree_path(end))
    return mul_words(*pieces)


def _petal_class(S: SurfaceModel, cls: ConjClass) -> Word:
    if S.alphabet == PANTS:
        letters = cls.letters
        if letters:
            s, t = pants_endpoints(letters)
            if s != t:
                raise SurfaceError("a free loop must be a closed groupoid word")
        return cyclic_reduce(pants_to_petal(S, letters))
    return cls.letters


def _petal_path(S: SurfaceModel, word: Word, start: str | None, end: str | None):
    if S.alphabet == PANTS:
        if start is None or end is None:
            start, end = pants_endpoints(word)
        return pants_to_petal(S, word), start, end
    return word, "*", "*"


def _from_petal_path(S, petal, start, end) -> Word:
    if S.alphabet == PANTS:
        return petal_to_pants(S, petal, start, end)
    return petal


def _from_petal_loop_class(S, petal) -> ConjClass:
    if S.alphabet == PANTS:
        return ConjClass(petal_to_pants(S, petal, "0", "0"), PANTS)
    return ConjClass(petal, S.alphabet)


# ---------------------------------------------------------------------------
# strands and the linked-pair criterion


@dataclass(frozen=True)
class Strand:
    passages: Tuple[Passage, ...]
    cyclic: bool


def cyclic_strand(word: Word) -> Strand:
    w = cyclic_reduce(word)
    n = len(w)
    if n == 0:
        return Strand((), True)
    return Strand(tuple((-w[j - 1], w[j]) for j in range(n)), True)


def based_strand(word: Word, start_tok, end_tok) -> Strand:
    w = reduce_word(word)
    n = len(w)
    passages = []
    for j in range(n + 1):
        a = start_tok if j == 0 else -w[j - 1]
        b = end_tok if j == n else w[j]
        passages.append((a, b))
    return Strand(tuple(passages), False)


def _reverse(strand: Strand) -> Tuple[Strand, List[int]]:
    n = len(strand.passages)
    if strand.cyclic:
        index = [(-k) % n for k in range(n)]
    else:
        index = [n - 1 - k for k in range(n)]
    rev = tuple((strand.passages[j][1], strand.passages[j][0]) for j in index)
    return Strand(rev, strand.cyclic), index


def _same_direction(P: Strand, Q: Strand, idx, M, four_distinct: bool):
    """Crossings between P and Q seen with both strands in the same direction.

    Yields (i, j, sign) with sign the local intersection number of (P, Q).
    """
    Pp, Qp = P.passages, Q.passages
    nP, nQ = len(Pp), len(Qp)
    out = []
    limit = nP * nQ + 1
    for i in range(nP):
        p0, p1 = Pp[i]
        ip0, ip1 = idx[p0], idx[p1]
        for j in range(nQ):
            q0, q1 = Qp[j]
            if p1 == q1:
                if p0 == q0:
                    continue
                # start of a common run; walk to its other end
                c0 = p1
                ic0 = idx[c0]
                start_left = (ip0 - ic0) % M < (idx[q0] - ic0) % M
                ii, jj, steps = i, j, 0
                ended = False
                while steps < limit:
                    ii += 1
                    jj += 1
                    steps += 1
                    if ii >= nP:
                        if not P.cyclic:
                            break
                        ii -= nP
                    if jj >= nQ:
                        if not Q.cyclic:
                            break
                        jj -= nQ
                    a1, b1 = Pp[ii][1], Qp[jj][1]
                    if a1 != b1:
                        c1 = Pp[ii][0]
                        ic1 = idx[c1]
                        end_flag = (idx[a1] - ic1) % M < (idx[b1] - ic1) % M
                        if start_left == end_flag:
                            out.append((i, j, 1 if start_left else -1))
                        ended = True
                        break
                if not ended and steps >= limit:
                    continue  # parallel forever: no crossing
                continue
            if not four_distinct:
                continue
            if p0 == q0 or p0 == q1 or p1 == q0:
                continue
            span = (ip1 - ip0) % M
            a = (idx[q0] - ip0) % M < span
            b = (idx[q1] - ip0) % M < span
            if a != b:
                out.append((i, j, 1 if a else -1))
    return out


def linked_pairs(P: Strand, Q: Strand, idx, M) -> List[Tuple[int, int, int]]:
    """All transverse intersection points of the taut strands P and Q.

    Returns (passage of P, passage of Q, sign of the frame (P', Q')).
    """
    if not P.passages or not Q.passages:
        return []
    result = [(i, j, ORIENTATION * s) for i, j, s in _same_direction(P, Q, idx, M, True)]
    Qr, index = _reverse(Q)
    for i, jr, s in _same_direction(P, Qr, idx, M, False):
        result.append((i, index[jr], -ORIENTATION * s))
    return result


def _rot(w: Word, i: int) -> Word:
    return w[i:] + w[:i]


# ---------------------------------------------------------------------------
# operations


# The first argument's stubs precede the second's along the boundary
# orientation, which runs clockwise in the slot order.
ETA_TOKENS = ("A_out", "A_in", "B_out", "B_in") if ORIENTATION > 0 else ("B_out", "B_in", "A_out", "A_in")


def _eta_words(S: SurfaceModel, x: Word, y: Word) -> Dict[Word, int]:
    gap = S.star_gap("*")
    idx, M = S.positions([(t, gap) for t in ETA_TOKENS])
    P = based_strand(x, "A_out", "A_in")
    Q = based_strand(y, "B_out", "B_in")
    out: Dict[Word, int] = {}
    for i, j, s in linked_pairs(P, Q, idx, M):
        w = mul_words(x[:i], y[j:])
        out[w] = out.get(w, 0) + s
    return out


def eta_pairing(S: SurfaceModel, x, y) -> RingElement:
    """Homotopy intersection form, extended bilinearly."""
    if S.alphabet != SURFACE:
        raise SurfaceError("eta is implemented for the one-boundary surfaces")
    x, y = _as_ring(x), _as_ring(y)
    out: Dict[Word, Fraction] = {}
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            for w, s in _eta_words(S, u, v).items():
                out[w] = out.get(w, 0) + cu * cv * s
    return RingElement(out, S.alphabet)


def _as_ring(x) -> RingElement:
    if isinstance(x, RingElement):
        return x
    if isinstance(x, GroupWord):
        return RingElement.word(x)
    return RingElement.word(tuple(x))


def _as_classes(u) -> ClassCombo:
    if isinstance(u, ClassCombo):
        return u
    if isinstance(u, ConjClass):
        return ClassCombo({u: 1})
    if isinstance(u, GroupWord):
        return ClassCombo.single(u)
    return ClassCombo.single(ConjClass(tuple(u)))


def crossing_data(S: SurfaceModel, loop: Word, path: Word, start: str = "*", end: str = "*"):
    """Signed crossings (i, j, s) of a cyclically reduced loop with a path.

    The loop copy inserted at the crossing is the rotation starting at
    letter i, and it enters the path after its first j letters.
    """
    if start == end:
        idx, M = S.positions([("S", S.star_gap(start))])
        Q = based_strand(path, "S", "S")
    else:
        idx, M = S.positions([("S0", S.star_gap(start)), ("S1", S.star_gap(end))])
        Q = based_strand(path, "S0", "S1")
    return linked_pairs(cyclic_strand(loop), Q, idx, M)


def _sigma_word(S: SurfaceModel, loop: Word, path: Word, start: str, end: str) -> Dict[Word, int]:
    """sigma(|loop|)(path) in petal words; the loop is cyclically reduced."""
    out: Dict[Word, int] = {}
    for i, j, s in crossing_data(S, loop, path, start, end):
        w = mul_words(path[:j], _rot(loop, i), path[j:])
        out[w] = out.get(w, 0) + s
    return out


def sigma_action(S: SurfaceModel, u, v, start: str | None = None, end: str | None = None) -> RingElement:
    """The action sigma(u)(v) of free loops on based loops or groupoid paths."""
    u = _as_classes(u)
    if isinstance(v, (GroupWord, tuple, list)):
        v = _as_ring(v)
    out: Dict[Word, Fraction] = {}
    for cls, cu in u.terms.items():
        loop = _petal_class(S, cls)
        if not loop:
            continue
        for word, cv in v.terms.items():
            if not word and S.alphabet == PANTS and (start is None):
                continue
            petal, s0, s1 = _petal_path(S, word, start, end)
            for w, s in _sigma_word(S, loop, petal, s0, s1).items():
                key = _from_petal_path(S, w, s0, s1)
                out[key] = out.get(key, 0) + cu * cv * s
    return RingElement(out, S.alphabet)


def goldman_bracket(S: SurfaceModel, x, y) -> ClassCombo:
    """Goldman bracket of two combinations of free loops."""
    x, y = _as_classes(x), _as_classes(y)
    idx, M = S.positions()
    out: Dict[ConjClass, Fraction] = {}
    for c1, a in x.terms.items():
        w1 = _petal_class(S, c1)
        if not w1:
            continue
        P = cyclic_strand(w1)
        for c2, b in y.terms.items():
            w2 = _petal_class(S, c2)
            if not w2:
                continue
            Q = cyclic_strand(w2)
            for i, j, s in linked_pairs(P, Q, idx, M):
                cls = _from_petal_loop_class(S, mul_words(_rot(w1, i), _rot(w2, j)))
                out[cls] = out.get(cls, 0) + a * b * s
    return ClassCombo(out)


def self_intersection_count(S: SurfaceModel, loop) -> int:
    """Number of self-crossings of the taut representative of a primitive loop."""
    cls = loop if isinstance(loop, ConjClass) else ConjClass(tuple(loop.letters if isinstance(loop, GroupWord) else loop))
    w = _petal_class(S, cls)
    if not w:
        return 0
    idx, M = S.positions()
    P = cyclic_strand(w)
    pairs = linked_pairs(P, P, idx, M)
    # every self-crossing is seen from both branches
    return len(pairs) // 2


def is_simple(S: SurfaceModel, loop) -> bool:
    cls = loop if isinstance(loop, ConjClass) else ConjClass(tuple(loop.letters if isinstance(loop, GroupWord) else loop))
    w = _petal_class(S, cls)
    if not w:
        return True
    _, n = primitive_root(w)
    return n == 1 and self_intersection_count(S, cls) == 0


# ---------------------------------------------------------------------------
# explicit chord realization


_LEFT_OFFSET = 10 ** 6
_STAR_OFFSET = 10 ** 9


@dataclass
class ChordModel:
    """A transverse realization of a cyclic word inside the ribbon rose.

    Each occurrence of a letter gets a height inside its band, obtained by
    comparing forward rays; the vertex chords then follow.  Based strands
    drawn with :meth:`add_based` sit to the left of everything in every band.
    """

    S: SurfaceModel
    loop: Word
    heights: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.loop = cyclic_reduce(self.loop)
        self._idx, self._M = self.S.positions()
        self._assign_heights()

    def _ray(self, i: int):
        """Passages after traversal i, read in the band's positive direction."""
        w, n = self.loop, len(self.loop)
        if w[i] > 0:
            return [(-w[(i + t) % n], w[(i + t + 1) % n]) for t in range(n)]
        v = inverse_word(w)
        k = n - 1 - i
        return [(-v[(k + t) % n], v[(k + t + 1) % n]) for t in range(n)]

    def _compare(self, i: int, j: int) -> int:
        # negative when traversal i lies to the right of traversal j
        ri, rj = self._ray(i), self._ray(j)
        M = self._M
        for (c, p), (_, q) in zip(ri, rj):
            if p != q:
                ic = self._idx[c]
                left = (self._idx[p] - ic) % M > (self._idx[q] - ic) % M
                return 1 if left else -1
        raise SurfaceError("parallel traversals: the loop is a proper power")

    def _assign_heights(self):
        bands: Dict[int, List[int]] = {}
        for i, x in enumerate(self.loop):
            bands.setdefault(abs(x), []).append(i)
        for members in bands.values():
            ordered = sorted(members, key=cmp_to_key(self._compare))
            for rank, i in enumerate(ordered):
                self.heights[i] = rank + 1

    def _point(self, slot: int, height: int):
        offset = height if slot > 0 else -height
        return (self._idx[slot], offset)

    def loop_chords(self):
        """(passage index, in point, out point) for the loop."""
        w, n = self.loop, len(self.loop)
        chords = []
        for i in range(n):
            prev = (i - 1) % n
            a = self._point(-w[prev], self.heights[prev])
            b = self._point(w[i], self.heights[i])
            chords.append((i, a, b))
        return chords

    def based_chords(self, word: Word, start_gap: int, end_gap: int, lane: int = 0):
        w, n = reduce_word(word), len(word)
        chords = []
        for j in range(n + 1):
            if j == 0:
                a = (self._idx[self.S.slots[start_gap]], _STAR_OFFSET - 1)
            else:
                a = self._point(-w[j - 1], _LEFT_OFFSET + lane * 1000 + j - 1)
            if j == n:
                b = (self._idx[self.S.slots[end_gap]], _STAR_OFFSET + 1)
            else:
                b = self._point(w[j], _LEFT_OFFSET + lane * 1000 + j)
            chords.append((j, a, b))
        return chords

    def crossings_with(self, word: Word, start_gap: int, end_gap: int):
        """Crossings of the loop with a based strand, in order along the strand.

        Returns (strand passage j, loop passage i, sign of (loop, strand)).
        """
        loop_ch = self.loop_chords()
        found = []
        for j, u, v in self.based_chords(word, start_gap, end_gap):
            here = []
            for i, a, b in loop_ch:
                if len({a, b, u, v}) < 4:
                    raise SurfaceError("degenerate chord configuration")
                ina = _ccw_between(a, u, b)
                inb = _ccw_between(a, v, b)
                if ina != inb:
                    # the loop endpoint lying on the u -> v side orders the crossing
                    e = a if _ccw_between(u, a, v) else b
                    here.append((_ccw_dist(u, e), i, ORIENTATION * (1 if ina else -1)))
            here.sort()
            found.extend((j, i, s) for _, i, s in here)
        return found

    def self_crossings(self) -> int:
        ch = self.loop_chords()
        count = 0
        for x in range(len(ch)):
            for y in range(x + 1, len(ch)):
                _, a, b = ch[x]
                _, c, d = ch[y]
                if _ccw_between(a, c, b) != _ccw_between(a, d, b):
                    count += 1
        return count


def _ccw_dist(a, b):
    """Sort key for the counterclockwise order of b starting just after a."""
    return (0, b) if b > a else (1, b)


def _ccw_between(a, x, b) -> bool:
    """Whether x lies on the open counterclockwise arc from a to b."""
    if a < b:
        return a < x < b
    return x > a or x < b


def chord_sigma(S: SurfaceModel, loop: Word, path: Word, start: str = "*", end: str = "*") -> RingElement:
    """sigma(|loop|)(path) through the explicit chord realization (oracle)."""
    model = ChordModel(S, loop)
    w = model.loop
    out: Dict[Word, Fraction] = {}
    for j, i, s in model.crossings_with(path, S.star_gap(start), S.star_gap(end)):
        key = mul_words(path[:j], _rot(w, i), path[j:])
        out[key] = out.get(key, 0) + s
    return RingElement(out, S.alphabet)


# Sign with which a loop copy is inserted at a crossing of positive
# local intersection number (loop, strand).  Fixed by the agreement with
# the exponential of sigma(L(C)); see tests/test_twist_engine.py.
TWIST_SIGN = 1


def insertion_word(S: SurfaceModel, loop: Word, ell: Word, power: int = 1,
                   start: str = "*", end: str = "*") -> Word:
    """Insert ``power`` copies of the loop, signed, at every crossing with ell."""
    model = ChordModel(S, loop)
    w = model.loop
    pieces = []
    crossings = model.crossings_with(ell, S.star_gap(start), S.star_gap(end))
    k = 0
    for j in range(len(ell) + 1):
        while k < len(crossings) and crossings[k][0] == j:
            _, i, s = crossings[k]
            rot = _rot(w, i)
            e = TWIST_SIGN * s * power
            pieces.append(rot if e > 0 else inverse_word(rot))
            if abs(e) != 1:
                pieces[-1] = mul_words(*([pieces[-1]] * abs(e)))
            k += 1
        if j < len(ell):
            pieces.append((ell[j],))
    return mul_words(*pieces)


def classical_twist_word(S: SurfaceModel, C, ell) -> GroupWord:
    """Image of a based loop under the Dehn twist along a simple closed curve."""
    c = C.letters if isinstance(C, (GroupWord, ConjClass)) else tuple(C)
    l = ell.letters if isinstance(ell, GroupWord) else tuple(ell)
    loop = cyclic_reduce(c)
    if not loop or not is_simple(S, ConjClass(loop)):
        raise NotSimpleError("not simple in this model")
    model = ChordModel(S, loop)
    if model.self_crossings():
        raise NotSimpleError("not simple in this model")
    return GroupWord(insertion_word(S, loop, l), S.alphabet)


def classical_twist_images(S: SurfaceModel, C) -> Tuple[Word, ...]:
    return tuple(classical_twist_word(S, C, (k,)).letters for k in range(1, S.n_petals + 1))


def apply_substitution(images: Sequence[Word], word: Word) -> Word:
    out = []
    for x in word:
        img = images[abs(x) - 1]
        out.append(img if x > 0 else inverse_word(img))
    return mul_words(*out)
