"""Search the finite set of pair-of-pants conventions.

A convention is accepted when the loop r5 = r1 r3 R1 r2 r4 R2 is parallel to
the boundary through *0 and sigma(||gamma||)(r1) reproduces the figure-eight
display  r2 r4 R2 r1 R3 - r1 r3 R1 r2 R4 R2 r1.
"""

from itertools import product

from gentwist.free_group_ring import ConjClass, GroupWord, RingElement, PANTS
from gentwist.surface_loops import build_pants, pants_to_petal, sigma_action


def parse(text):
    return GroupWord.parse(text).letters


def main():
    gamma = parse("r1 r3 R1 r2 R4 R2")
    r5 = parse("r1 r3 R1 r2 r4 R2")
    expected = RingElement({parse("r2 r4 R2 r1 R3"): 1, parse("r1 r3 R1 r2 R4 R2 r1"): -1}, PANTS)
    hits = []
    for mirror, e3, e4, outer in product((False, True), (1, -1), (1, -1), (0, 1)):
        S = build_pants(mirror, (e3, e4), outer)
        boundary0 = S.boundary_words[0]
        petal_r5 = ConjClass(pants_to_petal(S, r5))
        parallel = petal_r5 in (boundary0, boundary0.reverse())
        u = {ConjClass(gamma, PANTS): 1, ConjClass(gamma, PANTS).reverse(): 1}
        from gentwist.free_group_ring import ClassCombo
        value = sigma_action(S, ClassCombo(u), parse("r1"))
        ok = parallel and value == expected
        print(f"mirror={mirror!s:5} r3=x^{e3:+d} r4=y^{e4:+d} outer={outer} parallel={parallel!s:5} "
              f"match={value == expected!s:5} value={value}")
        if ok:
            hits.append((mirror, e3, e4, outer))
    print("accepted:", hits)


if __name__ == "__main__":
    main()
