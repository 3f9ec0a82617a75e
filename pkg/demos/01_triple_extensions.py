"""Walk from a D(4)-pair to its third elements and their extensions.

Run: python3 demos/01_triple_extensions.py
"""

from d4pairs.dtuples import DnPair, DnTriple, brute_force_extensions, c_candidates, d_plus_minus
from d4pairs.families import enumerate_families, instantiate
from d4pairs.pell import admissible_cases, c_label_of, find_intersections, v_sequence, w_sequence


def main():
    pair = DnPair.of(1, 5)
    print(f"{{1, 5}}: 1*5 + 4 = {pair.r}^2")
    print("third elements c up to 10^5:", c_candidates(pair, 10 ** 5))

    tr = DnTriple.of(1, 5, 12)
    d_plus, d_minus = d_plus_minus(tr)
    print(f"\n{{1, 5, 12}} has r, s, t = {tr.r}, {tr.s}, {tr.t}; d+ = {d_plus}, d- = {d_minus}")

    # d appears where the two recurrences share a value z = v_m = w_n
    print("v:", v_sequence(tr, -2, 2).terms(5))
    print("w:", w_sequence(tr, -2, 2).terms(5))
    for case in admissible_cases(tr, c_label_of(tr)):
        if case.admissible:
            for hit in find_intersections(tr, case, 20):
                print(f"  case {case.key}: v_{hit.m} = w_{hit.n} = {hit.z}  ->  d = {hit.d}")
    print("brute force d <= 10^6:", brute_force_extensions(tr, 10 ** 6))

    # a pair from the gap-restricted regime, with all seven labelled c
    fam = enumerate_families().get(1, 0)
    big = instantiate(fam, 200)
    print(f"\nfamily {fam.pretty()} at k = 200: {{{big.a}, {big.b}}}")
    for label, c in c_candidates(big, 10 ** 30)[:4]:
        t = DnTriple.of(big.a, big.b, c)
        dp, dm = d_plus_minus(t)
        print(f"  {label:4} c = {c}: d- = {dm}, d+ = {dp}")


if __name__ == "__main__":
    main()
