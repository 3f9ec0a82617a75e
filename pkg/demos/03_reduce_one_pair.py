"""Bound, reduce and finish every case for one pair: a small a and one near the top of the range.

Run: python3 demos/03_reduce_one_pair.py
"""

import warnings

from d4pairs.dtuples import DnTriple, c_branch_value, d_plus_minus
from d4pairs.families import enumerate_families, instantiate
from d4pairs.linforms import LinearFormInstance
from d4pairs.pell import admissible_cases
from d4pairs.reduction import derive_index_bound, finish_instance, reduce_instance


def show(pair, label):
    tr = DnTriple.of(pair.a, pair.b, c_branch_value(pair, label))
    dp, dm = d_plus_minus(tr)
    print(f"\n{{{pair.a}, {pair.b}, {tr.c}}} ({label}); d- = {dm}, d+ = {dp}")
    for case in admissible_cases(tr, label):
        if not case.admissible:
            continue
        inst = LinearFormInstance(tr, case)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            initial = derive_index_bound(inst)
        res = reduce_instance(inst, initial)
        trail = " -> ".join(str(s.new_bound) + ("*" if s.kind == "shifted" else "")
                            for s in res.steps if s.success)
        found = sorted({h.d for h in finish_instance(tr, case, res.m_bound)})
        print(f"  {case.key:40} M0 = {initial.bound:.3g} ({initial.source}); {trail}; d found: {found}")


def main():
    fam = enumerate_families().get(1, 0)
    show(instantiate(fam, 200), "c2+")
    # near a = 6.5e11 the two-logarithm bound closes and replaces the fallback
    show(instantiate(fam, 809000), "c3-")
    print("\n* marks a step shifted around a near-solution lattice point")


if __name__ == "__main__":
    main()
