"""Recompute the constants behind a < 6.55e11 and show where they do not reproduce.

Run: python3 demos/02_bound_rederivation.py
"""

from d4pairs.linforms import a_bound_pipeline


def main():
    rep = a_bound_pipeline()
    print(f"{'step':13} {'relation':>9} {'stated':>14} {'reproduced':>22}  ok")
    for s in rep.steps:
        print(f"{s.key:13} {s.relation:>9} {float(s.stated):>14.6g} {float(s.reproduced.hi):>22.10g}  "
              f"{'yes' if s.holds else 'NO'}")
        if s.note and not s.holds:
            print(f"{'':15}{s.note}")
    threshold, a_bound = rep
    print(f"\nwith the stated constants: X < {float(threshold.hi):.2f}, a < {a_bound}")
    print(f"with reproduced constants: X < {float(rep.corrected_threshold.hi):.2f}, a < {rep.corrected_a_bound}")
    for n in rep.notes:
        print(" -", n)


if __name__ == "__main__":
    main()
