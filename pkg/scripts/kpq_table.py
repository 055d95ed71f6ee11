"""Print m and a for T(2,p) # T(2,q) over p, q in {+-3, +-5, +-7, +-9} as a grid."""
import sys

from mqindex.indices import gcd_rule, kpq_classify

VALUES = (-9, -7, -5, -3, 3, 5, 7, 9)


def main() -> int:
    bad = 0
    print("p\\q " + "".join(f"{q:>5}" for q in VALUES))
    for p in VALUES:
        cells = []
        for q in VALUES:
            rep = kpq_classify(p, q)
            a = rep.a_bounds
            cells.append(f"{a.lower if a.tight else str(a):>5}")
            bad += not (rep.m_bounds == a and a.tight and a.lower == gcd_rule(p, q))
        print(f"{p:>4}" + "".join(cells))
    print(f"{64 - bad}/64 agree with the gcd rule")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
