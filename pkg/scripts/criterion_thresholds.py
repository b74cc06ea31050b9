"""Thresholds of the pairwise EKR criterion for the builtin families.

Prints, per family parameter, the first value at which the criterion holds
next to the closed form it should reduce to.
"""
from ekrlab.generic import DESIGN_BLOCKS, KSETS, SEQUENCES, SUBPARTITIONS, criterion_threshold


def main():
    print("family,param,threshold,closed_form")
    for k in range(2, 9):
        got = criterion_threshold(KSETS, {"k": k}, "n", range(k, 2000))
        print(f"ksets,k={k},{got},{k * k * (k - 1) + 2}")
    for n in range(2, 9):
        got = criterion_threshold(SEQUENCES, {"n": n}, "q", range(2, 200))
        print(f"sequences,n={n},{got},{n * n + 1}")
    for m in range(3, 9):
        got = criterion_threshold(DESIGN_BLOCKS, {"m": m, "strength": 2, "lam": 1}, "n", range(m, 2000))
        print(f"designs,m={m},{got},{m ** 3 - m ** 2 + 2}")
    for k in (3, 4):
        for ell in (2, 3, 4):
            got = criterion_threshold(SUBPARTITIONS, {"k": k, "ell": ell}, "n", range(k * ell, 200))
            print(f"subpartitions,k={k} ell={ell},{got},")


if __name__ == "__main__":
    main()
