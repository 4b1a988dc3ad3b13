"""Dimension of {D : D X - gamma X D = I} for the n x n upper shift X.

    python3 scripts/shift_feasibility.py --ls 2 3 4 5 6 --field cyclotomic
"""
import argparse

from qweyl.exactfield import make_cyclotomic_field, make_prime_field, smallest_prime_1_mod
from qweyl.reduce import solve_D_for_shift


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ls", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    ap.add_argument("--field", choices=["prime", "cyclotomic"], default="prime")
    args = ap.parse_args()
    for l in args.ls:
        ctx = make_cyclotomic_field(l) if args.field == "cyclotomic" else make_prime_field(smallest_prime_1_mod(l), l)
        cells = []
        for n in range(1, 3 * l + 1):
            dim = solve_D_for_shift(ctx, n).dimension
            cells.append("-" if dim is None else str(dim))
        print(f"l={l} ({ctx}): n=1..{3 * l}: {' '.join(cells)}")


if __name__ == "__main__":
    main()
