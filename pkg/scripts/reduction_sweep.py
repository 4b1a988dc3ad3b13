"""Reduce random conjugates of every family and report agreement and timing.

    python3 scripts/reduction_sweep.py --ls 2 3 4 5 6 --draws 50 --field prime
"""
import argparse
import random
import time
from fractions import Fraction

from qweyl.canonical import nonsingular_solution, singular_alpha_solution
from qweyl.exactfield import make_cyclotomic_field, make_prime_field, smallest_prime_1_mod
from qweyl.matrixcore import Mat
from qweyl.reduce import canonicalize, recursion_p


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ls", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    ap.add_argument("--draws", type=int, default=50)
    ap.add_argument("--field", choices=["prime", "cyclotomic"], default="prime")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    print(f"{'l':>3} {'field':>22} {'agree':>7} {'seconds':>8}")
    for l in args.ls:
        if args.field == "prime":
            ctx = make_prime_field(smallest_prime_1_mod(l), l)
            lam_of = lambda: ctx.random(rng, nonzero=True)  # noqa: E731
        else:
            ctx = make_cyclotomic_field(l)
            lam_of = lambda: ctx.elem(Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2]))) * ctx.gamma ** rng.randrange(l)  # noqa: E731
        agree = 0
        start = time.perf_counter()
        for _ in range(args.draws):
            alphas = [ctx.random(rng) for _ in range(l)]
            s = singular_alpha_solution(ctx, alphas)
            form, wit = canonicalize(s.conjugate(Mat.random_invertible(ctx, l, rng)))
            agree += form.beta == recursion_p(ctx, alphas)[1]
            bs = [ctx.random(rng, nonzero=True) for _ in range(l)]
            s = nonsingular_solution(ctx, lam_of(), bs=bs)
            eta = bs[0]
            for b in bs[1:]:
                eta = eta * b
            form, wit = canonicalize(s.conjugate(Mat.random_invertible(ctx, l, rng)))
            agree += form.eta == eta
        seconds = time.perf_counter() - start
        print(f"{l:>3} {str(ctx):>22} {agree:>4}/{2 * args.draws:<3} {seconds:8.2f}")


if __name__ == "__main__":
    main()
