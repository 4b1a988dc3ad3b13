"""Exhaustive census over F_p for l = 2 (or other small cases) as a table.

    python3 scripts/census_table.py --primes 3 5 --l 2 --n 2 [--json out.json]
"""
import argparse
import json
import time

from qweyl.exactfield import make_prime_field
from qweyl.matrixcore import is_scalar
from qweyl.oracle import classify_bruteforce, cross_validate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--l", type=int, default=2)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--prune", action="store_true")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--json", help="write the full reports here")
    args = ap.parse_args()

    dump = []
    for p in args.primes:
        ctx = make_prime_field(p, args.l)
        start = time.perf_counter()
        report = classify_bruteforce(ctx, args.n, prune=args.prune, jobs=args.jobs)
        seconds = time.perf_counter() - start
        cv = cross_validate(report)
        print(f"F_{p}, l={args.l}, n={args.n}: {report.total_solutions} solutions, "
              f"{report.irreducible_count} irreducible, {len(report.classes)} classes ({seconds:.1f}s)")
        for c in report.classes:
            if c.split:
                label = str(c.canonical)
            else:
                y_pow = is_scalar(c.representative.y ** args.l)
                label = f"no eigenvalue in F_{p}: x^{args.l} = {c.x_power}, y^{args.l} = {y_pow}"
            print(f"  {c.size:6d}  {label}")
        print(f"  predicted split forms: {cv.predicted}, split bijection: {cv.split_bijection}")
        print(f"  non-split classes: {cv.non_split} (extension-field count {cv.predicted_non_split})")
        print(f"  strict bijection: {cv.bijection}")
        dump.append({"report": report.to_json(), "cross_validation": cv.to_json()})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(dump, fh, sort_keys=True, indent=2)


if __name__ == "__main__":
    main()
