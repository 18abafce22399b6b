"""Run the acceptance criteria and print one line per criterion.

    python scripts/run_acceptance.py [--criteria 1,2,5] [--seed 0] [--json out.json]
"""

import argparse
import sys
import time

from freecover import acceptance


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--criteria", default="1,2,3,4,5,6,7,8,9")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="also write the full results here")
    args = p.parse_args(argv)
    ks = [int(k) for k in args.criteria.split(",")]
    results = []
    for k in ks:
        t = time.perf_counter()
        res = acceptance.run([k], args.seed)[0]
        results.append(res)
        print(f"[criterion {k}] {'PASS' if res['passed'] else 'FAIL'} {res['name']} "
              f"({time.perf_counter() - t:.1f}s)")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(acceptance.dumps(results) + "\n")
    return 0 if all(r["passed"] for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
