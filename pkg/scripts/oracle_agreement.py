"""Compare the fold oracle with homology certificates on a seeded random corpus.

Prints one line per endomorphism whose verdicts are interesting (surjective,
or non-surjective without a certificate), then a tally.
"""

import argparse
import random
import sys

from freecover import intmat
from freecover.covers import cover_family
from freecover.homology import find_nonsurjectivity_certificate, lift_matrix
from freecover.stallings import is_surjective
from freecover.words import Endomorphism, random_word


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--max-length", type=int, default=6)
    p.add_argument("--q", default="2,3")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    qs = [int(q) for q in args.q.split(",")]
    rng = random.Random(args.seed)
    family = cover_family(args.rank, qs, args.depth)
    tally = {"surjective": 0, "certified": 0, "uncertified": 0, "mismatch": 0}
    for _ in range(args.count):
        phi = Endomorphism(tuple(random_word(rng, args.rank, args.max_length, 1) for _ in range(args.rank)))
        if is_surjective(phi):
            tally["surjective"] += 1
            dets = [intmat.det(lift_matrix(phi, X).matrix) for _, _, X in family]
            if any(abs(d) != 1 for d in dets):
                tally["mismatch"] += 1
                print(f"MISMATCH {phi} dets={dets}")
            continue
        cert = find_nonsurjectivity_certificate(phi, qs, args.depth)
        if cert is None:
            tally["uncertified"] += 1
            print(f"no certificate in family: {phi}")
        else:
            tally["certified"] += 1
    print(" ".join(f"{k}={v}" for k, v in tally.items()))
    return 1 if tally["mismatch"] else 0


if __name__ == "__main__":
    sys.exit(main())
