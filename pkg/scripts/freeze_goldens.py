"""Compute the golden values the test suite compares against and write them to tests/golden.

Run once after a deliberate change in behaviour; the tests fail if the
computed values drift from the frozen ones.
"""

import json
import sys
from pathlib import Path

from freecover.homology import find_nonsurjectivity_certificate
from freecover.surfaces import disjointness_search, preserves_intersection_form, ribbon_family, rose_ribbon
from freecover.words import Endomorphism, conjugating_endomorphism, conjugator_word, word

OUT = Path(__file__).resolve().parent.parent / "tests" / "golden"


def goldens():
    phi = conjugating_endomorphism(conjugator_word(2))
    cert = find_nonsurjectivity_certificate(phi, (2, 3), 2)
    yield "witness5_certificate.json", cert.to_json()

    r3 = rose_ribbon(3, "a b A B c C")
    fam3 = ribbon_family(r3, (2,), 1)
    yield "disjoint_x1_x3_genus1_two_boundaries.json", {
        "rotation": r3.text(),
        "x": "a", "y": "c",
        **disjointness_search(word("a", 3), word("c", 3), fam3),
    }

    r2 = rose_ribbon(2, "a b A B")
    fam2 = ribbon_family(r2, (2,), 1)
    yield "preserves_invert_x1_genus1_one_boundary.json", preserves_intersection_form(Endomorphism.parse("A,b"), fam2)


def main(argv=None):
    OUT.mkdir(parents=True, exist_ok=True)
    for name, data in goldens():
        (OUT / name).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        print(f"wrote {OUT / name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
