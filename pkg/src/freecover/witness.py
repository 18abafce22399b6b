"""Bundled evidence for a non-surjective endomorphism that is onto every free nilpotent quotient.

phi conjugates x_1 by a cyclically reduced word alpha and fixes the other
generators.  It fails to be onto F_n, yet induces onto maps on every
F_n / F^(k).  Four independent checks are collected.
"""

from __future__ import annotations

from typing import Sequence

from .covers import default_max_vertices
from .homology import find_nonsurjectivity_certificate
from .nilpotent import DEFAULT_CAP, is_epi_on_nilpotent_quotient
from .stallings import image_graph, is_surjective
from .whitehead import CostGuardError, whitehead_reduce, whitehead_report
from .words import Word, conjugating_endomorphism, conjugator_word


def question_1_3_witness(n: int, cap: int = DEFAULT_CAP, q_list: Sequence[int] = (2, 3),
                         depth: int = 2, max_vertices: int | None = None,
                         variant: str = "figure") -> dict:
    if n < 2:
        raise ValueError("rank must be at least 2")
    if max_vertices is None:
        max_vertices = default_max_vertices()
    alpha = conjugator_word(n, variant)
    phi = conjugating_endomorphism(alpha)
    g = image_graph(phi)

    w = phi(Word.generator(1, n) * Word.generator(2, n))
    wh = whitehead_report(w)
    try:
        length, reduced = whitehead_reduce(w)
        wh["reduction"] = {"minimal_length": length, "reduced": str(reduced), "primitive": length == 1}
    except CostGuardError as err:
        wh["reduction"] = {"skipped": str(err)}

    search_log: list = []
    cert = find_nonsurjectivity_certificate(phi, q_list, depth, max_vertices, log=search_log)
    return {
        "rank": n,
        "alpha": str(alpha),
        "endomorphism": str(phi),
        "fold": {
            "surjective": is_surjective(phi),
            "image_vertices": g.num_vertices,
            "image_edges": len(g.edges),
        },
        "nilpotent": {str(k): is_epi_on_nilpotent_quotient(phi, k) for k in range(2, cap + 1)},
        "whitehead": wh,
        "certificate": cert.to_json() if cert else None,
        "search": search_log,
    }


def witness_holds(report: dict) -> bool:
    """All four evidence items agree that phi is a non-surjective nilpotent-epi map."""
    red = report["whitehead"]["reduction"]
    return (
        not report["fold"]["surjective"]
        and all(report["nilpotent"].values())
        and report["whitehead"]["not_separable_certified"]
        and red.get("primitive") is False
        and report["certificate"] is not None
    )
