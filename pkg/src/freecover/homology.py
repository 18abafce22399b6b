"""Integer homology representations on finite based covers of R_n.

H_1(X, Z) is identified with Z^r through the cycle basis of the cover: the
class of a closed path is its signed count of traversals of each non-tree
edge.  Matrices act on column vectors; the column for basis cycle e is the
image of e.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import intmat
from .covers import BasedCover, NotInvariantError, cover_family, induced_quotient_endo
from .intmat import Matrix
from .stallings import is_surjective
from .words import Endomorphism, Word


class NotALoopError(ValueError):
    """The word does not close up at the basepoint of the cover."""


@dataclass(frozen=True)
class HomologyRep:
    cover: BasedCover
    matrix: Matrix
    source: str  # endomorphism text or deck element label

    @property
    def size(self) -> int:
        return len(self.matrix)


def cycle_class(X: BasedCover, w: Word) -> tuple[int, ...]:
    end, vec = X.trace(w)
    if end != 0:
        raise NotALoopError(f"{w} is not a loop at the basepoint of {X.label or 'the cover'}")
    return tuple(vec)


def free_loop_class(X: BasedCover, w: Word, start: int) -> tuple[int, ...]:
    """Class of the closed path spelled by w from vertex ``start``."""
    end, vec = X.trace(w, start)
    if end != start:
        raise NotALoopError(f"{w} does not close up at vertex {start}")
    return tuple(vec)


def deck_matrix(X: BasedCover, g: int) -> HomologyRep:
    """Matrix of the deck transformation h -> gh.

    The translate of a basis loop w_e is the closed path spelled by w_e from
    vertex g; joining it to the basepoint along the tree does not change the
    non-tree crossings.
    """
    cols = [free_loop_class(X, w, g) for w in X.loop_words]
    return HomologyRep(X, intmat.from_columns(cols), X.quotient.label(g))


def deck_matrices(X: BasedCover) -> list[Matrix]:
    return [deck_matrix(X, g).matrix for g in range(X.degree)]


def lift_matrix(phi: Endomorphism, X: BasedCover) -> HomologyRep:
    """Action of the based lift of phi on H_1(X, Z).

    Raises NotInvariantError when phi does not map pi_1(X) into itself.
    """
    if phi.rank != X.rank:
        raise ValueError(f"rank mismatch: {phi.rank} vs {X.rank}")
    cols = []
    for w in X.loop_words:
        end, vec = X.trace(phi(w))
        if end != 0:
            raise NotInvariantError(f"{phi} does not preserve pi_1 of {X.label or 'the cover'}")
        cols.append(vec)
    return HomologyRep(X, intmat.from_columns(cols), str(phi))


def smith_normal_form(m: Matrix):
    return intmat.smith_normal_form(m)


def is_epi_on_homology(m: Matrix) -> bool:
    return intmat.is_epi(m)


def equivariance_check(phi: Endomorphism, X: BasedCover, check_automorphism: bool = True) -> bool:
    """True iff the lift of phi commutes with every deck matrix.

    The intertwining relation M_phi M_g = M_{phi(g)} M_phi holds for any
    kernel-preserving phi and is asserted along the way.
    """
    if check_automorphism and not is_surjective(phi):
        raise ValueError(f"{phi} is not an automorphism")
    induced = induced_quotient_endo(phi, X.quotient)
    m = lift_matrix(phi, X).matrix
    commutes = True
    decks = deck_matrices(X)
    for g in range(X.degree):
        left = intmat.matmul(m, decks[g])
        if left != intmat.matmul(decks[induced(g)], m):
            raise AssertionError("intertwining relation failed; cover data is inconsistent")
        if left != intmat.matmul(decks[g], m):
            commutes = False
    return commutes


@dataclass(frozen=True)
class Certificate:
    endomorphism: str
    q: int
    level: int
    cover_degree: int
    matrix: Matrix
    snf_diagonal: tuple[int, ...]
    verdict: str  # "non-epimorphism" or "nontrivial"

    def to_json(self) -> dict:
        return {
            "endomorphism": self.endomorphism,
            "q": self.q,
            "level": self.level,
            "cover_degree": self.cover_degree,
            "matrix": [list(r) for r in self.matrix],
            "snf_diagonal": list(self.snf_diagonal),
            "verdict": self.verdict,
        }


def find_nonsurjectivity_certificate(phi: Endomorphism, q_list: Sequence[int] = (2, 3),
                                     depth: int = 2, max_vertices: int | None = None,
                                     goal: str = "non-epi", log: list | None = None
                                     ) -> Certificate | None:
    """Search mod-q tower covers for a homology certificate.

    ``goal="non-epi"``: a cover on which the lift of phi is not onto H_1.
    ``goal="nontrivial"``: a cover on which the lift differs from the identity.
    Covers are visited in (q, level) order, the rose first.  None means no
    certificate within the family; existence is guaranteed, a bound is not.
    """
    if goal not in ("non-epi", "nontrivial"):
        raise ValueError(f"unknown goal {goal!r}")
    for q, level, X in cover_family(phi.rank, q_list, depth, max_vertices):
        m = lift_matrix(phi, X).matrix
        if goal == "non-epi":
            d = intmat.det(m)
            hit = abs(d) != 1
            if log is not None:
                log.append({"q": q, "level": level, "degree": X.degree, "det": d})
        else:
            hit = m != intmat.identity(len(m))
            if log is not None:
                log.append({"q": q, "level": level, "degree": X.degree, "identity": not hit})
        if hit:
            return Certificate(
                str(phi), q, level, X.degree, m, intmat.smith_diagonal(m),
                "non-epimorphism" if goal == "non-epi" else "nontrivial",
            )
    return None
