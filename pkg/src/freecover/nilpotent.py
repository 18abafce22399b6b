"""Truncated Magnus expansion and lower central series congruences.

x_i maps to 1 + X_i in the ring of non-commuting power series; a word lies
in the (k+1)-th lower central series term iff its expansion has no terms of
degree 1..k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import intmat
from .words import Endomorphism, Word, left_normed_commutator

DEFAULT_CAP = 6
HARD_CAP = 8

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class TruncatedSeries:
    rank: int
    cap: int
    coeffs: tuple[tuple[Monomial, int], ...]  # sorted, nonzero only

    @classmethod
    def from_dict(cls, rank: int, cap: int, d: dict[Monomial, int]) -> TruncatedSeries:
        return cls(rank, cap, tuple(sorted((m, c) for m, c in d.items() if c and len(m) <= cap)))

    @classmethod
    def one(cls, rank: int, cap: int) -> TruncatedSeries:
        return cls(rank, cap, (((), 1),))

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.coeffs)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        if (self.rank, self.cap) != (other.rank, other.cap):
            raise ValueError("series with different rank or cap")
        out: dict[Monomial, int] = {}
        for m1, c1 in self.coeffs:
            room = self.cap - len(m1)
            for m2, c2 in other.coeffs:
                if len(m2) <= room:
                    m = m1 + m2
                    out[m] = out.get(m, 0) + c1 * c2
        return TruncatedSeries.from_dict(self.rank, self.cap, out)

    def is_one(self) -> bool:
        return self.coeffs == (((), 1),)

    def lowest_degree(self) -> int | None:
        """Smallest positive degree with a nonzero coefficient."""
        degs = [len(m) for m, _ in self.coeffs if m]
        return min(degs) if degs else None

    def __str__(self) -> str:
        terms = sorted(self.coeffs, key=lambda mc: (len(mc[0]), mc[0]))
        out = ""
        for m, c in terms:
            mono = "".join(f"X{i}" for i in m)
            body = mono if abs(c) == 1 and m else f"{abs(c)}{mono}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out or "0"


@lru_cache(maxsize=None)
def _letter_series(letter: int, rank: int, cap: int) -> TruncatedSeries:
    i = abs(letter)
    if letter > 0:
        d = {(): 1, (i,): 1}
    else:
        d = {(i,) * k: (-1) ** k for k in range(cap + 1)}
    return TruncatedSeries.from_dict(rank, cap, d)


def magnus(w: Word, cap: int = DEFAULT_CAP) -> TruncatedSeries:
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if cap > HARD_CAP:
        raise ValueError(f"cap {cap} exceeds the hard cap {HARD_CAP}")
    s = TruncatedSeries.one(w.rank, cap)
    for a in w.letters:
        s = s * _letter_series(a, w.rank, cap)
    return s


def congruent_mod_lcs(u: Word, v: Word, k: int) -> bool:
    """u = v modulo the (k+1)-th term of the lower central series."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return magnus(u * v.inverse(), k).is_one()


def in_lcs_term(w: Word, k: int) -> bool:
    """w lies in the k-th term (F^(1) = F_n)."""
    return k <= 1 or magnus(w, k - 1).is_one()


def left_normed_commutators(rank: int, weight: int) -> list[Word]:
    """[x_i1, ..., x_ik] for all index tuples with i1 != i2 (weight >= 2).

    These span F^(k)/F^(k+1); for weight 1 the generators are returned.
    """
    gens = [Word.generator(i, rank) for i in range(1, rank + 1)]
    if weight == 1:
        return gens
    out = []
    for idx in itertools.product(range(rank), repeat=weight):
        if idx[0] != idx[1]:
            out.append(left_normed_commutator([gens[i] for i in idx]))
    return out


def acts_trivially_on_lcs_quotient(phi: Endomorphism, k: int,
                                   sample: Sequence[Word] | None = None) -> bool:
    """phi(w) = w mod F^(k+1) for every sample w in F^(k)."""
    if sample is None:
        sample = left_normed_commutators(phi.rank, k)
    for w in sample:
        if not in_lcs_term(w, k):
            raise ValueError(f"sample word {w} is not in term {k} of the lower central series")
        if not congruent_mod_lcs(phi(w), w, k):
            return False
    return True


def is_epi_on_nilpotent_quotient(phi: Endomorphism, k: int) -> bool:
    """Surjectivity of the induced map on F_n / F^(k), k >= 2.

    An endomorphism of a finitely generated nilpotent group is onto iff it
    is onto the abelianization, so this is |det| = 1 of the abelianized map.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    return abs(intmat.det(phi.abelianization_matrix())) == 1


def question_1_3_witness(n: int, **options) -> dict:
    """Evidence bundle for the conjugating endomorphism; see ``witness``."""
    from .witness import question_1_3_witness as build

    return build(n, **options)
