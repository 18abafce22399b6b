"""Ribbon structures on roses and their covers, closed-up homology, and the
algebraic intersection pairing.

Half-edges at a vertex are signed letters: ``+i`` is the start of the
x_i-edge, ``-i`` its end.  The rotation lists the 2n half-edges of the rose
in counterclockwise order, and every cover inherits it at each vertex.
Boundary walks are the cycles of ``rotation o opposite`` on darts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import intmat
from .covers import BasedCover, NotInvariantError, cover_family
from .homology import cycle_class, deck_matrix, free_loop_class, lift_matrix
from .intmat import Matrix
from .stallings import is_surjective
from .words import Endomorphism, Word


class DegeneratePairingError(RuntimeError):
    """The closed-up pairing is not unimodular; rotation bookkeeping is broken."""


@dataclass(frozen=True)
class RibbonStructure:
    rank: int
    rotation: tuple[int, ...]

    def __post_init__(self):
        expected = sorted(s * i for i in range(1, self.rank + 1) for s in (1, -1))
        if sorted(self.rotation) != expected:
            raise ValueError(f"rotation {self.rotation} is not a cyclic order on the 2n half-edges")

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> RibbonStructure:
        tokens = text.replace(",", " ").split()
        letters = [Word.parse(t, 26).letters for t in tokens]
        if any(len(x) != 1 for x in letters):
            raise ValueError(f"rotation tokens must be single letters: {text!r}")
        rot = tuple(x[0] for x in letters)
        if rank is None:
            rank = max(abs(a) for a in rot)
        return cls(rank, rot)

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {h: k for k, h in enumerate(self.rotation)}

    def next(self, h: int) -> int:
        return self.rotation[(self._pos[h] + 1) % len(self.rotation)]

    def prev(self, h: int) -> int:
        return self.rotation[(self._pos[h] - 1) % len(self.rotation)]

    @property
    def euler_characteristic(self) -> int:
        return 1 - self.rank

    @cached_property
    def peripheral_words(self) -> tuple[Word, ...]:
        """Boundary walks of the rose, as words read from the single vertex."""
        seen = set()
        out = []
        for h in self.rotation:
            if h in seen:
                continue
            walk = []
            x = h
            while x not in seen:
                seen.add(x)
                walk.append(x)
                x = self.next(-x)
            out.append(Word(tuple(walk), self.rank))
        return tuple(out)

    @property
    def boundary_count(self) -> int:
        return len(self.peripheral_words)

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic - self.boundary_count) // 2

    def text(self) -> str:
        return " ".join(str(Word((h,), self.rank)) for h in self.rotation)


def rose_ribbon(n: int, rotation: Sequence[int] | str) -> RibbonStructure:
    if isinstance(rotation, str):
        return RibbonStructure.parse(rotation, n)
    return RibbonStructure(n, tuple(rotation))


@dataclass(frozen=True, eq=False)
class RibbonCover:
    cover: BasedCover
    ribbon: RibbonStructure

    def __post_init__(self):
        if self.cover.rank != self.ribbon.rank:
            raise ValueError("cover and ribbon structure have different ranks")

    @property
    def rank(self) -> int:
        return self.cover.rank

    def _edge(self, g: int, h: int) -> tuple[int, int]:
        """The edge (source, label) carrying half-edge h at vertex g."""
        if h > 0:
            return g, h
        return self.cover.quotient.act(g, h), -h

    def _edge_index(self, g: int, h: int) -> int:
        s, i = self._edge(g, h)
        return s * self.rank + i - 1

    @cached_property
    def boundary_walks(self) -> tuple[tuple[int, Word], ...]:
        """(start vertex, word) for each boundary walk of the covering surface."""
        Q = self.cover.quotient
        seen = set()
        out = []
        for g in range(self.cover.degree):
            for h in self.ribbon.rotation:
                if (g, h) in seen:
                    continue
                walk = []
                x = (g, h)
                while x not in seen:
                    seen.add(x)
                    walk.append(x[1])
                    v = Q.act(x[0], x[1])
                    x = (v, self.ribbon.next(-x[1]))
                out.append((g, Word(tuple(walk), self.rank)))
        return tuple(out)

    @property
    def euler_characteristic(self) -> int:
        return self.cover.degree * self.ribbon.euler_characteristic

    @property
    def boundary_count(self) -> int:
        return len(self.boundary_walks)

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic - self.boundary_count) // 2

    @cached_property
    def boundary_classes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(free_loop_class(self.cover, w, g) for g, w in self.boundary_walks)

    def edge_chain(self, w: Word, start: int = 0) -> dict[int, int]:
        Q = self.cover.quotient
        chain: dict[int, int] = {}
        g = start
        for a in w.letters:
            e = self._edge_index(g, a)
            chain[e] = chain.get(e, 0) + (1 if a > 0 else -1)
            g = Q.act(g, a)
        return chain

    def pushoff_crossings(self, w: Word, start: int = 0) -> list[tuple[int, int]]:
        """Signed edge crossings of the closed path w pushed off to its left.

        At each corner the push-off sweeps clockwise from the arrival
        half-edge to the departure half-edge and crosses the half-edges in
        between.  Crossing the start of an edge counts -1, its end +1.
        """
        Q = self.cover.quotient
        rot = self.ribbon
        letters = w.letters
        if not letters:
            return []
        verts = [start]
        for a in letters:
            verts.append(Q.act(verts[-1], a))
        if verts[-1] != start:
            raise ValueError(f"{w} does not close up at vertex {start}")
        out = []
        for k, a in enumerate(letters):
            g = verts[k]
            h_in = -letters[k - 1]
            h = rot.prev(h_in)
            while h != a:
                out.append((self._edge_index(g, h), -1 if h > 0 else 1))
                h = rot.prev(h)
        return out

    def intersection(self, z_chain: dict[int, int], w: Word, start: int = 0) -> int:
        return sum(s * z_chain.get(e, 0) for e, s in self.pushoff_crossings(w, start))

    @cached_property
    def pairing(self) -> Matrix:
        """Intersection pairing on H_1 of the open covering surface, cycle basis."""
        loops = self.cover.loop_words
        chains = [self.edge_chain(w) for w in loops]
        crossings = [self.pushoff_crossings(w) for w in loops]
        return tuple(
            tuple(sum(s * chains[j].get(e, 0) for e, s in crossings[k]) for k in range(len(loops)))
            for j in range(len(loops))
        )

    @cached_property
    def _closed(self):
        r = self.cover.homology_rank
        B = intmat.from_columns(self.boundary_classes, r)
        if not self.boundary_classes:
            B = intmat.zeros(r, 0)
        D, U, _ = intmat.smith_normal_form(B)
        diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D and D[0] else 0))]
        s = sum(1 for d in diag if d)
        if any(d not in (0, 1) for d in diag):
            raise DegeneratePairingError(f"boundary classes do not span a saturated sublattice: {diag}")
        Uinv = intmat.unimodular_inverse(U)
        C = tuple(row[s:] for row in Uinv)
        J = intmat.matmul(intmat.matmul(intmat.transpose(C), self.pairing), C)
        dim = r - s
        if dim != 2 * self.genus:
            raise DegeneratePairingError(f"closed rank {dim} but genus {self.genus}")
        if J != tuple(tuple(-x for x in col) for col in intmat.transpose(J)):
            raise DegeneratePairingError("closed pairing is not antisymmetric")
        if dim and intmat.det(J) != 1:
            raise DegeneratePairingError(f"closed pairing has determinant {intmat.det(J)}")
        return U, Uinv, s, C, J

    @property
    def closed_rank(self) -> int:
        return self.cover.homology_rank - self._closed[2]

    @property
    def closed_pairing(self) -> Matrix:
        return self._closed[4]

    def to_closed(self, x: Sequence[int]) -> tuple[int, ...]:
        U, _, s, _, _ = self._closed
        return intmat.matvec(U, x)[s:]

    def descend(self, m: Matrix) -> Matrix | None:
        """Induced map on closed homology, or None if m moves the boundary span."""
        U, Uinv, s, _, _ = self._closed
        my = intmat.matmul(intmat.matmul(U, m), Uinv)
        if any(my[i][j] for i in range(s, len(my)) for j in range(s)):
            return None
        return tuple(row[s:] for row in my[s:])

    def closed_form(self, a: Sequence[int], b: Sequence[int]) -> int:
        J = self.closed_pairing
        return sum(a[i] * J[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if a[i] and b[j])

    def summary(self) -> dict:
        return {
            "cover": self.cover.label or "rose",
            "degree": self.cover.degree,
            "euler_characteristic": self.euler_characteristic,
            "genus": self.genus,
            "boundary": self.boundary_count,
            "pairing": [list(r) for r in self.closed_pairing],
        }


def closed_homology(cover: BasedCover, ribbon: RibbonStructure) -> RibbonCover:
    rc = RibbonCover(cover, ribbon)
    rc._closed  # validates the pairing eagerly
    return rc


@dataclass(frozen=True)
class ElevationSet:
    word: Word
    cover: RibbonCover
    order: int  # minimal m with Psi(x^m) = 1
    preferred: tuple[int, ...]  # class of the preferred elevation in H_1 of the open cover
    orbit: tuple[tuple[int, ...], ...]  # one class per elevation, closed-up coordinates
    basis: Matrix  # Hermite basis of V_x in closed-up coordinates

    @property
    def count(self) -> int:
        return len(self.orbit)


def elevations(x: Word, rc: RibbonCover) -> ElevationSet:
    if x.is_trivial():
        raise ValueError("elevations of the trivial loop")
    Q = rc.cover.quotient
    g = Q.psi(x)
    m = Q.element_order(g)
    xm = x ** m
    preferred = cycle_class(rc.cover, xm)
    # translates by g and g Psi(x)^j are the same closed curve
    seen = set()
    orbit = []
    for h in range(Q.order):
        if h in seen:
            continue
        k = h
        for _ in range(m):
            seen.add(k)
            k = Q.mul(k, g)
        orbit.append(rc.to_closed(free_loop_class(rc.cover, xm, h)))
    basis = intmat.hermite_normal_form(orbit)
    return ElevationSet(x, rc, m, preferred, tuple(orbit), basis)


def is_isotropic(V: ElevationSet) -> bool:
    rc = V.cover
    return all(rc.closed_form(a, b) == 0 for a in V.basis for b in V.basis)


def ribbon_family(ribbon: RibbonStructure, q_list: Sequence[int] = (2,), depth: int = 1,
                  max_vertices: int | None = None, include_rose: bool = True) -> list[RibbonCover]:
    fam = cover_family(ribbon.rank, q_list, depth, max_vertices)
    return [closed_homology(X, ribbon) for _, level, X in fam if include_rose or level > 0]


def disjointness_search(x: Word, y: Word, family: Sequence[RibbonCover]) -> dict:
    """Look for elevations of x and y with nonzero algebraic intersection.

    A witness proves x and y are not disjoint; "no witness in family" is
    inconclusive.
    """
    if not family:
        raise ValueError("empty cover family")
    searched = []
    for rc in family:
        vx = elevations(x, rc)
        vy = elevations(y, rc)
        for a in vx.basis:
            for b in vy.basis:
                val = rc.closed_form(a, b)
                if val:
                    return {
                        "verdict": "intersection witnessed",
                        "cover": rc.cover.label or "rose",
                        "value": val,
                        "searched": searched + [rc.cover.label or "rose"],
                    }
        searched.append(rc.cover.label or "rose")
    return {"verdict": "no witness in family", "cover": None, "value": 0, "searched": searched}


def preserves_intersection_form(psi: Endomorphism, family: Sequence[RibbonCover]) -> dict:
    """Per cover: is some deck-composed lift of psi symplectic on closed homology?"""
    if not is_surjective(psi):
        raise ValueError(f"{psi} is not an automorphism")
    reports = []
    for rc in family:
        X = rc.cover
        if not X.certificate:
            raise ValueError(f"cover {X.label} is not certified characteristic")
        try:
            m = lift_matrix(psi, X).matrix
        except NotInvariantError as err:
            raise ValueError(str(err)) from err
        J = rc.closed_pairing
        witness = None
        for g in range(X.degree):
            mg = intmat.matmul(deck_matrix(X, g).matrix, m) if g else m
            mbar = rc.descend(mg)
            if mbar is None:
                continue
            if intmat.matmul(intmat.matmul(intmat.transpose(mbar), J), mbar) == J:
                witness = X.quotient.label(g)
                break
        reports.append({
            "cover": X.label or "rose",
            "genus": rc.genus,
            "boundary": rc.boundary_count,
            "pairing": [list(r) for r in J],
            "verdict": "pass" if witness is not None else "fail",
            "deck_witness": witness,
        })
    return {
        "automorphism": str(psi),
        "family": [r["cover"] for r in reports],
        "verdict": "pass" if all(r["verdict"] == "pass" for r in reports) else "fail",
        "covers": reports,
    }
