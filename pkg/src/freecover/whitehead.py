"""Whitehead graphs, cut vertices, and Whitehead length reduction."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .words import Endomorphism, Word


class CostGuardError(ValueError):
    pass


def letter_name(a: int) -> str:
    return f"x{a}" if a > 0 else f"x{-a}^-1"


@dataclass(frozen=True)
class WhiteheadGraph:
    rank: int
    edges: tuple[tuple[int, int], ...]  # unordered letter pairs (a, b), a <= b, with repeats

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s * i for i in range(1, self.rank + 1) for s in (1, -1))

    def edge_counts(self) -> Counter:
        return Counter(self.edges)

    def occurring(self) -> tuple[int, ...]:
        seen = {v for e in self.edges for v in e}
        return tuple(v for v in self.vertices if v in seen)

    def to_dot(self) -> str:
        lines = ["graph Wh {"]
        for v in self.vertices:
            lines.append(f'  "{letter_name(v)}";')
        for a, b in self.edges:
            lines.append(f'  "{letter_name(a)}" -- "{letter_name(b)}";')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "vertices": [letter_name(v) for v in self.vertices],
            "edges": [[letter_name(a), letter_name(b)] for a, b in self.edges],
        }


def whitehead_graph(w: Word) -> WhiteheadGraph:
    """One edge {a, b^-1} for each cyclically successive pair a b of letters."""
    if w.is_trivial():
        raise ValueError("Whitehead graph of the trivial word")
    core, _ = w.cyclic_reduce()
    ls = core.letters
    edges = []
    for k, a in enumerate(ls):
        b = ls[(k + 1) % len(ls)]
        edges.append(tuple(sorted((a, -b))))
    return WhiteheadGraph(w.rank, tuple(edges))


def _components(vertices, adj) -> int:
    seen = set()
    count = 0
    for v in vertices:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def _articulation_points(vertices, adj) -> list:
    """Tarjan lowpoint search on a simple graph."""
    index: dict = {}
    low: dict = {}
    cut = set()
    counter = itertools.count()

    def visit(v, parent):
        index[v] = low[v] = next(counter)
        children = 0
        for u in sorted(adj[v]):
            if u not in index:
                children += 1
                visit(u, v)
                low[v] = min(low[v], low[u])
                if parent is not None and low[u] >= index[v]:
                    cut.add(v)
            elif u != parent:
                low[v] = min(low[v], index[u])
        if parent is None and children > 1:
            cut.add(v)

    for v in vertices:
        if v not in index:
            visit(v, None)
    return sorted(cut, key=lambda v: (abs(v), v < 0))


def connectivity(G: WhiteheadGraph, vertices=None) -> tuple[bool, list[int]]:
    """(connected, cut vertices) on the given vertex set, default all 2n letters.

    Parallel edges never create or destroy cut vertices, so the simple graph
    underlying the multigraph is used.
    """
    if vertices is None:
        vertices = G.vertices
    vertices = tuple(vertices)
    adj = {v: set() for v in vertices}
    for a, b in G.edges:
        if a in adj and b in adj and a != b:
            adj[a].add(b)
            adj[b].add(a)
    connected = _components(vertices, adj) == 1
    return connected, _articulation_points(vertices, adj)


def is_connected_no_cut_vertex(G: WhiteheadGraph) -> tuple[bool, list[int]]:
    return connectivity(G)


def whitehead_report(w: Word) -> dict:
    G = whitehead_graph(w)
    full = connectivity(G)
    occ = connectivity(G, G.occurring())
    return {
        "word": str(w),
        "graph": G.to_json(),
        "connected": full[0],
        "cut_vertices": [letter_name(v) for v in full[1]],
        "occurring_letters": {
            "connected": occ[0],
            "cut_vertices": [letter_name(v) for v in occ[1]],
        },
        "not_separable_certified": full[0] and not full[1],
    }


def is_separable_certified_negative(w: Word) -> bool:
    """True certifies that w is not separable (hence not primitive).

    The certificate is a connected Whitehead graph on all 2n letters with no
    cut vertex.  False means "no certificate".
    """
    if w.is_trivial():
        return False
    connected, cut = connectivity(whitehead_graph(w))
    return connected and not cut


def cyclic_length(w: Word) -> int:
    return len(w.cyclic_reduce()[0])


def whitehead_automorphisms(rank: int) -> list[Endomorphism]:
    """Type-I moves (signed permutations) then type-II moves (a, A).

    A type-II move fixes a and sends x to a^-1 x if x^-1 is in A, to x a if
    x is in A, for x != a^{+-1}.  A ranges over subsets of the 2n letters
    containing a and not a^-1; subsets are bitmasks over the letter list.
    """
    gens = [Word.generator(i, rank) for i in range(1, rank + 1)]
    moves = []
    for perm in itertools.permutations(range(rank)):
        for signs in itertools.product((1, -1), repeat=rank):
            imgs = tuple(gens[perm[i]] ** signs[i] for i in range(rank))
            moves.append(Endomorphism(imgs))
    letters = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    for a in letters:
        others = [x for x in letters if abs(x) != abs(a)]
        for mask in range(1 << len(others)):
            A = {a} | {others[k] for k in range(len(others)) if mask >> k & 1}
            imgs = []
            for i in range(1, rank + 1):
                if i == abs(a):
                    imgs.append(gens[i - 1])
                    continue
                img = gens[i - 1]
                if -i in A:
                    img = Word.generator(-a, rank) * img
                if i in A:
                    img = img * Word.generator(a, rank)
                imgs.append(img)
            moves.append(Endomorphism(tuple(imgs)))
    return moves


def whitehead_reduce(w: Word, max_rank: int = 3, max_length: int = 20,
                     force: bool = False) -> tuple[int, Word]:
    """Apply length-reducing Whitehead moves until none reduces.

    Returns (minimal cyclic length, reduced word); w is primitive iff the
    length is 1.  The move set grows like 4^n, so rank and length are guarded
    unless ``force``.
    """
    if w.is_trivial():
        raise ValueError("Whitehead reduction of the trivial word")
    if not force and (w.rank > max_rank or cyclic_length(w) > max_length):
        raise CostGuardError(
            f"rank {w.rank} / cyclic length {cyclic_length(w)} exceeds guard "
            f"({max_rank}, {max_length}); pass force=True"
        )
    moves = whitehead_automorphisms(w.rank)
    cur = w.cyclic_reduce()[0]
    while True:
        n = len(cur)
        for m in moves:
            cand = m(cur).cyclic_reduce()[0]
            if len(cand) < n:
                cur = cand
                break
        else:
            return len(cur), cur


def is_primitive(w: Word, **guard) -> bool:
    return not w.is_trivial() and whitehead_reduce(w, **guard)[0] == 1
