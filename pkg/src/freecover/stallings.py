"""Stallings subgroup graphs: folding, membership and completion to covers."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .words import Endomorphism, Word


class UnionFind:
    def __init__(self, n: int = 0):
        self.parent = list(range(n))

    def add(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        """Merge the classes of a and b; the smaller root id survives."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra


class NotFoldedError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledGraph:
    """Directed graph on vertices 0..num_vertices-1 with edges (src, dst, label)."""

    rank: int
    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]
    basepoint: int | None = 0

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    @cached_property
    def out_edges(self) -> list[dict[int, list[int]]]:
        out: list[dict[int, list[int]]] = [{} for _ in self.vertices]
        for s, t, a in self.edges:
            out[s].setdefault(a, []).append(t)
        return out

    @cached_property
    def in_edges(self) -> list[dict[int, list[int]]]:
        inc: list[dict[int, list[int]]] = [{} for _ in self.vertices]
        for s, t, a in self.edges:
            inc[t].setdefault(a, []).append(s)
        return inc

    def degree(self, v: int) -> int:
        return sum(len(x) for x in self.out_edges[v].values()) + sum(
            len(x) for x in self.in_edges[v].values()
        )

    def is_folded(self) -> bool:
        return all(
            len(ts) <= 1 for d in self.out_edges + self.in_edges for ts in d.values()
        )

    def is_core(self) -> bool:
        return all(self.degree(v) >= 2 for v in self.vertices if v != self.basepoint)

    def is_cover(self) -> bool:
        return all(
            len(d.get(a, ())) == 1
            for d in self.out_edges + self.in_edges
            for a in range(1, self.rank + 1)
        )

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for d in (self.out_edges[v], self.in_edges[v]):
                for ts in d.values():
                    for t in ts:
                        if t not in seen:
                            seen.add(t)
                            todo.append(t)
        return len(seen) == self.num_vertices

    def step(self, v: int, letter: int) -> int | None:
        """Follow one letter from v in a folded graph; None if no such edge."""
        d = self.out_edges[v] if letter > 0 else self.in_edges[v]
        ts = d.get(abs(letter))
        if not ts:
            return None
        if len(ts) > 1:
            raise NotFoldedError(f"vertex {v} has {len(ts)} edges labeled {letter}")
        return ts[0]

    def read(self, w: Word, start: int | None = None) -> int | None:
        v = self.basepoint if start is None else start
        for a in w.letters:
            v = self.step(v, a)
            if v is None:
                return None
        return v

    def contains(self, w: Word) -> bool:
        if not self.is_folded():
            raise NotFoldedError("membership needs a folded graph")
        if w.rank != self.rank:
            raise ValueError(f"rank mismatch: {w.rank} vs {self.rank}")
        return self.read(w) == self.basepoint

    def rank_of_fundamental_group(self) -> int:
        if not self.is_connected():
            raise ValueError("rank is only defined for connected graphs")
        return len(self.edges) - self.num_vertices + 1

    def is_rose(self) -> bool:
        return (
            self.num_vertices == 1
            and sorted(a for _, _, a in self.edges) == list(range(1, self.rank + 1))
        )

    def canonical(self) -> LabeledGraph:
        """Relabel vertices in BFS order from the basepoint.

        For folded connected graphs the traversal (out-labels ascending, then
        in-labels ascending) is deterministic, so two based graphs are
        isomorphic iff their canonical forms are equal.
        """
        order = {self.basepoint: 0}
        queue = deque([self.basepoint])
        while queue:
            v = queue.popleft()
            for d in (self.out_edges[v], self.in_edges[v]):
                for a in sorted(d):
                    for t in d[a]:
                        if t not in order:
                            order[t] = len(order)
                            queue.append(t)
        edges = tuple(sorted((order[s], order[t], a) for s, t, a in self.edges))
        return LabeledGraph(self.rank, len(order), edges, 0)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "basepoint": self.basepoint,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> LabeledGraph:
        if isinstance(data, str):
            data = json.loads(data)
        vertices = list(data["vertices"])
        index = {v: i for i, v in enumerate(vertices)}
        edges = tuple((index[s], index[t], int(a)) for s, t, a in data["edges"])
        base = data.get("basepoint")
        return cls(int(data["rank"]), len(vertices), edges, None if base is None else index[base])

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            shape = "doublecircle" if v == self.basepoint else "circle"
            lines.append(f"  {v} [shape={shape}];")
        for s, t, a in self.edges:
            lines.append(f'  {s} -> {t} [label="x{a}"];')
        lines.append("}")
        return "\n".join(lines)


def _petal_graph(gens: Sequence[Word], rank: int) -> tuple[int, list[tuple[int, int, int]]]:
    num = 1
    edges = []
    for w in gens:
        if w.rank != rank:
            raise ValueError(f"generator {w} has rank {w.rank}, expected {rank}")
        if w.is_trivial():
            continue
        prev = 0
        for k, a in enumerate(w.letters):
            if k == len(w) - 1:
                nxt = 0
            else:
                nxt = num
                num += 1
            edges.append((prev, nxt, a) if a > 0 else (nxt, prev, -a))
            prev = nxt
    return num, edges


def fold(num_vertices: int, edges: Iterable[tuple[int, int, int]], rank: int,
         basepoint: int = 0, rng=None) -> LabeledGraph:
    """Fold a labeled graph until it is an immersion.

    Clashes are resolved in (vertex, label) lex order unless ``rng`` is given,
    in which case a random clash is folded at every step.
    """
    uf = UnionFind(num_vertices)
    edges = list(edges)
    while True:
        current = sorted({(uf.find(s), uf.find(t), a) for s, t, a in edges})
        clashes = {}
        for s, t, a in current:
            clashes.setdefault((s, 1, a), []).append(t)
            clashes.setdefault((t, -1, a), []).append(s)
        pending = [ts for key, ts in sorted(clashes.items()) if len(ts) > 1]
        if not pending:
            break
        if rng is None:
            for ts in pending:
                for t in ts[1:]:
                    uf.union(ts[0], t)
        else:
            ts = rng.choice(pending)
            i, j = rng.sample(range(len(ts)), 2)
            uf.union(ts[i], ts[j])
    roots = sorted({uf.find(v) for v in range(num_vertices)})
    index = {r: i for i, r in enumerate(roots)}
    edges_out = tuple(sorted({(index[uf.find(s)], index[uf.find(t)], a) for s, t, a in edges}))
    return LabeledGraph(rank, len(roots), edges_out, index[uf.find(basepoint)])


def trim(g: LabeledGraph) -> LabeledGraph:
    """Remove hanging trees so every non-base vertex has degree at least 2."""
    alive = set(g.vertices)
    edges = set(g.edges)
    deg = {v: 0 for v in alive}
    for s, t, _ in edges:
        deg[s] += 1
        deg[t] += 1
    stack = [v for v in alive if deg[v] <= 1 and v != g.basepoint]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for e in [e for e in edges if v in (e[0], e[1])]:
            edges.discard(e)
            other = e[1] if e[0] == v else e[0]
            if other in alive:
                deg[other] -= 1
                if deg[other] <= 1 and other != g.basepoint:
                    stack.append(other)
    index = {v: i for i, v in enumerate(sorted(alive))}
    return LabeledGraph(
        g.rank, len(index), tuple(sorted((index[s], index[t], a) for s, t, a in edges)),
        index[g.basepoint],
    )


def graph_from_generators(gens: Sequence[Word], rank: int | None = None, rng=None) -> LabeledGraph:
    """Folded core graph of the subgroup generated by ``gens``, in canonical labeling."""
    if rank is None:
        if not gens:
            raise ValueError("rank required when there are no generators")
        rank = gens[0].rank
    num, edges = _petal_graph(gens, rank)
    return trim(fold(num, edges, rank, 0, rng=rng)).canonical()


def contains(g: LabeledGraph, w: Word) -> bool:
    return g.contains(w)


def rank(g: LabeledGraph) -> int:
    return g.rank_of_fundamental_group()


def rose(n: int) -> LabeledGraph:
    return LabeledGraph(n, 1, tuple((0, 0, a) for a in range(1, n + 1)), 0)


def image_graph(phi: Endomorphism) -> LabeledGraph:
    return graph_from_generators(phi.images, phi.rank)


def is_surjective(phi: Endomorphism) -> bool:
    """Exact: phi(F_n) = F_n iff the folded graph of the images is the rose."""
    return image_graph(phi).is_rose()


def complete_to_cover(g: LabeledGraph) -> LabeledGraph:
    """Extend each label's partial permutation to a permutation, no new vertices.

    Unsaturated sources are matched to unsaturated targets in ascending order.
    """
    if not g.is_folded():
        raise NotFoldedError("cover completion needs a folded graph")
    new_edges = list(g.edges)
    for a in range(1, g.rank + 1):
        sources = [v for v in g.vertices if a not in g.out_edges[v]]
        targets = [v for v in g.vertices if a not in g.in_edges[v]]
        new_edges += [(s, t, a) for s, t in zip(sources, targets)]
    return LabeledGraph(g.rank, g.num_vertices, tuple(sorted(new_edges)), g.basepoint)
