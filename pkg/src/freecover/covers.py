"""Finite quotients of F_n, based regular covers of the rose, and mod-q towers.

A finite quotient Psi: F_n -> Gamma is stored through its right regular
action: ``right[i-1][g]`` is the index of ``g * Psi(x_i)``.  Vertices of the
associated cover are the elements of Gamma, with the x_i-edge g -> g Psi(x_i).
The deck group acts on the left, g . h = gh.
"""

from __future__ import annotations

import itertools
import os
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Sequence

from .stallings import LabeledGraph
from .words import Endomorphism, Word

DEFAULT_MAX_VERTICES = 10_000


def default_max_vertices() -> int:
    return int(os.environ.get("FREECOVER_MAX_VERTICES", DEFAULT_MAX_VERTICES))


class BudgetExceeded(RuntimeError):
    def __init__(self, level: int, needed: int, budget: int):
        super().__init__(
            f"level {level} needs {needed} vertices, budget is {budget} "
            f"(built up to level {level - 1})"
        )
        self.level = level
        self.needed = needed
        self.budget = budget


class NotInvariantError(ValueError):
    """The kernel of the quotient is not invariant under the endomorphism."""


@dataclass(frozen=True, eq=False)
class FiniteQuotient:
    rank: int
    right: tuple[tuple[int, ...], ...]
    labels: tuple[Hashable, ...]
    name: str = ""
    q: int | None = None  # set when the kernel is the verbal subgroup [F,F]F^q

    def __post_init__(self):
        if len(self.right) != self.rank:
            raise ValueError("need one permutation per generator")
        if len(self.labels) != self.order:
            raise ValueError("one label per element required")
        for p in self.right:
            if sorted(p) != list(range(self.order)):
                raise ValueError("generator action is not a permutation")

    @property
    def order(self) -> int:
        return len(self.right[0])

    @cached_property
    def right_inverse(self) -> tuple[tuple[int, ...], ...]:
        inv = []
        for p in self.right:
            r = [0] * self.order
            for g, h in enumerate(p):
                r[h] = g
            inv.append(tuple(r))
        return tuple(inv)

    @cached_property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def act(self, g: int, letter: int) -> int:
        return self.right[letter - 1][g] if letter > 0 else self.right_inverse[-letter - 1][g]

    def trace(self, w: Word, start: int = 0) -> int:
        g = start
        for a in w.letters:
            g = self.act(g, a)
        return g

    def psi(self, w: Word) -> int:
        return self.trace(w, 0)

    @cached_property
    def words(self) -> tuple[Word, ...]:
        """Shortest word for each element, BFS over letters (label, sign) ascending."""
        out: list[Word | None] = [None] * self.order
        out[0] = Word.identity(self.rank)
        queue = deque([0])
        letters = [s * i for i in range(1, self.rank + 1) for s in (1, -1)]
        while queue:
            g = queue.popleft()
            for a in letters:
                h = self.act(g, a)
                if out[h] is None:
                    out[h] = out[g] * Word.generator(a, self.rank)
                    queue.append(h)
        if any(w is None for w in out):
            raise ValueError("generator images do not generate the group")
        return tuple(out)

    def mul(self, g: int, h: int) -> int:
        return self.trace(self.words[h], g)

    def inverse(self, g: int) -> int:
        return self.psi(self.words[g].inverse())

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.mul(g, h) for h in range(self.order)) for g in range(self.order))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def is_abelian(self) -> bool:
        gens = [self.psi(Word.generator(i, self.rank)) for i in range(1, self.rank + 1)]
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def is_valid(self, samples: int = 200, seed: int = 0) -> bool:
        """Group axioms for the multiplication induced by the right action."""
        try:
            self.words
        except ValueError:
            return False
        n = self.order
        rng = random.Random(seed)
        # left multiplications must commute with the generator action
        for g in range(n):
            for i, p in enumerate(self.right):
                for h in range(n):
                    if self.mul(g, p[h]) != p[self.mul(g, h)]:
                        return False
                if n > 64:
                    break
            if n > 64 and g > 16:
                break
        for _ in range(samples):
            a, b, c = (rng.randrange(n) for _ in range(3))
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return False
            if self.mul(a, 0) != a or self.mul(0, a) != a:
                return False
            if self.mul(a, self.inverse(a)) != 0:
                return False
        return True

    def label(self, g: int) -> str:
        lab = self.labels[g]
        if lab == ():
            return "1"
        if isinstance(lab, tuple) and all(isinstance(x, int) for x in lab):
            return "".join(str(x) for x in lab) if (self.q or 10) <= 10 else ",".join(map(str, lab))
        return str(lab)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "order": self.order,
            "generator_action": [list(p) for p in self.right],
            "labels": [self.label(g) for g in range(self.order)],
        }


def quotient_from_elements(rank: int, gens: Sequence, mul, identity, name: str = "") -> FiniteQuotient:
    """Enumerate the group generated by ``gens`` under ``mul`` by BFS."""
    elems = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = mul(g, s)
            if h not in index:
                index[h] = len(elems)
                elems.append(h)
                queue.append(h)
    right = tuple(tuple(index[mul(g, s)] for g in elems) for s in gens)
    return FiniteQuotient(rank, right, tuple(elems), name)


def mod_q_quotient(n: int, q: int) -> FiniteQuotient:
    """Psi: F_n -> (Z/q)^n, x_i -> e_i; elements in lexicographic order."""
    if q < 2:
        raise ValueError(f"modulus must be at least 2, got {q}")
    if n < 1:
        raise ValueError(f"rank must be positive, got {n}")
    elems = list(itertools.product(range(q), repeat=n))
    index = {e: i for i, e in enumerate(elems)}
    right = []
    for i in range(n):
        right.append(tuple(
            index[tuple((x + (k == i)) % q for k, x in enumerate(e))] for e in elems
        ))
    return FiniteQuotient(n, tuple(right), tuple(elems), f"(Z/{q})^{n}", q=q)


def trivial_quotient(n: int) -> FiniteQuotient:
    return FiniteQuotient(n, tuple((0,) for _ in range(n)), ((),), "1", q=1)


def symmetric_group_quotient() -> FiniteQuotient:
    """S_3 as a quotient of F_2: x1 -> (0 1), x2 -> (0 1 2)."""
    def mul(g, s):
        return tuple(s[g[k]] for k in range(3))
    return quotient_from_elements(2, [(1, 0, 2), (1, 2, 0)], mul, (0, 1, 2), "S3")


def is_fully_characteristic_verbal(Q: FiniteQuotient, q: int | None = None) -> bool:
    """Certify the kernel is the verbal subgroup [F,F]F^q.

    Holds when Q is abelian, every element has order dividing q and
    |Q| = q^n (so no further relation is imposed).  False means "no
    certificate", not "not fully characteristic".
    """
    if Q.order == 1:
        return True
    q = Q.q if q is None else q
    if q is None or Q.order != q ** Q.rank or not Q.is_abelian():
        return False
    return all(q % Q.element_order(g) == 0 for g in range(Q.order))


@dataclass(frozen=True)
class InducedMap:
    images: tuple[int, ...]
    kind: str  # "identity", "automorphism" or "proper"

    def __call__(self, g: int) -> int:
        return self.images[g]

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"


def induced_quotient_endo(phi: Endomorphism, Q: FiniteQuotient) -> InducedMap:
    """The map Psi(w) -> Psi(phi(w)) on Gamma.

    Raises NotInvariantError unless it is a well defined homomorphism, i.e.
    unless phi(ker Psi) lies in ker Psi.
    """
    if phi.rank != Q.rank:
        raise ValueError("rank mismatch")
    gen_img = [Q.psi(w) for w in phi.images]
    f = [Q.psi(phi(w)) for w in Q.words]
    for g in range(Q.order):
        for i in range(Q.rank):
            if f[Q.right[i][g]] != Q.mul(f[g], gen_img[i]):
                raise NotInvariantError(f"{phi} does not preserve the kernel of {Q.name or 'the quotient'}")
    if all(f[g] == g for g in range(Q.order)):
        kind = "identity"
    elif len(set(f)) == Q.order:
        kind = "automorphism"
    else:
        kind = "proper"
    return InducedMap(tuple(f), kind)


def preserves_kernel(phi: Endomorphism, Q: FiniteQuotient) -> bool:
    try:
        induced_quotient_endo(phi, Q)
    except NotInvariantError:
        return False
    return True


@dataclass(frozen=True, eq=False)
class BasedCover:
    """Regular cover of R_n with vertices = Gamma and basepoint = identity."""

    quotient: FiniteQuotient
    certificate: str = ""  # why the subgroup is fully characteristic, if known
    label: str = ""

    @property
    def rank(self) -> int:
        return self.quotient.rank

    @property
    def degree(self) -> int:
        return self.quotient.order

    @cached_property
    def graph(self) -> LabeledGraph:
        Q = self.quotient
        edges = tuple((g, Q.right[i][g], i + 1) for g in range(Q.order) for i in range(Q.rank))
        return LabeledGraph(Q.rank, Q.order, edges, 0)

    @cached_property
    def _tree(self):
        Q = self.quotient
        parent: dict[int, tuple[int, int]] = {0: (0, 0)}  # vertex -> (previous vertex, letter)
        tree_edges: set[tuple[int, int]] = set()
        queue = deque([0])
        while queue:
            g = queue.popleft()
            moves = []
            for i in range(1, Q.rank + 1):
                moves.append((i, Q.act(g, i), 0, i))
                moves.append((i, Q.act(g, -i), 1, -i))
            # label ascending, then target id; forward edges win ties
            for _, h, _, a in sorted(moves):
                if h not in parent:
                    parent[h] = (g, a)
                    tree_edges.add((g, a) if a > 0 else (h, -a))
                    queue.append(h)
        paths: list[Word | None] = [None] * Q.order
        paths[0] = Word.identity(Q.rank)
        for v in _bfs_order(parent):
            if v:
                p, a = parent[v]
                paths[v] = paths[p] * Word.generator(a, Q.rank)
        return frozenset(tree_edges), tuple(paths)

    @property
    def tree_edges(self) -> frozenset[tuple[int, int]]:
        """Tree edges as (source vertex, label)."""
        return self._tree[0]

    @property
    def tree_paths(self) -> tuple[Word, ...]:
        return self._tree[1]

    @cached_property
    def basis_edges(self) -> tuple[tuple[int, int], ...]:
        """Non-tree edges (source, label) in (source, label) order."""
        return tuple(
            (g, i) for g in range(self.degree) for i in range(1, self.rank + 1)
            if (g, i) not in self.tree_edges
        )

    @cached_property
    def edge_column(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.basis_edges)}

    @cached_property
    def loop_words(self) -> tuple[Word, ...]:
        Q = self.quotient
        out = []
        for g, i in self.basis_edges:
            h = Q.right[i - 1][g]
            out.append(self.tree_paths[g] * Word.generator(i, Q.rank) * self.tree_paths[h].inverse())
        return tuple(out)

    @property
    def homology_rank(self) -> int:
        return len(self.basis_edges)

    def trace(self, w: Word, start: int = 0) -> tuple[int, list[int]]:
        """Walk w from ``start``; return the end vertex and signed non-tree crossings."""
        Q = self.quotient
        col = self.edge_column
        vec = [0] * len(self.basis_edges)
        g = start
        for a in w.letters:
            if a > 0:
                k = col.get((g, a))
                g = Q.right[a - 1][g]
                if k is not None:
                    vec[k] += 1
            else:
                g = Q.right_inverse[-a - 1][g]
                k = col.get((g, -a))
                if k is not None:
                    vec[k] -= 1
        return g, vec

    def contains(self, w: Word) -> bool:
        return self.quotient.psi(w) == 0

    def deck(self, g: int, h: int) -> int:
        """Left action of the deck element g on the vertex h."""
        return self.quotient.mul(g, h)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "rank": self.rank,
            "degree": self.degree,
            "certificate": self.certificate,
            "quotient": self.quotient.to_json(),
            "vertices": [self.quotient.label(g) for g in range(self.degree)],
            "edges": [list(e) for e in self.graph.edges],
            "tree_edges": [list(e) for e in sorted(self.tree_edges)],
            "cycle_basis": [
                {"edge": list(e), "word": str(w)} for e, w in zip(self.basis_edges, self.loop_words)
            ],
        }

    def to_dot(self) -> str:
        return self.graph.to_dot("cover")


def _bfs_order(parent: dict[int, tuple[int, int]]) -> list[int]:
    children: dict[int, list[int]] = {}
    for v, (p, _) in parent.items():
        if v:
            children.setdefault(p, []).append(v)
    out = [0]
    k = 0
    while k < len(out):
        out.extend(sorted(children.get(out[k], [])))
        k += 1
    return out


def build_cover(Q: FiniteQuotient, certificate: str | None = None, label: str = "") -> BasedCover:
    if certificate is None:
        certificate = "verbal" if is_fully_characteristic_verbal(Q) else ""
    return BasedCover(Q, certificate, label or Q.name)


def mod_q_cover(n: int, q: int) -> BasedCover:
    return build_cover(mod_q_quotient(n, q), label=f"mod{q}-level1")


def homology_cover_of(X: BasedCover, q: int, max_vertices: int | None = None,
                      level: int = 0, label: str = "") -> BasedCover:
    """The mod-q homology cover of X, as a regular cover of R_n.

    Vertices are pairs (v, c) with v a vertex of X and c in (Z/q)^r; the
    x_i-edge from v carries the voltage of the corresponding edge of X
    (a unit vector for non-tree edges, zero on the spanning tree).
    """
    if max_vertices is None:
        max_vertices = default_max_vertices()
    r = X.homology_rank
    size = X.degree * q ** r
    if size > max_vertices:
        raise BudgetExceeded(level, size, max_vertices)
    Q0 = X.quotient
    qr = q ** r
    col = X.edge_column
    right = []
    for i in range(1, X.rank + 1):
        perm = [0] * size
        for v in range(X.degree):
            w = Q0.right[i - 1][v]
            k = col.get((v, i))
            shift = q ** (r - 1 - k) if k is not None else 0
            for c in range(qr):
                if shift:
                    digit = (c // shift) % q
                    c2 = c - digit * shift + ((digit + 1) % q) * shift
                else:
                    c2 = c
                perm[v * qr + c] = w * qr + c2
        right.append(tuple(perm))
    labels = tuple(
        (Q0.labels[v], tuple((c // q ** (r - 1 - k)) % q for k in range(r)))
        for v in range(X.degree) for c in range(qr)
    )
    Q = FiniteQuotient(X.rank, tuple(right), labels, f"{Q0.name}.(Z/{q})^{r}")
    return BasedCover(Q, "iterated-verbal" if X.certificate else "", label)


@dataclass
class TowerLevel:
    level: int
    cover: BasedCover
    deck_order: int  # order of the deck group over the previous level
    witness: Word  # in G_{level-1} but not in G_level


@dataclass
class CoverTower:
    rank: int
    q: int
    levels: list[TowerLevel] = field(default_factory=list)
    stopped: str = ""  # reason the tower stops short of the requested depth

    def cover(self, level: int) -> BasedCover:
        return self.levels[level - 1].cover

    def total_degree(self, level: int) -> int:
        return self.levels[level - 1].cover.degree

    def validate(self) -> bool:
        prev = None
        for lv in self.levels:
            inside_prev = True if prev is None else prev.contains(lv.witness)
            if not inside_prev or lv.cover.contains(lv.witness):
                return False
            expected = (prev.degree if prev else 1) * lv.deck_order
            if lv.cover.degree != expected:
                return False
            prev = lv.cover
        return True


_TOWER_CACHE: dict[tuple[int, int], list[TowerLevel]] = {}


def build_tower(n: int, q: int, depth: int, max_vertices: int | None = None,
                strict: bool = True) -> CoverTower:
    """Iterated mod-q homology covers X_1, ..., X_depth of R_n.

    With ``strict`` a level over the vertex budget raises BudgetExceeded;
    otherwise the tower stops there and records why.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if max_vertices is None:
        max_vertices = default_max_vertices()
    cached = _TOWER_CACHE.setdefault((n, q), [])
    tower = CoverTower(n, q)
    for k in range(1, depth + 1):
        if k <= len(cached):
            lv = cached[k - 1]
            if lv.cover.degree > max_vertices:
                err = BudgetExceeded(k, lv.cover.degree, max_vertices)
                if strict:
                    raise err
                tower.stopped = str(err)
                break
            tower.levels.append(lv)
            continue
        if k == 1:
            if q ** n > max_vertices:
                err = BudgetExceeded(1, q ** n, max_vertices)
                if strict:
                    raise err
                tower.stopped = str(err)
                break
            cover = build_cover(mod_q_quotient(n, q), label=f"mod{q}-level1")
            witness = Word.generator(1, n)
            deck_order = q ** n
        else:
            prev = cached[k - 2].cover
            try:
                cover = homology_cover_of(prev, q, max_vertices, level=k, label=f"mod{q}-level{k}")
            except BudgetExceeded as err:
                if strict:
                    raise
                tower.stopped = str(err)
                break
            witness = prev.loop_words[0]
            deck_order = q ** prev.homology_rank
        lv = TowerLevel(k, cover, deck_order, witness)
        cached.append(lv)
        tower.levels.append(lv)
    return tower


def separate_word(w: Word, q: int, max_depth: int, max_vertices: int | None = None) -> int | None:
    """Smallest tower level k <= max_depth with w outside G_k, else None.

    A bounded semi-decision: every nontrivial word is eventually separated,
    but no depth bound is known.
    """
    if w.is_trivial():
        raise ValueError("the trivial word lies in every subgroup")
    tower = build_tower(w.rank, q, max_depth, max_vertices, strict=False)
    for lv in tower.levels:
        if not lv.cover.contains(w):
            return lv.level
    return None


def rose_cover(n: int) -> BasedCover:
    return BasedCover(trivial_quotient(n), "trivial", "rose")


def cover_family(n: int, q_list: Sequence[int], depth: int,
                 max_vertices: int | None = None) -> list[tuple[int, int, BasedCover]]:
    """(q, level, cover) for the rose and each tower level within budget.

    Ordered by q ascending then level ascending; the rose (level 0) comes
    first, tagged with the smallest q.
    """
    qs = sorted(set(q_list))
    out = [(qs[0], 0, rose_cover(n))]
    for q in qs:
        tower = build_tower(n, q, depth, max_vertices, strict=False)
        out += [(q, lv.level, lv.cover) for lv in tower.levels]
    return out
