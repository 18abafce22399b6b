"""Free group words and endomorphisms of F_n.

A letter is a nonzero integer: ``i`` stands for the generator x_i and ``-i``
for its inverse.  Words are always stored freely reduced.

>>> w = Word.parse("abAB", 2)
>>> w
Word('abAB')
>>> (w * w.inverse()).is_trivial()
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

_TOKEN = re.compile(r"x(\d+)(\^-1)?|([a-zA-Z])|(1)")


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Free reduction with a stack; confluence makes the scan order irrelevant."""
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")
        for a in self.letters:
            if a == 0 or abs(a) > self.rank:
                raise ValueError(f"letter {a} out of range for rank {self.rank}")
        letters = reduce_letters(self.letters)
        if letters != self.letters:
            object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, rank: int) -> Word:
        return cls((), rank)

    @classmethod
    def generator(cls, i: int, rank: int) -> Word:
        return cls((i,), rank)

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> Word:
        """Parse ``abAB``, ``x1x2^-1`` or ``1`` (the empty word)."""
        text = text.strip()
        letters = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ValueError(f"cannot parse word {text!r} at position {pos}")
            num, inv, ch, one = m.groups()
            if num is not None:
                i = int(num)
                if i == 0:
                    raise ValueError(f"generator index 0 in {text!r}")
                letters.append(-i if inv else i)
            elif ch is not None:
                i = ord(ch.lower()) - ord("a") + 1
                letters.append(i if ch.islower() else -i)
            elif one is not None and text.strip() != "1":
                raise ValueError(f"'1' must stand alone in {text!r}")
            pos = m.end()
        if rank is None:
            rank = max([2] + [abs(a) for a in letters])
        return cls(tuple(letters), rank)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        if self.rank <= 26:
            return "".join(
                chr(ord("a") + a - 1) if a > 0 else chr(ord("A") - a - 1)
                for a in self.letters
            )
        return "".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def is_trivial(self) -> bool:
        return not self.letters

    def _check(self, other: Word):
        if not isinstance(other, Word):
            raise TypeError(f"expected Word, got {type(other).__name__}")
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __mul__(self, other: Word) -> Word:
        self._check(other)
        return Word(self.letters + other.letters, self.rank)

    def inverse(self) -> Word:
        return Word(tuple(-a for a in reversed(self.letters)), self.rank)

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k), self.rank)

    def commutator(self, other: Word) -> Word:
        """[a, b] = a^-1 b^-1 a b."""
        return self.inverse() * other.inverse() * self * other

    def cyclic_reduce(self) -> tuple[Word, Word]:
        """Return ``(core, c)`` with ``self == c^-1 * core * c``."""
        w = self.letters
        k = 0
        while 2 * k + 1 < len(w) and w[k] == -w[-1 - k]:
            k += 1
        core = Word(w[k:len(w) - k], self.rank)
        conj = Word(w[len(w) - k:], self.rank)
        return core, conj

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def abelianization(self) -> tuple[int, ...]:
        v = [0] * self.rank
        for a in self.letters:
            v[abs(a) - 1] += 1 if a > 0 else -1
        return tuple(v)


def word(text: str, rank: int | None = None) -> Word:
    return Word.parse(text, rank)


def left_normed_commutator(ws: Sequence[Word]) -> Word:
    """[w1, w2, ..., wk] = [[...[w1, w2], ...], wk]."""
    c = ws[0]
    for w in ws[1:]:
        c = c.commutator(w)
    return c


@dataclass(frozen=True)
class Endomorphism:
    images: tuple[Word, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) < 1:
            raise ValueError("endomorphism needs at least one image")
        n = len(images)
        for w in images:
            if w.rank != n:
                raise ValueError(f"image {w} has rank {w.rank}, expected {n}")

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, rank: int) -> Endomorphism:
        return cls(tuple(Word.generator(i, rank) for i in range(1, rank + 1)))

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> Endomorphism:
        """Comma separated images: ``"ab,b"`` is x1 -> x1x2, x2 -> x2."""
        parts = [p for p in text.split(",")]
        if rank is None:
            rank = len(parts)
        if len(parts) != rank:
            raise ValueError(f"expected {rank} images, got {len(parts)} in {text!r}")
        return cls(tuple(Word.parse(p, rank) for p in parts))

    @classmethod
    def from_strings(cls, *images: str) -> Endomorphism:
        n = len(images)
        return cls(tuple(Word.parse(s, n) for s in images))

    def __str__(self) -> str:
        return ",".join(str(w) for w in self.images)

    def __repr__(self) -> str:
        return f"Endomorphism({str(self)!r})"

    def __call__(self, w: Word) -> Word:
        if w.rank != self.rank:
            raise ValueError(f"rank mismatch: word rank {w.rank}, endomorphism rank {self.rank}")
        inv = [im.inverse() for im in self.images]
        out: list[int] = []
        for a in w.letters:
            out.extend(self.images[a - 1].letters if a > 0 else inv[-a - 1].letters)
        return Word(tuple(out), self.rank)

    def __matmul__(self, other: Endomorphism) -> Endomorphism:
        """``phi @ psi`` is phi after psi."""
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return Endomorphism(tuple(self(w) for w in other.images))

    def abelianization_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Column i is the abelianized image of x_i."""
        cols = [w.abelianization() for w in self.images]
        return tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))

    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.rank)


def reduce(raw: Iterable[int], rank: int) -> Word:
    return Word(tuple(raw), rank)


def multiply(a: Word, b: Word) -> Word:
    return a * b


def invert(a: Word) -> Word:
    return a.inverse()


def commutator(a: Word, b: Word) -> Word:
    return a.commutator(b)


def power(a: Word, k: int) -> Word:
    return a ** k


def cyclic_reduce(a: Word) -> tuple[Word, Word]:
    return a.cyclic_reduce()


def apply(phi: Endomorphism, w: Word) -> Word:
    return phi(w)


def compose(phi: Endomorphism, psi: Endomorphism) -> Endomorphism:
    return phi @ psi


def inner(w: Word) -> Endomorphism:
    """Conjugation x -> w^-1 x w."""
    n = w.rank
    wi = w.inverse()
    return Endomorphism(tuple(wi * Word.generator(i, n) * w for i in range(1, n + 1)))


def nielsen_moves(rank: int) -> list[Endomorphism]:
    """Right transvections x_i -> x_i x_j^{+-1} and inversions x_i -> x_i^-1.

    Together with their inverses these generate Aut(F_n).
    """
    moves = []
    gens = [Word.generator(i, rank) for i in range(1, rank + 1)]
    for i in range(rank):
        for j in range(rank):
            if i == j:
                continue
            for e in (1, -1):
                imgs = list(gens)
                imgs[i] = gens[i] * gens[j] ** e
                moves.append(Endomorphism(tuple(imgs)))
        imgs = list(gens)
        imgs[i] = gens[i].inverse()
        moves.append(Endomorphism(tuple(imgs)))
    return moves


def random_word(rng, rank: int, max_length: int, min_length: int = 0) -> Word:
    length = rng.randint(min_length, max_length)
    letters: list[int] = []
    while len(letters) < length:
        a = rng.choice([i for i in range(-rank, rank + 1) if i])
        if letters and letters[-1] == -a:
            continue
        letters.append(a)
    return Word(tuple(letters), rank)


def random_automorphism(rng, rank: int, steps: int) -> Endomorphism:
    moves = nielsen_moves(rank)
    phi = Endomorphism.identity(rank)
    for _ in range(steps):
        phi = rng.choice(moves) @ phi
    return phi


def conjugator_word(n: int, variant: str = "figure") -> Word:
    """The word alpha_1 used to build the conjugating non-epimorphism.

    ``variant="figure"``: x_n ... x_1 x_n^-2 ... x_1^-2.
    ``variant="text"``: x_n ... x_1 followed by x_j^(-+2) for j = n..3 with
    alternating sign starting at -2, then x_2^-1 x_1^-1 (for n = 2 the tail
    is x_2^-2 x_1^-1).
    """
    head = list(range(n, 0, -1))
    if variant == "figure":
        tail = []
        for j in range(n, 0, -1):
            tail += [-j, -j]
    elif variant == "text":
        if n == 2:
            tail = [-2, -2, -1]
        else:
            tail = []
            sign = -1
            for j in range(n, 2, -1):
                tail += [sign * j, sign * j]
                sign = -sign
            tail += [-2, -1]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return Word(tuple(head + tail), n)


def conjugating_endomorphism(alpha: Word, index: int = 1) -> Endomorphism:
    """x_index -> alpha^-1 x_index alpha, other generators fixed."""
    n = alpha.rank
    gens = [Word.generator(i, n) for i in range(1, n + 1)]
    gens[index - 1] = alpha.inverse() * gens[index - 1] * alpha
    return Endomorphism(tuple(gens))
