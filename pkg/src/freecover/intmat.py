"""Exact integer matrices as tuples of row tuples.

Everything here is over Python ints; no floating point is ever involved.
"""

from __future__ import annotations

from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def from_columns(cols: Sequence[Sequence[int]], nrows: int | None = None) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows or 0))
    return tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {shape(a)} @ {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col) if x and y) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v) if x and y) for row in a)


def trace(m: Matrix) -> int:
    return sum(m[i][i] for i in range(len(m)))


def is_zero(m: Matrix) -> bool:
    return all(x == 0 for row in m for x in row)


def det(m: Matrix) -> int:
    """Bareiss fraction-free elimination."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U @ m @ V == D``.

    D is diagonal with nonnegative entries d_1 | d_2 | ..., U and V are
    unimodular.  Pivots are chosen by least absolute value.
    """
    rows, cols = shape(m)
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):
        # row_dst += f * row_src
        if f:
            ra, rs = a[dst], a[src]
            for k in range(cols):
                if rs[k]:
                    ra[k] += f * rs[k]
            ua, us = u[dst], u[src]
            for k in range(rows):
                if us[k]:
                    ua[k] += f * us[k]

    def add_col(src, dst, f):
        if f:
            for r in a:
                if r[src]:
                    r[dst] += f * r[src]
            for r in v:
                if r[src]:
                    r[dst] += f * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if done:
                # divisibility: fold any entry not divisible by p into row t
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                     if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return as_matrix(a), as_matrix(u), as_matrix(v)


def smith_diagonal(m: Matrix) -> tuple[int, ...]:
    d, _, _ = smith_normal_form(m)
    r, c = shape(m)
    return tuple(d[i][i] for i in range(min(r, c)))


def is_epi(m: Matrix) -> bool:
    """A square integer matrix is onto Z^n iff |det| = 1."""
    r, c = shape(m)
    if r != c:
        raise ValueError(f"surjectivity test needs a square matrix, got {r}x{c}")
    return abs(det(m)) == 1


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF of the lattice spanned by ``rows``; zero rows dropped.

    Pivots are positive, entries above a pivot lie in [0, pivot).
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return ()
    ncols = len(a[0])
    out: list[list[int]] = []
    col = 0
    while a and col < ncols:
        while True:
            nz = [r for r in a if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(col, ncols):
                    r[k] -= q * piv[k]
            a = [r for r in a if any(r)]
        nz = [r for r in a if r[col]]
        if nz:
            piv = nz[0]
            a = [r for r in a if r is not piv]
            if piv[col] < 0:
                piv = [-x for x in piv]
            out.append(piv)
        col += 1
    # reduce entries above pivots
    for i, r in enumerate(out):
        pc = next(k for k, x in enumerate(r) if x)
        for prev in out[:i]:
            q = prev[pc] // r[pc]
            if q:
                for k in range(pc, ncols):
                    prev[k] -= q * r[k]
    return as_matrix(out)


def unimodular_inverse(m: Matrix) -> Matrix:
    """Inverse of a unimodular matrix via Gauss-Jordan over Z."""
    n = len(m)
    a = [list(r) + list(e) for r, e in zip(m, identity(n))]
    for c in range(n):
        while True:
            nz = [i for i in range(c, n) if a[i][c]]
            if not nz:
                raise ValueError("matrix is singular")
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[c], a[p] = a[p], a[c]
            others = [i for i in range(c + 1, n) if a[i][c]]
            if not others:
                break
            for i in others:
                q = a[i][c] // a[c][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[c])]
        if abs(a[c][c]) != 1:
            raise ValueError("matrix is not unimodular")
        if a[c][c] < 0:
            a[c] = [-x for x in a[c]]
    for c in range(n - 1, -1, -1):
        for i in range(c):
            q = a[i][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[c])]
    return as_matrix(r[n:] for r in a)
