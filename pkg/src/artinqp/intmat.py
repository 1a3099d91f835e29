"""Integer matrix normal forms.

Matrices are plain lists of lists of Python ints (row major).  Everything
here is exact; nothing is mutated in place unless the name says so.
"""
from __future__ import annotations

from math import gcd

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    acc[j] += x * bk[j]
        out.append(acc)
    return out


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def determinant(a: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Matrix, ncols: int | None = None, transforms: bool = True):
    """Return ``(D, U, V)`` with ``U @ a @ V == D``.

    ``D`` is diagonal with non-negative entries d_1 | d_2 | ... and ``U``,
    ``V`` are unimodular.  ``ncols`` is needed only when ``a`` has no rows.
    With ``transforms=False`` the returned U and V are ``None``.
    """
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    d = [row[:] for row in a]
    u = identity(m) if transforms else None
    v = identity(n) if transforms else None

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        rs, rd = d[src], d[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        if u is not None:
            us, ud = u[src], u[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]

    def add_col(dst, src, q):
        for row in d:
            if row[src]:
                row[dst] += q * row[src]
        if v is not None:
            for row in v:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero in the trailing block
            best = None
            for i in range(t, m):
                row = d[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    add_row(i, t, -(x // p))
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = d[t][j]
                if x:
                    add_col(j, t, -(x // p))
                    if d[t][j]:
                        dirty = True
            if dirty:
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, m):
                row = d[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
    return d, u, v


def diagonal(d: Matrix) -> list[int]:
    k = min(len(d), len(d[0]) if d else 0)
    return [d[i][i] for i in range(k)]


def hermite_normal_form(a: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style HNF: returns ``(H, U)`` with ``U @ a == H`` and U unimodular.

    H is in reduced row echelon form over Z: pivots positive, entries above a
    pivot reduced into ``[0, pivot)``, zero rows at the bottom.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [row[:] for row in a]
    u = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if h[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            h[r], h[piv] = h[piv], h[r]
            u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, m):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if h[i][c]:
                        done = False
            if done:
                break
        if r < m and h[r][c]:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
    return h, u


def left_kernel(b: Matrix, nrows: int) -> Matrix:
    """Basis (as rows) of ``{w in Z^nrows : w @ b == 0}``; the result is saturated."""
    ncols = len(b[0]) if b else 0
    if ncols == 0:
        return identity(nrows)
    # w b = 0  <=>  b^T w^T = 0; SNF of b^T = U b^T V gives kernel = columns of V past rank
    bt = transpose(b)
    d, _, v = smith_normal_form(bt, ncols=nrows)
    rank = sum(1 for x in diagonal(d) if x)
    return [[v[i][j] for i in range(nrows)] for j in range(rank, nrows)]


def saturate_columns(b: Matrix, nrows: int) -> Matrix:
    """Columns spanning ``(b Q^d) ∩ Z^n``, linearly independent (n x rank)."""
    ker = left_kernel(b, nrows)  # rows w with w b = 0
    # saturation = right kernel of ker (as a matrix acting on column vectors)
    if not ker:
        return identity(nrows)
    d, _, v = smith_normal_form(ker, ncols=nrows)
    rank = sum(1 for x in diagonal(d) if x)
    return [[v[i][j] for j in range(rank, nrows)] for i in range(nrows)]


def rank(a: Matrix) -> int:
    if not a:
        return 0
    d, _, _ = smith_normal_form(a, transforms=False)
    return sum(1 for x in diagonal(d) if x)


def is_unimodular(a: Matrix) -> bool:
    return len(a) == (len(a[0]) if a else 0) and abs(determinant(a)) == 1


def row_gcd(row) -> int:
    g = 0
    for x in row:
        g = gcd(g, x)
    return g
