"""Small exact linear algebra over Z and Q (lists of lists, Fractions)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def bilinear(g: Sequence[Sequence], u: Sequence, v: Sequence):
    return dot(u, matvec(g, v))


def block_diag(*blocks: Sequence[Sequence]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[o + i][o + j] = x
        o += len(b)
    return out


def is_integral(a) -> bool:
    if isinstance(a, (list, tuple)):
        return all(is_integral(x) for x in a)
    return Fraction(a).denominator == 1


def to_int(a):
    if isinstance(a, (list, tuple)):
        return [to_int(x) for x in a]
    f = Fraction(a)
    if f.denominator != 1:
        raise ValueError(f"{a} is not integral")
    return int(f)


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    return len(rref(a)[1]) if a else 0


def solve(a: Sequence[Sequence], b: Sequence) -> tuple[list[Fraction], int]:
    """Solve a x = b over Q.  Returns (particular solution, nullity).

    Raises ValueError when the system is inconsistent.
    """
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, piv = rref(aug)
    if n in piv:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * n
    for r, c in enumerate(piv):
        x[c] = m[r][n]
    return x, n - len(piv)


def det(a: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    m, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in m]


def symmetric_diagonal(g: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal entries of a rational congruence diagonalisation P^T G P = D.

    Zero pivots are handled by the standard trick of adding a row/column
    with a nonzero off-diagonal entry, so indefinite forms such as U work.
    """
    m = [[Fraction(x) for x in row] for row in g]
    n = len(m)
    out = []
    k = 0
    while k < n:
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                m[k], m[j] = m[j], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    out.append(Fraction(0))
                    k += 1
                    continue
                # e_k <- e_k + e_j makes the diagonal 2 m[k][j] != 0
                m[k] = [x + y for x, y in zip(m[k], m[j])]
                for row in m:
                    row[k] += row[j]
        p = m[k][k]
        out.append(p)
        for i in range(k + 1, n):
            if m[i][k] != 0:
                f = m[i][k] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
        # rows below now hold the Schur complement; drop row/column k
        for i in range(k + 1, n):
            m[k][i] = Fraction(0)
            m[i][k] = Fraction(0)
        k += 1
    return out


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Return (diag, U, V) with U a V = diag(d_1, ..., d_n), d_i | d_{i+1}.

    U and V are unimodular.  Zero invariant factors are returned as 0.
    """
    m = [[int(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f row_src
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for row in m:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        entries = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    add_row(t, i, -q)
                    if m[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    add_col(t, j, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # enforce divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if m[i][j] % m[t][t]), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [m[i][i] if i < cols else 0 for i in range(min(rows, cols))]
    return diag, u, v


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def lcm_denominators(v: Sequence) -> int:
    d = 1
    for x in v:
        q = Fraction(x).denominator
        d = d * q // gcd(d, q)
    return d
