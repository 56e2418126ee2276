"""Small dense linear algebra over GF(p) and over the integers.

Everything here operates on lists of ints; matrices never exceed a few
dozen rows, so plain Python is the right tool.  The integer Smith normal
form returns its transform matrices (needed to extract independent cyclic
generators of abelian sections), which is why it is hand-rolled.
"""

from __future__ import annotations


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over GF(p); returns (rows, pivot columns)."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    out: list[list[int]] = []
    ncols = len(mat[0]) if mat else 0
    col = 0
    while mat and col < ncols:
        pivot_row = None
        for r in mat:
            if r[col] % p:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        mat.remove(pivot_row)
        inv = pow(pivot_row[col] % p, p - 2, p)
        pivot_row = [x * inv % p for x in pivot_row]
        for r in mat:
            f = r[col] % p
            if f:
                for c in range(ncols):
                    r[c] = (r[c] - f * pivot_row[c]) % p
        for r in out:
            f = r[col] % p
            if f:
                for c in range(ncols):
                    r[c] = (r[c] - f * pivot_row[c]) % p
        out.append(pivot_row)
        pivots.append(col)
        col += 1
    return out, pivots


def reduce_vector(v: list[int], rows: list[list[int]], pivots: list[int], p: int) -> list[int]:
    """Residue of v modulo the row space (rows must be in RREF)."""
    v = [x % p for x in v]
    for row, c in zip(rows, pivots):
        f = v[c]
        if f:
            for j in range(len(v)):
                v[j] = (v[j] - f * row[j]) % p
    return v


def in_span(v: list[int], rows: list[list[int]], pivots: list[int], p: int) -> bool:
    return not any(reduce_vector(v, rows, pivots, p))


def nullspace(rows: list[list[int]], p: int, ncols: int) -> list[list[int]]:
    """Basis of {x : M x = 0} over GF(p) for the matrix with the given rows."""
    rrows, pivots = rref(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(rrows, pivots):
            v[c] = (-row[f]) % p
        basis.append(v)
    return basis


def span_key(rows: list[list[int]], p: int) -> tuple:
    """Canonical hashable key of a row space (its RREF rows)."""
    rrows, _ = rref(rows, p)
    return tuple(tuple(r) for r in rrows)


def intersect_spaces(
    a_rows: list[list[int]], b_rows: list[list[int]], p: int, ncols: int
) -> list[list[int]]:
    """Basis of the intersection of two row spaces over GF(p)."""
    if not a_rows or not b_rows:
        return []
    b_rref, b_pivots = rref(b_rows, p)
    residues = [reduce_vector(list(r), b_rref, b_pivots, p) for r in a_rows]
    coeffs = nullspace([list(c) for c in zip(*residues)] if residues else [], p, len(a_rows))
    # Each coefficient vector combines a_rows into an element of b's span.
    out = []
    for cv in coeffs:
        v = [0] * ncols
        for coef, row in zip(cv, a_rows):
            if coef:
                for j in range(ncols):
                    v[j] = (v[j] + coef * row[j]) % p
        if any(v):
            out.append(v)
    rrows, _ = rref(out, p)
    return rrows


def smith_normal_form(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Integer Smith normal form with transforms: returns (D, U, V) with
    U * mat * V = D, D diagonal with d_i | d_{i+1}, U and V unimodular."""
    a = [list(r) for r in mat]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        for c in range(ncols):
            a[dst][c] += f * a[src][c]
        for c in range(nrows):
            u[dst][c] += f * u[src][c]

    def add_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    t = 0
    while t < min(nrows, ncols):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        # clear row t and column t; pivot shrinks on every retry, so this ends
        while True:
            for i in range(t + 1, nrows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            stray = None
            for i in range(t + 1, nrows):
                if a[i][t]:
                    stray = (i, t)
                    break
            if stray is None:
                for j in range(t + 1, ncols):
                    if a[t][j]:
                        stray = (t, j)
                        break
            if stray is None:
                # divisibility: pivot must divide the remaining block
                offender = None
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if a[i][j] % a[t][t]:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                add_row(t, offender, 1)
                continue
            if stray[0] > t:
                swap_rows(t, stray[0])
            else:
                swap_cols(t, stray[1])
        if a[t][t] < 0:
            for c in range(ncols):
                a[t][c] = -a[t][c]
            for c in range(nrows):
                u[t][c] = -u[t][c]
        t += 1
    return a, u, v


def int_matrix_inverse(mat: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix (via rational elimination)."""
    from fractions import Fraction

    k = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
         for i, row in enumerate(mat)]
    for col in range(k):
        piv = next(i for i in range(col, k) if a[i][col])
        a[col], a[piv] = a[piv], a[col]
        f = a[col][col]
        a[col] = [x / f for x in a[col]]
        for i in range(k):
            if i != col and a[i][col]:
                g = a[i][col]
                a[i] = [x - g * y for x, y in zip(a[i], a[col])]
    inv = [[x for x in row[k:]] for row in a]
    out = [[int(x) for x in row] for row in inv]
    if any(x != y for row, orow in zip(inv, out) for x, y in zip(row, orow)):
        raise ValueError("matrix is not unimodular")
    return out
