"""Small exact linear algebra helpers: scalar vectors, rational RREF, integer HNF.

Vectors are tuples of :class:`~multitile.scalar.Scalar`; matrices are tuples of
row tuples.  Everything here is exact; division only happens inside a closed
scalar tier and raises :class:`FieldClosureViolation` otherwise.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import Scalar, to_scalar

Vec = tuple[Scalar, ...]


def vec(*entries) -> Vec:
    return tuple(to_scalar(e) for e in entries)


def as_vec(entries) -> Vec:
    return tuple(to_scalar(e) for e in entries)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(a: Vec, s) -> Vec:
    s = to_scalar(s)
    return tuple(x * s for x in a)


def vdot(a: Vec, b: Vec) -> Scalar:
    acc = to_scalar(0)
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def mat_vec(m, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def mat_cols(m):
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def solve_linear(matrix, rhs: Vec) -> Vec:
    """Solve matrix @ x = rhs exactly by Gaussian elimination with pivoting.

    Raises ValueError on a singular matrix.  Requires a closed scalar tier
    (rational entries or a single quadratic field).
    """
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col].sign() != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = to_scalar(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col].sign() != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))


def invert(matrix):
    """Exact matrix inverse (list of row tuples)."""
    n = len(matrix)
    cols = []
    for j in range(n):
        e = tuple(to_scalar(1 if i == j else 0) for i in range(n))
        cols.append(solve_linear(matrix, e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def determinant(matrix) -> Scalar:
    n = len(matrix)
    a = [list(row) for row in matrix]
    det = to_scalar(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col].sign() != 0), None)
        if piv is None:
            return to_scalar(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = to_scalar(1) / a[col][col]
        for r in range(col + 1, n):
            if a[r][col].sign() != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


# -- rational matrices ------------------------------------------------------


def rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q; returns the nonzero rows, pivot-ordered."""
    m = [list(map(Fraction, r)) for r in rows]
    nrows, ncols = len(m), (len(m[0]) if m else 0)
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return [row for row in m[:rank]]


def rational_rank(rows) -> int:
    return len(rref([list(r) for r in rows])) if rows else 0


def orthogonal_complement(rows, n: int) -> list[list[Fraction]]:
    """Canonical (RREF, pivot-ordered) basis of the orthogonal complement in Q^n.

    ``rows`` spans a subspace V; the result spans {y : <y, v> = 0 for v in V}.
    """
    basis = rref([list(map(Fraction, r)) for r in rows]) if rows else []
    pivots = []
    for row in basis:
        pivots.append(next(j for j, x in enumerate(row) if x))
    free = [j for j in range(n) if j not in pivots]
    comp = []
    for j in free:
        y = [Fraction(0)] * n
        y[j] = Fraction(1)
        for i, row in enumerate(basis):
            # <y, row> = 0  =>  y[pivot_i] = -row[j]
            y[pivots[i]] = -row[j]
        comp.append(y)
    return rref(comp) if comp else []


# -- integer matrices --------------------------------------------------------


def column_hnf(matrix: list[list[int]]) -> list[list[int]]:
    """Column-style Hermite normal form of an integer matrix (d x n).

    Returns the nonzero columns as a d x r matrix (list of rows), lower
    triangular up to column permutation: processing rows top-down, each pivot
    column has a positive pivot, entries to the right of a pivot are zero, and
    entries to the left are reduced into [0, pivot).
    """
    d = len(matrix)
    n = len(matrix[0]) if d else 0
    a = [list(map(int, row)) for row in matrix]

    def col(j):
        return [a[i][j] for i in range(d)]

    def swap(j, k):
        for i in range(d):
            a[i][j], a[i][k] = a[i][k], a[i][j]

    def addmul(j, k, t):
        # column j += t * column k
        for i in range(d):
            a[i][j] += t * a[i][k]

    row = 0
    pivot_col = 0
    while row < d and pivot_col < n:
        # Euclidean reduction across columns pivot_col..n-1 on this row.
        while True:
            nz = [j for j in range(pivot_col, n) if a[row][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(a[row][j]))
            swap(pivot_col, jmin)
            done = True
            for j in range(pivot_col + 1, n):
                if a[row][j] != 0:
                    q = a[row][j] // a[row][pivot_col]
                    addmul(j, pivot_col, -q)
                    if a[row][j] != 0:
                        done = False
            if done:
                break
        if a[row][pivot_col] != 0:
            if a[row][pivot_col] < 0:
                for i in range(d):
                    a[i][pivot_col] = -a[i][pivot_col]
            # Reduce columns left of the pivot into [0, pivot).
            p = a[row][pivot_col]
            for j in range(pivot_col):
                q = a[row][j] // p
                if q:
                    addmul(j, pivot_col, -q)
            pivot_col += 1
        row += 1
    keep = [j for j in range(n) if any(a[i][j] for i in range(d))]
    return [[a[i][j] for j in keep] for i in range(d)]


def integer_kernel(matrix: list[list[int]]) -> list[list[int]]:
    """Basis (as columns) of {x in Z^n : matrix @ x = 0} for an integer matrix.

    Returns an n x r matrix as a list of rows.
    """
    d = len(matrix)
    n = len(matrix[0]) if d else 0
    # Track column operations on an identity block below the matrix.
    a = [list(map(int, row)) for row in matrix] + [
        [1 if i == j else 0 for j in range(n)] for i in range(n)
    ]

    def swap(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]

    def addmul(j, k, t):
        for r in a:
            r[j] += t * r[k]

    row = 0
    pivot_col = 0
    while row < d and pivot_col < n:
        while True:
            nz = [j for j in range(pivot_col, n) if a[row][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(a[row][j]))
            swap(pivot_col, jmin)
            done = True
            for j in range(pivot_col + 1, n):
                if a[row][j] != 0:
                    q = a[row][j] // a[row][pivot_col]
                    addmul(j, pivot_col, -q)
                    if a[row][j] != 0:
                        done = False
            if done:
                break
        if a[row][pivot_col] != 0:
            pivot_col += 1
        row += 1
    kernel_cols = [
        j for j in range(n) if all(a[i][j] == 0 for i in range(d))
    ]
    return [[a[d + i][j] for j in kernel_cols] for i in range(n)]


def hnf_subgroup_index(vectors: list[tuple[int, int]]) -> int | None:
    """Index in Z^2 of the subgroup generated by ``vectors``; None if infinite."""
    if not vectors:
        return None
    h = column_hnf([[v[0] for v in vectors], [v[1] for v in vectors]])
    if not h or len(h[0]) < 2:
        return None
    det = h[0][0] * h[1][1] - h[0][1] * h[1][0]
    return abs(det) if det else None
