"""Small dense exact linear algebra over a :class:`CharSpec` field.

Matrices are lists of rows of raw scalars.  Elimination always pivots on
the first nonzero entry so every result is deterministic.
"""
from __future__ import annotations

from .scalars import CharSpec


def zeros(rows: int, cols: int):
    return [[0] * cols for _ in range(rows)]


def identity(k: int):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def matmul(A, B, char: CharSpec, inner: int | None = None):
    """A (m x k) times B (k x q).  ``inner`` gives k when A has no rows."""
    k = len(B) if inner is None else inner
    q = len(B[0]) if B else 0
    p = char.p
    out = []
    for row in A:
        acc = [0] * q
        for t in range(k):
            a = row[t]
            if a:
                brow = B[t]
                for j in range(q):
                    if brow[j]:
                        acc[j] += a * brow[j]
        if p:
            acc = [v % p for v in acc]
        out.append(acc)
    return out


def matvec(A, v, char: CharSpec):
    p = char.p
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s += a * b
        out.append(s % p if p else s)
    return out


def transpose(A, cols: int | None = None):
    if not A:
        return [[] for _ in range(cols or 0)]
    return [list(c) for c in zip(*A)]


def rref(A, char: CharSpec, ncols: int | None = None):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    R = [list(r) for r in A]
    m = len(R)
    n = len(R[0]) if R else (ncols or 0)
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = next((i for i in range(row, m) if R[i][col] != 0), None)
        if piv is None:
            continue
        R[row], R[piv] = R[piv], R[row]
        inv = char.inv(R[row][col])
        R[row] = [char.mul(x, inv) for x in R[row]]
        prow = R[row]
        for i in range(m):
            if i != row and R[i][col] != 0:
                f = R[i][col]
                R[i] = [char.sub(x, char.mul(f, y)) for x, y in zip(R[i], prow)]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(A, char: CharSpec) -> int:
    return len(rref(A, char)[1])


def nullspace(A, char: CharSpec, ncols: int):
    """Basis of {v : A v = 0}, one vector per free column (pivot-free index)."""
    if not A:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(A, char, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = char.neg(R[r][f])
        basis.append(v)
    return basis


def column_basis(A, char: CharSpec, nrows: int):
    """Columns of A (as vectors) that form a basis of its column space."""
    if not A or not A[0]:
        return []
    _, pivots = rref(A, char)
    return [[A[i][c] for i in range(nrows)] for c in pivots]


def invert(A, char: CharSpec):
    k = len(A)
    aug = [list(A[i]) + identity(k)[i] for i in range(k)]
    R, pivots = rref(aug, char)
    if pivots[:k] != list(range(k)):
        raise ZeroDivisionError("singular matrix")
    return [r[k:] for r in R]


class ColumnSolver:
    """Solve ``M c = z`` for a fixed full-column-rank M (given by columns).

    Uses an invertible square row-subset, then checks the full system so a
    vector outside the column span is reported instead of silently
    projected.
    """

    def __init__(self, columns, dim: int, char: CharSpec):
        self.char = char
        self.dim = dim
        self.columns = [list(c) for c in columns]
        k = len(self.columns)
        if k == 0:
            self.rows, self.inv = [], []
            return
        # pivot columns of M^T are independent rows of M
        _, rows = rref(self.columns, char, dim)
        if len(rows) != k:
            raise ValueError("columns are not linearly independent")
        self.rows = rows
        sub = [[self.columns[j][i] for j in range(k)] for i in rows]
        self.inv = invert(sub, char)

    def solve(self, z):
        """Coefficients c with sum c_j * col_j == z; ValueError if none."""
        k = len(self.columns)
        c = matvec(self.inv, [z[i] for i in self.rows], self.char) if k else []
        recon = [0] * self.dim
        for cj, col in zip(c, self.columns):
            if cj:
                for i in range(self.dim):
                    if col[i]:
                        recon[i] += cj * col[i]
        if self.char.p:
            recon = [v % self.char.p for v in recon]
        if recon != [self.char.reduce(x) for x in z]:
            raise ValueError("vector is not in the column span")
        return c


def quotient_basis(cycles, boundaries, dim: int, char: CharSpec):
    """Representatives of span(cycles) / span(boundaries).

    ``boundaries`` must lie in span(cycles).  Returns (boundary_basis,
    reps): reps extend a basis of the boundaries to one of the cycles.
    """
    chosen = []
    current = []
    r = 0
    for b in boundaries:
        trial = current + [b]
        if rank(trial, char) > r:
            current, r = trial, r + 1
    bbasis = list(current)
    for z in cycles:
        trial = current + [z]
        if rank(trial, char) > r:
            current, r = trial, r + 1
            chosen.append(z)
    return bbasis, chosen
