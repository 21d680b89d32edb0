"""Linear algebra over Q_p with exact magnitudes.

Vectors are tuples of :class:`PadicScalar`; matrices are tuples of row tuples.
Elimination uses full pivoting on the entry of smallest valuation, which keeps
every multiplier in Z_p and so never loses absolute precision.
"""

from __future__ import annotations

from .errors import SingularWithinPrecision
from .polysys import DerivTensor
from .ultrascalar import PadicScalar, PrimeContext, UltraMag

Vector = tuple  # tuple[PadicScalar, ...]
Matrix = tuple  # tuple[tuple[PadicScalar, ...], ...]


def identity(ctx: PrimeContext, n: int) -> Matrix:
    return tuple(tuple(ctx(int(i == j)) for j in range(n)) for i in range(n))


def norm(obj) -> UltraMag:
    """Max entry magnitude of a vector or matrix (the induced ultranorm)."""
    best = None
    for entry in _flatten(obj):
        if not entry.is_zero and (best is None or entry.val < best):
            best = entry.val
    return UltraMag.ZERO if best is None else UltraMag(best)


norms = norm


def _flatten(obj):
    for item in obj:
        if isinstance(item, PadicScalar):
            yield item
        else:
            yield from item


def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def mat_vec(M: Matrix, v: Vector) -> Vector:
    ctx = v[0].ctx
    out = []
    for row in M:
        acc = ctx.zero()
        for a, b in zip(row, v):
            acc = acc + a * b
        out.append(acc)
    return tuple(out)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return tuple(mat_vec(cols, row) for row in A)


def _eliminate(M: Matrix, rhs: list[list[PadicScalar]]) -> list[list[PadicScalar]]:
    """Solve M X = R for the columns of R (given as a list of rows)."""
    n = len(M)
    if any(len(row) != n for row in M) or len(rhs) != n:
        raise ValueError("matrix must be square and match the right-hand side")
    A = [list(row) for row in M]
    R = [list(row) for row in rhs]
    cols = list(range(n))
    for k in range(n):
        best = None
        zero_bound = None
        for i in range(k, n):
            for j in range(k, n):
                a = A[i][j]
                if a.is_zero:
                    if not a.is_exact_zero:
                        zero_bound = a.abs_prec if zero_bound is None else max(zero_bound, a.abs_prec)
                elif best is None or a.val < A[best[0]][best[1]].val:
                    best = (i, j)
        if best is None:
            raise SingularWithinPrecision(
                f"no nonzero pivot after {k} eliminations; remaining entries vanish"
                + (f" modulo p^{zero_bound}" if zero_bound is not None else " exactly"),
                rank=k, zero_bound=zero_bound)
        i, j = best
        A[k], A[i] = A[i], A[k]
        R[k], R[i] = R[i], R[k]
        if j != k:
            for row in A:
                row[k], row[j] = row[j], row[k]
            cols[k], cols[j] = cols[j], cols[k]
        inv_pivot = A[k][k].inverse()
        for r in range(k + 1, n):
            if A[r][k].is_exact_zero:
                continue
            factor = A[r][k] * inv_pivot
            for c in range(k + 1, n):
                A[r][c] = A[r][c] - factor * A[k][c]
            R[r] = [x - factor * y for x, y in zip(R[r], R[k])]
            A[r][k] = A[r][k].ctx.zero()
    m = len(R[0]) if R else 0
    Y = [[None] * m for _ in range(n)]
    for k in range(n - 1, -1, -1):
        inv_pivot = A[k][k].inverse()
        for c in range(m):
            acc = R[k][c]
            for j in range(k + 1, n):
                acc = acc - A[k][j] * Y[j][c]
            Y[k][c] = acc * inv_pivot
    X = [None] * n
    for k in range(n):
        X[cols[k]] = Y[k]
    return X


def solve_linear(M: Matrix, b: Vector) -> Vector:
    """Return y with M y = b to carried precision."""
    return tuple(row[0] for row in _eliminate(M, [[x] for x in b]))


def invert_matrix(M: Matrix) -> Matrix:
    n = len(M)
    ctx = M[0][0].ctx
    X = _eliminate(M, [list(row) for row in identity(ctx, n)])
    return tuple(tuple(row) for row in X)


def compose_inverse(M_inv: Matrix, t: DerivTensor) -> DerivTensor:
    """Left-multiply the output index of ``t`` by an already inverted matrix."""
    n = len(M_inv)
    by_alpha: dict = {}
    for (l, alpha), c in t.coeffs.items():
        by_alpha.setdefault(alpha, {})[l] = c
    out = {}
    for alpha, column in by_alpha.items():
        for i in range(n):
            acc = None
            for l, c in column.items():
                term = M_inv[i][l] * c
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero:
                out[(i, alpha)] = acc
    return DerivTensor(t.order, out, t.point)


def apply_inverse_to_tensor(M: Matrix, t: DerivTensor) -> DerivTensor:
    """The tensor of M^{-1} composed with ``t``; multilinear arguments untouched."""
    return compose_inverse(invert_matrix(M), t)
