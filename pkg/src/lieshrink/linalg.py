"""Exact linear algebra over Q, over Q(r), and over polynomial rings.

Matrices are plain lists of row lists.  Three layers:

* field elimination (works for ``Fraction`` and ``RatFun`` alike),
* fraction-free (Bareiss) elimination for ring-valued matrices, used for
  rank over polynomial rings and for inverting matrices over Q(r) without
  intermediate denominator blowup,
* symmetric congruence diagonalization for inertia of quadratic forms.

Everything here is exact; there are no tolerances anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly, poly_divexact, poly_divmod, poly_gcd
from .multipoly import MultiPoly, multipoly_divexact
from .ratfun import RatFun

Matrix = list


class SingularOverFunctionField(ArithmeticError):
    """A family matrix is singular as a matrix over Q(r)."""


# ---------------------------------------------------------------------------
# generic helpers


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    return [
        [sum((A[i][k] * B[k][j] for k in range(inner)), A[i][0] * 0) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(A: Matrix, v: list) -> list:
    return [sum((A[i][k] * v[k] for k in range(len(v))), A[i][0] * 0) for i in range(len(A))]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: Matrix, c) -> Matrix:
    return [[c * a for a in row] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def mat_pow(A: Matrix, n: int) -> Matrix:
    size = len(A)
    result = identity(size)
    for _ in range(n):
        result = mat_mul(result, A)
    return result


def frac_matrix(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


# ---------------------------------------------------------------------------
# field elimination (Fraction or RatFun entries)


def _field_one(sample):
    return RatFun.one() if isinstance(sample, RatFun) else Fraction(1)


def _field_zero(sample):
    return RatFun.zero() if isinstance(sample, RatFun) else Fraction(0)


def field_rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form plus pivot column indices."""
    if not M:
        return [], []
    rows = [list(r) for r in M]
    nrows, ncols = len(rows), len(rows[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, nrows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        inv = _field_one(rows[row][col]) / rows[row][col]
        rows[row] = [inv * x for x in rows[row]]
        for i in range(nrows):
            if i != row and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    return rows, pivots


def field_rank(M: Matrix) -> int:
    return len(field_rref(M)[1])


def field_nullspace(M: Matrix, ncols: int | None = None) -> list[list]:
    """Basis of the right kernel of M."""
    if not M:
        return []
    ncols = ncols if ncols is not None else len(M[0])
    rref, pivots = field_rref(M)
    one = _field_one(M[0][0])
    zero = _field_zero(M[0][0])
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, col in enumerate(pivots):
            v[col] = -rref[row][f]
        basis.append(v)
    return basis


def field_inverse(M: Matrix) -> Matrix | None:
    """Inverse by Gauss-Jordan; None when singular."""
    n = len(M)
    if n == 0:
        return []
    one, zero = _field_one(M[0][0]), _field_zero(M[0][0])
    aug = [list(M[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = one / aug[col][col]
        aug[col] = [inv * x for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def field_solve(M: Matrix, b: list) -> list | None:
    """One solution of M x = b, or None when inconsistent."""
    if not M:
        return None
    n = len(M[0])
    aug = [list(row) + [bv] for row, bv in zip(M, b)]
    rref, pivots = field_rref(aug)
    if n in pivots:
        return None
    zero = _field_zero(M[0][0])
    x = [zero] * n
    for row, col in enumerate(pivots):
        x[col] = rref[row][n]
    return x


def row_space_basis(vectors: list[list]) -> list[list]:
    """Echelonized basis of the span of the given vectors."""
    if not vectors:
        return []
    rref, pivots = field_rref(vectors)
    return [rref[i] for i in range(len(pivots))]


def in_span(basis: list[list], v: list) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return field_rank(basis) == field_rank(basis + [v])


# ---------------------------------------------------------------------------
# fraction-free elimination over rings


def ring_rank(M: Matrix, divexact, one) -> int:
    """Bareiss rank with full pivoting; entries live in an integral domain."""
    rows = [list(r) for r in M]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = one
    rank = 0
    for k in range(min(nrows, ncols)):
        found = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                if not rows[i][j].is_zero():
                    found = (i, j)
                    break
            if found:
                break
        if not found:
            break
        pi, pj = found
        if pi != k:
            rows[k], rows[pi] = rows[pi], rows[k]
        if pj != k:
            for row in rows:
                row[k], row[pj] = row[pj], row[k]
        pivot = rows[k][k]
        for i in range(k + 1, nrows):
            for j in range(k + 1, ncols):
                rows[i][j] = divexact(pivot * rows[i][j] - rows[i][k] * rows[k][j], prev)
            rows[i][k] = pivot - pivot  # ring zero
        prev = pivot
        rank += 1
    return rank


def polymatrix_rank(M: list[list[MultiPoly]]) -> int:
    """Rank over the fraction field of the multivariate polynomial ring."""
    if not M or not M[0]:
        return 0
    one = MultiPoly.const(M[0][0].nvars, 1)
    return ring_rank(M, multipoly_divexact, one)


# ---------------------------------------------------------------------------
# matrices over Q(r)


def ratfun_matrix(rows) -> Matrix:
    out = []
    for row in rows:
        out.append([x if isinstance(x, RatFun) else RatFun.parse(str(x)) for x in row])
    return out


def _clear_row(row: list[RatFun]) -> tuple[list[LaurentPoly], LaurentPoly]:
    """Scale a Q(r) row to genuine polynomials; returns (row, scale) with scale*M = row."""
    den_lcm = LaurentPoly.one()
    for entry in row:
        g = poly_gcd(den_lcm, entry.den)
        den_lcm = poly_divexact(den_lcm * entry.den, g)
    cleared = [entry.num * poly_divexact(den_lcm, entry.den) for entry in row]
    shift = min((c.valuation() for c in cleared if not c.is_zero()), default=0)
    shift = min(shift, 0)
    cleared = [c.shift(-shift) for c in cleared]
    return cleared, den_lcm.shift(-shift)


def ratfun_matrix_inverse(M: list[list[RatFun]]) -> list[list[RatFun]]:
    """Inverse over Q(r) by fraction-free Gauss-Jordan on a cleared matrix.

    Each row is first scaled to polynomial entries, then a Bareiss-style
    sweep keeps every intermediate entry a genuine polynomial (each division
    by the previous pivot is exact).  Raises SingularOverFunctionField when
    the determinant vanishes identically.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if n == 0:
        return []
    poly_rows: list[list[LaurentPoly]] = []
    scales: list[LaurentPoly] = []
    for row in M:
        cleared, scale = _clear_row(row)
        poly_rows.append(cleared)
        scales.append(scale)
    one, zero = LaurentPoly.one(), LaurentPoly.zero()
    aug = [poly_rows[i] + [one if i == j else zero for j in range(n)] for i in range(n)]
    prev = one
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if not aug[i][k].is_zero()), None)
        if pivot_row is None:
            raise SingularOverFunctionField("matrix is singular over Q(r)")
        aug[k], aug[pivot_row] = aug[pivot_row], aug[k]
        pivot = aug[k][k]
        for i in range(n):
            if i == k:
                continue
            factor = aug[i][k]
            for j in range(2 * n):
                if j == k:
                    continue
                aug[i][j] = poly_divexact(pivot * aug[i][j] - factor * aug[k][j], prev)
            aug[i][k] = zero
        prev = pivot
    # row i of the inverse of the cleared matrix is aug[i][n:] / aug[i][i];
    # undo the row scaling (inverse columns pick up the scales).
    inverse = []
    for i in range(n):
        delta = aug[i][i]
        if delta.is_zero():
            raise SingularOverFunctionField("matrix is singular over Q(r)")
        inverse.append([RatFun(aug[i][n + j] * scales[j], delta) for j in range(n)])
    return inverse


def ratfun_matrix_is_invertible(M: list[list[RatFun]]) -> bool:
    return field_rank(M) == len(M)


# ---------------------------------------------------------------------------
# inertia of rational symmetric matrices


def congruence_signature(M: Matrix) -> tuple[int, int, int]:
    """Inertia (positives, negatives, zeros) of a symmetric matrix over Q.

    Congruence diagonalization only: when every remaining diagonal entry is
    zero but some off-diagonal K[k][j] is not, adding row/column j to
    row/column k produces the pivot 2*K[k][j] (the hyperbolic-block case).
    """
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix is not symmetric")
    pos = neg = 0
    for k in range(n):
        if A[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if swap is not None:
                A[k], A[swap] = A[swap], A[k]
                for row in A:
                    row[k], row[swap] = row[swap], row[k]
            else:
                mate = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if mate is None:
                    continue  # row k is null from here on: a zero of the form
                for j in range(n):
                    A[k][j] += A[mate][j]
                for i in range(n):
                    A[i][k] += A[i][mate]
        pivot = A[k][k]
        for i in range(k + 1, n):
            if A[i][k] != 0:
                factor = A[i][k] / pivot
                for j in range(n):
                    A[i][j] -= factor * A[k][j]
                for i2 in range(n):
                    A[i2][i] -= factor * A[i2][k]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# characteristic polynomial and invariant factors


def char_poly(A: Matrix) -> list[Fraction]:
    """Coefficients [1, c1, .., cn] of det(xI - A) by Faddeev-LeVerrier."""
    n = len(A)
    coeffs = [Fraction(1)]
    M = identity(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        trace = sum((M[i][i] for i in range(n)), Fraction(0))
        c = -trace / k
        coeffs.append(c)
        for i in range(n):
            M[i][i] += c
    return coeffs


def invariant_factors(A: Matrix) -> list[LaurentPoly]:
    """Nonconstant invariant factors of xI - A, monic, in divisibility order.

    Two rational matrices are similar over Q (equivalently over R) exactly
    when these lists coincide, so this is the whole similarity decision.
    """
    n = len(A)
    x = LaurentPoly.var()
    M: list[list[LaurentPoly]] = [
        [
            (x if i == j else LaurentPoly.zero()) - LaurentPoly.const(A[i][j])
            for j in range(n)
        ]
        for i in range(n)
    ]
    factors: list[LaurentPoly] = []
    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if not M[i][j].is_zero():
                        if best is None or M[i][j].degree() < M[best[0]][best[1]].degree():
                            best = (i, j)
            if best is None:
                raise ArithmeticError("char matrix cannot be singular")
            bi, bj = best
            M[t], M[bi] = M[bi], M[t]
            for row in M:
                row[t], row[bj] = row[bj], row[t]
            pivot = M[t][t]
            dirty = False
            for j in range(t + 1, n):
                if M[t][j].is_zero():
                    continue
                q, rem = poly_divmod(M[t][j], pivot)
                for i in range(t, n):
                    M[i][j] = M[i][j] - q * M[i][t]
                if not rem.is_zero():
                    dirty = True
            for i in range(t + 1, n):
                if M[i][t].is_zero():
                    continue
                q, rem = poly_divmod(M[i][t], pivot)
                M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                if not rem.is_zero():
                    dirty = True
            if dirty:
                continue
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if not poly_divmod(M[i][j], pivot)[1].is_zero():
                        offender = i
                        break
                if offender:
                    break
            if offender is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[offender])]
        factors.append(M[t][t].scale(1 / M[t][t].leading_coeff()))
    return [f for f in factors if f.degree() > 0]
