"""Exact integer and rational linear algebra.

All arithmetic is over arbitrary-precision integers and
:class:`fractions.Fraction`; floating point is never used.  A dense matrix
is a list of row lists.  The sparse classes near the bottom store a matrix
as a list of ``{column: value}`` dicts and exist for the large boundary
matrices produced by nerve constructions; the dense routines cover the
small character-matrix work where full transform matrices are wanted.
"""

from collections import defaultdict
from fractions import Fraction

from torsal._kernel import row_axpy

__all__ = [
    "identity_matrix",
    "matmul",
    "matvec",
    "transpose",
    "smith_normal_form",
    "invariant_factors",
    "torsion_order",
    "lattice_index",
    "is_unimodular",
    "determinant",
    "column_hermite_form",
    "hermite_normal_form",
    "kernel_basis",
    "lattice_solve",
    "lattice_contains",
    "solve_congruence",
    "rational_rank",
    "rref",
    "solve_linear",
    "nullspace",
    "SparseSNF",
    "RowEchelonQ",
]


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if inner else 0
    out = []
    for row in A:
        acc = [0] * cols
        for k, a in enumerate(row):
            if a:
                Bk = B[k]
                for j in range(cols):
                    if Bk[j]:
                        acc[j] += a * Bk[j]
        out.append(acc)
    return out


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def _smallest_nonzero(D, t, m, n):
    """First entry of minimal absolute value in the block D[t:, t:], row-major."""
    best = None
    for i in range(t, m):
        Di = D[i]
        for j in range(t, n):
            v = Di[j]
            if v and (best is None or abs(v) < abs(D[best[0]][best[1]])):
                best = (i, j)
                if abs(v) == 1:
                    return best
    return best


def smith_normal_form(A):
    """Smith normal form with transforms.

    Returns ``(U, D, V)`` with ``U * A * V == D``, ``U`` and ``V``
    unimodular, ``D`` diagonal with non-negative entries and
    ``D[i][i] | D[i+1][i+1]``.  Pivots are chosen as the first entry of
    minimal absolute value in row-major order, so the result is
    deterministic.

    >>> U, D, V = smith_normal_form([[1, 1], [0, 2]])
    >>> [D[0][0], D[1][1]]
    [1, 2]
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(v) for v in row] for row in A]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def row_add(i, k, c):
        Di, Dk, Ui, Uk = D[i], D[k], U[i], U[k]
        for j in range(n):
            Di[j] += c * Dk[j]
        for j in range(m):
            Ui[j] += c * Uk[j]

    def col_add(j, k, c):
        for row in D:
            row[j] += c * row[k]
        for row in V:
            row[j] += c * row[k]

    def row_swap(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def col_swap(j, k):
        for row in D:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(m, n):
        pos = _smallest_nonzero(D, t, m, n)
        if pos is None:
            break
        while True:
            i0, j0 = pos
            if i0 != t:
                row_swap(i0, t)
            if j0 != t:
                col_swap(j0, t)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        clean = False
            if not clean:
                pos = _smallest_nonzero(D, t, m, n)
                continue
            p = D[t][t]
            offender = None
            for i in range(t + 1, m):
                Di = D[i]
                for j in range(t + 1, n):
                    if Di[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # Fold the offending row into the pivot row so the next pass
            # replaces the pivot with a proper divisor.
            row_add(t, offender, 1)
            pos = (t, t)
        if D[t][t] < 0:
            for j in range(n):
                D[t][j] = -D[t][j]
            for j in range(m):
                U[t][j] = -U[t][j]
        t += 1
    return U, D, V


def invariant_factors(A):
    """Nonzero diagonal of the Smith form, as a list ``[d_1, ..., d_r]``."""
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def torsion_order(A):
    """Order of the torsion subgroup of ``Z^rows / column span``."""
    out = 1
    for d in invariant_factors(A):
        out *= d
    return out


def lattice_index(A):
    """Index of the column span of ``A`` inside the full lattice ``Z^rows``.

    Raises ``ValueError`` when the columns do not span a finite-index
    sublattice (rational rank below the number of rows).
    """
    m = len(A)
    factors = invariant_factors(A)
    if len(factors) < m:
        raise ValueError("columns do not span a finite-index sublattice")
    out = 1
    for d in factors:
        out *= d
    return out


def determinant(A):
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    M = [[int(v) for v in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not M[k][k]:
            pivot_row = next((i for i in range(k + 1, n) if M[i][k]), None)
            if pivot_row is None:
                return 0
            M[k], M[pivot_row] = M[pivot_row], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_unimodular(A):
    return bool(A) and len(A) == len(A[0]) and abs(determinant(A)) == 1


def column_hermite_form(A, drop_zero_columns=False):
    """Column-style Hermite normal form.

    Column operations only, so the column span is preserved.  In each pivot
    row the pivot is the first nonzero entry of its column, pivots are
    positive, pivot rows strictly increase left to right, and the entries
    to the left of a pivot in its row lie in ``[0, pivot)``.

    >>> column_hermite_form([[2, 1], [0, 1]])
    [[1, 0], [1, 2]]
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [[int(v) for v in row] for row in A]

    def col_axpy(j, k, c):
        for row in H:
            row[j] += c * row[k]

    def col_swap(j, k):
        for row in H:
            row[j], row[k] = row[k], row[j]

    c = 0
    for i in range(m):
        if c >= n:
            break
        while True:
            jmin = None
            Hi = H[i]
            for j in range(c, n):
                if Hi[j] and (jmin is None or abs(Hi[j]) < abs(Hi[jmin])):
                    jmin = j
            if jmin is None:
                break
            clean = True
            for j in range(c, n):
                if j != jmin and Hi[j]:
                    col_axpy(j, jmin, -(Hi[j] // Hi[jmin]))
                    if Hi[j]:
                        clean = False
            if not clean:
                continue
            if jmin != c:
                col_swap(jmin, c)
            if Hi[c] < 0:
                for row in H:
                    row[c] = -row[c]
            for j in range(c):
                q = Hi[j] // Hi[c]
                if q:
                    col_axpy(j, c, -q)
            c += 1
            break
    if drop_zero_columns:
        H = [row[:c] for row in H]
    return H


hermite_normal_form = column_hermite_form


def kernel_basis(A):
    """Basis of the integer kernel ``{x : A x = 0}``, as a list of vectors.

    The basis spans the full (saturated) kernel lattice.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [row[:] for row in identity_matrix(n)]
    _, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(m, n)) if D[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def lattice_solve(basis_columns, v):
    """Integer coordinates of ``v`` in the given lattice basis, or ``None``.

    ``basis_columns`` is a list of vectors (the basis), ``v`` the target.
    """
    if not basis_columns:
        return [] if all(x == 0 for x in v) else None
    A = [[col[i] for col in basis_columns] for i in range(len(v))]
    x = solve_linear(A, list(v))
    if x is None or any(xi.denominator != 1 for xi in x):
        return None
    return [int(xi) for xi in x]


def lattice_contains(basis_columns, v):
    return lattice_solve(basis_columns, v) is not None


def _fraction(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def solve_congruence(A, b, dim=None):
    """Representatives of the solution components of ``A x = b (mod 1)``.

    Solutions in the torus ``(R/Z)^n`` form a disjoint union of cosets of a
    subtorus; one rational representative in ``[0,1)^n`` is returned per
    component, as a sorted list of tuples.  An empty list means the system
    is inconsistent.  ``dim`` names the ambient dimension when ``A`` has no
    rows.

    >>> solve_congruence([[1, 0], [1, 2]], [0, 0])
    [(Fraction(0, 1), Fraction(0, 1)), (Fraction(0, 1), Fraction(1, 2))]
    """
    m = len(A)
    n = len(A[0]) if m else dim
    if n is None:
        raise ValueError("ambient dimension required for an empty system")
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    if m == 0:
        return [tuple(Fraction(0) for _ in range(n))]
    U, D, V = smith_normal_form(A)
    c = [sum(_fraction(U[i][k]) * _fraction(b[k]) for k in range(m)) for i in range(m)]
    r = sum(1 for i in range(min(m, n)) if D[i][i])
    for i in range(r, m):
        if c[i].denominator != 1:
            return []
    reps_y = [[]]
    for i in range(n):
        if i < r:
            d = D[i][i]
            reps_y = [prefix + [(c[i] + t) / d] for prefix in reps_y for t in range(d)]
        else:
            reps_y = [prefix + [Fraction(0)] for prefix in reps_y]
    out = set()
    for y in reps_y:
        x = []
        for i in range(n):
            acc = Fraction(0)
            for j in range(n):
                if V[i][j] and y[j]:
                    acc += V[i][j] * y[j]
            x.append(acc - acc.__floor__())
        out.add(tuple(x))
    return sorted(out)


def rational_rank(A):
    if not A or not A[0]:
        return 0
    _, pivots = rref(A)
    return len(pivots)


def rref(A):
    """Reduced row echelon form over the rationals.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row.
    """
    R = [[_fraction(v) for v in row] for row in A]
    m = len(R)
    n = len(R[0]) if m else 0
    pivots = []
    r = 0
    for j in range(n):
        pivot = next((i for i in range(r, m) if R[i][j]), None)
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = 1 / R[r][j]
        R[r] = [v * inv for v in R[r]]
        for i in range(m):
            if i != r and R[i][j]:
                c = R[i][j]
                R[i] = [a - c * b for a, b in zip(R[i], R[r])]
        pivots.append(j)
        r += 1
        if r == m:
            break
    return R, pivots


def solve_linear(A, b):
    """One rational solution of ``A x = b``, or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row_idx, j in enumerate(pivots):
        x[j] = R[row_idx][n]
    return x


def nullspace(A):
    """Basis of the rational kernel of ``A``, as a list of vectors."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [[Fraction(1) if i == j else Fraction(0) for i in range(n)] for j in range(n)]
    R, pivots = rref(A)
    pivot_set = set(pivots)
    basis = []
    for j in range(n):
        if j in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for row_idx, p in enumerate(pivots):
            v[p] = -R[row_idx][j]
        basis.append(v)
    return basis


def _divisibility_chain(diagonal):
    """Canonical invariant factors equivalent to an arbitrary diagonal.

    Diagonalization alone does not put the diagonal into a divisibility
    chain; the quotient group it presents is unchanged by redistributing
    prime powers, so the chain is rebuilt from them.
    """
    by_prime = defaultdict(list)
    for v in diagonal:
        n = abs(v)
        d = 2
        while d * d <= n:
            if n % d == 0:
                q = 1
                while n % d == 0:
                    q *= d
                    n //= d
                by_prime[d].append(q)
            d += 1
        if n > 1:
            by_prime[n].append(n)
    length = len(diagonal)
    chain = [1] * length
    for powers in by_prime.values():
        powers.sort()
        for offset, q in enumerate(reversed(powers)):
            chain[length - 1 - offset] *= q
    return chain


class SparseSNF:
    """Diagonalization of a large sparse integer matrix.

    The matrix is consumed as a list of sparse rows.  Row and column
    operations diagonalize it in place; ``invariant_factors`` is rebuilt
    from the diagonal as a divisibility chain.  Optionally the row
    operations are logged (standing in for the left transform, which is
    never materialized: replay them on a vector to get ``U w``) and the
    right transform ``V`` is accumulated as sparse columns.
    """

    def __init__(self, rows, ncols, track_row_ops=False, track_v=False):
        self.ncols = ncols
        self.nrows = len(rows)
        self._rows = [{j: int(v) for j, v in r.items() if v} for r in rows]
        self._ops = [] if track_row_ops else None
        self._v_cols = {j: {j: 1} for j in range(ncols)} if track_v else None
        self._cols = defaultdict(set)
        for i, row in enumerate(self._rows):
            for j in row:
                self._cols[j].add(i)
        self._diagonalize()
        diag = [self._rows[i].get(i, 0) for i in range(min(self.nrows, ncols))]
        self.rank = sum(1 for v in diag if v)
        self.invariant_factors = _divisibility_chain([v for v in diag if v])

    # -- elementary row operations (logged) -------------------------------

    def _log(self, op):
        if self._ops is not None:
            self._ops.append(op)

    def _row_swap(self, i, k):
        if i == k:
            return
        rows, cols = self._rows, self._cols
        for j in rows[i].keys() | rows[k].keys():
            owners = cols[j]
            has_i, has_k = j in rows[i], j in rows[k]
            if has_i and not has_k:
                owners.discard(i)
                owners.add(k)
            elif has_k and not has_i:
                owners.discard(k)
                owners.add(i)
        rows[i], rows[k] = rows[k], rows[i]
        self._log(("swap", i, k))

    def _row_axpy(self, i, k, c):
        rows, cols = self._rows, self._cols
        row_axpy(rows[i], rows[k], c)
        for j in rows[k]:
            if j in rows[i]:
                cols[j].add(i)
            else:
                cols[j].discard(i)
        self._log(("axpy", i, k, c))

    def _row_negate(self, i):
        self._rows[i] = {j: -v for j, v in self._rows[i].items()}
        self._log(("neg", i))

    # -- elementary column operations (tracked in V) -----------------------

    def _col_swap(self, j, k):
        if j == k:
            return
        rows, cols = self._rows, self._cols
        for i in cols[j] | cols[k]:
            row = rows[i]
            vj, vk = row.get(j), row.get(k)
            if vj is not None:
                del row[j]
            if vk is not None:
                del row[k]
            if vj is not None:
                row[k] = vj
            if vk is not None:
                row[j] = vk
        cols[j], cols[k] = cols[k], cols[j]
        if self._v_cols is not None:
            self._v_cols[j], self._v_cols[k] = self._v_cols[k], self._v_cols[j]

    def _col_axpy(self, j, k, c):
        if not c:
            return
        rows, cols = self._rows, self._cols
        for i in list(cols[k]):
            row = rows[i]
            vk = row.get(k)
            if not vk:
                cols[k].discard(i)
                continue
            w = row.get(j, 0) + c * vk
            if w:
                row[j] = w
                cols[j].add(i)
            elif j in row:
                del row[j]
                cols[j].discard(i)
        if self._v_cols is not None:
            row_axpy(self._v_cols[j], self._v_cols[k], c)

    # -- reduction ---------------------------------------------------------

    def _find_pivot(self, t):
        best = None
        best_score = None
        for i in range(t, self.nrows):
            row = self._rows[i]
            for j, v in row.items():
                if j < t:
                    continue
                a = abs(v)
                score = (a != 1, a, len(row), i, j)
                if best_score is None or score < best_score:
                    best_score = score
                    best = (i, j)
            if best_score is not None and best_score[0] is False and best_score[2] <= 1:
                break
        return best

    def _diagonalize(self):
        rows = self._rows
        t = 0
        limit = min(self.nrows, self.ncols)
        while t < limit:
            pos = self._find_pivot(t)
            if pos is None:
                break
            while True:
                i0, j0 = pos
                self._row_swap(i0, t)
                self._col_swap(j0, t)
                p = rows[t][t]
                clean = True
                for i in list(self._cols[t]):
                    if i <= t:
                        continue
                    v = rows[i].get(t)
                    if not v:
                        self._cols[t].discard(i)
                        continue
                    q = v // p
                    if q:
                        self._row_axpy(i, t, -q)
                    if rows[i].get(t):
                        clean = False
                for j in list(rows[t]):
                    if j <= t:
                        continue
                    q = rows[t][j] // p
                    if q:
                        self._col_axpy(j, t, -q)
                    if rows[t].get(j):
                        clean = False
                if clean:
                    break
                pos = self._find_pivot(t)
            if rows[t].get(t, 0) < 0:
                self._row_negate(t)
            t += 1

    # -- replay helpers ----------------------------------------------------

    def apply_row_ops(self, vec):
        """Replay the logged row operations on a dense vector (a copy)."""
        if self._ops is None:
            raise ValueError("row operations were not tracked")
        v = list(vec)
        for op in self._ops:
            kind = op[0]
            if kind == "swap":
                _, i, k = op
                v[i], v[k] = v[k], v[i]
            elif kind == "axpy":
                _, i, k, c = op
                if v[k]:
                    v[i] = v[i] + c * v[k]
            else:
                v[op[1]] = -v[op[1]]
        return v

    def apply_row_ops_inverse(self, vec):
        """Replay the inverses of the logged row operations, newest first.

        Applied to a basis vector e_i this yields column i of the inverse
        left transform, so tracked kernel and cokernel data can be pulled
        back to the original coordinates.
        """
        if self._ops is None:
            raise ValueError("row operations were not tracked")
        v = list(vec)
        for op in reversed(self._ops):
            kind = op[0]
            if kind == "swap":
                _, i, k = op
                v[i], v[k] = v[k], v[i]
            elif kind == "axpy":
                _, i, k, c = op
                if v[k]:
                    v[i] = v[i] - c * v[k]
            else:
                v[op[1]] = -v[op[1]]
        return v

    def diagonal(self):
        """Diagonal after reduction (non-negative, zero beyond the rank)."""
        return [self._rows[i].get(i, 0) for i in range(min(self.nrows, self.ncols))]

    def v_times(self, coeffs):
        """Product ``V s`` where ``coeffs`` maps column index to value."""
        if self._v_cols is None:
            raise ValueError("right transform was not tracked")
        out = {}
        for j, s in coeffs.items():
            if s:
                row_axpy(out, self._v_cols[j], s)
        return out


class RowEchelonQ:
    """Row echelon factorization over the rationals, reusable across solves.

    The eliminating row operations are recorded once; each :meth:`solve`
    replays them on a fresh right-hand side.  Rows are sparse dicts.
    """

    def __init__(self, rows, ncols):
        self.ncols = ncols
        self._rows = [{j: _fraction(v) for j, v in r.items() if v} for r in rows]
        self._ops = []
        self.pivots = []  # list of (row, col)
        self._reduce()
        self.rank = len(self.pivots)

    def _reduce(self):
        rows = self._rows
        nrows = len(rows)
        cols = defaultdict(set)
        for i, row in enumerate(rows):
            for j in row:
                cols[j].add(i)
        used = set()
        while True:
            best = None
            best_score = None
            for i in range(nrows):
                if i in used or not rows[i]:
                    continue
                row = rows[i]
                for j in row:
                    score = ((len(row) - 1) * (len(cols[j]) - 1), len(row), i, j)
                    if best_score is None or score < best_score:
                        best_score = score
                        best = (i, j)
            if best is None:
                break
            pi, pj = best
            used.add(pi)
            self.pivots.append((pi, pj))
            pivot_val = rows[pi][pj]
            for i in list(cols[pj]):
                if i == pi or i in used:
                    continue
                v = rows[i].get(pj)
                if not v:
                    cols[pj].discard(i)
                    continue
                c = -v / pivot_val
                self._ops.append((i, pi, c))
                row_axpy(rows[i], rows[pi], c)
                for j in rows[pi]:
                    if j in rows[i]:
                        cols[j].add(i)
                    else:
                        cols[j].discard(i)
        self._pivot_rows = {i for i, _ in self.pivots}

    def solve(self, rhs):
        """A particular solution of ``A x = rhs``, or ``None``.

        ``rhs`` maps row index to value; missing entries are zero.  Free
        variables are set to zero; the solution is a sparse dict.
        """
        b = {i: _fraction(v) for i, v in rhs.items() if v}
        for i, k, c in self._ops:
            bk = b.get(k)
            if bk:
                w = b.get(i, 0) + c * bk
                if w:
                    b[i] = w
                elif i in b:
                    del b[i]
        for i, v in b.items():
            if v and i not in self._pivot_rows:
                return None
        x = {}
        for pi, pj in reversed(self.pivots):
            row = self._rows[pi]
            acc = b.get(pi, Fraction(0))
            for j, v in row.items():
                if j != pj:
                    xj = x.get(j)
                    if xj:
                        acc -= v * xj
            if acc:
                x[pj] = acc / row[pj]
        return x

    def consistent(self, rhs):
        return self.solve(rhs) is not None
