"""Tests for the exact linear algebra layer.

The oracles at the top are deliberately naive and independent of the
implementations under test: determinants by cofactor expansion, Smith
diagonals by determinantal divisors, congruence solutions by grid search.
"""

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsal import intlinalg as la

# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def oracle_det(A):
    n = len(A)
    if n == 0:
        return 1
    if n == 1:
        return A[0][0]
    total = 0
    for j in range(n):
        if not A[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in A[1:]]
        total += (-1) ** j * A[0][j] * oracle_det(minor)
    return total


def oracle_minor_gcd(A, k):
    """gcd of all k x k minors, 0 if there are none or all vanish."""
    m, n = len(A), len(A[0]) if A else 0
    g = 0
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(n), k):
            sub = [[A[i][j] for j in cols] for i in rows]
            g = math.gcd(g, abs(oracle_det(sub)))
    return g


def oracle_smith_diagonal(A):
    """Invariant factors via determinantal divisors d_k / d_{k-1}."""
    m, n = len(A), len(A[0]) if A else 0
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        dk = oracle_minor_gcd(A, k)
        if dk == 0:
            break
        out.append(dk // prev)
        prev = dk
    return out


def oracle_congruence_solutions(A, b, denominator_bound):
    """All x in [0,1)^n on the grid (1/denominator_bound) Z^n solving A x = b mod 1."""
    n = len(A[0])
    q = denominator_bound
    hits = []
    for coords in itertools.product(range(q), repeat=n):
        x = [Fraction(c, q) for c in coords]
        ok = True
        for row, rhs in zip(A, b):
            val = sum(r * xi for r, xi in zip(row, x)) - Fraction(rhs)
            if val.denominator != 1:
                ok = False
                break
        if ok:
            hits.append(tuple(x))
    return sorted(hits)


def random_matrix(rng, m, n, bound=5):
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]


small_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-5, 5), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)

# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def test_snf_pinned_example():
    _, D, _ = la.smith_normal_form([[1, 1], [0, 2]])
    assert [D[0][0], D[1][1]] == [1, 2]


def test_snf_against_determinantal_divisors():
    rng = random.Random(101)
    for _ in range(120):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = random_matrix(rng, m, n)
        assert la.invariant_factors(A) == oracle_smith_diagonal(A)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_transform_identity(A):
    U, D, V = la.smith_normal_form(A)
    m, n = len(A), len(A[0])
    assert la.matmul(la.matmul(U, A), V) == D
    assert abs(la.determinant(U)) == 1
    assert abs(la.determinant(V)) == 1
    diag = [D[i][i] for i in range(min(m, n))]
    assert all(v >= 0 for v in diag)
    for a, b in zip(diag, diag[1:]):
        if b:
            assert a != 0 and b % a == 0
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0


def test_snf_zero_and_empty():
    U, D, V = la.smith_normal_form([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]
    assert la.invariant_factors([[0]]) == []
    U, D, V = la.smith_normal_form([])
    assert (U, D, V) == ([], [], [])


# ---------------------------------------------------------------------------
# determinants, unimodularity, lattice index
# ---------------------------------------------------------------------------


def test_determinant_against_cofactor_oracle():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 4)
        A = random_matrix(rng, n, n)
        assert la.determinant(A) == oracle_det(A)


def test_determinant_rejects_non_square():
    with pytest.raises(ValueError):
        la.determinant([[1, 2, 3], [4, 5, 6]])


def test_lattice_index_pinned_examples():
    assert la.lattice_index([[1, 1], [0, 2]]) == 2
    assert la.lattice_index([[3]]) == 3
    assert la.lattice_index(la.identity_matrix(3)) == 1


def test_lattice_index_matches_minor_gcd():
    rng = random.Random(23)
    checked = 0
    while checked < 60:
        m = rng.randint(1, 3)
        n = rng.randint(m, 4)
        A = random_matrix(rng, m, n, bound=4)
        g = oracle_minor_gcd(A, m)
        if g == 0:
            with pytest.raises(ValueError):
                la.lattice_index(A)
            continue
        assert la.lattice_index(A) == g
        checked += 1


def test_lattice_index_rejects_rank_deficient():
    with pytest.raises(ValueError):
        la.lattice_index([[1, 2], [2, 4]])


def test_is_unimodular():
    assert la.is_unimodular([[1, 5], [0, 1]])
    assert not la.is_unimodular([[2, 0], [0, 1]])
    assert not la.is_unimodular([[1, 0]])


# ---------------------------------------------------------------------------
# Hermite form, kernels, lattice membership
# ---------------------------------------------------------------------------


def test_hermite_pinned_example():
    assert la.column_hermite_form([[2, 1], [0, 1]]) == [[1, 0], [1, 2]]
    assert la.hermite_normal_form is la.column_hermite_form


def columns(A):
    return [list(col) for col in zip(*A)]


def in_column_lattice(A, v):
    """Membership of v in the integer column span of A (not only a basis)."""
    U, D, _ = la.smith_normal_form(A)
    c = la.matvec(U, v)
    r = sum(1 for i in range(min(len(A), len(A[0]))) if D[i][i])
    for i in range(len(A)):
        if i < r:
            if c[i] % D[i][i]:
                return False
        elif c[i]:
            return False
    return True


def test_hermite_preserves_column_span_and_shape():
    rng = random.Random(31)
    for _ in range(80):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = random_matrix(rng, m, n, bound=4)
        H = la.column_hermite_form(A)
        # mutual containment of column lattices
        for v in columns(A):
            assert in_column_lattice(H, v)
        for v in columns(H):
            assert in_column_lattice(A, v)
        # canonical shape: positive pivots at increasing rows, reduced rows
        pivot_rows = []
        for col in columns(la.column_hermite_form(A, drop_zero_columns=True)):
            i = next(i for i, v in enumerate(col) if v)
            assert col[i] > 0
            pivot_rows.append(i)
        assert pivot_rows == sorted(pivot_rows)
        assert len(set(pivot_rows)) == len(pivot_rows)
        Hd = la.column_hermite_form(A, drop_zero_columns=True)
        for c, i in enumerate(pivot_rows):
            for j in range(c):
                assert 0 <= Hd[i][j] < Hd[i][c]
        # canonical: a second pass changes nothing
        assert la.column_hermite_form(H) == H


def test_kernel_basis_spans_saturated_kernel():
    rng = random.Random(47)
    for _ in range(80):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        A = random_matrix(rng, m, n, bound=4)
        K = la.kernel_basis(A)
        for v in K:
            assert all(x == 0 for x in la.matvec(A, v))
        assert len(K) == n - la.rational_rank(A)
        # saturation: every primitive rational kernel vector is in the lattice
        for q in la.nullspace(A):
            scale = math.lcm(*(f.denominator for f in q)) if q else 1
            w = [int(f * scale) for f in q]
            g = math.gcd(*(abs(x) for x in w)) if any(w) else 1
            if g:
                w = [x // g for x in w]
            assert la.lattice_contains(K, w)


def test_lattice_solve_roundtrip():
    basis = [[2, 0, 1], [0, 3, 1]]
    v = [la.matvec(la.transpose(basis), [4, -5])[i] for i in range(3)]
    assert la.lattice_solve(basis, v) == [4, -5]
    assert la.lattice_solve(basis, [1, 0, 0]) is None
    assert la.lattice_solve([], [0, 0]) == []
    assert la.lattice_solve([], [1, 0]) is None


# ---------------------------------------------------------------------------
# congruence solving
# ---------------------------------------------------------------------------


def test_solve_congruence_pinned_examples():
    assert la.solve_congruence([[1, 0], [1, 2]], [0, 0]) == [
        (Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1, 2)),
    ]
    assert la.solve_congruence([[2]], [Fraction(1, 2)]) == [
        (Fraction(1, 4),),
        (Fraction(3, 4),),
    ]
    # empty system: the whole torus is one component
    assert la.solve_congruence([], [], dim=2) == [(Fraction(0), Fraction(0))]
    # inconsistent system
    assert la.solve_congruence([[1, 2], [2, 4]], [0, Fraction(1, 3)]) == []


def test_solve_congruence_against_grid_search():
    rng = random.Random(59)
    checked = 0
    while checked < 40:
        n = rng.randint(1, 2)
        m = rng.randint(n, 3)
        A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)]
        if la.rational_rank(A) < n:
            continue
        den = rng.choice([1, 2, 3])
        b = [Fraction(rng.randint(0, den - 1), den) for _ in range(m)]
        got = la.solve_congruence(A, b)
        # every coordinate denominator divides lcm(dets); a generous common
        # grid is the lcm of all denominators that can appear
        bound = 1
        for x in got:
            for f in x:
                bound = math.lcm(bound, f.denominator)
        bound = math.lcm(bound, den, *(range(1, 5)))
        assert got == oracle_congruence_solutions(A, b, bound)
        checked += 1


def test_solve_congruence_component_count():
    rng = random.Random(61)
    for _ in range(40):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = random_matrix(rng, m, n, bound=3)
        got = la.solve_congruence(A, [0] * m)
        expect = 1
        for d in la.invariant_factors(A):
            expect *= d
        assert len(got) == expect


def test_solve_congruence_requires_dimension_for_empty_system():
    with pytest.raises(ValueError):
        la.solve_congruence([], [])


# ---------------------------------------------------------------------------
# rational helpers
# ---------------------------------------------------------------------------


def test_solve_linear_and_nullspace():
    A = [[1, 2], [2, 4]]
    x = la.solve_linear(A, [3, 6])
    assert x is not None
    assert la.matvec(A, x) == [3, 6]
    assert la.solve_linear(A, [1, 0]) is None
    ns = la.nullspace(A)
    assert len(ns) == 1
    assert all(v == 0 for v in la.matvec(A, ns[0]))
    assert la.rational_rank(A) == 1


# ---------------------------------------------------------------------------
# sparse classes
# ---------------------------------------------------------------------------


def to_sparse_rows(A):
    return [{j: v for j, v in enumerate(row) if v} for row in A]


def test_sparse_snf_matches_dense_factors():
    rng = random.Random(71)
    for _ in range(80):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = random_matrix(rng, m, n, bound=6)
        snf = la.SparseSNF(to_sparse_rows(A), n)
        assert snf.invariant_factors == la.invariant_factors(A)
        assert snf.rank == la.rational_rank(A)


def test_sparse_snf_transforms():
    rng = random.Random(73)
    for _ in range(40):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = random_matrix(rng, m, n, bound=5)
        snf = la.SparseSNF(to_sparse_rows(A), n, track_row_ops=True, track_v=True)
        # U from replaying the log on basis vectors (columns of U)
        U_cols = [snf.apply_row_ops([1 if i == k else 0 for i in range(m)]) for k in range(m)]
        U = [[U_cols[k][i] for k in range(m)] for i in range(m)]
        V = [[snf.v_times({k: 1}).get(i, 0) for k in range(n)] for i in range(n)]
        assert abs(la.determinant(U)) == 1
        assert abs(la.determinant(V)) == 1
        D = la.matmul(la.matmul(U, A), V)
        diag = snf.diagonal()
        for i in range(m):
            for j in range(n):
                expect = diag[i] if (i == j and i < len(diag)) else 0
                assert D[i][j] == expect
        assert all(v >= 0 for v in diag)


def test_sparse_snf_row_ops_inverse():
    rng = random.Random(101)
    for _ in range(40):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = random_matrix(rng, m, n, bound=5)
        snf = la.SparseSNF(to_sparse_rows(A), n, track_row_ops=True)
        for _ in range(4):
            v = [rng.randint(-6, 6) for _ in range(m)]
            assert snf.apply_row_ops_inverse(snf.apply_row_ops(v)) == v
            assert snf.apply_row_ops(snf.apply_row_ops_inverse(v)) == v
    plain = la.SparseSNF([{0: 1}], 1)
    with pytest.raises(ValueError):
        plain.apply_row_ops_inverse([1])


def test_row_echelon_rank_and_solve():
    rng = random.Random(79)
    for _ in range(80):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = random_matrix(rng, m, n, bound=5)
        ech = la.RowEchelonQ(to_sparse_rows(A), n)
        assert ech.rank == la.rational_rank(A)
        b = [rng.randint(-4, 4) for _ in range(m)]
        got = ech.solve({i: v for i, v in enumerate(b)})
        expect = la.solve_linear(A, b)
        if expect is None:
            assert got is None
        else:
            assert got is not None
            x = [got.get(j, Fraction(0)) for j in range(n)]
            assert la.matvec(A, x) == [Fraction(v) for v in b]


def test_row_echelon_solve_many_reuses_factorization():
    A = [[1, 2, 3], [0, 1, 1], [1, 3, 4]]
    ech = la.RowEchelonQ(to_sparse_rows(A), 3)
    assert ech.rank == 2
    assert ech.consistent({0: 1, 1: 1, 2: 2})
    assert not ech.consistent({0: 1, 1: 1, 2: 1})
