from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from examples_data import CELLS_Q, CELLS_V, R2_Q, R2_V, R3_Q, R3_V
from oracles import gcd_of_maximal_minors, nullspace_rank, same_rational_rowspace
from wmdskit.lattice import (
    IntMatrix,
    LatticeError,
    det,
    extend_to_basis,
    gale_dual,
    hnf,
    kernel_saturated,
    positivize,
    primitive,
    rank,
    reduce_columns,
    row_saturation,
    same_row_lattice,
    snf,
)

entries = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def is_hnf(H: IntMatrix) -> bool:
    last = -1
    for i in range(H.nrows):
        row = H.row(i)
        if not any(row):
            if any(any(H.row(k)) for k in range(i, H.nrows)):
                return False
            break
        p = next(j for j, x in enumerate(row) if x)
        if p <= last or row[p] <= 0:
            return False
        for k in range(i):
            if not 0 <= H.row(k)[p] < row[p]:
                return False
        last = p
    return True


def test_intmatrix_basics():
    A = IntMatrix([[1, 2, 3], [4, 5, 6]])
    assert A.shape == (2, 3)
    assert A.T.shape == (3, 2)
    assert A[1, 2] == 6
    assert A.column(1) == (2, 5)
    assert A == [[1, 2, 3], [4, 5, 6]]
    assert hash(A) == hash(IntMatrix([[1, 2, 3], [4, 5, 6]]))
    assert (A @ A.T) == [[14, 32], [32, 77]]
    with pytest.raises(LatticeError):
        IntMatrix([[1, 2], [3]])


def test_hnf_identity_and_small_case():
    I3 = IntMatrix.identity(3)
    H, U = hnf(I3)
    assert H == I3 and U == I3
    H, U = hnf([[2, 4], [1, 3]])
    # off-pivot entries reduced into [0, pivot)
    assert H == [[1, 1], [0, 2]]
    assert U @ IntMatrix([[2, 4], [1, 3]]) == H


def test_hnf_full_rank_fan_matrix():
    H, _ = hnf(CELLS_V)
    assert sum(1 for i in range(H.nrows) if any(H.row(i))) == 3


@settings(max_examples=80, derandomize=True)
@given(matrices())
def test_hnf_properties(rows):
    A = IntMatrix(rows)
    H, U = hnf(A)
    assert abs(det(U)) == 1
    assert U @ A == H
    assert is_hnf(H)
    assert same_rational_rowspace(rows, H.tolist() or [[0] * A.ncols])


def test_snf_examples():
    S = snf([[0, 0], [0, 0]])
    assert S.D == [[0, 0], [0, 0]]
    assert S.left == IntMatrix.identity(2) and S.right == IntMatrix.identity(2)
    S = snf([[2, 0], [0, 3]])
    assert S.D == [[1, 0], [0, 6]]
    assert tuple(snf(R2_Q).invariant_factors) == (1, 1)
    assert gcd_of_maximal_minors(R2_Q) == 1


@settings(max_examples=80, derandomize=True)
@given(matrices())
def test_snf_properties(rows):
    A = IntMatrix(rows)
    S = snf(A)
    assert S.left @ A @ S.right == S.D
    assert abs(det(S.left)) == 1 and abs(det(S.right)) == 1
    d = S.invariant_factors
    for a, b in zip(d, d[1:]):
        assert b % a == 0
    r = rank(A)
    # product of invariant factors equals the gcd of the maximal minors
    prod = 1
    for x in d[:r]:
        prod *= x
    if r:
        assert prod == gcd_of_maximal_minors(rows)


def test_kernel_saturated_examples():
    assert kernel_saturated([[1, 1]]) in ([[1, -1]], [[-1, 1]])
    assert kernel_saturated([[2, 2]]) in ([[1, -1]], [[-1, 1]])
    K = kernel_saturated(R3_V)
    assert (IntMatrix(R3_V) @ K.T).is_zero()
    assert same_row_lattice(K, R3_Q)


@settings(max_examples=80, derandomize=True)
@given(matrices())
def test_kernel_properties(rows):
    A = IntMatrix(rows)
    K = kernel_saturated(A)
    r, basis = nullspace_rank(rows)
    assert K.nrows == A.ncols - r
    if K.nrows:
        assert (A @ K.T).is_zero()
        assert all(d == 1 for d in snf(K).invariant_factors)
        assert same_rational_rowspace(K.tolist(), [[Fraction(x) for x in v] for v in basis])


@pytest.mark.parametrize("V,Q", [(CELLS_V, CELLS_Q), (R2_V, R2_Q), (R3_V, R3_Q)])
def test_gale_dual_matches_listed_matrices(V, Q):
    assert same_row_lattice(gale_dual(V), Q)
    assert same_row_lattice(gale_dual(Q), V)


def test_gale_dual_trivial():
    with pytest.raises(LatticeError, match="trivial Gale dual"):
        gale_dual(IntMatrix.identity(2))


@settings(max_examples=60, derandomize=True)
@given(matrices(3, 5))
def test_double_gale_dual_is_saturation(rows):
    A = IntMatrix(rows)
    if rank(A) in (0, A.ncols):
        return
    G = gale_dual(A)
    assert same_row_lattice(gale_dual(G), row_saturation(A))


def test_reduce_columns():
    assert reduce_columns([[2], [4]]) == [[1], [2]]
    assert reduce_columns([[3, 0], [0, -6]]) == [[1, 0], [0, -1]]
    assert reduce_columns(R2_V) == R2_V
    with pytest.raises(LatticeError):
        reduce_columns([[0, 1], [0, 1]])


@settings(max_examples=60, derandomize=True)
@given(matrices())
def test_reduce_columns_idempotent(rows):
    A = IntMatrix(rows)
    if any(not any(c) for c in A.columns()):
        return
    R = reduce_columns(A)
    assert reduce_columns(R) == R
    assert all(primitive(c) == tuple(c) for c in R.columns())


def test_positivize():
    U, Q2 = positivize(R3_Q)
    assert U == IntMatrix.identity(3) and Q2 == R3_Q
    base = IntMatrix([[1, 0, 2, 1], [0, 1, 1, 3]])
    twisted = IntMatrix([[1, -1], [0, 1]]) @ base
    assert any(x < 0 for row in twisted for x in row)
    U, Q2 = positivize(twisted)
    assert abs(det(U)) == 1
    assert U @ twisted == Q2
    assert all(x >= 0 for row in Q2 for x in row)
    assert same_row_lattice(Q2, twisted)


def test_positivize_rejects_non_pointed():
    with pytest.raises(LatticeError, match="not pointed"):
        positivize([[1, -1, 0], [0, 0, 1]])


@settings(max_examples=60, derandomize=True)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5))
def test_extend_to_basis(v):
    u = primitive(v) if any(v) else None
    if u is None:
        return
    B = extend_to_basis(u)
    assert B.row(0) == u
    assert abs(det(B)) == 1
