"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding.  Matrices are small (desk scale), which
keeps the plain row-operation algorithms below fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "RatVector",
    "SmithData",
    "LatticeError",
    "hnf",
    "snf",
    "kernel_saturated",
    "gale_dual",
    "reduce_columns",
    "positivize",
    "rank",
    "det",
    "same_row_lattice",
    "row_saturation",
    "rational_nullspace",
    "solve_rational",
    "primitive",
    "ratvec",
]


class LatticeError(ValueError):
    """Raised when a lattice operation's precondition fails."""


class IntMatrix:
    """Immutable integer matrix stored row-major.

    A matrix may have zero rows (an empty kernel basis, say) but it always
    knows its column count.
    """

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(_as_int(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise LatticeError("ragged matrix rows")
            if ncols is not None and ncols != width:
                raise LatticeError("column count mismatch")
            ncols = width
        elif ncols is None:
            raise LatticeError("an empty matrix needs an explicit column count")
        if ncols < 1:
            raise LatticeError("a matrix needs at least one column")
        self._rows = data
        self._ncols = ncols

    @classmethod
    def coerce(cls, A) -> "IntMatrix":
        return A if isinstance(A, IntMatrix) else cls(A)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        if not columns:
            raise LatticeError("need at least one column")
        nrows = len(columns[0]) if nrows is None else nrows
        return cls([[c[i] for c in columns] for i in range(nrows)], ncols=len(columns))

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self._ncols)]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            return self._rows[i][j]
        return self._rows[key]

    @property
    def T(self) -> "IntMatrix":
        if not self._rows:
            raise LatticeError("cannot transpose a matrix without rows")
        return IntMatrix(zip(*self._rows), ncols=len(self._rows))

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix([[r[j] for j in idx] for r in self._rows], ncols=len(idx))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        other = IntMatrix.coerce(other)
        if self._ncols != other.nrows:
            raise LatticeError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
            ncols=other.ncols,
        )

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product (works for ints or Fractions)."""
        if len(v) != self._ncols:
            raise LatticeError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntMatrix):
            return self._rows == other._rows and self._ncols == other._ncols
        try:
            return self == IntMatrix(other)
        except (LatticeError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self._rows, self._ncols))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"


def _as_int(x) -> int:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if hasattr(x, "__index__"):
        return x.__index__()
    if isinstance(x, float) and x.is_integer():
        return int(x)
    raise LatticeError(f"non-integer matrix entry {x!r}")


RatVector = tuple  # tuple of Fractions, kept reduced by Fraction itself


def ratvec(values: Iterable) -> RatVector:
    """Build a rational vector; strings like ``"3/4"`` are accepted."""
    return tuple(Fraction(v) for v in values)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class SmithData:
    """``left @ A @ right == D`` with ``D`` diagonal and ``d_i | d_{i+1}``."""

    D: IntMatrix
    left: IntMatrix
    right: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(self.D.shape)
        return tuple(self.D[i, i] for i in range(k) if self.D[i, i] != 0)


# ---------------------------------------------------------------------------
# rational elimination


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    M = [list(r) for r in rows]
    pivots: list[int] = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    p = 0
    for j in range(ncols):
        k = next((i for i in range(p, len(M)) if M[i][j] != 0), None)
        if k is None:
            continue
        M[p], M[k] = M[k], M[p]
        inv = 1 / M[p][j]
        M[p] = [x * inv for x in M[p]]
        for i in range(len(M)):
            if i != p and M[i][j] != 0:
                f = M[i][j]
                M[i] = [a - f * b for a, b in zip(M[i], M[p])]
        pivots.append(j)
        p += 1
        if p == len(M):
            break
    return M, pivots


def rank(A) -> int:
    rows = [[Fraction(x) for x in r] for r in A]
    return len(_rref(rows)[1])


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : r . x = 0 for every row r}`` over the rationals."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, piv = _rref([[Fraction(x) for x in r] for r in rows])
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pj in enumerate(piv):
            x[pj] = -R[i][f]
        basis.append(tuple(x))
    return basis


def solve_rational(A, b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of ``A x = b`` or ``None`` if inconsistent."""
    A = [list(r) for r in A]
    if not A:
        return None if any(Fraction(x) != 0 for x in b) else ()
    n = len(A[0])
    aug = [[Fraction(x) for x in r] + [Fraction(bi)] for r, bi in zip(A, b)]
    R, piv = _rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, pj in enumerate(piv):
        x[pj] = R[i][n]
    return tuple(x)


def det(A) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    M = [list(r) for r in IntMatrix.coerce(A)]
    n = len(M)
    if any(len(r) != n for r in M):
        raise LatticeError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# normal forms


def hnf(A) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``.  Pivots are
    positive, entries above a pivot lie in ``[0, pivot)``, zero rows sit at
    the bottom.
    """
    A = IntMatrix.coerce(A)
    m, n = A.shape
    H = A.tolist()
    U = IntMatrix.identity(m).tolist() if m else []
    p = 0
    for j in range(n):
        if p == m:
            break
        while True:
            nz = [i for i in range(p, m) if H[i][j] != 0]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(H[i][j]))
            H[p], H[k] = H[k], H[p]
            U[p], U[k] = U[k], U[p]
            done = True
            for i in range(p + 1, m):
                if H[i][j] != 0:
                    q = H[i][j] // H[p][j]
                    H[i] = [a - q * b for a, b in zip(H[i], H[p])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[p])]
                    if H[i][j] != 0:
                        done = False
            if done:
                break
        if H[p][j] == 0:
            continue
        if H[p][j] < 0:
            H[p] = [-x for x in H[p]]
            U[p] = [-x for x in U[p]]
        for i in range(p):
            q = H[i][j] // H[p][j]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[p])]
                U[i] = [a - q * b for a, b in zip(U[i], U[p])]
        p += 1
    return IntMatrix(H, ncols=n), IntMatrix(U, ncols=m) if m else IntMatrix([], ncols=1)


def snf(A) -> SmithData:
    """Smith normal form with both unimodular transforms."""
    A = IntMatrix.coerce(A)
    m, n = A.shape
    D = A.tolist()
    L = IntMatrix.identity(m).tolist()
    R = IntMatrix.identity(n).tolist()

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        L[i], L[k] = L[k], L[i]

    def swap_cols(j, k):
        for r in D:
            r[j], r[k] = r[k], r[j]
        for r in R:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        L[dst] = [a + q * b for a, b in zip(L[dst], L[src])]

    def add_col(dst, src, q):
        for r in D:
            r[dst] += q * r[src]
        for r in R:
            r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            L[t] = [-x for x in L[t]]
    return SmithData(IntMatrix(D, ncols=n), IntMatrix(L), IntMatrix(R))


# ---------------------------------------------------------------------------
# kernels and Gale duality


def kernel_saturated(A) -> IntMatrix:
    """Basis (in HNF) of the full integer kernel ``{x in Z^n : A x = 0}``.

    The rows generate the whole lattice kernel, so the basis is saturated.
    """
    A = IntMatrix.coerce(A)
    n = A.ncols
    if A.nrows == 0:
        return IntMatrix.identity(n)
    H, U = hnf(A.T)
    zero_rows = [U.row(i) for i in range(n) if not any(H.row(i))]
    if not zero_rows:
        return IntMatrix([], ncols=n)
    return hnf(zero_rows)[0]


def gale_dual(A) -> IntMatrix:
    """Gale dual: the saturated kernel of ``A`` written in HNF."""
    A = IntMatrix.coerce(A)
    K = kernel_saturated(A)
    if K.nrows == 0:
        raise LatticeError("trivial Gale dual: the matrix has full column rank")
    return K


def _nonzero_hnf_rows(A) -> tuple[tuple[int, ...], ...]:
    H, _ = hnf(A)
    return tuple(r for r in H if any(r))


def same_row_lattice(A, B) -> bool:
    """True iff the rows of ``A`` and ``B`` span the same sublattice of Z^n."""
    A, B = IntMatrix.coerce(A), IntMatrix.coerce(B)
    if A.ncols != B.ncols:
        return False
    return _nonzero_hnf_rows(A) == _nonzero_hnf_rows(B)


def row_saturation(A) -> IntMatrix:
    """HNF basis of ``(row space of A) ∩ Z^n``."""
    A = IntMatrix.coerce(A)
    K = kernel_saturated(A)
    if K.nrows == 0:
        return IntMatrix.identity(A.ncols)
    return kernel_saturated(K)


def reduce_columns(A) -> IntMatrix:
    """Divide every column by the gcd of its entries."""
    A = IntMatrix.coerce(A)
    cols = []
    for j, c in enumerate(A.columns()):
        g = 0
        for x in c:
            g = gcd(g, x)
        if g == 0:
            raise LatticeError(f"zero column {j + 1}")
        cols.append(tuple(x // g for x in c))
    return IntMatrix.from_columns(cols, A.nrows)


def extend_to_basis(u: Sequence[int]) -> IntMatrix:
    """Unimodular matrix whose first row is the primitive vector ``u``."""
    u = tuple(int(x) for x in u)
    g = 0
    for x in u:
        g = gcd(g, x)
    if g != 1:
        raise LatticeError("only a primitive vector extends to a lattice basis")
    # snf of the row vector u: left=[±1], u @ right = (1, 0, ..., 0)
    data = snf([u])
    Rinv_rows = _unimodular_inverse(data.right).tolist()
    # u = (1,0,..,0) @ Rinv * sign; the first row of Rinv is sign * u
    s = data.left[0, 0]
    Rinv_rows[0] = [s * x for x in Rinv_rows[0]]
    if tuple(Rinv_rows[0]) != u:
        raise AssertionError("basis extension failed")
    return IntMatrix(Rinv_rows)


def _unimodular_inverse(U: IntMatrix) -> IntMatrix:
    n = U.nrows
    aug = [[Fraction(x) for x in U.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, _ = _rref(aug)
    return IntMatrix([[int(x) for x in r[n:]] for r in R])


def positivize(Q) -> tuple[IntMatrix, IntMatrix]:
    """Find unimodular ``U`` with ``U @ Q`` entrywise nonnegative.

    Requires the cone generated by the columns of ``Q`` to be pointed and
    full-dimensional.
    """
    from .cone import cone_from_generators

    Q = IntMatrix.coerce(Q)
    r = Q.nrows
    if all(x >= 0 for row in Q for x in row):
        return IntMatrix.identity(r), Q
    eff = cone_from_generators(Q.columns(), r)
    if eff.dim != r:
        raise LatticeError("effective cone not full-dimensional")
    if not eff.is_strongly_convex():
        raise LatticeError("effective cone not pointed")
    # facet normals of Eff generate its dual; their sum is a dual-interior point
    u = primitive([sum(h[i] for h in eff.facets) for i in range(r)])
    cols = Q.columns()
    pairing = [sum(a * b for a, b in zip(u, q)) for q in cols]
    assert all(p > 0 for p in pairing)
    basis = extend_to_basis(u).tolist()
    for k in range(1, r):
        b = basis[k]
        t = 0
        for q, p in zip(cols, pairing):
            bq = sum(x * y for x, y in zip(b, q))
            if bq < 0:
                t = max(t, -(bq // p))
        basis[k] = [x + t * y for x, y in zip(b, u)]
    U = IntMatrix(basis)
    return U, U @ Q
