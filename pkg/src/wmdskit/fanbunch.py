"""Fans, bunches of cones, F/W-matrix tests and irrelevant ideals.

Index sets are 0-based internally.  Everything that faces a user (reprs,
``*_1based`` helpers, the CLI) speaks 1-based indices so listings can be
compared with hand-written data directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .cone import Cone, cone_from_generators, cone_from_inequalities, full_space, intersect_all, is_face, intersect
from .lattice import (
    IntMatrix,
    LatticeError,
    gale_dual,
    kernel_saturated,
    primitive,
    rank,
    rational_nullspace,
    same_row_lattice,
    snf,
    solve_rational,
)

__all__ = [
    "Fan",
    "Bunch",
    "MonomialIdeal",
    "FanError",
    "MatrixCheck",
    "FanReport",
    "is_F_matrix",
    "is_W_matrix",
    "has_positive_basis",
    "validate_fan",
    "support_is",
    "bunch_of",
    "fan_of",
    "eff_cone",
    "mov_cone",
    "nef_cone",
    "irrelevant_ideal",
    "fan_from_ideal",
]

IndexSet = frozenset


class FanError(ValueError):
    def __init__(self, message: str, diagnostics: Sequence[str] = ()):
        super().__init__(message if not diagnostics else f"{message}: " + "; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


def _fmt(I: Iterable[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(I)) + "}"


def to_1based(sets: Iterable[Iterable[int]]) -> list[list[int]]:
    return sorted(sorted(i + 1 for i in I) for I in sets)


def from_1based(sets: Iterable[Iterable[int]]) -> frozenset:
    return frozenset(frozenset(i - 1 for i in I) for I in sets)


def _maximal(sets: Iterable[frozenset]) -> frozenset:
    sets = set(sets)
    return frozenset(s for s in sets if not any(s < t for t in sets))


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True, eq=False)
class Fan:
    """A (quasi-)fan given by a ray matrix and its maximal cones.

    ``Q`` pins the coordinates on the class-group side; when omitted it is
    the Gale dual of ``V``.
    """

    V: IntMatrix
    max_cones: frozenset
    Q: IntMatrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "V", IntMatrix.coerce(self.V))
        object.__setattr__(self, "max_cones", _maximal(frozenset(I) for I in self.max_cones))
        if self.Q is not None:
            object.__setattr__(self, "Q", IntMatrix.coerce(self.Q))
        m = self.V.ncols
        for I in self.max_cones:
            if any(i < 0 or i >= m for i in I):
                raise FanError(f"index set {_fmt(I)} out of range 1..{m}")

    @classmethod
    def from_1based(cls, V, cones: Iterable[Iterable[int]], Q=None) -> "Fan":
        return cls(IntMatrix.coerce(V), from_1based(cones), Q)

    @property
    def n(self) -> int:
        return self.V.nrows

    @property
    def m(self) -> int:
        return self.V.ncols

    @cached_property
    def weights(self) -> IntMatrix:
        if self.Q is not None:
            return self.Q
        # m = rank(V) leaves an empty Gale dual; keep it as a 0-row matrix
        return gale_dual(self.V) if rank(self.V) < self.m else kernel_saturated(self.V)

    @cached_property
    def columns(self) -> list[tuple[int, ...]]:
        return self.V.columns()

    def cone(self, I: Iterable[int]) -> Cone:
        return cone_from_generators([self.columns[i] for i in I], self.n)

    def is_simplicial(self) -> bool:
        return all(rank([self.columns[i] for i in I]) == len(I) for I in self.max_cones if I)

    def contains_cone(self, I: Iterable[int]) -> bool:
        """Is the cone spanned by rays ``I`` a cone of this (simplicial) fan?"""
        I = frozenset(I)
        return any(I <= J for J in self.max_cones)

    def issubfan(self, other: "Fan") -> bool:
        """Cone-set inclusion ``self ⊆ other`` after face closure."""
        return all(other.contains_cone(I) for I in self.max_cones)

    def used_rays(self) -> frozenset:
        return frozenset().union(*self.max_cones) if self.max_cones else frozenset()

    def max_cones_1based(self) -> list[list[int]]:
        return to_1based(self.max_cones)

    @cached_property
    def is_quasi(self) -> bool:
        """True when some cone contains a line or two cones meet badly."""
        return not _cones_form_fan(self)

    def key(self):
        return (self.V, self.max_cones)

    def __eq__(self, other) -> bool:
        return isinstance(other, Fan) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Fan({self.max_cones_1based()})"


@dataclass(frozen=True)
class Bunch:
    """Gale-dual image of a fan: cones ``<Q^I>`` for the stored index sets ``I``."""

    Q: IntMatrix
    index_sets: frozenset

    @property
    def m(self) -> int:
        return self.Q.ncols

    def column_sets(self) -> frozenset:
        """The complementary column sets ``J``, so that each cone is ``<Q_J>``."""
        full = frozenset(range(self.m))
        return frozenset(full - I for I in self.index_sets)

    def cones(self) -> list[Cone]:
        cols = self.Q.columns()
        return [cone_from_generators([cols[j] for j in J], self.Q.nrows) for J in sorted(self.column_sets(), key=sorted)]

    def column_sets_1based(self) -> list[list[int]]:
        return to_1based(self.column_sets())

    def __repr__(self) -> str:
        return f"Bunch({self.column_sets_1based()})"


@dataclass(frozen=True)
class MonomialIdeal:
    """Squarefree monomial ideal stored by generator supports (an antichain)."""

    generators: frozenset

    def __post_init__(self):
        gens = set(frozenset(g) for g in self.generators)
        minimal = frozenset(g for g in gens if not any(h < g for h in gens))
        object.__setattr__(self, "generators", minimal)

    @classmethod
    def from_1based(cls, gens: Iterable[Iterable[int]]) -> "MonomialIdeal":
        return cls(from_1based(gens))

    def generators_1based(self) -> list[list[int]]:
        return sorted(to_1based(self.generators), key=lambda g: (len(g), g))

    def contains_monomial(self, support: Iterable[int]) -> bool:
        s = frozenset(support)
        return any(g <= s for g in self.generators)

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        return all(self.contains_monomial(g) for g in other.generators)

    def __str__(self) -> str:
        return "(" + ", ".join("".join(f"x{i}" for i in g) for g in self.generators_1based()) + ")"


# ---------------------------------------------------------------------------
# matrix classification


class MatrixCheck(NamedTuple):
    ok: bool
    violations: list
    reduced: bool


def _positive_span_is_everything(cols: list[tuple[int, ...]], d: int) -> bool:
    C = cone_from_generators(cols, d)
    return C.lineality_dim == d


def is_F_matrix(V) -> MatrixCheck:
    """Check the four fan-matrix conditions; also report whether V is reduced."""
    V = IntMatrix.coerce(V)
    n, m = V.shape
    cols = V.columns()
    bad = []
    if rank(V) != n:
        bad.append("(a) rank is not equal to the number of rows")
    if not _positive_span_is_everything(cols, n):
        bad.append("(b) columns do not positively span R^n (not F-complete)")
    zero = [j + 1 for j, c in enumerate(cols) if not any(c)]
    if zero:
        bad.append(f"(c) zero columns {zero}")
    seen: dict[tuple[int, ...], int] = {}
    for j, c in enumerate(cols):
        if not any(c):
            continue
        p = primitive(c)
        if p in seen:
            bad.append(f"(d) columns {seen[p] + 1} and {j + 1} are positively proportional")
        else:
            seen[p] = j
    reduced = not zero and all(primitive(c) == tuple(c) for c in cols)
    return MatrixCheck(not bad, bad, reduced)


def _in_row_lattice(Q: IntMatrix, v: Sequence[int]) -> bool:
    return same_row_lattice(Q, IntMatrix(list(Q) + [tuple(v)]))


def is_W_matrix(Q) -> MatrixCheck:
    """Check the six weight-matrix conditions.

    W-positivity is tested through Gale duality: the row lattice has a basis
    of positive vectors exactly when the Gale dual columns positively span.
    :func:`has_positive_basis` is a brute-force cross-check.
    """
    Q = IntMatrix.coerce(Q)
    r, m = Q.shape
    cols = Q.columns()
    bad = []
    full_rank = rank(Q) == r
    if not full_rank:
        bad.append("(a) rank is not equal to the number of rows")
    sat = all(d == 1 for d in snf(Q).invariant_factors)
    if not sat:
        bad.append("(b) row lattice has cotorsion (not saturated)")
    if full_rank and r < m:
        G = gale_dual(Q)
        if not _positive_span_is_everything(G.columns(), G.nrows):
            bad.append("(c) not W-positive")
    # r == m: the row space is R^m and always holds a strictly positive vector
    zero = [j + 1 for j, c in enumerate(cols) if not any(c)]
    if zero:
        bad.append(f"(d) zero columns {zero}")
    units = [i + 1 for i in range(m) if _in_row_lattice(Q, [int(i == j) for j in range(m)])]
    if units:
        bad.append(f"(e) unit vectors e_{units} lie in the row lattice")
    for i, j in combinations(range(m), 2):
        others = [cols[k] for k in range(m) if k not in (i, j)]
        # y with y.q_k = 0 for the other columns; image (y.q_i, y.q_j)
        ys = rational_nullspace(others, r) if others else rational_nullspace([], r)
        images = [(sum(a * b for a, b in zip(y, cols[i])), sum(a * b for a, b in zip(y, cols[j]))) for y in ys]
        dim = rank(images) if images else 0
        if dim == 2 or (dim == 1 and any(a * b < 0 for a, b in images)):
            bad.append(f"(f) lattice contains a mixed-sign vector supported on {{{i + 1},{j + 1}}}")
    reduced = False
    if not bad and r < m:
        reduced = is_F_matrix(gale_dual(Q)).reduced
    return MatrixCheck(not bad, bad, reduced)


def has_positive_basis(Q, bound: int = 3) -> bool:
    """Brute force: does the row lattice of Q have a basis of nonnegative vectors?

    Searches integer combinations with coefficients in ``[-bound, bound]``;
    exponential, meant only as an oracle for small matrices.
    """
    from itertools import product

    Q = IntMatrix.coerce(Q)
    r, m = Q.shape
    rows = list(Q)
    cands = []
    for coeffs in product(range(-bound, bound + 1), repeat=r):
        v = tuple(sum(c * row[j] for c, row in zip(coeffs, rows)) for j in range(m))
        if any(v) and all(x >= 0 for x in v):
            cands.append(v)
    for basis in combinations(cands, r):
        if same_row_lattice(IntMatrix(basis), Q):
            return True
    return False


# ---------------------------------------------------------------------------
# fan validation


def _simplicial_pair_ok(cols: list[tuple[int, ...]], I: frozenset, J: frozenset) -> bool:
    """Do the simplicial cones on ``I`` and ``J`` meet in their common face?

    They fail exactly when a linear dependence among the columns of I ∪ J is
    nonnegative on I \\ J, nonpositive on J \\ I and nonzero there.
    """
    if I <= J or J <= I:
        return True
    U = sorted(I | J)
    dim = len(cols[0])
    K = rational_nullspace([[cols[u][i] for u in U] for i in range(dim)], len(U))
    if not K:
        return True
    pos = {u: k for k, u in enumerate(U)}
    t = len(K)
    ineqs = []
    for u in I - J:
        ineqs.append(tuple(K[l][pos[u]] for l in range(t)))
    for u in J - I:
        ineqs.append(tuple(-K[l][pos[u]] for l in range(t)))
    P = cone_from_inequalities(ineqs, (), t)
    sym = [pos[u] for u in (I ^ J)]
    for g in P.generators:
        c = [sum(g[l] * K[l][p] for l in range(t)) for p in range(len(U))]
        if any(c[p] != 0 for p in sym):
            return False
    return True


def _general_pair_ok(fan: Fan, I: frozenset, J: frozenset) -> bool:
    A, B = fan.cone(I), fan.cone(J)
    C = intersect(A, B)
    return is_face(C, A) and is_face(C, B)


def _cones_form_fan(fan: Fan) -> bool:
    return not _fan_problems(fan, stop_early=True)


def _fan_problems(fan: Fan, stop_early: bool = False) -> list[str]:
    cols = fan.columns
    out = []
    cones = sorted(fan.max_cones, key=sorted)
    simplicial = {I: rank([cols[i] for i in I]) == len(I) for I in cones}
    for I in cones:
        if not simplicial[I] and not fan.cone(I).is_strongly_convex():
            out.append(f"cone {_fmt(I)} contains a line")
            if stop_early:
                return out
    for I, J in combinations(cones, 2):
        if simplicial[I] and simplicial[J]:
            ok = _simplicial_pair_ok(cols, I, J)
        else:
            ok = _general_pair_ok(fan, I, J)
        if not ok:
            out.append(f"cones {_fmt(I)} and {_fmt(J)} do not meet face to face")
            if stop_early:
                return out
    return out


@dataclass
class FanReport:
    ok: bool
    simplicial: bool
    diagnostics: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.ok, self.diagnostics))


def _swallowed(fan: Fan) -> list[str]:
    cols = fan.columns
    out = []
    for I in sorted(fan.max_cones, key=sorted):
        C = None
        for k in range(fan.m):
            if k in I:
                continue
            if rank([cols[i] for i in I]) == len(I):
                A = [[cols[i][row] for i in sorted(I)] for row in range(fan.n)]
                lam = solve_rational(A, cols[k])
                inside = lam is not None and all(x >= 0 for x in lam)
            else:
                C = C or fan.cone(I)
                inside = C.contains(cols[k])
            if inside:
                out.append(f"ray {k + 1} lies in cone {_fmt(I)} without being one of its rays")
    return out


def validate_fan(F: Fan) -> FanReport:
    """Check the fan axioms; diagnostics name every failure found."""
    diags = []
    zero = [j + 1 for j, c in enumerate(F.columns) if not any(c)]
    if zero:
        diags.append(f"zero rays {zero}")
    simplicial = F.is_simplicial()
    diags += _fan_problems(F)
    unused = sorted(set(range(F.m)) - F.used_rays())
    if unused:
        diags.append("unused rays " + str([u + 1 for u in unused]))
    if not zero:
        diags += _swallowed(F)
    if not F.max_cones:
        diags.append("no cones")
    return FanReport(not diags, simplicial, diags)


def _ridge_normal(cols, R: Sequence[int], n: int) -> tuple[int, ...] | None:
    ns = rational_nullspace([cols[i] for i in R], n)
    if len(ns) != 1:
        return None
    return primitive(ns[0])


def support_is(F: Fan, target: Cone | None = None, *, samples: int = 24, seed: int = 20240601) -> bool:
    """Does the support of the (valid) fan equal ``target`` (default R^n)?

    Exact test: every maximal cone is full-dimensional and lies in the target,
    interior ridges have two cofacets, boundary ridges one, and the cofacet
    graph is connected.  Random interior points of the target are checked for
    coverage as a consistency guard.
    """
    n = F.n
    if target is None:
        target = full_space(n)
    rep = validate_fan(F)
    if not rep.ok:
        raise FanError("support test needs a valid fan", rep.diagnostics)
    cols = F.columns
    verdict = _ridge_criterion(F, target)
    if verdict:
        rng = random.Random(seed)
        tgens = list(target.generators)
        cones = sorted(F.max_cones, key=sorted)
        for _ in range(samples):
            w = [Fraction(0)] * n
            for g in tgens:
                c = Fraction(rng.randint(1, 97), rng.randint(1, 13))
                w = [a + c * b for a, b in zip(w, g)]
            if not any(_simplex_contains(cols, I, w, n) for I in cones):
                raise AssertionError(f"ridge criterion accepted, but sample {w} is not covered")
    return verdict


def _simplex_contains(cols, I, w, n) -> bool:
    A = [[cols[i][row] for i in sorted(I)] for row in range(n)]
    lam = solve_rational(A, w)
    return lam is not None and all(x >= 0 for x in lam)


def _ridge_criterion(F: Fan, target: Cone) -> bool:
    n = F.n
    cols = F.columns
    if target.dim != n or not F.max_cones:
        return False
    cones = sorted(F.max_cones, key=sorted)
    for I in cones:
        if len(I) != n or rank([cols[i] for i in I]) != n:
            return False
        if not all(target.contains(cols[i]) for i in I):
            return False
    ridges: dict[frozenset, list] = {}
    for I in cones:
        for i in I:
            ridges.setdefault(I - {i}, []).append(I)
    tgens = target.generators
    for R, owners in ridges.items():
        h = _ridge_normal(cols, sorted(R), n)
        vals = [sum(a * b for a, b in zip(h, g)) for g in tgens]
        boundary = all(v >= 0 for v in vals) or all(v <= 0 for v in vals)
        if len(owners) != (1 if boundary else 2):
            return False
    # connectivity of the cofacet graph
    adj: dict[frozenset, set] = {I: set() for I in cones}
    for owners in ridges.values():
        if len(owners) == 2:
            a, b = owners
            adj[a].add(b)
            adj[b].add(a)
    seen = {cones[0]}
    stack = [cones[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cones)


# ---------------------------------------------------------------------------
# Gale duality between fans and bunches


def bunch_of(F: Fan) -> Bunch:
    return Bunch(F.weights, F.max_cones)


def fan_of(B: Bunch, V) -> Fan:
    """Collect ``<V_I>`` for the bunch's index sets (may be a quasi-fan)."""
    if not B.index_sets:
        raise FanError("empty bunch")
    return Fan(IntMatrix.coerce(V), B.index_sets, B.Q)


def eff_cone(Q) -> Cone:
    Q = IntMatrix.coerce(Q)
    return cone_from_generators(Q.columns(), Q.nrows)


def _complement_cone(Q: IntMatrix, I: Iterable[int]) -> Cone:
    I = set(I)
    cols = Q.columns()
    return cone_from_generators([c for j, c in enumerate(cols) if j not in I], Q.nrows)


def mov_cone(Q) -> Cone:
    Q = IntMatrix.coerce(Q)
    return intersect_all([_complement_cone(Q, {i}) for i in range(Q.ncols)])


def nef_cone(F: Fan) -> Cone:
    Q = F.weights
    return intersect_all([_complement_cone(Q, I) for I in F.max_cones], Q.nrows)


def irrelevant_ideal(F: Fan) -> MonomialIdeal:
    full = frozenset(range(F.m))
    return MonomialIdeal(frozenset(full - I for I in F.max_cones))


def fan_from_ideal(gens: MonomialIdeal, V, Q=None) -> Fan:
    """Fan whose maximal cones are the complements of the generator supports."""
    V = IntMatrix.coerce(V)
    full = frozenset(range(V.ncols))
    for g in gens.generators:
        if not g <= full:
            raise FanError(f"generator support {_fmt(g)} out of range")
    fan = Fan(V, frozenset(full - g for g in gens.generators), Q)
    rep = validate_fan(fan)
    if not rep.ok:
        raise FanError("irrelevant ideal does not define a fan", rep.diagnostics)
    return fan
