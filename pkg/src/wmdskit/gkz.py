"""GKZ decomposition of the effective cone of a weight matrix.

The GKZ cone of a class ``w`` is the intersection of every cone ``<Q_J>``
(``J`` a set of columns) containing ``w``.  By Carathéodory it suffices to
intersect the simplicial ones, which is how it is computed here; the
relative-interior characterisation is evaluated as well and the two are
required to agree.

Chambers are found by cutting the support (Mov or Eff) with all hyperplanes
spanned by ``r-1`` columns of Q.  Every GKZ chamber is a union of the
resulting regions, so taking the GKZ cone at one interior point per region
and de-duplicating yields all chambers.  Lower-dimensional cells are the
faces of chambers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Sequence

from .cone import Cone, cone_from_generators, cone_from_inequalities, faces, intersect, intersect_all, is_face
from .fanbunch import Bunch, Fan, eff_cone, mov_cone
from .lattice import IntMatrix, gale_dual, primitive, rank, rational_nullspace

__all__ = [
    "GkzError",
    "GkzCone",
    "Chamber",
    "GkzDecomposition",
    "gkz_cone_at",
    "gkz_decomposition",
    "chambers",
    "sigma_gamma",
    "is_geometric_cell",
    "is_union_of_chambers",
    "MAX_COLUMNS",
]

MAX_COLUMNS = 16


class GkzError(ValueError):
    pass


class _Context:
    """Per-Q cache of the cones ``<Q_J>``."""

    def __init__(self, Q: IntMatrix):
        r, m = Q.shape
        if m > MAX_COLUMNS:
            raise GkzError(f"{m} columns exceeds the limit of {MAX_COLUMNS}")
        if rank(Q) != r:
            raise GkzError("weight matrix does not have full row rank")
        self.Q = Q
        self.r, self.m = r, m
        self.cols = Q.columns()
        self._cones: dict[frozenset, Cone] = {}
        self.eff = eff_cone(Q)
        self.mov = mov_cone(Q)
        self.simplicial = [
            frozenset(J)
            for k in range(1, r + 1)
            for J in combinations(range(m), k)
            if rank([self.cols[j] for j in J]) == k
        ]

    def cone(self, J: frozenset) -> Cone:
        c = self._cones.get(J)
        if c is None:
            c = cone_from_generators([self.cols[j] for j in sorted(J)], self.r)
            self._cones[J] = c
        return c

    @cached_property
    def all_subsets(self) -> list[frozenset]:
        return [frozenset(J) for k in range(self.m + 1) for J in combinations(range(self.m), k)]


@lru_cache(maxsize=32)
def _context(Q: IntMatrix) -> _Context:
    return _Context(Q)


@dataclass(frozen=True, eq=False)
class GkzCone:
    """A cell of the GKZ decomposition together with its bunch data."""

    cone: Cone
    witness: tuple
    column_sets: frozenset  # J with the witness in relint <Q_J>
    Q: IntMatrix
    in_relint_mov: bool

    @property
    def dim(self) -> int:
        return self.cone.dim

    @property
    def rays(self):
        return self.cone.rays

    @property
    def is_chamber(self) -> bool:
        return self.cone.is_full_dimensional()

    @property
    def index_sets(self) -> frozenset:
        full = frozenset(range(self.Q.ncols))
        return frozenset(full - J for J in self.column_sets)

    @property
    def bunch(self) -> Bunch:
        """The bunch ``B_γ`` of all ``I`` with relint γ inside relint ``<Q^I>``."""
        return Bunch(self.Q, self.index_sets)

    def __eq__(self, other) -> bool:
        return isinstance(other, GkzCone) and self.Q == other.Q and self.cone == other.cone

    def __hash__(self) -> int:
        return hash(self.cone)

    def __repr__(self) -> str:
        return f"GkzCone(rays={[list(g) for g in self.cone.generators]})"


def gkz_cone_at(Q, w: Sequence) -> GkzCone:
    """The GKZ cell whose relative interior contains ``w``."""
    Q = IntMatrix.coerce(Q)
    ctx = _context(Q)
    w = tuple(w)
    if len(w) != ctx.r:
        raise GkzError(f"class has {len(w)} entries, expected {ctx.r}")
    if not ctx.eff.contains(w):
        raise GkzError(f"{w} lies outside the pseudo-effective cone")
    containing = [ctx.cone(J) for J in ctx.simplicial if ctx.cone(J).contains(w)]
    if not any(w):
        gamma = cone_from_generators([], ctx.r)
    else:
        gamma = intersect_all(containing)
    relint_sets = frozenset(J for J in ctx.all_subsets if ctx.cone(J).relint_contains(w))
    check = intersect_all([ctx.cone(J) for J in relint_sets], ctx.r)
    if check != gamma:
        raise AssertionError(f"GKZ characterisations disagree at {w}")
    if not gamma.relint_contains(w):
        raise AssertionError(f"{w} is not interior to its GKZ cone")
    witness = gamma.interior_point()
    if witness != tuple(w):
        # store the bunch at a canonical interior point of the cell
        relint_sets = frozenset(J for J in ctx.all_subsets if ctx.cone(J).relint_contains(witness))
    return GkzCone(gamma, witness, relint_sets, Q, ctx.mov.relint_contains(witness))


def _chamber_order(c: GkzCone):
    return tuple(sorted(c.cone.generators, reverse=True))


@dataclass
class Chamber:
    index: int
    cell: GkzCone
    fan: Fan
    is_fan: bool


@dataclass
class GkzDecomposition:
    Q: IntMatrix
    support: Cone
    restricted_to_mov: bool
    cells: list = field(default_factory=list)
    chambers: list = field(default_factory=list)
    face_pairs: list = field(default_factory=list)  # (i, j): cells[i] is a proper face of cells[j]

    def cell_at(self, w: Sequence) -> GkzCone:
        c = gkz_cone_at(self.Q, w)
        for cell in self.cells:
            if cell == c:
                return cell
        raise GkzError(f"{tuple(w)} is not in the decomposed region")

    def chamber_index(self, cell: GkzCone) -> int:
        """1-based position of a chamber in :attr:`chambers`."""
        return self.chambers.index(cell) + 1


def _split_hyperplanes(ctx: _Context) -> list[tuple[int, ...]]:
    hs = set()
    for S in combinations(range(ctx.m), ctx.r - 1):
        sub = [ctx.cols[j] for j in S]
        if ctx.r > 1 and rank(sub) != ctx.r - 1:
            continue
        ns = rational_nullspace(sub, ctx.r)
        if len(ns) != 1:
            continue
        h = primitive(ns[0])
        if h < tuple(-x for x in h):
            h = tuple(-x for x in h)
        hs.add(h)
    return sorted(hs)


def _regions(base: Cone, hyperplanes: list[tuple[int, ...]]) -> list[Cone]:
    regions = [base]
    for h in hyperplanes:
        nxt = []
        for R in regions:
            vals = [sum(a * b for a, b in zip(h, g)) for g in R.generators]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                for s in (h, tuple(-x for x in h)):
                    part = cone_from_inequalities(list(R.facets) + [s], R.span_equations, R.ambient_dim)
                    if part.dim == R.dim:
                        nxt.append(part)
            else:
                nxt.append(R)
        regions = nxt
    return regions


@lru_cache(maxsize=16)
def _decompose(Q: IntMatrix, restrict_to_mov: bool) -> GkzDecomposition:
    ctx = _context(Q)
    base = ctx.mov if restrict_to_mov else ctx.eff
    if not base.is_full_dimensional():
        what = "moving" if restrict_to_mov else "effective"
        raise GkzError(f"{what} cone is not full-dimensional")
    if not base.is_strongly_convex():
        raise GkzError("effective cone is not pointed")
    found: dict[Cone, GkzCone] = {}
    for R in _regions(base, _split_hyperplanes(ctx)):
        g = gkz_cone_at(Q, R.interior_point())
        found.setdefault(g.cone, g)
    chambers_ = sorted(found.values(), key=_chamber_order, reverse=True)
    cells: dict[Cone, GkzCone] = {c.cone: c for c in chambers_}
    for ch in chambers_:
        for F in faces(ch.cone):
            if F in cells:
                continue
            g = gkz_cone_at(Q, F.interior_point())
            if g.cone != F:
                raise AssertionError(f"face {F} of a chamber is not a GKZ cell")
            cells[F] = g
    ordered = sorted(cells.values(), key=lambda c: (c.dim, c.cone.generators))
    pairs = [
        (i, j)
        for i, a in enumerate(ordered)
        for j, b in enumerate(ordered)
        if a.dim < b.dim and is_face(a.cone, b.cone)
    ]
    return GkzDecomposition(Q, base, restrict_to_mov, ordered, chambers_, pairs)


def gkz_decomposition(Q, restrict_to_mov: bool = False) -> GkzDecomposition:
    return _decompose(IntMatrix.coerce(Q), bool(restrict_to_mov))


def sigma_gamma(gamma: GkzCone, V=None) -> tuple[Fan, bool]:
    """The (quasi-)fan built from the bunch of ``gamma`` and whether it is a fan.

    It is a fan exactly when relint γ sits inside relint Mov; the returned
    flag is that criterion.
    """
    V = gale_dual(gamma.Q) if V is None else IntMatrix.coerce(V)
    index_sets = gamma.index_sets
    maximal = frozenset(I for I in index_sets if not any(I < K for K in index_sets))
    return Fan(V, maximal, gamma.Q), gamma.in_relint_mov


def chambers(Q, V=None) -> list[Chamber]:
    """Full-dimensional cells of the decomposition of Mov with their fans."""
    d = gkz_decomposition(Q, restrict_to_mov=True)
    out = []
    for k, c in enumerate(d.chambers, 1):
        fan, ok = sigma_gamma(c, V)
        out.append(Chamber(k, c, fan, ok))
    return out


def is_union_of_chambers(C: Cone, decomposition: GkzDecomposition) -> bool:
    """Is the cone ``C`` (inside the support) a union of chambers?"""
    if not C.is_full_dimensional() or not decomposition.support.contains_cone(C):
        return False
    for ch in decomposition.chambers:
        if not C.contains_cone(ch.cone) and intersect(C, ch.cone).dim == C.dim:
            return False
    return True


def is_geometric_cell(gamma: GkzCone, V=None) -> tuple[bool, list[Fan]]:
    """Is ``gamma`` the nef cone of a fan in SF(V)?  Also returns every such fan."""
    from .sfenum import enumerate_SF

    V = gale_dual(gamma.Q) if V is None else IntMatrix.coerce(V)
    census = enumerate_SF(V, gamma.Q)
    witnesses = [F for F, nef in zip(census.all_fans, census.nef_cones) if nef == gamma.cone]
    return bool(witnesses), witnesses
